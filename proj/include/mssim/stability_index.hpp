/*
   Copyright 2026 The mssim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "mssim/errors.hpp"

namespace mssim {

enum class IndexFamily { constant, affine, sinusoid, table };

/// Time-varying stability index β(t) on [0, horizon].
///
/// Four closed families are supported so that the bounds β_* = inf β and
/// β^* = sup β over the horizon are exact:
///
///   constant   β(t) = c
///   affine     β(t) = c0 + c1 t
///   sinusoid   β(t) = c0 + c1 sin(2π c2 t)
///   table      piecewise-linear interpolation through (t_i, b_i) knots
///
/// Construction fails unless 0 < β_* ≤ β^* < 1. The object is immutable.
class StabilityIndex {
 public:
  static StabilityIndex constant(double c, double horizon) {
    return StabilityIndex(IndexFamily::constant, {c}, horizon);
  }
  static StabilityIndex affine(double c0, double c1, double horizon) {
    return StabilityIndex(IndexFamily::affine, {c0, c1}, horizon);
  }
  static StabilityIndex sinusoid(double c0, double c1, double c2,
                                 double horizon) {
    return StabilityIndex(IndexFamily::sinusoid, {c0, c1, c2}, horizon);
  }
  /// Knots as (t, β) pairs with strictly increasing t; they must cover
  /// [0, horizon].
  static StabilityIndex table(std::span<const std::pair<double, double>> knots,
                              double horizon) {
    std::vector<double> flat;
    flat.reserve(2 * knots.size());
    for (const auto& [t, b] : knots) {
      flat.push_back(t);
      flat.push_back(b);
    }
    return StabilityIndex(IndexFamily::table, std::move(flat), horizon);
  }

  /// Parses `constant:c`, `affine:c0,c1`, `sin:c0,c1,c2` or
  /// `table:t0,b0;t1,b1;...`.
  static StabilityIndex parse(std::string_view spec, double horizon);

  double evaluate(double t) const {
    if (!(t >= 0.0) || t > horizon_ * (1.0 + 1e-12) + 1e-15) {
      std::ostringstream msg;
      msg << "stability index evaluated at t=" << t << " outside [0, "
          << horizon_ << "]";
      throw DomainError(msg.str());
    }
    return raw(std::min(t, horizon_));
  }
  double operator()(double t) const { return evaluate(t); }

  /// (β_*, β^*) over [0, horizon].
  std::pair<double, double> bounds() const { return {beta_inf_, beta_sup_}; }

  /// (inf, sup) of β over [a, b] ⊆ [0, horizon].
  std::pair<double, double> bounds_on(double a, double b) const {
    evaluate(a);
    evaluate(b);
    return range_on(a, std::min(b, horizon_));
  }
  double beta_inf() const { return beta_inf_; }
  double beta_sup() const { return beta_sup_; }
  double horizon() const { return horizon_; }
  IndexFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }

  /// Lipschitz constant of β on [0, horizon].
  double lipschitz() const {
    switch (family_) {
      case IndexFamily::constant:
        return 0.0;
      case IndexFamily::affine:
        return std::abs(params_[1]);
      case IndexFamily::sinusoid:
        return 2.0 * std::numbers::pi * std::abs(params_[1] * params_[2]);
      case IndexFamily::table: {
        double k = 0.0;
        for (std::size_t i = 2; i < params_.size(); i += 2) {
          k = std::max(k, std::abs((params_[i + 1] - params_[i - 1]) /
                                   (params_[i] - params_[i - 2])));
        }
        return k;
      }
    }
    return 0.0;
  }

  /// Canonical textual form, parseable by parse().
  std::string spec() const {
    std::ostringstream out;
    out.precision(17);
    switch (family_) {
      case IndexFamily::constant:
        out << "constant:" << params_[0];
        break;
      case IndexFamily::affine:
        out << "affine:" << params_[0] << ',' << params_[1];
        break;
      case IndexFamily::sinusoid:
        out << "sin:" << params_[0] << ',' << params_[1] << ',' << params_[2];
        break;
      case IndexFamily::table:
        out << "table:";
        for (std::size_t i = 0; i < params_.size(); i += 2) {
          if (i) out << ';';
          out << params_[i] << ',' << params_[i + 1];
        }
        break;
    }
    return out.str();
  }

 private:
  StabilityIndex(IndexFamily family, std::vector<double> params,
                 double horizon)
      : family_(family), params_(std::move(params)), horizon_(horizon) {
    if (!std::isfinite(horizon_) || horizon_ <= 0.0) {
      throw ParameterError("stability index horizon must be finite and > 0");
    }
    for (double p : params_) {
      if (!std::isfinite(p)) {
        throw ParameterError("stability index parameters must be finite");
      }
    }
    if (family_ == IndexFamily::table) validate_table();
    compute_bounds();
    if (!(beta_inf_ > 0.0) || !(beta_sup_ < 1.0)) {
      std::ostringstream msg;
      msg << "stability index range [" << beta_inf_ << ", " << beta_sup_
          << "] on [0, " << horizon_ << "] is not inside (0, 1)";
      throw ParameterError(msg.str());
    }
  }

  double raw(double t) const {
    switch (family_) {
      case IndexFamily::constant:
        return params_[0];
      case IndexFamily::affine:
        return params_[0] + params_[1] * t;
      case IndexFamily::sinusoid:
        return params_[0] +
               params_[1] * std::sin(2.0 * std::numbers::pi * params_[2] * t);
      case IndexFamily::table:
        return interpolate(t);
    }
    return params_[0];
  }

  double interpolate(double t) const {
    const std::size_t knots = params_.size() / 2;
    // first knot with time > t
    std::size_t lo = 0, hi = knots;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (params_[2 * mid] > t) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    if (lo == 0) return params_[1];
    if (lo == knots) return params_[2 * knots - 1];
    const double t0 = params_[2 * (lo - 1)], b0 = params_[2 * (lo - 1) + 1];
    const double t1 = params_[2 * lo], b1 = params_[2 * lo + 1];
    return b0 + (b1 - b0) * (t - t0) / (t1 - t0);
  }

  void validate_table() const {
    if (params_.size() < 2) {
      throw ParameterError("table stability index needs at least one knot");
    }
    for (std::size_t i = 2; i < params_.size(); i += 2) {
      if (!(params_[i] > params_[i - 2])) {
        throw ParameterError("table knot times must be strictly increasing");
      }
    }
    if (params_.front() > 0.0 || params_[params_.size() - 2] < horizon_) {
      throw ParameterError("table knots must cover [0, horizon]");
    }
  }

  void compute_bounds() {
    std::tie(beta_inf_, beta_sup_) = range_on(0.0, horizon_);
  }

  std::pair<double, double> range_on(double a, double b) const {
    const double fa = raw(a), fb = raw(b);
    double lo = std::min(fa, fb), hi = std::max(fa, fb);
    switch (family_) {
      case IndexFamily::constant:
      case IndexFamily::affine:
        break;
      case IndexFamily::sinusoid: {
        // critical points of sin(2π c2 t) are at phases π/2 + mπ
        const double two_pi = 2.0 * std::numbers::pi;
        double p0 = two_pi * params_[2] * a, p1 = two_pi * params_[2] * b;
        if (p1 < p0) std::swap(p0, p1);
        const double half_pi = std::numbers::pi / 2.0;
        for (double m = std::ceil((p0 - half_pi) / std::numbers::pi);
             half_pi + m * std::numbers::pi <= p1; m += 1.0) {
          const double s = std::sin(half_pi + m * std::numbers::pi);
          lo = std::min(lo, params_[0] + params_[1] * s);
          hi = std::max(hi, params_[0] + params_[1] * s);
        }
        break;
      }
      case IndexFamily::table:
        for (std::size_t i = 0; i < params_.size(); i += 2) {
          if (params_[i] >= a && params_[i] <= b) {
            lo = std::min(lo, params_[i + 1]);
            hi = std::max(hi, params_[i + 1]);
          }
        }
        break;
    }
    return {lo, hi};
  }

  IndexFamily family_;
  std::vector<double> params_;
  double horizon_;
  double beta_inf_ = 0.0;
  double beta_sup_ = 0.0;
};

namespace detail {

inline double parse_real(std::string_view text, std::string_view what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ParameterError("cannot parse number '" + std::string(text) +
                         "' in " + std::string(what));
  }
  return value;
}

inline std::vector<double> parse_list(std::string_view text, char sep,
                                      std::string_view what) {
  std::vector<double> out;
  while (true) {
    const auto pos = text.find(sep);
    out.push_back(parse_real(text.substr(0, pos), what));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return out;
}

}  // namespace detail

inline StabilityIndex StabilityIndex::parse(std::string_view spec,
                                            double horizon) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw ParameterError("stability index spec '" + std::string(spec) +
                         "' lacks a family prefix");
  }
  const auto family = spec.substr(0, colon);
  const auto body = spec.substr(colon + 1);
  auto expect = [&](const std::vector<double>& v, std::size_t n) {
    if (v.size() != n) {
      throw ParameterError("stability index '" + std::string(family) +
                           "' expects " + std::to_string(n) + " parameters");
    }
  };
  if (family == "constant") {
    auto v = detail::parse_list(body, ',', spec);
    expect(v, 1);
    return constant(v[0], horizon);
  }
  if (family == "affine") {
    auto v = detail::parse_list(body, ',', spec);
    expect(v, 2);
    return affine(v[0], v[1], horizon);
  }
  if (family == "sin") {
    auto v = detail::parse_list(body, ',', spec);
    expect(v, 3);
    return sinusoid(v[0], v[1], v[2], horizon);
  }
  if (family == "table") {
    std::vector<std::pair<double, double>> knots;
    std::string_view rest = body;
    while (true) {
      const auto pos = rest.find(';');
      auto v = detail::parse_list(rest.substr(0, pos), ',', spec);
      expect(v, 2);
      knots.emplace_back(v[0], v[1]);
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    return table(knots, horizon);
  }
  throw ParameterError("unknown stability index family '" +
                       std::string(family) + "'");
}

}  // namespace mssim
