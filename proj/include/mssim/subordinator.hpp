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
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "mssim/errors.hpp"
#include "mssim/ppp_sampler.hpp"
#include "mssim/quadrature.hpp"
#include "mssim/special.hpp"
#include "mssim/stability_index.hpp"

namespace mssim {

/// Truncated sample path of the multistable subordinator D on [0, horizon].
///
/// D(t) = prefix[i] for the largest i with times[i] <= t, 0 before the first
/// jump. Times are strictly increasing (coincident atoms are merged into one
/// jump) and prefix sums are strictly increasing: when a jump is smaller than
/// the resolution of the running total, the total is advanced by one ulp.
struct JumpPath {
  std::vector<double> times;
  std::vector<double> sizes;
  std::vector<double> prefix;
  double horizon = 0.0;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  /// D(horizon).
  double total() const { return prefix.empty() ? 0.0 : prefix.back(); }

  /// Time-sorted, tie-merged atoms with t > times.back() appended in place.
  void append(std::vector<Point> atoms, double new_horizon);

  bool invariants_hold() const {
    if (sizes.size() != times.size() || prefix.size() != times.size()) {
      return false;
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (!(sizes[i] > 0.0) || times[i] < 0.0 || times[i] > horizon) {
        return false;
      }
      if (i > 0 && (!(times[i] > times[i - 1]) || !(prefix[i] > prefix[i - 1]))) {
        return false;
      }
    }
    return prefix.empty() || prefix.front() > 0.0;
  }
};

namespace detail {

inline void sort_atoms(std::vector<Point>& atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Point& a, const Point& b) {
    return a.t < b.t || (a.t == b.t && a.x < b.x);
  });
}

}  // namespace detail

inline void JumpPath::append(std::vector<Point> atoms, double new_horizon) {
  detail::sort_atoms(atoms);
  horizon = std::max(horizon, new_horizon);
  times.reserve(times.size() + atoms.size());
  sizes.reserve(sizes.size() + atoms.size());
  prefix.reserve(prefix.size() + atoms.size());
  for (const Point& p : atoms) {
    if (!times.empty() && p.t < times.back()) {
      throw ParameterError("appended atoms must not precede existing jumps");
    }
    const double before = prefix.empty() ? 0.0 : prefix.back();
    double level = before + p.x;
    if (!(level > before)) {
      level = std::nextafter(before, std::numeric_limits<double>::infinity());
    }
    if (!times.empty() && p.t == times.back()) {
      sizes.back() += p.x;
      prefix.back() = level;
    } else {
      times.push_back(p.t);
      sizes.push_back(p.x);
      prefix.push_back(level);
    }
  }
}

/// Sorts the atoms by time and accumulates prefix sums in that order.
inline JumpPath build_path(const PointPattern& pattern) {
  JumpPath path;
  path.horizon = pattern.horizon;
  path.append(pattern.points, pattern.horizon);
  return path;
}

inline double eval(const JumpPath& path, double t) {
  if (!(t >= 0.0) || t > path.horizon) {
    std::ostringstream msg;
    msg << "D evaluated at t=" << t << " outside [0, " << path.horizon << "]";
    throw DomainError(msg.str());
  }
  const auto it = std::upper_bound(path.times.begin(), path.times.end(), t);
  if (it == path.times.begin()) return 0.0;
  return path.prefix[static_cast<std::size_t>(it - path.times.begin()) - 1];
}

/// D(t+h) - D(t).
inline double increment(const JumpPath& path, double t, double h) {
  if (!(h > 0.0)) throw DomainError("increment requires h > 0");
  return eval(path, t + h) - eval(path, t);
}

/// E exp(-θ D(t)) = exp(-∫_0^t Γ(1-β(s)) θ^{β(s)} ds).
inline double laplace_transform(const StabilityIndex& idx, double theta,
                                double t) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw DomainError("laplace_transform requires finite theta >= 0");
  }
  if (!(t >= 0.0) || t > idx.horizon()) {
    throw DomainError("laplace_transform time outside [0, horizon]");
  }
  if (theta == 0.0 || t == 0.0) return 1.0;
  const double log_theta = std::log(theta);
  const double exponent = integrate(
      [&](double s) {
        const double b = idx(s);
        return gamma_fn(1.0 - b) * std::exp(b * log_theta);
      },
      0.0, t);
  return std::exp(-exponent);
}

}  // namespace mssim
