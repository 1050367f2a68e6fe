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
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/special_functions/lambert_w.hpp>

#include "mssim/errors.hpp"
#include "mssim/rng.hpp"
#include "mssim/stability_index.hpp"

namespace mssim {

/// Slowly varying factor L in the jump tail P(J > t) = t^{-β} L(t^{β/β^*}).
///   unit: L = 1
///   log:  L(u) = max(1, ln u)
enum class SlowlyVarying { unit, log };

inline SlowlyVarying parse_slowly_varying(std::string_view name) {
  if (name == "unit") return SlowlyVarying::unit;
  if (name == "log") return SlowlyVarying::log;
  throw ParameterError("unknown slowly varying family '" + std::string(name) +
                       "' (expected unit|log)");
}

inline std::string_view to_string(SlowlyVarying family) {
  return family == SlowlyVarying::unit ? "unit" : "log";
}

inline double slowly_varying(SlowlyVarying family, double u) {
  return family == SlowlyVarying::unit ? 1.0
                                       : std::max(1.0, std::log(u));
}

namespace detail {

// The tail written in the variable u = t^{β/β^*}: g(u) = u^{-β^*} L(u),
// independent of β. For the log family g rises again on (e, e^{1/β^*}), so
// the survival function is its running minimum: flat at e^{-β^*} from u = e
// until the decreasing branch comes back down to that level.
inline double log_tail(double u, double beta_sup) {
  return std::pow(u, -beta_sup) * std::max(1.0, std::log(u));
}

/// Generalised inverse u = inf{u >= 1 : min_{v<=u} g(v) <= level}. On the
/// decreasing branch v = ln u solves v e^{-β* v} = level, i.e.
/// -β* v = W_{-1}(-β* level).
inline double tail_quantile(SlowlyVarying family, double level,
                            double beta_sup) {
  if (family == SlowlyVarying::unit || level >= std::exp(-beta_sup)) {
    return std::pow(level, -1.0 / beta_sup);
  }
  const double w = boost::math::lambert_wm1(-beta_sup * level);
  return std::exp(-w / beta_sup);
}

}  // namespace detail

/// Survival function P(J > t) of a jump drawn at index value beta.
inline double jump_tail(double t, double beta, double beta_sup,
                        SlowlyVarying family) {
  if (t < 1.0) return 1.0;
  const double u = std::pow(t, beta / beta_sup);
  if (family == SlowlyVarying::unit) return std::pow(u, -beta_sup);
  const double flat = std::exp(-beta_sup);
  if (u <= std::exp(1.0)) return std::pow(u, -beta_sup);
  return std::min(flat, detail::log_tail(u, beta_sup));
}

/// J_{nk} by inverse transform: the β-free variable u = J^{β/β^*} has tail
/// u^{-β^*} L(u); J = u^{β^*/β}.
inline double sample_jnk(RngStream& stream, int n, int k,
                         const StabilityIndex& idx, SlowlyVarying family) {
  const double beta = idx(static_cast<double>(k) / n);
  const double u =
      detail::tail_quantile(family, stream.uniform(), idx.beta_sup());
  return std::pow(u, idx.beta_sup() / beta);
}

/// a_n solving a^{-β^*} L(a) = 1/n.
inline double norming_an(int n, SlowlyVarying family, double beta_sup) {
  if (n < 1) throw ParameterError("norming_an requires n >= 1");
  if (!(beta_sup > 0.0 && beta_sup < 1.0)) {
    throw ParameterError("norming_an requires beta* in (0, 1)");
  }
  if (family == SlowlyVarying::unit) {
    return std::pow(static_cast<double>(n), 1.0 / beta_sup);
  }
  return detail::tail_quantile(family, 1.0 / n, beta_sup);
}

/// b_{nk} = a_n^{β^*/β(k/n)}.
inline double norming_bnk(double a_n, double beta_kn, double beta_sup) {
  if (!(a_n > 0.0) || !(beta_kn > 0.0 && beta_kn < 1.0)) {
    throw ParameterError("norming_bnk requires a_n > 0 and beta in (0, 1)");
  }
  return std::pow(a_n, beta_sup / beta_kn);
}

/// Partial sums S_n(k/n) = Σ_{j<=k} b_{nj}^{-1} J_{nj} on the grid k/n.
struct CtrwPath {
  int n = 1;
  std::vector<double> values;  // values[k] = S_n(k/n), values[0] = 0
  double horizon = 0.0;

  /// S_n(t) = values[floor(n t)].
  double at(double t) const {
    if (!(t >= 0.0)) throw DomainError("S_n evaluated at negative time");
    const auto k = static_cast<std::size_t>(std::floor(t * n + 1e-9));
    if (k >= values.size()) {
      std::ostringstream msg;
      msg << "S_n evaluated at t=" << t << " beyond the simulated grid";
      throw HorizonExceeded(msg.str());
    }
    return values[k];
  }
  double total() const { return values.back(); }
};

/// Optional early stop for partial_sum_path: generation ends once the grid
/// has passed `min_time` and the sum has reached `level`. Because the array is
/// drawn in order from one stream, the result is a prefix of the full path.
struct StopRule {
  double level = std::numeric_limits<double>::infinity();
  double min_time = 0.0;
};

/// Builds S_n on the grid k = 0..floor(nT), one fresh J_{nk} per cell.
inline CtrwPath partial_sum_path(RngStream& stream, int n, double horizon,
                                 const StabilityIndex& idx,
                                 SlowlyVarying family, StopRule stop = {}) {
  if (n < 1) throw ParameterError("partial_sum_path requires n >= 1");
  if (!(horizon >= 0.0) || horizon > idx.horizon() * (1.0 + 1e-12)) {
    throw ParameterError("partial_sum_path horizon outside the index horizon");
  }
  const double beta_sup = idx.beta_sup();
  const double a_n = norming_an(n, family, beta_sup);
  const double log_an = std::log(a_n);
  const auto cells = static_cast<std::size_t>(std::floor(n * horizon + 1e-9));
  const auto min_cell =
      static_cast<std::size_t>(std::ceil(n * stop.min_time - 1e-9));
  const bool constant = idx.family() == IndexFamily::constant;
  const double beta0 = idx(0.0);

  CtrwPath path;
  path.n = n;
  path.horizon = static_cast<double>(cells) / n;
  path.values.reserve(std::min<std::size_t>(cells, 1u << 20) + 1);
  path.values.push_back(0.0);
  double sum = 0.0;
  for (std::size_t k = 1; k <= cells; ++k) {
    const double beta = constant ? beta0 : idx(static_cast<double>(k) / n);
    const double uni = stream.uniform();
    // b^{-1} J = (u / a_n)^{β^*/β} with u the β-free tail variable
    double scaled;
    if (family == SlowlyVarying::unit) {
      scaled = std::exp(-(std::log(uni) + beta_sup * log_an) / beta);
    } else {
      const double u = detail::tail_quantile(family, uni, beta_sup);
      scaled = std::exp((beta_sup / beta) * (std::log(u) - log_an));
    }
    sum += scaled;
    path.values.push_back(sum);
    if (k >= min_cell && sum >= stop.level) {
      path.horizon = static_cast<double>(k) / n;
      break;
    }
  }
  return path;
}

/// E_n(r) = (smallest k with S_n(k/n) >= r) / n.
inline double inverse_ctrw(const CtrwPath& path, double r) {
  if (!(r >= 0.0)) throw DomainError("inverse_ctrw requires r >= 0");
  if (r == 0.0) return 0.0;
  if (r > path.total()) {
    std::ostringstream msg;
    msg << "level " << r << " exceeds S_n(" << path.horizon
        << ") = " << path.total();
    throw HorizonExceeded(msg.str());
  }
  const auto it = std::lower_bound(path.values.begin(), path.values.end(), r);
  return static_cast<double>(it - path.values.begin()) / path.n;
}

/// S^{(p)}(t) = Σ_{i<=floor(t)} Y_i with Y_i ~ Bernoulli(p). The Y_i are drawn
/// lazily and kept, so evaluations at increasing t see the same walk.
class BernoulliWalk {
 public:
  BernoulliWalk(RngStream stream, double p) : stream_(stream), p_(p) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw ParameterError("bernoulli walk requires p in (0, 1]");
    }
    counts_.push_back(0);
  }

  std::int64_t operator()(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw DomainError("bernoulli walk evaluated at invalid time");
    }
    const auto steps = static_cast<std::size_t>(std::floor(t));
    while (counts_.size() <= steps) {
      counts_.push_back(counts_.back() + (stream_.bernoulli(p_) ? 1 : 0));
    }
    return counts_[steps];
  }

  double p() const { return p_; }

 private:
  RngStream stream_;
  double p_;
  std::vector<std::int64_t> counts_;
};

inline std::int64_t bernoulli_walk(RngStream& stream, double p, double t) {
  BernoulliWalk walk(stream, p);
  return walk(t);
}

/// Rule for the Bernoulli success probability p_n.
struct PnRule {
  enum class Kind { inverse_sqrt, constant } kind = Kind::inverse_sqrt;
  double value = 0.0;

  double operator()(int n) const {
    return kind == Kind::inverse_sqrt ? 1.0 / std::sqrt(static_cast<double>(n))
                                      : value;
  }

  /// `sqrt` or `const:<v>`.
  static PnRule parse(std::string_view text) {
    if (text == "sqrt") return {};
    if (text.starts_with("const:")) {
      PnRule rule{Kind::constant, detail::parse_real(text.substr(6), text)};
      if (!(rule.value > 0.0 && rule.value <= 1.0)) {
        throw ParameterError("p_n constant must lie in (0, 1]");
      }
      return rule;
    }
    throw ParameterError("unknown p_n rule '" + std::string(text) + "'");
  }

  std::string spec() const {
    if (kind == Kind::inverse_sqrt) return "sqrt";
    std::ostringstream out;
    out.precision(17);
    out << "const:" << value;
    return out.str();
  }
};

/// One value of the walk S^{(p_n)}(λ E_n(t) / p_n) on a fresh array. The jump
/// and walk streams must be distinct.
inline std::int64_t ctrw_process(RngStream& jump_stream,
                                 const RngStream& walk_stream, int n,
                                 double p_n, double lambda, double t,
                                 const StabilityIndex& idx,
                                 SlowlyVarying family) {
  if (!(lambda > 0.0)) throw ParameterError("ctrw requires lambda > 0");
  const CtrwPath path =
      partial_sum_path(jump_stream, n, idx.horizon(), idx, family,
                       StopRule{t, 0.0});
  BernoulliWalk walk(walk_stream, p_n);
  return walk(lambda * inverse_ctrw(path, t) / p_n);
}

}  // namespace mssim
