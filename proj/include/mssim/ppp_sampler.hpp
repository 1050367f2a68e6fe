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

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "mssim/errors.hpp"
#include "mssim/quadrature.hpp"
#include "mssim/rng.hpp"
#include "mssim/stability_index.hpp"

namespace mssim {

/// Atom (t, x) of the driving Poisson point process: jump of size x at time t.
struct Point {
  double t;
  double x;
};

enum class TruncationMode { stationary, threshold };

/// Which part of the infinite-intensity process is retained.
///
/// stationary(M): the unit-rate process on [0,T]x(0,M] pushed through
///   (t,u) -> (t, u^{-1/β(t)}); keeps x >= M^{-1/β(t)}.
/// threshold(ε): keeps x >= ε.
struct Truncation {
  TruncationMode mode;
  double parameter;

  static Truncation stationary(double m) {
    return {TruncationMode::stationary, m};
  }
  static Truncation threshold(double eps) {
    return {TruncationMode::threshold, eps};
  }

  /// Smallest jump size the sampler can emit at a time where the index is
  /// beta.
  double cutoff(double beta) const {
    return mode == TruncationMode::threshold ? parameter
                                             : std::pow(parameter, -1.0 / beta);
  }
};

struct PointPattern {
  std::vector<Point> points;
  double start = 0.0;  // window is [start, horizon]
  double horizon = 0.0;
  Truncation truncation{TruncationMode::threshold, 0.0};
};

namespace detail {

inline void check_window(double start, double end, const StabilityIndex& idx) {
  if (!std::isfinite(start) || !std::isfinite(end) || start < 0.0 ||
      end < start) {
    std::ostringstream msg;
    msg << "invalid sampling window [" << start << ", " << end << "]";
    throw ParameterError(msg.str());
  }
  if (end > idx.horizon() * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "sampling window end " << end << " exceeds index horizon "
        << idx.horizon();
    throw ParameterError(msg.str());
  }
}

inline void check_truncation(const Truncation& trunc) {
  if (trunc.mode == TruncationMode::threshold) {
    if (!(trunc.parameter > 0.0 && trunc.parameter < 1.0)) {
      throw ParameterError("threshold truncation requires 0 < eps < 1");
    }
  } else if (!(trunc.parameter > 0.0) || !std::isfinite(trunc.parameter)) {
    throw ParameterError("stationary truncation requires finite M > 0");
  }
}

}  // namespace detail

/// Image of a unit-rate atom u under (t,u) -> (t, u^{-1/β(t)}).
inline double stationary_jump_size(double u, double beta) {
  return std::pow(u, -1.0 / beta);
}

/// Inverse transform of the conditional Pareto tail (x/ε)^{-β}, x >= ε.
inline double threshold_jump_size(double eps, double uniform, double beta) {
  return eps * std::pow(uniform, -1.0 / beta);
}

/// Λ = ∫ ε^{-β(s)} ds over [start, end]: mean number of atoms with x >= ε.
inline double threshold_mass(const StabilityIndex& idx, double end, double eps,
                             double start = 0.0) {
  detail::check_window(start, end, idx);
  detail::check_truncation(Truncation::threshold(eps));
  const double log_eps = std::log(eps);
  return integrate([&](double s) { return std::exp(-idx(s) * log_eps); },
                   start, end);
}

/// Mean number of atoms the sampler for `trunc` emits on [start, end].
inline double expected_points(const StabilityIndex& idx, double end,
                              const Truncation& trunc, double start = 0.0) {
  if (trunc.mode == TruncationMode::stationary) {
    detail::check_truncation(trunc);
    return (end - start) * trunc.parameter;
  }
  return threshold_mass(idx, end, trunc.parameter, start);
}

/// Stationary construction: K ~ Poisson((end-start) M) uniform atoms (t,u) on
/// [start,end]x(0,M], emitted as (t, u^{-1/β(t)}).
inline PointPattern sample_stationary(RngStream& stream, double end, double m,
                                      const StabilityIndex& idx,
                                      double start = 0.0) {
  if (!std::isfinite(end) || !std::isfinite(m)) {
    throw ParameterError("stationary sampler needs finite T and M");
  }
  detail::check_window(start, end, idx);
  detail::check_truncation(Truncation::stationary(m));
  PointPattern out;
  out.start = start;
  out.horizon = end;
  out.truncation = Truncation::stationary(m);
  const double width = end - start;
  const std::uint64_t count = stream.poisson(width * m);
  out.points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const double t = std::min(end, start + width * stream.uniform());
    const double u = m * stream.uniform();
    out.points.push_back({t, stationary_jump_size(u, idx(t))});
  }
  return out;
}

/// Threshold construction: the atoms with x >= ε form a Poisson process in
/// time with rate ε^{-β(t)}. Each of kThresholdCells equal cells is sampled
/// by thinning a homogeneous process at the cell's peak rate ε^{-sup β};
/// accepted times get the conditional Pareto size x = ε U^{-1/β(t)}.
inline constexpr int kThresholdCells = 64;

inline PointPattern sample_threshold(RngStream& stream, double end, double eps,
                                     const StabilityIndex& idx,
                                     double start = 0.0) {
  if (!std::isfinite(end) || !std::isfinite(eps)) {
    throw ParameterError("threshold sampler needs finite T and eps");
  }
  detail::check_window(start, end, idx);
  detail::check_truncation(Truncation::threshold(eps));
  PointPattern out;
  out.start = start;
  out.horizon = end;
  out.truncation = Truncation::threshold(eps);
  if (end == start) return out;
  const double log_eps = std::log(eps);
  const int cells = idx.family() == IndexFamily::constant ? 1 : kThresholdCells;
  const double width = (end - start) / cells;
  for (int c = 0; c < cells; ++c) {
    const double a = start + c * width;
    const double b = c + 1 == cells ? end : a + width;
    const double beta_sup = idx.bounds_on(a, b).second;
    const std::uint64_t count =
        stream.poisson((b - a) * std::exp(-beta_sup * log_eps));
    for (std::uint64_t i = 0; i < count; ++i) {
      const double t = std::min(b, a + (b - a) * stream.uniform());
      const double beta = idx(t);
      if (beta < beta_sup &&
          stream.uniform() > std::exp((beta_sup - beta) * log_eps)) {
        continue;
      }
      out.points.push_back(
          {t, threshold_jump_size(eps, stream.uniform(), beta)});
    }
  }
  return out;
}

inline PointPattern sample(RngStream& stream, double end,
                           const Truncation& trunc, const StabilityIndex& idx,
                           double start = 0.0) {
  return trunc.mode == TruncationMode::stationary
             ? sample_stationary(stream, end, trunc.parameter, idx, start)
             : sample_threshold(stream, end, trunc.parameter, idx, start);
}

/// Expected total size of the atoms the truncation discards on [start, end]:
/// ∫ β/(1-β) c(s)^{1-β(s)} ds with c(s) the cutoff at time s.
inline double small_jump_mass(const StabilityIndex& idx, double end,
                              const Truncation& trunc, double start = 0.0) {
  detail::check_truncation(trunc);
  detail::check_window(start, end, idx);
  if (end == start) return 0.0;
  const double log_p = std::log(trunc.parameter);
  const bool threshold = trunc.mode == TruncationMode::threshold;
  return integrate(
      [&](double s) {
        const double b = idx(s);
        // threshold: ε^{1-β};  stationary: M^{1-1/β}
        const double expo = threshold ? (1.0 - b) : (1.0 - 1.0 / b);
        return b / (1.0 - b) * std::exp(expo * log_p);
      },
      start, end);
}

/// Loosest truncation of the given mode whose excluded mass on [start, end]
/// does not exceed `budget`.
inline Truncation truncation_for_budget(const StabilityIndex& idx, double end,
                                        TruncationMode mode, double budget,
                                        double start = 0.0) {
  if (!(budget > 0.0)) throw ParameterError("mass budget must be > 0");
  const bool threshold = mode == TruncationMode::threshold;
  auto make = [&](double log_p) {
    return threshold ? Truncation::threshold(std::exp(log_p))
                     : Truncation::stationary(std::exp(log_p));
  };
  // `ok` side satisfies the budget; excluded mass is monotone in log_p
  double ok = threshold ? -700.0 : 700.0;
  double bad = threshold ? -1e-9 : -50.0;
  if (small_jump_mass(idx, end, make(ok), start) > budget) {
    throw NumericError("no truncation meets the excluded-mass budget");
  }
  if (small_jump_mass(idx, end, make(bad), start) <= budget) return make(bad);
  for (int iter = 0; iter < 200 && std::abs(ok - bad) > 1e-9; ++iter) {
    const double mid = 0.5 * (ok + bad);
    if (small_jump_mass(idx, end, make(mid), start) <= budget) {
      ok = mid;
    } else {
      bad = mid;
    }
  }
  return make(ok);
}

/// Of the two modes meeting `budget`, the one emitting fewer atoms on average.
inline Truncation cheapest_truncation(const StabilityIndex& idx, double end,
                                      double budget, double start = 0.0) {
  const Truncation st = truncation_for_budget(
      idx, end, TruncationMode::stationary, budget, start);
  const Truncation th = truncation_for_budget(
      idx, end, TruncationMode::threshold, budget, start);
  return expected_points(idx, end, st, start) <
                 expected_points(idx, end, th, start)
             ? st
             : th;
}

}  // namespace mssim
