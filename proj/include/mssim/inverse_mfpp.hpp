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
#include <vector>

#include "mssim/errors.hpp"
#include "mssim/ppp_sampler.hpp"
#include "mssim/rng.hpp"
#include "mssim/subordinator.hpp"

namespace mssim {

/// E(r) = inf{t >= 0 : D(t) >= r}: the first jump time whose prefix sum
/// reaches r. E(0) = 0.
inline double inverse(const JumpPath& path, double r) {
  if (!(r >= 0.0)) throw DomainError("inverse requires r >= 0");
  if (r == 0.0) return 0.0;
  if (r > path.total()) {
    std::ostringstream msg;
    msg << "level " << r << " exceeds D(" << path.horizon
        << ") = " << path.total() << "; enlarge the horizon";
    throw HorizonExceeded(msg.str());
  }
  const auto it = std::lower_bound(path.prefix.begin(), path.prefix.end(), r);
  return path.times[static_cast<std::size_t>(it - path.prefix.begin())];
}

/// Checks E against D on a step path: every level in a jump's window
/// (D(τ-), D(τ)] maps back to τ, E(D(t)) <= t at jump times and between
/// them, and E is non-decreasing along increasing levels.
inline bool galois_invariants_hold(const JumpPath& path) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  double last = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double below = i == 0 ? 0.0 : path.prefix[i - 1];
    const double tau = path.times[i];
    const double lowest = std::nextafter(below, inf);
    const double mid = below + 0.5 * (path.prefix[i] - below);
    for (double r : {lowest, mid, path.prefix[i]}) {
      if (r <= below || r > path.prefix[i]) continue;
      const double e = inverse(path, r);
      if (e != tau || e < last) return false;
      last = e;
    }
    if (inverse(path, eval(path, tau)) > tau) return false;
    const double next = i + 1 < path.size() ? path.times[i + 1] : path.horizon;
    const double between = tau + 0.5 * (next - tau);
    if (inverse(path, eval(path, between)) > between) return false;
  }
  return true;
}

/// Arrival times of a rate-λ homogeneous Poisson process on (0, horizon].
struct PoissonPath {
  std::vector<double> arrivals;
  double rate = 1.0;
  double horizon = 0.0;

  /// N(s): arrivals at or before s.
  std::int64_t count(double s) const {
    if (!(s >= 0.0)) throw DomainError("N evaluated at negative time");
    if (s > horizon) {
      std::ostringstream msg;
      msg << "operational time " << s << " exceeds Poisson horizon "
          << horizon;
      throw HorizonExceeded(msg.str());
    }
    return std::upper_bound(arrivals.begin(), arrivals.end(), s) -
           arrivals.begin();
  }
};

/// Cumulative Exp(λ) gaps, stopped at the horizon.
inline PoissonPath sample_poisson_path(RngStream& stream, double rate,
                                       double horizon) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw ParameterError("poisson rate must be finite and > 0");
  }
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw ParameterError("poisson horizon must be finite and >= 0");
  }
  PoissonPath out;
  out.rate = rate;
  out.horizon = horizon;
  double t = stream.exponential(rate);
  while (t <= horizon) {
    out.arrivals.push_back(t);
    t += stream.exponential(rate);
  }
  return out;
}

/// One realisation of the multifractional Poisson process X(t) = N(E(t)).
/// The two paths must come from distinct streams.
struct MfppSample {
  JumpPath d_path;
  PoissonPath n_path;
};

inline std::int64_t mfpp_value(const MfppSample& sample, double t) {
  return sample.n_path.count(inverse(sample.d_path, t));
}

/// Samples D with the given truncation on [0, first_end]. While D has not
/// reached `level` the path is extended over successive windows of doubling
/// length, stopping at `horizon`. Atoms on disjoint windows are independent,
/// so the result is a valid path on its own (possibly shorter) horizon and
/// E(level) is available whenever D(horizon) >= level.
inline JumpPath sample_path_reaching(RngStream& stream,
                                     const StabilityIndex& idx,
                                     const Truncation& trunc, double level,
                                     double first_end, double horizon) {
  if (!(first_end > 0.0)) {
    throw ParameterError("sample_path_reaching needs first_end > 0");
  }
  double end = std::min(first_end, horizon);
  JumpPath path = build_path(sample(stream, end, trunc, idx));
  while (path.total() < level && end < horizon) {
    const double next = std::min(horizon, 2.0 * end);
    path.append(sample(stream, next, trunc, idx, end).points, next);
    end = next;
  }
  return path;
}

/// Stream tags separating the independent ingredients of one replication.
enum StreamTag : std::uint64_t {
  kTagSubordinator = 1,
  kTagPoisson = 2,
  kTagJumps = 3,
  kTagWalk = 4,
};

}  // namespace mssim
