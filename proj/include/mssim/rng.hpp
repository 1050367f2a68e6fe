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

#include <array>
#include <cmath>
#include <cstdint>

#include "mssim/errors.hpp"

namespace mssim {

// Philox4x32-10 block cipher, Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3" (SC 2011).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter encrypt(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
      const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Counter-based random stream.
///
/// The cipher key is derived from (master_seed, tag); the 128-bit counter is
/// (stream_id, block index). Draw i of stream s is therefore a pure function
/// of (master_seed, tag, s, i), so replications can run in any order on any
/// number of workers. Tags separate the roles of one replication (jump
/// pattern, Poisson clock, jump array, walk) into independent streams.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id,
            std::uint64_t tag = 0)
      : master_seed_(master_seed), stream_id_(stream_id), tag_(tag) {
    const std::uint64_t k = splitmix64(splitmix64(master_seed) ^ tag);
    key_ = {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t tag() const { return tag_; }

  std::uint64_t next_u64() {
    if (used_ == 2) refill();
    const std::uint64_t v = (std::uint64_t{buffer_[2 * used_ + 1]} << 32) |
                            buffer_[2 * used_];
    ++used_;
    return v;
  }

  /// Uniform on the open interval (0, 1): (m + 1/2) 2^-52 for a 52-bit m.
  double uniform() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  bool bernoulli(double p) { return uniform() < p; }

  std::uint64_t poisson(double mean);

 private:
  void refill() {
    const Philox4x32::Counter ctr = {
        static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(stream_id_),
        static_cast<std::uint32_t>(stream_id_ >> 32)};
    buffer_ = Philox4x32::encrypt(ctr, key_);
    ++block_;
    used_ = 0;
  }

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t tag_;
  Philox4x32::Key key_{};
  std::uint64_t block_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 2;
};

/// Independent stream for replication `stream_id` of `master_seed`.
inline RngStream split(std::uint64_t master_seed, std::uint64_t stream_id,
                       std::uint64_t tag = 0) {
  return RngStream(master_seed, stream_id, tag);
}

/// log(k!) without touching the global `signgam` that lgamma writes.
inline double log_factorial(std::uint64_t k) {
  static constexpr std::array<double, 10> table = {
      0.0,
      0.0,
      0.69314718055994530942,
      1.79175946922805500081,
      3.17805383034794561965,
      4.78749174278204599425,
      6.57925121201010099506,
      8.52516136106541430017,
      10.6046029027452502284,
      12.8018274800814696112};
  if (k < table.size()) return table[k];
  const double x = static_cast<double>(k) + 1.0;
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Stirling series for log Γ(x)
  return (x - 0.5) * std::log(x) - x + 0.91893853320467274178 +
         inv * (1.0 / 12.0 -
                inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
}

// Multiplication method below mean 10, Hörmann's PTRS transformed rejection
// above.
inline std::uint64_t RngStream::poisson(double mean) {
  if (!std::isfinite(mean) || mean < 0.0) {
    throw ParameterError("poisson mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = uniform();
    while (prod > limit) {
      prod *= uniform();
      ++k;
    }
    return k;
  }
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const auto k = static_cast<std::uint64_t>(kf);
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + kf * loglam - log_factorial(k)) {
      return k;
    }
  }
}

}  // namespace mssim
