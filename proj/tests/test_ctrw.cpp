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

#include "mssim/ctrw.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mssim/inverse_mfpp.hpp"
#include "mssim/stats.hpp"

namespace mssim {
namespace {

TEST(SlowlyVarying, ParseAndEvaluate) {
  EXPECT_EQ(parse_slowly_varying("unit"), SlowlyVarying::unit);
  EXPECT_EQ(parse_slowly_varying("log"), SlowlyVarying::log);
  EXPECT_THROW(parse_slowly_varying("loglog"), ParameterError);
  EXPECT_EQ(to_string(SlowlyVarying::log), "log");
  EXPECT_EQ(slowly_varying(SlowlyVarying::unit, 1e9), 1.0);
  EXPECT_EQ(slowly_varying(SlowlyVarying::log, 2.0), 1.0);
  EXPECT_NEAR(slowly_varying(SlowlyVarying::log, std::exp(3.0)), 3.0, 1e-14);
}

TEST(Norming, UnitFamilyClosedForm) {
  EXPECT_NEAR(norming_an(16, SlowlyVarying::unit, 0.8), 32.0, 1e-12);
  EXPECT_NEAR(norming_an(100, SlowlyVarying::unit, 0.5), 1e4, 1e-8);
  EXPECT_NEAR(norming_bnk(16.0, 0.4, 0.8), 256.0, 1e-11);
  EXPECT_THROW(norming_an(0, SlowlyVarying::unit, 0.5), ParameterError);
  EXPECT_THROW(norming_an(10, SlowlyVarying::unit, 1.0), ParameterError);
  EXPECT_THROW(norming_bnk(10.0, 1.0, 0.5), ParameterError);
}

TEST(Norming, LogFamilySolvesDefiningEquation) {
  for (double bs : {0.3, 0.5, 0.8}) {
    for (int n : {10, 100, 1000, 10000, 100000}) {
      const double a = norming_an(n, SlowlyVarying::log, bs);
      const double lhs = std::pow(a, -bs) * std::max(1.0, std::log(a));
      EXPECT_NEAR(lhs * n, 1.0, 1e-9) << "beta*=" << bs << " n=" << n;
      // on the decreasing branch only
      EXPECT_GE(a, std::exp(1.0 / bs));
    }
  }
}

TEST(JumpTail, LogQuantileMatchesBisectionOracle) {
  // t^{-1/2} max(1, ln t) = 0.1 on the decreasing branch, by plain bisection
  double lo = std::exp(2.0), hi = 1e6;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::log(mid) / std::sqrt(mid) > 0.1 ? lo : hi) = mid;
  }
  const double u = detail::tail_quantile(SlowlyVarying::log, 0.1, 0.5);
  EXPECT_NEAR(u, lo, 1e-9 * lo);
  EXPECT_NEAR(jump_tail(u, 0.5, 0.5, SlowlyVarying::log), 0.1, 1e-12);
  // the unit family starts at the support's left end
  EXPECT_NEAR(detail::tail_quantile(SlowlyVarying::unit, 1.0 - 1e-12, 0.5),
              1.0, 1e-10);
}

TEST(JumpTail, SurvivalIsMonotoneAndMatchesDefinition) {
  for (auto family : {SlowlyVarying::unit, SlowlyVarying::log}) {
    double previous = 1.0;
    for (double t = 1.0; t < 1e8; t *= 1.1) {
      const double s = jump_tail(t, 0.6, 0.8, family);
      ASSERT_LE(s, previous + 1e-15);
      ASSERT_GT(s, 0.0);
      previous = s;
    }
  }
  EXPECT_EQ(jump_tail(0.5, 0.6, 0.8, SlowlyVarying::unit), 1.0);
  EXPECT_NEAR(jump_tail(100.0, 0.6, 0.8, SlowlyVarying::unit),
              std::pow(100.0, -0.6), 1e-15);
  // large t is on the decreasing branch: t^{-β} ln(t^{β/β*})
  const double t = 1e12;
  EXPECT_NEAR(jump_tail(t, 0.6, 0.8, SlowlyVarying::log),
              std::pow(t, -0.6) * std::log(std::pow(t, 0.75)), 1e-18);
}

TEST(JumpTail, SamplerMatchesSurvivalFunction) {
  const auto idx = StabilityIndex::affine(0.4, 0.3, 1.0);
  const int n = 10, k = 5;  // β(k/n) = 0.55
  const int reps = 200000;
  for (auto family : {SlowlyVarying::unit, SlowlyVarying::log}) {
    auto s = split(5, 0, static_cast<std::uint64_t>(family));
    std::vector<double> draws(reps);
    for (auto& d : draws) d = sample_jnk(s, n, k, idx, family);
    for (double t : {1.5, 10.0, 1e3, 1e5}) {
      double exceed = 0.0;
      for (double d : draws) exceed += d > t ? 1.0 : 0.0;
      const double p_hat = exceed / reps;
      const double p = jump_tail(t, 0.55, idx.beta_sup(), family);
      EXPECT_NEAR(p_hat, p, 4.0 * std::sqrt(p * (1 - p) / reps) + 1e-6)
          << to_string(family) << " t=" << t;
    }
  }
}

TEST(PartialSums, GridAndMonotonicity) {
  const auto idx = StabilityIndex::constant(0.5, 2.0);
  auto s = split(8, 0);
  const auto path = partial_sum_path(s, 100, 1.5, idx, SlowlyVarying::unit);
  ASSERT_EQ(path.values.size(), 151u);
  EXPECT_EQ(path.values[0], 0.0);
  for (std::size_t k = 1; k < path.values.size(); ++k) {
    ASSERT_GT(path.values[k], path.values[k - 1]);
  }
  EXPECT_EQ(path.at(0.0), 0.0);
  EXPECT_EQ(path.at(0.015), path.values[1]);
  EXPECT_EQ(path.at(1.5), path.values[150]);
  EXPECT_THROW(path.at(1.6), HorizonExceeded);
  EXPECT_THROW(partial_sum_path(s, 100, 3.0, idx, SlowlyVarying::unit),
               ParameterError);
}

TEST(PartialSums, StopRuleYieldsPrefixOfFullPath) {
  const auto idx = StabilityIndex::sinusoid(0.5, 0.2, 1.0, 2.0);
  for (int r = 0; r < 20; ++r) {
    auto a = split(9, r), b = split(9, r);
    const auto full = partial_sum_path(a, 500, 2.0, idx, SlowlyVarying::log);
    const auto cut = partial_sum_path(b, 500, 2.0, idx, SlowlyVarying::log,
                                      StopRule{1.0, 0.5});
    ASSERT_LE(cut.values.size(), full.values.size());
    for (std::size_t k = 0; k < cut.values.size(); ++k) {
      ASSERT_EQ(cut.values[k], full.values[k]);
    }
    if (cut.values.size() < full.values.size()) {
      ASSERT_GE(cut.total(), 1.0);
      ASSERT_GE(cut.horizon, 0.5);
    }
  }
}

TEST(InverseCtrw, Examples) {
  CtrwPath path;
  path.n = 4;
  path.values = {0.0, 0.5, 1.5, 1.5, 3.0};
  path.horizon = 1.0;
  EXPECT_EQ(inverse_ctrw(path, 0.0), 0.0);
  EXPECT_EQ(inverse_ctrw(path, 0.5), 0.25);
  EXPECT_EQ(inverse_ctrw(path, 1.0), 0.5);
  EXPECT_EQ(inverse_ctrw(path, 1.5), 0.5);
  EXPECT_EQ(inverse_ctrw(path, 2.0), 1.0);
  EXPECT_THROW(inverse_ctrw(path, 3.5), HorizonExceeded);
  EXPECT_THROW(inverse_ctrw(path, -0.1), DomainError);
}

TEST(InverseCtrw, TwoCellGrid) {
  CtrwPath path;
  path.n = 2;
  path.values = {0.0, 1.0, 3.0};
  path.horizon = 1.0;
  EXPECT_EQ(inverse_ctrw(path, 0.5), 0.5);
  EXPECT_EQ(inverse_ctrw(path, 3.0), 1.0);
  EXPECT_EQ(inverse_ctrw(path, 0.0), 0.0);
}

TEST(PartialSums, SingleCellIsTheRawJump) {
  const auto idx = StabilityIndex::constant(0.5, 1.0);
  EXPECT_EQ(norming_an(1, SlowlyVarying::unit, 0.5), 1.0);
  EXPECT_EQ(norming_bnk(1.0, 0.5, 0.5), 1.0);
  EXPECT_EQ(norming_bnk(32.0, 0.8, 0.8), 32.0);
  for (int r = 0; r < 100; ++r) {
    auto s = split(30, r);
    const auto path = partial_sum_path(s, 1, 1.0, idx, SlowlyVarying::unit);
    ASSERT_EQ(path.values.size(), 2u);
    ASSERT_GE(path.at(1.0), 1.0);
  }
}

TEST(PartialSums, InverseIsMonotoneInLevel) {
  const auto idx = StabilityIndex::affine(0.4, 0.2, 2.0);
  auto s = split(31, 0);
  const auto path = partial_sum_path(s, 1000, 2.0, idx, SlowlyVarying::log);
  double previous = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double e =
        inverse_ctrw(path, std::min(path.total(), path.total() * k / 400.0));
    ASSERT_GE(e, previous);
    previous = e;
  }
}

TEST(BernoulliWalk, MeanAndConsistency) {
  auto s = split(10, 0);
  const auto count = bernoulli_walk(s, 0.3, 10000.0);
  EXPECT_NEAR(static_cast<double>(count), 3000.0, 3.0 * std::sqrt(2100.0));

  BernoulliWalk walk(split(10, 1), 0.5);
  const auto at5 = walk(5.7);
  const auto at50 = walk(50.0);
  EXPECT_EQ(walk(5.0), at5);
  EXPECT_GE(at50, at5);
  EXPECT_EQ(walk(0.9), 0);
  auto ones = split(10, 2);
  EXPECT_EQ(bernoulli_walk(ones, 1.0, 5.7), 5);
  double mean = 0.0;
  for (int r = 0; r < 1000; ++r) {
    auto w = split(11, r);
    mean += static_cast<double>(bernoulli_walk(w, 0.3, 1e4)) / 1000.0;
  }
  EXPECT_NEAR(mean, 3000.0, 3.0 * std::sqrt(2100.0 / 1000.0));
  EXPECT_THROW(BernoulliWalk(split(1, 1), 0.0), ParameterError);
  EXPECT_THROW(walk(-1.0), DomainError);
}

TEST(PnRule, ParseAndSpec) {
  const auto sqrt_rule = PnRule::parse("sqrt");
  EXPECT_DOUBLE_EQ(sqrt_rule(100), 0.1);
  EXPECT_EQ(sqrt_rule.spec(), "sqrt");
  const auto c = PnRule::parse("const:0.25");
  EXPECT_EQ(c(7), 0.25);
  EXPECT_EQ(PnRule::parse(c.spec())(1), 0.25);
  EXPECT_THROW(PnRule::parse("const:0"), ParameterError);
  EXPECT_THROW(PnRule::parse("const:1.5"), ParameterError);
  EXPECT_THROW(PnRule::parse("linear"), ParameterError);
}

TEST(CtrwProcess, Deterministic) {
  const auto idx = StabilityIndex::constant(0.6, 4.0);
  auto j1 = split(3, 2, kTagJumps), j2 = split(3, 2, kTagJumps);
  const auto w = split(3, 2, kTagWalk);
  EXPECT_EQ(ctrw_process(j1, w, 100, 0.1, 1.0, 1.0, idx, SlowlyVarying::unit),
            ctrw_process(j2, w, 100, 0.1, 1.0, 1.0, idx, SlowlyVarying::unit));
  EXPECT_THROW(
      ctrw_process(j1, w, 100, 0.1, 0.0, 1.0, idx, SlowlyVarying::unit),
      ParameterError);
}

TEST(CtrwProcess, UnitSuccessProbabilityCountsSteps) {
  const auto idx = StabilityIndex::constant(0.5, 4.0);
  for (int r = 0; r < 50; ++r) {
    auto j1 = split(40, r, kTagJumps), j2 = split(40, r, kTagJumps);
    const auto w = split(40, r, kTagWalk);
    const auto path = partial_sum_path(j1, 100, 4.0, idx, SlowlyVarying::unit,
                                       StopRule{1.0, 0.0});
    if (path.total() < 1.0) continue;
    const double e = inverse_ctrw(path, 1.0);
    ASSERT_EQ(ctrw_process(j2, w, 100, 1.0, 3.0, 1.0, idx,
                           SlowlyVarying::unit),
              static_cast<std::int64_t>(std::floor(3.0 * e)));
  }
  // E_n(0) = 0 and the walk is empty there
  auto j = split(41, 0, kTagJumps);
  EXPECT_EQ(ctrw_process(j, split(41, 0, kTagWalk), 100, 0.1, 1.0, 0.0, idx,
                         SlowlyVarying::unit),
            0);
}

TEST(CtrwProcess, PartialSumsApproachSubordinator) {
  // S_n(1) and D(1) share the limit law for the unit family
  const auto idx = StabilityIndex::constant(0.5, 1.0);
  const int reps = 2000;
  std::vector<double> sn(reps), d(reps);
  for (int r = 0; r < reps; ++r) {
    auto a = split(21, r, kTagJumps);
    sn[r] = partial_sum_path(a, 1000, 1.0, idx, SlowlyVarying::unit).total();
    auto b = split(21, r, kTagSubordinator);
    d[r] = build_path(sample_threshold(b, 1.0, 1e-4, idx)).total();
  }
  EXPECT_LT(ks_two_sample(sn, d), ks_critical_value(reps, reps));
}

}  // namespace
}  // namespace mssim
