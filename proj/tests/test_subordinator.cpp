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

#include "mssim/subordinator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "mssim/stats.hpp"

namespace mssim {
namespace {

JumpPath two_jumps() {
  PointPattern p;
  p.horizon = 1.0;
  p.points = {{0.5, 2.0}, {0.2, 1.0}};
  return build_path(p);
}

double tree_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo == 1) return v[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return tree_sum(v, lo, mid) + tree_sum(v, mid, hi);
}

TEST(BuildPath, EmptyPatternGivesZeroPath) {
  PointPattern p;
  p.horizon = 1.0;
  const auto path = build_path(p);
  EXPECT_TRUE(path.empty());
  EXPECT_EQ(eval(path, 0.7), 0.0);
  EXPECT_TRUE(path.invariants_hold());
}

TEST(BuildPath, SortsAndAccumulates) {
  const auto path = two_jumps();
  EXPECT_EQ(path.times, (std::vector<double>{0.2, 0.5}));
  EXPECT_EQ(path.prefix, (std::vector<double>{1.0, 3.0}));
  EXPECT_TRUE(path.invariants_hold());
}

TEST(BuildPath, MergesCoincidentTimes) {
  PointPattern p;
  p.horizon = 1.0;
  p.points = {{0.3, 1.0}, {0.3, 0.5}, {0.1, 2.0}};
  const auto path = build_path(p);
  EXPECT_EQ(path.times, (std::vector<double>{0.1, 0.3}));
  EXPECT_EQ(path.sizes, (std::vector<double>{2.0, 1.5}));
  EXPECT_EQ(path.prefix, (std::vector<double>{2.0, 3.5}));
}

TEST(BuildPath, PrefixStaysStrictBelowResolution) {
  PointPattern p;
  p.horizon = 1.0;
  p.points = {{0.1, 1e20}, {0.2, 1e-6}, {0.3, 1e-6}};
  const auto path = build_path(p);
  EXPECT_TRUE(path.invariants_hold());
  EXPECT_GT(path.prefix[2], path.prefix[1]);
}

TEST(BuildPath, LargePathMatchesTreeResummation) {
  auto s = split(99, 0);
  const auto idx = StabilityIndex::constant(0.5, 1.0);
  PointPattern p = sample_stationary(s, 1.0, 1e5, idx);
  ASSERT_GT(p.points.size(), 90000u);
  const auto path = build_path(p);
  EXPECT_TRUE(path.invariants_hold());
  std::vector<double> sizes;
  for (const Point& pt : p.points) sizes.push_back(pt.x);
  const double reference = tree_sum(sizes, 0, sizes.size());
  EXPECT_NEAR(path.total() / reference, 1.0, 1e-12);
}

TEST(Eval, RightContinuousSteps) {
  const auto path = two_jumps();
  EXPECT_EQ(eval(path, 0.3), 1.0);
  EXPECT_EQ(eval(path, 0.2), 1.0);
  EXPECT_EQ(eval(path, 0.1), 0.0);
  EXPECT_EQ(eval(path, 1.0), 3.0);
  EXPECT_THROW(eval(path, 1.5), DomainError);
  EXPECT_THROW(eval(path, -0.1), DomainError);
}

TEST(Increment, Examples) {
  const auto path = two_jumps();
  EXPECT_EQ(increment(path, 0.1, 0.3), 1.0);
  EXPECT_EQ(increment(path, 0.25, 0.1), 0.0);
  EXPECT_EQ(increment(path, 0.1, 0.45), 3.0);
  EXPECT_THROW(increment(path, 0.9, 0.2), DomainError);
  EXPECT_THROW(increment(path, 0.1, 0.0), DomainError);
}

TEST(LaplaceTransform, ClosedForms) {
  const auto half = StabilityIndex::constant(0.5, 2.0);
  EXPECT_EQ(laplace_transform(half, 0.0, 1.3), 1.0);
  EXPECT_NEAR(laplace_transform(half, 1.0, 1.0),
              std::exp(-std::sqrt(std::numbers::pi)), 1e-10);
  EXPECT_NEAR(laplace_transform(half, 1.0, 1.0), 0.169915529467526, 1e-10);
  for (double beta : {0.2, 0.5, 0.75}) {
    const auto idx = StabilityIndex::constant(beta, 2.0);
    for (double theta : {0.3, 1.0, 4.0}) {
      for (double t : {0.25, 1.0, 2.0}) {
        EXPECT_NEAR(laplace_transform(idx, theta, t),
                    std::exp(-std::tgamma(1.0 - beta) * t * std::pow(theta, beta)),
                    1e-10);
      }
    }
  }
  EXPECT_THROW(laplace_transform(half, -1.0, 1.0), DomainError);
  EXPECT_THROW(laplace_transform(half, 1.0, 3.0), DomainError);
}

TEST(LaplaceTransform, AffineIndexAgainstDirectIntegral) {
  // ∫_0^1 Γ(1-β(s)) θ^{β(s)} ds by a fine midpoint rule with std::tgamma
  const auto idx = StabilityIndex::affine(0.4, 0.2, 1.0);
  const double theta = 2.0;
  const int cells = 200000;
  double sum = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double s = (i + 0.5) / cells;
    const double b = 0.4 + 0.2 * s;
    sum += std::tgamma(1.0 - b) * std::pow(theta, b);
  }
  EXPECT_NEAR(laplace_transform(idx, theta, 1.0), std::exp(-sum / cells), 1e-9);
}

TEST(SubordinatorPaths, MonotoneAndStrict) {
  const auto idx = StabilityIndex::affine(0.4, 0.2, 1.0);
  for (int r = 0; r < 200; ++r) {
    auto s = split(5, r);
    const auto path = build_path(sample_threshold(s, 1.0, 1e-4, idx));
    ASSERT_TRUE(path.invariants_hold());
    double previous = 0.0;
    for (int i = 0; i <= 100; ++i) {
      const double d = eval(path, i / 100.0);
      ASSERT_GE(d, previous);
      previous = d;
    }
  }
}

struct LaplaceCase {
  const char* beta;
  double theta;
  double t;
};

class LaplaceOracle : public ::testing::TestWithParam<const char*> {};

TEST_P(LaplaceOracle, MonteCarloMatchesClosedForm) {
  const auto idx = StabilityIndex::parse(GetParam(), 1.0);
  const auto trunc = cheapest_truncation(idx, 1.0, 1e-3);
  const int reps = 20000;
  std::vector<double> d_half(reps), d_one(reps);
  for (int r = 0; r < reps; ++r) {
    auto s = split(17, r);
    const auto path = build_path(sample(s, 1.0, trunc, idx));
    d_half[r] = eval(path, 0.5);
    d_one[r] = eval(path, 1.0);
  }
  for (double theta : {0.5, 1.0, 2.0}) {
    for (double t : {0.5, 1.0}) {
      const auto est = empirical_laplace(t == 0.5 ? d_half : d_one, theta);
      const double oracle = laplace_transform(idx, theta, t);
      const double bias = theta * small_jump_mass(idx, t, trunc);
      EXPECT_LE(std::abs(est.mean - oracle), 3.0 * est.se + bias)
          << GetParam() << " theta=" << theta << " t=" << t;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Families, LaplaceOracle,
                         ::testing::Values("constant:0.5", "affine:0.4,0.2",
                                           "sin:0.5,0.1,1.0"));

TEST(SubordinatorPaths, ContinuityBound) {
  const auto idx = StabilityIndex::constant(0.5, 1.0);
  const double eps = 0.1;
  const double beta_sup = idx.beta_sup();
  const double c_eps = 1.0 + 2.0 * beta_sup / (eps * (1.0 - beta_sup));
  EXPECT_DOUBLE_EQ(c_eps, 21.0);
  const int reps = 5000;
  std::vector<JumpPath> paths;
  for (int r = 0; r < reps; ++r) {
    auto s = split(23, r);
    paths.push_back(build_path(sample_threshold(s, 1.0, 1e-6, idx)));
  }
  for (double t : {0.0, 0.4}) {
    for (double h : {0.01, 0.05, 0.1}) {
      int hits = 0;
      for (const auto& p : paths) hits += increment(p, t, h) > eps ? 1 : 0;
      const double freq = static_cast<double>(hits) / reps;
      const double se = std::sqrt(freq * (1 - freq) / reps);
      EXPECT_LE(freq, c_eps * h + 3.0 * se);
    }
  }
}

}  // namespace
}  // namespace mssim
