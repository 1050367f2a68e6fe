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

#include "mssim/stability_index.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "mssim/rng.hpp"

namespace mssim {
namespace {

TEST(StabilityIndex, EvaluatesEachFamily) {
  EXPECT_EQ(StabilityIndex::constant(0.5, 10.0)(7.3), 0.5);
  EXPECT_DOUBLE_EQ(StabilityIndex::affine(0.4, 0.2, 1.0)(0.5), 0.5);
  EXPECT_NEAR(StabilityIndex::sinusoid(0.5, 0.3, 1.0, 1.0)(0.25), 0.8, 1e-15);
  const std::pair<double, double> knots[] = {{0.0, 0.3}, {1.0, 0.7}, {2.0, 0.5}};
  const auto table = StabilityIndex::table(knots, 2.0);
  EXPECT_DOUBLE_EQ(table(0.5), 0.5);
  EXPECT_DOUBLE_EQ(table(1.5), 0.6);
  EXPECT_DOUBLE_EQ(table(2.0), 0.5);
}

TEST(StabilityIndex, BoundsAreExact) {
  EXPECT_EQ(StabilityIndex::constant(0.5, 1.0).bounds(),
            std::make_pair(0.5, 0.5));
  const auto affine = StabilityIndex::affine(0.4, 0.2, 1.0).bounds();
  EXPECT_DOUBLE_EQ(affine.first, 0.4);
  EXPECT_DOUBLE_EQ(affine.second, 0.6);
  const auto sine = StabilityIndex::sinusoid(0.5, 0.3, 1.0, 1.0).bounds();
  EXPECT_NEAR(sine.first, 0.2, 1e-15);
  EXPECT_NEAR(sine.second, 0.8, 1e-15);
  // a quarter period only reaches the maximum
  const auto quarter = StabilityIndex::sinusoid(0.5, 0.3, 1.0, 0.25).bounds();
  EXPECT_DOUBLE_EQ(quarter.first, 0.5);
  EXPECT_NEAR(quarter.second, 0.8, 1e-15);
  const std::pair<double, double> knots[] = {{0.0, 0.3}, {1.0, 0.7}, {2.0, 0.5}};
  EXPECT_EQ(StabilityIndex::table(knots, 1.5).bounds(),
            std::make_pair(0.3, 0.7));
}

TEST(StabilityIndex, WindowBounds) {
  const auto idx = StabilityIndex::affine(0.4, 0.2, 2.0);
  const auto [lo, hi] = idx.bounds_on(1.0, 1.5);
  EXPECT_DOUBLE_EQ(lo, 0.6);
  EXPECT_DOUBLE_EQ(hi, 0.7);
  const auto sine = StabilityIndex::sinusoid(0.5, -0.3, 1.0, 1.0);
  EXPECT_NEAR(sine.bounds_on(0.0, 0.5).first, 0.2, 1e-15);
  EXPECT_NEAR(sine.bounds_on(0.0, 0.5).second, 0.5, 1e-15);
}

TEST(StabilityIndex, RejectsRangesOutsideUnitInterval) {
  EXPECT_THROW(StabilityIndex::constant(1.0, 1.0), ParameterError);
  EXPECT_THROW(StabilityIndex::constant(0.0, 1.0), ParameterError);
  EXPECT_THROW(StabilityIndex::affine(0.4, 0.2, 3.0), ParameterError);
  EXPECT_THROW(StabilityIndex::sinusoid(0.5, 0.6, 1.0, 1.0), ParameterError);
  EXPECT_THROW(StabilityIndex::constant(0.5, 0.0), ParameterError);
  const std::pair<double, double> short_table[] = {{0.0, 0.3}, {1.0, 0.7}};
  EXPECT_THROW(StabilityIndex::table(short_table, 2.0), ParameterError);
  const std::pair<double, double> unsorted[] = {{0.0, 0.3}, {0.0, 0.7}};
  EXPECT_THROW(StabilityIndex::table(unsorted, 0.0 + 1e-3), ParameterError);
}

TEST(StabilityIndex, DomainErrorOutsideHorizon) {
  const auto idx = StabilityIndex::constant(0.5, 2.0);
  EXPECT_THROW(idx(-0.1), DomainError);
  EXPECT_THROW(idx(2.5), DomainError);
  EXPECT_NO_THROW(idx(2.0));
}

TEST(StabilityIndex, ParsesTextualSpecs) {
  EXPECT_EQ(StabilityIndex::parse("constant:0.5", 1.0)(0.3), 0.5);
  EXPECT_DOUBLE_EQ(StabilityIndex::parse("affine:0.4,0.2", 1.0)(0.5), 0.5);
  EXPECT_NEAR(StabilityIndex::parse("sin:0.5,0.3,1.0", 1.0)(0.25), 0.8, 1e-15);
  EXPECT_DOUBLE_EQ(
      StabilityIndex::parse("table:0,0.3;1,0.7;2,0.5", 2.0)(1.5), 0.6);
  EXPECT_THROW(StabilityIndex::parse("cubic:1", 1.0), ParameterError);
  EXPECT_THROW(StabilityIndex::parse("affine:0.4", 1.0), ParameterError);
  EXPECT_THROW(StabilityIndex::parse("constant:x", 1.0), ParameterError);
  EXPECT_THROW(StabilityIndex::parse("0.5", 1.0), ParameterError);
  const auto idx = StabilityIndex::parse("table:0,0.3;1,0.7;2,0.5", 2.0);
  EXPECT_EQ(StabilityIndex::parse(idx.spec(), 2.0).params(), idx.params());
}

class IndexProperties : public ::testing::TestWithParam<const char*> {};

TEST_P(IndexProperties, StaysWithinBoundsAndIsLipschitz) {
  const auto idx = StabilityIndex::parse(GetParam(), 2.0);
  auto stream = split(7, 0);
  const double delta = 1e-6;
  for (int i = 0; i < 10000; ++i) {
    const double t = idx.horizon() * stream.uniform();
    const double b = idx(t);
    EXPECT_GE(b, idx.beta_inf() - 1e-12);
    EXPECT_LE(b, idx.beta_sup() + 1e-12);
    if (t + delta <= idx.horizon()) {
      EXPECT_LE(std::abs(idx(t + delta) - b),
                idx.lipschitz() * delta * (1.0 + 1e-6) + 1e-15);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Families, IndexProperties,
                         ::testing::Values("constant:0.5", "affine:0.4,0.2",
                                           "affine:0.8,-0.3",
                                           "sin:0.5,0.3,1.0",
                                           "sin:0.5,0.2,0.3",
                                           "table:0,0.3;0.5,0.9;1.2,0.2;2,0.5"));

}  // namespace
}  // namespace mssim
