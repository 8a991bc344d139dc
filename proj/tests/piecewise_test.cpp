// Copyright 2026 The evq Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "evq/piecewise.hpp"

namespace evq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(StepFunctionTest, BoxEvaluatesRightContinuous) {
  const StepFunction f = StepFunction::Box(1.0, 3.0, 2.0);
  EXPECT_EQ(f(0.5), 0.0);
  EXPECT_EQ(f(1.0), 2.0);
  EXPECT_EQ(f(2.999), 2.0);
  EXPECT_EQ(f(3.0), 0.0);
  EXPECT_DOUBLE_EQ(f.Integral(0.0, 10.0), 4.0);
  EXPECT_DOUBLE_EQ(f.Integral(2.0, 2.5), 1.0);
  EXPECT_DOUBLE_EQ(f.SupportEnd(), 3.0);
}

TEST(StepFunctionTest, AppendCoalescesAndReplaces) {
  StepFunction f;
  f.Append(0.0, 1.0);
  f.Append(1.0, 1.0);
  f.Append(2.0, 3.0);
  f.Append(2.0, 4.0);
  EXPECT_EQ(f.breakpoints().size(), 2u);
  EXPECT_EQ(f(2.5), 4.0);
  EXPECT_EQ(f.SupportEnd(), kInf);
}

TEST(StepFunctionTest, FromPiecesRejectsOverlap) {
  const std::vector<StepFunction::Piece> ok = {{2.0, 3.0, 1.0}, {0.0, 1.0, 2.0}};
  const StepFunction f = StepFunction::FromPieces(ok);
  EXPECT_EQ(f(0.5), 2.0);
  EXPECT_EQ(f(1.5), 0.0);
  EXPECT_EQ(f(2.5), 1.0);
  const std::vector<StepFunction::Piece> bad = {{0.0, 2.0, 1.0}, {1.0, 3.0, 1.0}};
  EXPECT_THROW(StepFunction::FromPieces(bad), std::invalid_argument);
  const std::vector<StepFunction::Piece> empty = {{1.0, 1.0, 1.0}};
  EXPECT_THROW(StepFunction::FromPieces(empty), std::invalid_argument);
}

TEST(StepFunctionTest, ZeroFunction) {
  const StepFunction f;
  EXPECT_TRUE(f.IsZero());
  EXPECT_EQ(f.SupportEnd(), 0.0);
  EXPECT_EQ(f.Integral(0.0, 5.0), 0.0);
}

TEST(StepFunctionTest, CumulativeMatchesIntegral) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> len(0.1, 2.0), val(0.0, 5.0);
  StepFunction f;
  double t = 0.0;
  for (int k = 0; k < 20; ++k) {
    f.Append(t, val(rng));
    t += len(rng);
  }
  f.Append(t, 0.0);
  const PiecewiseLinearFn F = f.Cumulative();
  for (double x = 0.0; x < t + 2.0; x += 0.37) {
    EXPECT_NEAR(F(x), f.Integral(0.0, x), 1e-10);
  }
}

TEST(PiecewiseLinearFnTest, EvaluatesAndExtends) {
  PiecewiseLinearFn f({0.0, 1.0, 3.0}, {1.0, 3.0, 3.0}, 2.0);
  EXPECT_EQ(f(-1.0), 1.0);
  EXPECT_DOUBLE_EQ(f(0.5), 2.0);
  EXPECT_DOUBLE_EQ(f(2.0), 3.0);
  EXPECT_DOUBLE_EQ(f(4.0), 5.0);
  EXPECT_DOUBLE_EQ(f.RightSlope(0.2), 2.0);
  EXPECT_DOUBLE_EQ(f.RightSlope(5.0), 2.0);
  EXPECT_TRUE(f.IsNonDecreasing());
}

TEST(PiecewiseLinearFnTest, GeneralizedInverseTakesLeftEndOfPlateau) {
  PiecewiseLinearFn f({0.0, 1.0, 3.0, 4.0}, {0.0, 2.0, 2.0, 4.0});
  EXPECT_DOUBLE_EQ(f.GeneralizedInverse(1.0), 0.5);
  EXPECT_DOUBLE_EQ(f.GeneralizedInverse(2.0), 1.0);
  EXPECT_DOUBLE_EQ(f.GeneralizedInverse(3.0), 3.5);
  EXPECT_EQ(f.GeneralizedInverse(5.0), kInf);
}

TEST(PiecewiseLinearFnTest, DecreasingFunctionDetected) {
  PiecewiseLinearFn f({0.0, 1.0}, {1.0, 0.5});
  EXPECT_FALSE(f.IsNonDecreasing());
  EXPECT_TRUE(f.IsNonDecreasing(0.6));
}

}  // namespace
}  // namespace evq
