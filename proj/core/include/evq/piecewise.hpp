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

#ifndef EVQ_PIECEWISE_HPP_
#define EVQ_PIECEWISE_HPP_

#include <span>
#include <vector>

namespace evq {

// Breakpoints closer than this are merged.
inline constexpr double kTimeTolerance = 1e-12;

class PiecewiseLinearFn;

// A right-continuous piecewise-constant function of time.
//
// The value on [breakpoints[k], breakpoints[k+1]) is values[k]; the last value
// holds up to +infinity and the function is 0 before the first breakpoint.
// Flow rates with bounded support therefore end with a 0 piece.
class StepFunction {
 public:
  struct Piece {
    double start;
    double end;
    double value;
  };

  StepFunction() = default;
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  // Builds a function from (possibly unordered, non-overlapping) pieces.
  // Gaps between pieces are 0. Throws std::invalid_argument on overlaps or
  // pieces with end <= start.
  static StepFunction FromPieces(std::span<const Piece> pieces);

  // Constant `value` on [start, end), zero elsewhere.
  static StepFunction Box(double start, double end, double value);

  double operator()(double t) const;

  // Starts a new piece at t. t must not precede the last breakpoint; if it
  // coincides with it (within kTimeTolerance) the last value is replaced.
  // Repeated values are coalesced.
  void Append(double t, double value);

  double Integral(double a, double b) const;
  double Average(double a, double b) const { return Integral(a, b) / (b - a); }

  // Smallest t after which the function is identically zero; +inf if the last
  // value is non-zero, 0 if the function is zero everywhere.
  double SupportEnd() const;
  double MaxValue() const;
  double MinValue() const;
  bool IsZero() const;

  // Integral from the first breakpoint (or 0) as a piecewise-linear function.
  PiecewiseLinearFn Cumulative() const;

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }
  std::vector<Piece> Pieces() const;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

// A continuous piecewise-linear function given by its values at increasing
// breakpoints. Left of the first breakpoint the first value is held; right of
// the last breakpoint the function continues with `tail_slope`.
class PiecewiseLinearFn {
 public:
  PiecewiseLinearFn() = default;
  PiecewiseLinearFn(std::vector<double> breakpoints, std::vector<double> values,
                    double tail_slope = 0.0);

  double operator()(double t) const;

  void Append(double t, double y);
  void set_tail_slope(double slope) { tail_slope_ = slope; }

  // Slope of the linear piece to the right of t.
  double RightSlope(double t) const;

  bool IsNonDecreasing(double tolerance = 0.0) const;
  double MaxSlope() const;

  // Left-continuous generalized inverse inf{t : f(t) >= y}. Requires a
  // non-decreasing function. Returns +inf when y is never attained.
  double GeneralizedInverse(double y) const;

  std::span<const double> breakpoints() const { return breakpoints_; }
  std::span<const double> values() const { return values_; }
  double tail_slope() const { return tail_slope_; }
  bool empty() const { return breakpoints_.empty(); }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  double tail_slope_ = 0.0;
};

// Evaluates (cumulative o exit_time^{-1})(y) with the left-continuous
// generalized inverse of the non-decreasing exit-time function.
double ComposeWithGeneralizedInverse(const PiecewiseLinearFn& cumulative,
                                     const PiecewiseLinearFn& exit_time,
                                     double y);

}  // namespace evq

#endif  // EVQ_PIECEWISE_HPP_
