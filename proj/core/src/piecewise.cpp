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

#include "evq/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace evq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Index of the last breakpoint <= t, or -1.
std::ptrdiff_t PieceIndex(std::span<const double> breakpoints, double t) {
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  return (it - breakpoints.begin()) - 1;
}

}  // namespace

StepFunction::StepFunction(std::vector<double> breakpoints,
                           std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() != values_.size()) {
    throw std::invalid_argument("StepFunction: size mismatch");
  }
  for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k] > breakpoints_[k - 1])) {
      throw std::invalid_argument(
          "StepFunction: breakpoints must be strictly increasing");
    }
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("StepFunction: non-finite value");
    }
  }
}

StepFunction StepFunction::FromPieces(std::span<const Piece> pieces) {
  std::vector<Piece> sorted(pieces.begin(), pieces.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Piece& a, const Piece& b) { return a.start < b.start; });
  StepFunction f;
  double last_end = -kInf;
  for (const Piece& p : sorted) {
    if (!(p.end > p.start)) {
      throw std::invalid_argument("StepFunction: piece with end <= start");
    }
    if (p.start < last_end - kTimeTolerance) {
      throw std::invalid_argument("StepFunction: overlapping pieces");
    }
    f.Append(p.start, p.value);
    f.Append(p.end, 0.0);
    last_end = p.end;
  }
  return f;
}

StepFunction StepFunction::Box(double start, double end, double value) {
  const Piece piece{start, end, value};
  return FromPieces(std::span<const Piece>(&piece, 1));
}

double StepFunction::operator()(double t) const {
  const auto k = PieceIndex(breakpoints_, t);
  return k < 0 ? 0.0 : values_[static_cast<std::size_t>(k)];
}

void StepFunction::Append(double t, double value) {
  if (!std::isfinite(value)) {
    throw std::invalid_argument("StepFunction::Append: non-finite value");
  }
  if (breakpoints_.empty()) {
    if (value == 0.0) return;  // leading zeros carry no information
    breakpoints_.push_back(t);
    values_.push_back(value);
    return;
  }
  const double last = breakpoints_.back();
  if (t < last - kTimeTolerance) {
    throw std::invalid_argument("StepFunction::Append: time " +
                                std::to_string(t) + " precedes breakpoint " +
                                std::to_string(last));
  }
  if (t <= last + kTimeTolerance) {
    values_.back() = value;
    if (values_.size() >= 2 && values_[values_.size() - 2] == value) {
      breakpoints_.pop_back();
      values_.pop_back();
    } else if (values_.size() == 1 && value == 0.0) {
      breakpoints_.clear();
      values_.clear();
    }
    return;
  }
  if (values_.back() == value) return;
  breakpoints_.push_back(t);
  values_.push_back(value);
}

double StepFunction::Integral(double a, double b) const {
  if (b < a) return -Integral(b, a);
  double total = 0.0;
  const std::size_t n = breakpoints_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = std::max(a, breakpoints_[k]);
    const double hi = std::min(b, k + 1 < n ? breakpoints_[k + 1] : kInf);
    if (hi > lo && values_[k] != 0.0) total += values_[k] * (hi - lo);
  }
  return total;
}

double StepFunction::SupportEnd() const {
  if (breakpoints_.empty()) return 0.0;
  if (values_.back() != 0.0) return kInf;
  for (std::size_t k = values_.size(); k-- > 0;) {
    if (values_[k] != 0.0) return breakpoints_[k + 1];
  }
  return 0.0;
}

double StepFunction::MaxValue() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, v);
  return m;
}

double StepFunction::MinValue() const {
  double m = 0.0;
  for (double v : values_) m = std::min(m, v);
  return m;
}

bool StepFunction::IsZero() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return v == 0.0; });
}

PiecewiseLinearFn StepFunction::Cumulative() const {
  PiecewiseLinearFn f;
  const double origin = breakpoints_.empty() ? 0.0 : std::min(0.0, breakpoints_[0]);
  f.Append(origin, 0.0);
  double acc = 0.0;
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    if (k > 0) acc += values_[k - 1] * (breakpoints_[k] - breakpoints_[k - 1]);
    f.Append(breakpoints_[k], acc);
  }
  f.set_tail_slope(values_.empty() ? 0.0 : values_.back());
  return f;
}

std::vector<StepFunction::Piece> StepFunction::Pieces() const {
  std::vector<Piece> out;
  for (std::size_t k = 0; k + 1 < breakpoints_.size(); ++k) {
    if (values_[k] != 0.0) {
      out.push_back({breakpoints_[k], breakpoints_[k + 1], values_[k]});
    }
  }
  if (!values_.empty() && values_.back() != 0.0) {
    out.push_back({breakpoints_.back(), kInf, values_.back()});
  }
  return out;
}

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<double> breakpoints,
                                     std::vector<double> values,
                                     double tail_slope)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      tail_slope_(tail_slope) {
  if (breakpoints_.size() != values_.size()) {
    throw std::invalid_argument("PiecewiseLinearFn: size mismatch");
  }
  for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
    if (!(breakpoints_[k] > breakpoints_[k - 1])) {
      throw std::invalid_argument(
          "PiecewiseLinearFn: breakpoints must be strictly increasing");
    }
  }
}

double PiecewiseLinearFn::operator()(double t) const {
  if (breakpoints_.empty()) return 0.0;
  if (t <= breakpoints_.front()) return values_.front();
  if (t >= breakpoints_.back()) {
    return values_.back() + tail_slope_ * (t - breakpoints_.back());
  }
  const auto k = static_cast<std::size_t>(PieceIndex(breakpoints_, t));
  const double t0 = breakpoints_[k];
  const double t1 = breakpoints_[k + 1];
  const double w = (t - t0) / (t1 - t0);
  return values_[k] + w * (values_[k + 1] - values_[k]);
}

void PiecewiseLinearFn::Append(double t, double y) {
  if (!breakpoints_.empty()) {
    const double last = breakpoints_.back();
    if (t < last - kTimeTolerance) {
      throw std::invalid_argument("PiecewiseLinearFn::Append: time " +
                                  std::to_string(t) + " precedes breakpoint " +
                                  std::to_string(last));
    }
    if (t <= last + kTimeTolerance) {
      values_.back() = y;
      return;
    }
  }
  breakpoints_.push_back(t);
  values_.push_back(y);
}

double PiecewiseLinearFn::RightSlope(double t) const {
  if (breakpoints_.empty()) return 0.0;
  if (t < breakpoints_.front()) return 0.0;
  const auto k = static_cast<std::size_t>(PieceIndex(breakpoints_, t));
  if (k + 1 >= breakpoints_.size()) return tail_slope_;
  return (values_[k + 1] - values_[k]) / (breakpoints_[k + 1] - breakpoints_[k]);
}

bool PiecewiseLinearFn::IsNonDecreasing(double tolerance) const {
  for (std::size_t k = 1; k < values_.size(); ++k) {
    if (values_[k] < values_[k - 1] - tolerance) return false;
  }
  return tail_slope_ >= 0.0;
}

double PiecewiseLinearFn::MaxSlope() const {
  double m = breakpoints_.empty() ? 0.0 : tail_slope_;
  for (std::size_t k = 1; k < values_.size(); ++k) {
    m = std::max(m, (values_[k] - values_[k - 1]) /
                        (breakpoints_[k] - breakpoints_[k - 1]));
  }
  return m;
}

double PiecewiseLinearFn::GeneralizedInverse(double y) const {
  if (breakpoints_.empty()) return kInf;
  if (y <= values_.front()) return breakpoints_.front();
  if (y > values_.back()) {
    if (tail_slope_ <= 0.0) return kInf;
    return breakpoints_.back() + (y - values_.back()) / tail_slope_;
  }
  // First index with value >= y; its predecessor has value < y.
  const auto it = std::lower_bound(values_.begin(), values_.end(), y);
  const auto k = static_cast<std::size_t>(it - values_.begin());
  const double t0 = breakpoints_[k - 1];
  const double t1 = breakpoints_[k];
  const double y0 = values_[k - 1];
  const double y1 = values_[k];
  return t0 + (y - y0) / (y1 - y0) * (t1 - t0);
}

double ComposeWithGeneralizedInverse(const PiecewiseLinearFn& cumulative,
                                     const PiecewiseLinearFn& exit_time,
                                     double y) {
  const double theta = exit_time.GeneralizedInverse(y);
  if (std::isinf(theta)) return cumulative(exit_time.breakpoints().empty()
                                               ? 0.0
                                               : exit_time.breakpoints().back());
  return cumulative(theta);
}

}  // namespace evq
