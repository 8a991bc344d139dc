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

#include "evq/walk_flow.hpp"

#include <cmath>
#include <stdexcept>

namespace evq {

std::vector<double> TimeGrid::Midpoints() const {
  std::vector<double> out(static_cast<std::size_t>(intervals));
  for (int j = 0; j < intervals; ++j) out[static_cast<std::size_t>(j)] = midpoint(j);
  return out;
}

WalkIntervalTable::WalkIntervalTable(TimeGrid grid,
                                     std::vector<std::size_t> walks_per_commodity,
                                     double fill)
    : grid_(grid), walks_(std::move(walks_per_commodity)) {
  if (grid_.intervals < 1 || !(grid_.horizon > 0.0)) {
    throw std::invalid_argument("time grid needs N >= 1 and a positive horizon");
  }
  data_.reserve(walks_.size());
  for (std::size_t n : walks_) {
    data_.emplace_back(n * static_cast<std::size_t>(grid_.intervals), fill);
  }
}

double WalkIntervalTable::RowSum(std::size_t c, int j) const {
  double s = 0.0;
  for (double x : row(c, j)) s += x;
  return s;
}

StepFunction WalkIntervalTable::WalkInflow(std::size_t c, std::size_t w) const {
  StepFunction f;
  for (int j = 0; j < grid_.intervals; ++j) f.Append(grid_.start(j), at(c, w, j));
  f.Append(grid_.horizon, 0.0);
  return f;
}

bool WalkIntervalTable::SameShape(const WalkIntervalTable& other) const {
  return walks_ == other.walks_ && grid_.intervals == other.grid_.intervals &&
         grid_.horizon == other.grid_.horizon;
}

double Norm(const WalkIntervalTable& h, const NormOptions& options) {
  return CombinedNorm(h, h, 0.0, options);
}

double CombinedNorm(const WalkIntervalTable& a, const WalkIntervalTable& b,
                    double sign, const NormOptions& options) {
  if (!a.SameShape(b)) throw std::invalid_argument("CombinedNorm: shape mismatch");
  const double weight = options.interval_weights ? a.grid().length() : 1.0;
  double acc = 0.0;
  for (std::size_t c = 0; c < a.num_commodities(); ++c) {
    const auto va = a.values(c);
    const auto vb = b.values(c);
    for (std::size_t k = 0; k < va.size(); ++k) {
      const double x = va[k] + sign * vb[k];
      acc += options.kind == NormOptions::Kind::kL2 ? x * x : std::abs(x);
    }
  }
  acc *= weight;
  return options.kind == NormOptions::Kind::kL2 ? std::sqrt(acc) : acc;
}

}  // namespace evq
