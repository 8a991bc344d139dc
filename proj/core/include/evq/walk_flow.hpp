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

#ifndef EVQ_WALK_FLOW_HPP_
#define EVQ_WALK_FLOW_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "evq/piecewise.hpp"

namespace evq {

// N equal intervals a_0 = 0 < a_1 < ... < a_N = horizon.
struct TimeGrid {
  double horizon = 1.0;
  int intervals = 1;

  double length() const { return horizon / intervals; }
  double start(int j) const { return horizon * j / intervals; }
  double end(int j) const { return horizon * (j + 1) / intervals; }
  double midpoint(int j) const { return 0.5 * (start(j) + end(j)); }
  std::vector<double> Midpoints() const;
};

// A value per (commodity, walk, interval). Used for walk-flow rates h and
// for midpoint costs. Storage is row-major per commodity: one row per
// interval holding one entry per walk.
class WalkIntervalTable {
 public:
  WalkIntervalTable() = default;
  WalkIntervalTable(TimeGrid grid, std::vector<std::size_t> walks_per_commodity,
                    double fill = 0.0);

  const TimeGrid& grid() const { return grid_; }
  std::size_t num_commodities() const { return walks_.size(); }
  std::size_t num_walks(std::size_t c) const { return walks_[c]; }
  const std::vector<std::size_t>& walk_counts() const { return walks_; }
  int intervals() const { return grid_.intervals; }

  double& at(std::size_t c, std::size_t w, int j) {
    return data_[c][static_cast<std::size_t>(j) * walks_[c] + w];
  }
  double at(std::size_t c, std::size_t w, int j) const {
    return data_[c][static_cast<std::size_t>(j) * walks_[c] + w];
  }

  std::span<double> row(std::size_t c, int j) {
    return {data_[c].data() + static_cast<std::size_t>(j) * walks_[c], walks_[c]};
  }
  std::span<const double> row(std::size_t c, int j) const {
    return {data_[c].data() + static_cast<std::size_t>(j) * walks_[c], walks_[c]};
  }

  std::span<const double> values(std::size_t c) const { return data_[c]; }

  double RowSum(std::size_t c, int j) const;

  // Piecewise-constant rate of one walk over the grid, zero after the horizon.
  StepFunction WalkInflow(std::size_t c, std::size_t w) const;

  bool SameShape(const WalkIntervalTable& other) const;

 private:
  TimeGrid grid_;
  std::vector<std::size_t> walks_;
  std::vector<std::vector<double>> data_;
};

using WalkFlow = WalkIntervalTable;
using CostMatrix = WalkIntervalTable;

struct NormOptions {
  enum class Kind { kL1, kL2 };
  // L1 with interval weights approximates the integral of |h| over time.
  Kind kind = Kind::kL1;
  // Weight each interval by its length; unit weights otherwise.
  bool interval_weights = true;
};

double Norm(const WalkIntervalTable& h, const NormOptions& options = {});

// ||a + sign * b|| without materializing the combination.
double CombinedNorm(const WalkIntervalTable& a, const WalkIntervalTable& b,
                    double sign, const NormOptions& options = {});

}  // namespace evq

#endif  // EVQ_WALK_FLOW_HPP_
