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

#include "evq/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace evq {
namespace {

TimeSeries EmptySeries(const TimeGrid& grid) {
  TimeSeries s;
  s.times = grid.Midpoints();
  s.values.assign(s.times.size(), std::nullopt);
  return s;
}

// Area under the piecewise-linear interpolant of (t_j, y_j), held constant
// outside [t_0, t_{n-1}] and restricted to [0, horizon].
double SampledArea(std::span<const double> t, std::span<const double> y,
                   double horizon) {
  if (t.empty()) return 0.0;
  double area = y.front() * t.front() + y.back() * (horizon - t.back());
  for (std::size_t j = 0; j + 1 < t.size(); ++j) {
    area += 0.5 * (y[j] + y[j + 1]) * (t[j + 1] - t[j]);
  }
  return area;
}

}  // namespace

std::vector<double> InflowVolumes(const Network& net) {
  std::vector<double> out;
  out.reserve(net.num_commodities());
  for (const auto& c : net.commodities) {
    const double end = c.inflow.SupportEnd();
    out.push_back(end > 0.0 ? c.inflow.Integral(0.0, end) : 0.0);
  }
  return out;
}

std::vector<double> QopiIntegrand(const WalkFlow& h, const CostMatrix& costs,
                                  std::size_t commodity) {
  if (!h.SameShape(costs)) throw std::invalid_argument("Qopi: shape mismatch");
  std::vector<double> y(static_cast<std::size_t>(h.intervals()), 0.0);
  if (h.num_walks(commodity) == 0) return y;
  for (int j = 0; j < h.intervals(); ++j) {
    const auto c = costs.row(commodity, j);
    const double cmin = *std::min_element(c.begin(), c.end());
    if (!(cmin > 0.0)) {
      throw std::domain_error("Qopi: non-positive minimum walk cost");
    }
    const auto x = h.row(commodity, j);
    double acc = 0.0;
    for (std::size_t w = 0; w < x.size(); ++w) acc += x[w] * (c[w] - cmin) / cmin;
    y[static_cast<std::size_t>(j)] = acc;
  }
  return y;
}

double Qopi(const WalkFlow& h, const CostMatrix& costs,
            std::span<const double> inflow_volumes, QopiMode mode) {
  const std::vector<double> t = h.grid().Midpoints();
  double total = 0.0;
  for (std::size_t c = 0; c < h.num_commodities(); ++c) {
    const std::vector<double> y = QopiIntegrand(h, costs, c);
    double area = SampledArea(t, y, h.grid().horizon);
    if (mode == QopiMode::kRelative) {
      const double volume = inflow_volumes[c];
      area = volume > 0.0 ? area / volume : 0.0;
    }
    total += area;
  }
  return total;
}

DeltaH ComputeDeltaH(const WalkFlow& h_old, const WalkFlow& h_new,
                     const NormOptions& norm) {
  DeltaH d;
  d.absolute = CombinedNorm(h_new, h_old, -1.0, norm);
  const double base = Norm(h_old, norm);
  d.relative = base > 0.0 ? d.absolute / base
                          : (d.absolute > 0.0 ? std::numeric_limits<double>::infinity()
                                              : 0.0);
  return d;
}

TimeSeries EnergyProfile(const WalkFlow& h, const WalkCatalog& catalog) {
  TimeSeries s = EmptySeries(h.grid());
  for (int j = 0; j < h.intervals(); ++j) {
    bool any = false;
    double eta = 0.0;
    for (std::size_t c = 0; c < h.num_commodities(); ++c) {
      const double u = h.RowSum(c, j);
      if (!(u > 0.0)) continue;
      const auto& walks = catalog.walks(static_cast<CommodityId>(c));
      const auto x = h.row(c, j);
      double acc = 0.0;
      for (std::size_t w = 0; w < x.size(); ++w) acc += x[w] * walks[w].energy_consumption;
      eta += acc / u;
      any = true;
    }
    if (any) s.values[static_cast<std::size_t>(j)] = eta;
  }
  return s;
}

EnergyStatsSeries EnergyStats(const WalkFlow& h, const WalkCatalog& catalog,
                              std::size_t commodity) {
  EnergyStatsSeries out{EmptySeries(h.grid()), EmptySeries(h.grid()),
                        EmptySeries(h.grid())};
  const auto& walks = catalog.walks(static_cast<CommodityId>(commodity));
  for (int j = 0; j < h.intervals(); ++j) {
    const auto x = h.row(commodity, j);
    const double u = h.RowSum(commodity, j);
    if (!(u > 0.0)) continue;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    double acc = 0.0;
    for (std::size_t w = 0; w < x.size(); ++w) {
      if (!(x[w] > 0.0)) continue;
      const double b = walks[w].energy_consumption;
      lo = std::min(lo, b);
      hi = std::max(hi, b);
      acc += x[w] * b;
    }
    const auto k = static_cast<std::size_t>(j);
    out.min.values[k] = lo;
    out.max.values[k] = hi;
    out.mean.values[k] = acc / u;
  }
  return out;
}

TravelTimeSeries TravelTimeStats(const LoadingResult& loading, const WalkFlow& h,
                                 const WalkCatalog& catalog) {
  const TimeGrid& grid = h.grid();
  TravelTimeSeries out{EmptySeries(grid), EmptySeries(grid), EmptySeries(grid),
                       EmptySeries(grid), EmptySeries(grid)};
  constexpr double kInf = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.intervals; ++j) {
    const double theta = grid.midpoint(j);
    double lo = kInf;
    double hi = -kInf;
    double sum = 0.0;
    std::size_t used = 0;
    double sum_min = 0.0;
    double sum_max = 0.0;
    std::size_t commodities = 0;
    for (std::size_t c = 0; c < h.num_commodities(); ++c) {
      const auto& walks = catalog.walks(static_cast<CommodityId>(c));
      const auto x = h.row(c, j);
      double c_lo = kInf;
      double c_hi = -kInf;
      for (std::size_t w = 0; w < x.size(); ++w) {
        if (!(x[w] > 0.0)) continue;
        const double mu = loading.WalkTravelTime(walks[w].edges, theta);
        c_lo = std::min(c_lo, mu);
        c_hi = std::max(c_hi, mu);
        sum += mu;
        ++used;
      }
      if (c_lo == kInf) continue;
      lo = std::min(lo, c_lo);
      hi = std::max(hi, c_hi);
      sum_min += c_lo;
      sum_max += c_hi;
      ++commodities;
    }
    if (used == 0) continue;
    const auto k = static_cast<std::size_t>(j);
    out.min.values[k] = lo;
    out.max.values[k] = hi;
    out.mean.values[k] = sum / static_cast<double>(used);
    out.mean_of_min.values[k] = sum_min / static_cast<double>(commodities);
    out.mean_of_max.values[k] = sum_max / static_cast<double>(commodities);
  }
  return out;
}

}  // namespace evq
