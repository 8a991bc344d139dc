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

#ifndef EVQ_METRICS_HPP_
#define EVQ_METRICS_HPP_

#include <optional>
#include <span>
#include <vector>

#include "evq/loading.hpp"
#include "evq/netmodel.hpp"
#include "evq/walk_flow.hpp"
#include "evq/walks.hpp"

namespace evq {

// Values sampled at interval midpoints; a missing value marks a sample where
// the measure is undefined (for example, no inflow).
struct TimeSeries {
  std::vector<double> times;
  std::vector<std::optional<double>> values;

  std::size_t size() const { return times.size(); }
};

enum class QopiMode { kRelative, kAbsolute };

// Total inflow volume of every commodity.
std::vector<double> InflowVolumes(const Network& net);

// Flow-weighted relative cost excess over the cheapest walk, integrated over
// time. The integrand is sampled at interval midpoints and integrated as the
// area under the piecewise-linear interpolant, held constant before the first
// and after the last sample. In relative mode each commodity's share is
// divided by its inflow volume. Throws std::domain_error if a row minimum
// cost is not positive.
double Qopi(const WalkFlow& h, const CostMatrix& costs,
            std::span<const double> inflow_volumes, QopiMode mode);

// Per-sample integrand of Qopi for one commodity.
std::vector<double> QopiIntegrand(const WalkFlow& h, const CostMatrix& costs,
                                  std::size_t commodity);

struct DeltaH {
  double absolute = 0.0;
  // +inf when the old flow has zero norm.
  double relative = 0.0;
};

DeltaH ComputeDeltaH(const WalkFlow& h_old, const WalkFlow& h_new,
                     const NormOptions& norm = {});

// eta(theta) = sum_i sum_W h_W(theta) b_W / u_i(theta), skipping commodities
// with no inflow at the sample. b_W counts driving edges only.
TimeSeries EnergyProfile(const WalkFlow& h, const WalkCatalog& catalog);

struct EnergyStatsSeries {
  TimeSeries min;
  TimeSeries max;
  TimeSeries mean;
};

EnergyStatsSeries EnergyStats(const WalkFlow& h, const WalkCatalog& catalog,
                              std::size_t commodity);

// Walk travel times of used walks (h > 0) at every midpoint.
struct TravelTimeSeries {
  TimeSeries min;          // over all used walks
  TimeSeries max;          // over all used walks
  TimeSeries mean;         // unweighted over all used (commodity, walk) pairs
  TimeSeries mean_of_min;  // average of per-commodity minima
  TimeSeries mean_of_max;  // average of per-commodity maxima
};

TravelTimeSeries TravelTimeStats(const LoadingResult& loading, const WalkFlow& h,
                                 const WalkCatalog& catalog);

}  // namespace evq

#endif  // EVQ_METRICS_HPP_
