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

#ifndef EVQ_LOADING_HPP_
#define EVQ_LOADING_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "evq/netmodel.hpp"
#include "evq/piecewise.hpp"
#include "evq/walk_flow.hpp"
#include "evq/walks.hpp"

namespace evq {

// One walk carrying a piecewise-constant inflow into the network.
struct RouteInput {
  CommodityId commodity = 0;
  std::size_t walk = 0;  // index in the commodity's catalog
  std::vector<EdgeId> edges;
  StepFunction inflow;
};

struct EdgeProfile {
  StepFunction inflow_rate;
  StepFunction outflow_rate;
  PiecewiseLinearFn cumulative_inflow;   // F^+_e
  PiecewiseLinearFn cumulative_outflow;  // F^-_e
  PiecewiseLinearFn queue;               // q_e
  PiecewiseLinearFn exit_time;           // T_e
};

struct RouteProfile {
  CommodityId commodity = 0;
  std::size_t walk = 0;
  std::vector<EdgeId> edges;
  // Rates entering / leaving the j-th edge of the walk.
  std::vector<StepFunction> inflow;
  std::vector<StepFunction> outflow;
};

struct LoadingOptions {
  std::size_t max_events = 10'000'000;
};

class LoadingResult {
 public:
  const std::vector<EdgeProfile>& edges() const { return edges_; }
  const EdgeProfile& edge(EdgeId e) const {
    return edges_[static_cast<std::size_t>(e)];
  }
  const std::vector<RouteProfile>& routes() const { return routes_; }
  // Route carrying (c, w), or nullptr when the walk has no flow.
  const RouteProfile* FindRoute(CommodityId c, std::size_t w) const;

  // Time after which nothing changes anymore.
  double horizon() const { return horizon_; }
  const std::vector<double>& event_times() const { return event_times_; }
  std::size_t num_events() const { return num_events_; }

  // T_e(theta) = theta + tau_e + q_e(theta) / nu_e.
  double ExitTime(EdgeId e, double theta) const;
  // Composes exit times along the edge sequence starting at theta.
  double WalkArrival(std::span<const EdgeId> walk, double theta) const;
  double WalkTravelTime(std::span<const EdgeId> walk, double theta) const {
    return WalkArrival(walk, theta) - theta;
  }

 private:
  friend class LoadingEngine;

  std::vector<EdgeProfile> edges_;
  std::vector<RouteProfile> routes_;
  std::vector<double> transit_times_;
  std::vector<double> event_times_;
  double horizon_ = 0.0;
  std::size_t num_events_ = 0;
};

// Exact Vickrey loading for explicit routes. Routes with identically zero
// inflow are dropped. Throws LoadingError on invalid edges, negative rates or
// when the event budget is exceeded.
LoadingResult LoadRoutes(const Network& net, std::vector<RouteInput> routes,
                         const LoadingOptions& options = {});

// Checks that h lies in K: non-negative entries whose per-interval sums match
// the interval-average inflow of each commodity to 1e-9 relative.
void ValidateWalkFlow(const Network& net, const WalkCatalog& catalog,
                      const WalkFlow& h);

LoadingResult NetworkLoading(const Network& net, const WalkCatalog& catalog,
                             const WalkFlow& h, const LoadingOptions& options = {});

// Largest violations of the flow-over-time constraints. All fields are
// absolute errors except capacity_excess, which is relative to nu_e.
struct LoadingAudit {
  double conservation = 0.0;     // sum_e (F+ - F-) vs sum U - Z at events
  double queue_negativity = 0.0;  // max(0, -q) at breakpoints
  double capacity_excess = 0.0;  // max(0, slope(F-) / nu - 1)
  double fifo = 0.0;             // largest decrease of T_e
  double queue_definition = 0.0;  // q(theta) vs F+(theta) - F-(theta + tau)
  double link_transfer = 0.0;    // F^{W,-}(T_e(theta)) vs F^{W,+}(theta)
  double aggregation = 0.0;      // sum of per-walk cumulatives vs aggregate
  std::size_t checked_times = 0;

  bool Passed(double tolerance = 1e-9) const;
  double Worst() const;
};

LoadingAudit AuditLoading(const Network& net, const LoadingResult& loading);

}  // namespace evq

#endif  // EVQ_LOADING_HPP_
