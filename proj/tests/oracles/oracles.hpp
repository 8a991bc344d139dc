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

// Independent reference implementations used only by tests. None of them
// shares code with the library beyond the plain data types.

#ifndef EVQ_TESTS_ORACLES_ORACLES_HPP_
#define EVQ_TESTS_ORACLES_ORACLES_HPP_

#include <cstddef>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "evq/loading.hpp"
#include "evq/netmodel.hpp"
#include "evq/walk_flow.hpp"

namespace evq::oracle {

// Fixed-step fluid queue simulator. Each step injects the walk inflow of the
// step, appends arrivals to the edge's FIFO buffer (mass arriving within one
// step is mixed proportionally), serves up to nu * dt from the front and
// releases served mass tau / dt steps later. Transit times must be integer
// multiples of dt.
struct SteppedLoading {
  double dt = 0.0;
  std::size_t steps = 0;
  // Cumulative values at times k * dt, k = 0..steps.
  std::vector<std::vector<double>> edge_in;   // [edge][k]
  std::vector<std::vector<double>> edge_out;  // [edge][k]
  std::vector<std::vector<double>> route_arrival;  // [route][k]
  std::vector<std::pair<CommodityId, std::size_t>> route_keys;
};

SteppedLoading SimulateTimeStepped(const Network& net,
                                   const std::vector<RouteInput>& routes, double dt,
                                   double max_time);

// sup over grid times of |exact - stepped| for edge cumulatives and route
// arrivals.
double SupGap(const LoadingResult& exact, const SteppedLoading& stepped);

struct RandomLoadingCase {
  Network net;
  std::vector<RouteInput> routes;
  double max_time = 0.0;
};

// Small layered network with transit times in {0.5, 1, 1.5, 2}, capacities in
// {0.5, 1, 2, 3} and 1-4 routes whose piecewise-constant inflows break at
// multiples of 1/3, so that no breakpoint falls on a simulation grid.
RandomLoadingCase RandomLoading(unsigned seed);

// Every walk from source to sink with at most max_length edges, filtered by
// battery range, price budget, visit count <= kappa and strictly increasing
// battery at repeated node visits. Returns edge sequences in lexicographic
// order.
std::vector<std::vector<EdgeId>> BruteForceWalks(const Network& net, CommodityId c,
                                                 int kappa, std::size_t max_length);

// Minimum positive battery-cost sum over all simple cycles (skipping edges
// closed for the commodity); empty if there is none.
std::optional<double> MinPositiveCycleCost(const Network& net, CommodityId c);

// Solves sum_W [x_W + v]_+ = u for v by bisection.
double BisectShift(const std::vector<double>& x, double u);

// Nodes s, m, t with two parallel s->t edges and, on a coin flip, a detour
// s->m->t; one commodity with a box inflow. At most three walks.
Network RandomEquilibriumInstance(std::mt19937& rng);

// True if every positive entry of h sits at its row's minimum cost within tol.
bool PositiveEntriesAtRowMinimum(const WalkFlow& h, const CostMatrix& costs, double tol);

// Nodes reachable from `source` over all edges.
std::vector<bool> Reachable(const Network& net, NodeId source);

}  // namespace evq::oracle

#endif  // EVQ_TESTS_ORACLES_ORACLES_HPP_
