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

#ifndef EVQ_WALKS_HPP_
#define EVQ_WALKS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evq/netmodel.hpp"

namespace evq {

// A source-sink walk of one commodity with cached quantities.
struct Walk {
  CommodityId commodity = 0;
  std::vector<EdgeId> edges;
  // Battery level after each edge (capped at the battery capacity).
  std::vector<double> battery_profile;
  double total_price = 0.0;
  double free_flow_time = 0.0;
  // Sum of battery costs over driving edges; recharge edges are excluded so
  // that the value measures energy drawn from the battery along the trip.
  double energy_consumption = 0.0;

  double min_battery() const;
};

struct EnumerationStats {
  std::size_t explored_states = 0;
  std::size_t pruned_battery = 0;
  std::size_t pruned_budget = 0;
  std::size_t pruned_dominance = 0;
  std::size_t pruned_visits = 0;
  std::size_t pruned_length = 0;
  bool truncated = false;
  int kappa = 0;
  bool kappa_fallback = false;
};

struct CommodityCatalog {
  CommodityId commodity = 0;
  std::vector<Walk> walks;  // lexicographic by edge index sequence
  EnumerationStats stats;
};

struct WalkCatalog {
  std::vector<CommodityCatalog> commodities;

  std::size_t num_commodities() const { return commodities.size(); }
  const std::vector<Walk>& walks(CommodityId c) const {
    return commodities[static_cast<std::size_t>(c)].walks;
  }
  std::size_t TotalWalks() const;
  std::vector<std::size_t> WalkCounts() const;
};

struct EnumerationLimits {
  std::optional<int> kappa_override;
  // Visit cap used when no cycle with positive battery cost exists.
  int kappa_hard_cap = 3;
  // 0 selects kappa * |V|.
  std::size_t max_length = 0;
  std::size_t max_walks = 1'000'000;
  // Budget for the simple-cycle search behind kappa.
  std::size_t max_cycles = 200'000;
};

// Battery levels after each edge of `edges`, starting from the commodity's
// initial battery: level_j = min(level_{j-1} - b_{i,e_j}, b_max). Throws
// std::invalid_argument if the sequence is empty, not incident or does not
// start at the commodity source.
std::vector<double> BatteryProfile(std::span<const EdgeId> edges, CommodityId c,
                                   const Network& net);

double WalkPrice(std::span<const EdgeId> edges, CommodityId c,
                 const Network& net);

// Builds a Walk with all cached fields. Does not judge feasibility.
Walk MakeWalk(const Network& net, CommodityId c, std::vector<EdgeId> edges);

struct FeasibilityVerdict {
  enum class Reason { kFeasible, kBatteryBelowZero, kBatteryAboveCapacity, kPriceBudget };
  bool feasible = true;
  Reason reason = Reason::kFeasible;
  // Index into the edge sequence of the first violation (battery reasons).
  std::size_t position = 0;
};

FeasibilityVerdict CheckEnergyFeasible(const Walk& walk,
                                       const Commodity& commodity);

struct KappaBound {
  int kappa = 0;
  // Minimum positive simple-cycle battery cost; empty when none was found.
  std::optional<double> alpha;
  bool fallback = false;
  std::string warning;
};

// Per-node visit bound ceil(b_max / alpha) where alpha is the smallest
// positive battery cost of a simple cycle. Falls back to the hard cap when no
// positive cycle exists or the cycle search exceeds its budget.
KappaBound VisitBoundKappa(CommodityId c, const Network& net,
                           const EnumerationLimits& limits = {});

// Depth-first enumeration of all energy-feasible walks of a commodity that
// stay within the price budget, visit every node at most kappa times and
// revisit nodes only with strictly higher battery. Throws NoFeasibleWalkError
// if nothing is found.
CommodityCatalog EnumerateFeasibleWalks(const Network& net, CommodityId c,
                                        const EnumerationLimits& limits = {});

WalkCatalog EnumerateAllFeasibleWalks(const Network& net,
                                      const EnumerationLimits& limits = {},
                                      int threads = 1);

// "e1,e3,e4" using edge ids.
std::string FormatEdgeSequence(const Network& net, std::span<const EdgeId> edges);

}  // namespace evq

#endif  // EVQ_WALKS_HPP_
