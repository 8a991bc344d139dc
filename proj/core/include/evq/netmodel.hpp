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

#ifndef EVQ_NETMODEL_HPP_
#define EVQ_NETMODEL_HPP_

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "evq/aggregation.hpp"
#include "evq/piecewise.hpp"

namespace evq {

using NodeId = int;
using EdgeId = int;
using CommodityId = int;

inline constexpr double kUncapacitated = std::numeric_limits<double>::infinity();

enum class EdgeKind { kPhysical, kRechargeEntry, kRechargeReturn };

const char* EdgeKindName(EdgeKind kind);

struct Edge {
  std::string id;
  NodeId tail = 0;
  NodeId head = 0;
  double transit_time = 1.0;  // tau_e > 0
  double capacity = 1.0;      // nu_e > 0; kUncapacitated until resolved
  EdgeKind kind = EdgeKind::kPhysical;
};

// Per (commodity, edge) energy and money. A battery cost of +inf closes the
// edge for the commodity.
struct CommodityEdgeAttrs {
  double battery_cost = 0.0;
  double price = 0.0;
};

struct Commodity {
  std::string id;
  NodeId source = 0;
  NodeId sink = 0;
  StepFunction inflow;  // rate u_i, bounded support in [0, T]
  double initial_battery = 1.0;
  double battery_capacity = 1.0;
  double price_budget = std::numeric_limits<double>::infinity();
  AggregationSpec aggregation;
};

struct RechargeOption {
  std::string mode_id;
  double duration = 1.0;
  double price = 0.0;
  double recharge = 0.0;  // battery gain; ignored when full_recharge is set
  bool full_recharge = false;
  double capacity = kUncapacitated;
  // Commodity ids allowed to use this mode; empty means all.
  std::vector<std::string> compatible_commodities;
};

struct ChargingStationSpec {
  NodeId node = 0;
  std::vector<RechargeOption> options;
};

// Which station option produced a recharge cycle.
struct GadgetRecord {
  std::size_t station_index = 0;
  std::size_t option_index = 0;
  NodeId station = 0;
  NodeId aux_node = 0;
  EdgeId entry_edge = 0;
  EdgeId return_edge = 0;
  std::string mode_id;
};

struct Network {
  std::vector<std::string> node_names;
  std::vector<Edge> edges;
  std::vector<Commodity> commodities;
  // attrs[commodity][edge]
  std::vector<std::vector<CommodityEdgeAttrs>> attrs;
  std::vector<GadgetRecord> gadgets;

  std::size_t num_nodes() const { return node_names.size(); }
  std::size_t num_edges() const { return edges.size(); }
  std::size_t num_commodities() const { return commodities.size(); }

  NodeId AddNode(std::string name);
  // Extends every commodity's attribute row with defaults.
  EdgeId AddEdge(Edge edge);
  // Adds a commodity with default attributes on every edge.
  CommodityId AddCommodity(Commodity commodity);

  std::optional<NodeId> FindNode(std::string_view name) const;
  std::optional<EdgeId> FindEdge(std::string_view id) const;
  std::optional<CommodityId> FindCommodity(std::string_view id) const;

  const CommodityEdgeAttrs& attr(CommodityId c, EdgeId e) const {
    return attrs[static_cast<std::size_t>(c)][static_cast<std::size_t>(e)];
  }
  CommodityEdgeAttrs& attr(CommodityId c, EdgeId e) {
    return attrs[static_cast<std::size_t>(c)][static_cast<std::size_t>(e)];
  }
  const Edge& edge(EdgeId e) const { return edges[static_cast<std::size_t>(e)]; }

  std::vector<std::vector<EdgeId>> OutEdges() const;
  std::vector<std::vector<EdgeId>> InEdges() const;

  // Time after which no commodity injects flow.
  double InflowHorizon() const;
};

struct GadgetOptions {
  double return_epsilon = 1e-6;
};

// Expands every (station, option) pair into a two-edge cycle
// station -> aux -> station. The entry edge carries the option's duration,
// price and capacity and a battery cost of -recharge (-b_max under full
// recharge, so the capped battery recursion refills completely). The return
// edge has duration return_epsilon, zero cost and no binding capacity.
// Uncapacitated edges are resolved afterwards (see ResolveUncapacitatedEdges).
Network BuildBatteryExtendedNetwork(const Network& base,
                                    std::span<const ChargingStationSpec> stations,
                                    const GadgetOptions& options = {});

// Replaces kUncapacitated with a finite capacity that can never bind:
// sum_i sup u_i plus the capacities of all edges entering the tail.
void ResolveUncapacitatedEdges(Network& net);

struct Diagnostic {
  enum class Kind {
    kNonPositiveTransitTime,
    kNonPositiveCapacity,
    kSelfLoop,
    kUnknownNode,
    kUnreachableSink,
    kEmptyInflow,
    kNegativeInflow,
    kBatteryBounds,
    kNegativePrice,
    kPriceOnPhysicalEdge,
  };
  Kind kind;
  std::string message;
};

const char* DiagnosticKindName(Diagnostic::Kind kind);

std::vector<Diagnostic> ValidateNetwork(const Network& net);

}  // namespace evq

#endif  // EVQ_NETMODEL_HPP_
