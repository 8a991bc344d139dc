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

#include "evq/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "evq/errors.hpp"

namespace evq {

const char* EdgeKindName(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::kPhysical:
      return "physical";
    case EdgeKind::kRechargeEntry:
      return "recharge-entry";
    case EdgeKind::kRechargeReturn:
      return "recharge-return";
  }
  return "unknown";
}

NodeId Network::AddNode(std::string name) {
  node_names.push_back(std::move(name));
  return static_cast<NodeId>(node_names.size() - 1);
}

EdgeId Network::AddEdge(Edge edge) {
  edges.push_back(std::move(edge));
  for (auto& row : attrs) row.emplace_back();
  return static_cast<EdgeId>(edges.size() - 1);
}

CommodityId Network::AddCommodity(Commodity commodity) {
  commodities.push_back(std::move(commodity));
  attrs.emplace_back(edges.size());
  return static_cast<CommodityId>(commodities.size() - 1);
}

std::optional<NodeId> Network::FindNode(std::string_view name) const {
  for (std::size_t v = 0; v < node_names.size(); ++v) {
    if (node_names[v] == name) return static_cast<NodeId>(v);
  }
  return std::nullopt;
}

std::optional<EdgeId> Network::FindEdge(std::string_view id) const {
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].id == id) return static_cast<EdgeId>(e);
  }
  return std::nullopt;
}

std::optional<CommodityId> Network::FindCommodity(std::string_view id) const {
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    if (commodities[c].id == id) return static_cast<CommodityId>(c);
  }
  return std::nullopt;
}

std::vector<std::vector<EdgeId>> Network::OutEdges() const {
  std::vector<std::vector<EdgeId>> out(num_nodes());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    out[static_cast<std::size_t>(edges[e].tail)].push_back(static_cast<EdgeId>(e));
  }
  return out;
}

std::vector<std::vector<EdgeId>> Network::InEdges() const {
  std::vector<std::vector<EdgeId>> in(num_nodes());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    in[static_cast<std::size_t>(edges[e].head)].push_back(static_cast<EdgeId>(e));
  }
  return in;
}

double Network::InflowHorizon() const {
  double horizon = 0.0;
  for (const Commodity& c : commodities) {
    horizon = std::max(horizon, c.inflow.SupportEnd());
  }
  return horizon;
}

Network BuildBatteryExtendedNetwork(const Network& base,
                                    std::span<const ChargingStationSpec> stations,
                                    const GadgetOptions& options) {
  if (!(options.return_epsilon > 0.0)) {
    throw NetworkError("return edge duration must be positive");
  }
  Network net = base;
  for (std::size_t s = 0; s < stations.size(); ++s) {
    const ChargingStationSpec& station = stations[s];
    if (station.node < 0 ||
        static_cast<std::size_t>(station.node) >= base.num_nodes()) {
      throw NetworkError("charging station at unknown node " +
                         std::to_string(station.node));
    }
    const std::string& station_name =
        base.node_names[static_cast<std::size_t>(station.node)];
    for (std::size_t o = 0; o < station.options.size(); ++o) {
      const RechargeOption& opt = station.options[o];
      const std::string label = station_name + "." + opt.mode_id;
      if (!(opt.duration > 0.0)) {
        throw NetworkError("recharge option " + label +
                           " has non-positive duration");
      }
      if (!(opt.price >= 0.0)) {
        throw NetworkError("recharge option " + label + " has negative price");
      }
      if (!(opt.capacity > 0.0)) {
        throw NetworkError("recharge option " + label +
                           " has non-positive capacity");
      }
      std::set<CommodityId> allowed;
      for (const std::string& cid : opt.compatible_commodities) {
        auto c = base.FindCommodity(cid);
        if (!c) {
          throw NetworkError("recharge option " + label +
                             " names unknown commodity '" + cid + "'");
        }
        allowed.insert(*c);
      }

      GadgetRecord record;
      record.station_index = s;
      record.option_index = o;
      record.station = station.node;
      record.mode_id = opt.mode_id;
      record.aux_node = net.AddNode(label);
      record.entry_edge = net.AddEdge(Edge{label + ".charge", station.node,
                                           record.aux_node, opt.duration,
                                           opt.capacity,
                                           EdgeKind::kRechargeEntry});
      record.return_edge = net.AddEdge(Edge{label + ".return", record.aux_node,
                                            station.node, options.return_epsilon,
                                            kUncapacitated,
                                            EdgeKind::kRechargeReturn});
      for (std::size_t c = 0; c < net.num_commodities(); ++c) {
        const auto cid = static_cast<CommodityId>(c);
        CommodityEdgeAttrs& entry = net.attr(cid, record.entry_edge);
        entry.price = opt.price;
        if (!allowed.empty() && !allowed.contains(cid)) {
          entry.battery_cost = std::numeric_limits<double>::infinity();
        } else if (opt.full_recharge) {
          entry.battery_cost = -net.commodities[c].battery_capacity;
        } else {
          entry.battery_cost = -opt.recharge;
        }
      }
      net.gadgets.push_back(std::move(record));
    }
  }
  ResolveUncapacitatedEdges(net);
  return net;
}

void ResolveUncapacitatedEdges(Network& net) {
  double demand_bound = 0.0;
  for (const Commodity& c : net.commodities) demand_bound += c.inflow.MaxValue();

  const auto in_edges = net.InEdges();
  std::vector<bool> pending(net.num_edges(), false);
  std::size_t remaining = 0;
  for (std::size_t e = 0; e < net.num_edges(); ++e) {
    if (std::isinf(net.edges[e].capacity)) {
      pending[e] = true;
      ++remaining;
    }
  }

  bool progress = true;
  while (remaining > 0 && progress) {
    progress = false;
    for (std::size_t e = 0; e < net.num_edges(); ++e) {
      if (!pending[e]) continue;
      const auto& incoming = in_edges[static_cast<std::size_t>(net.edges[e].tail)];
      double bound = demand_bound;
      bool ready = true;
      for (EdgeId in : incoming) {
        if (pending[static_cast<std::size_t>(in)]) {
          ready = false;
          break;
        }
        bound += net.edge(in).capacity;
      }
      if (!ready) continue;
      net.edges[e].capacity = std::max(bound, 1.0);
      pending[e] = false;
      --remaining;
      progress = true;
    }
  }
  if (remaining == 0) return;

  // Edges on cycles of uncapacitated edges: bound by all finite capacity in
  // the network plus the demand.
  double total = demand_bound;
  for (std::size_t e = 0; e < net.num_edges(); ++e) {
    if (!pending[e]) total += net.edges[e].capacity;
  }
  for (std::size_t e = 0; e < net.num_edges(); ++e) {
    if (pending[e]) net.edges[e].capacity = std::max(total, 1.0);
  }
}

const char* DiagnosticKindName(Diagnostic::Kind kind) {
  using K = Diagnostic::Kind;
  switch (kind) {
    case K::kNonPositiveTransitTime:
      return "non-positive-transit-time";
    case K::kNonPositiveCapacity:
      return "non-positive-capacity";
    case K::kSelfLoop:
      return "self-loop";
    case K::kUnknownNode:
      return "unknown-node";
    case K::kUnreachableSink:
      return "unreachable-sink";
    case K::kEmptyInflow:
      return "empty-inflow";
    case K::kNegativeInflow:
      return "negative-inflow";
    case K::kBatteryBounds:
      return "battery-bounds";
    case K::kNegativePrice:
      return "negative-price";
    case K::kPriceOnPhysicalEdge:
      return "price-on-physical-edge";
  }
  return "unknown";
}

std::vector<Diagnostic> ValidateNetwork(const Network& net) {
  using K = Diagnostic::Kind;
  std::vector<Diagnostic> out;
  const auto n = static_cast<NodeId>(net.num_nodes());
  auto valid_node = [n](NodeId v) { return v >= 0 && v < n; };

  for (const Edge& e : net.edges) {
    if (!valid_node(e.tail) || !valid_node(e.head)) {
      out.push_back({K::kUnknownNode, "edge " + e.id + " references an unknown node"});
      continue;
    }
    if (!(e.transit_time > 0.0)) {
      out.push_back({K::kNonPositiveTransitTime,
                     "edge " + e.id + " has non-positive transit time"});
    }
    if (!(e.capacity > 0.0)) {
      out.push_back({K::kNonPositiveCapacity,
                     "edge " + e.id + " has non-positive capacity"});
    }
    if (e.tail == e.head) {
      out.push_back({K::kSelfLoop, "edge " + e.id + " is a self-loop"});
    }
  }

  const auto out_edges = net.OutEdges();
  for (std::size_t ci = 0; ci < net.num_commodities(); ++ci) {
    const Commodity& c = net.commodities[ci];
    const auto cid = static_cast<CommodityId>(ci);
    if (!valid_node(c.source) || !valid_node(c.sink)) {
      out.push_back({K::kUnknownNode,
                     "commodity " + c.id + " references an unknown node"});
      continue;
    }
    if (c.inflow.IsZero()) {
      out.push_back({K::kEmptyInflow, "commodity " + c.id + " has no inflow"});
    }
    if (c.inflow.MinValue() < 0.0) {
      out.push_back({K::kNegativeInflow,
                     "commodity " + c.id + " has a negative inflow rate"});
    }
    if (!(c.initial_battery > 0.0) ||
        !(c.initial_battery <= c.battery_capacity)) {
      out.push_back({K::kBatteryBounds,
                     "commodity " + c.id +
                         " needs 0 < initial battery <= battery capacity"});
    }
    for (std::size_t e = 0; e < net.num_edges(); ++e) {
      const CommodityEdgeAttrs& a = net.attrs[ci][e];
      if (a.price < 0.0) {
        out.push_back({K::kNegativePrice, "commodity " + c.id + " edge " +
                                              net.edges[e].id +
                                              " has a negative price"});
      } else if (a.price > 0.0 && net.edges[e].kind == EdgeKind::kPhysical) {
        out.push_back({K::kPriceOnPhysicalEdge,
                       "commodity " + c.id + " edge " + net.edges[e].id +
                           " charges a price on a driving edge"});
      }
    }

    std::vector<bool> seen(net.num_nodes(), false);
    std::deque<NodeId> frontier{c.source};
    seen[static_cast<std::size_t>(c.source)] = true;
    while (!frontier.empty()) {
      const NodeId v = frontier.front();
      frontier.pop_front();
      for (EdgeId e : out_edges[static_cast<std::size_t>(v)]) {
        if (std::isinf(net.attr(cid, e).battery_cost)) continue;
        const NodeId w = net.edge(e).head;
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = true;
          frontier.push_back(w);
        }
      }
    }
    if (!seen[static_cast<std::size_t>(c.sink)]) {
      out.push_back({K::kUnreachableSink,
                     "commodity " + c.id + ": sink " +
                         net.node_names[static_cast<std::size_t>(c.sink)] +
                         " is unreachable from source " +
                         net.node_names[static_cast<std::size_t>(c.source)]});
    }
  }
  return out;
}

}  // namespace evq
