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

#include "evq/walks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "evq/errors.hpp"
#include "evq/parallel.hpp"

namespace evq {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLevelTolerance = 1e-12;

bool ExceedsBudget(double price, double budget) {
  return price > budget + kLevelTolerance * std::max(1.0, std::abs(budget));
}

// Smallest positive battery cost over simple cycles whose minimum node is the
// DFS root. Returns false when the cycle budget is exhausted.
class CycleSearch {
 public:
  CycleSearch(const Network& net, CommodityId c, std::size_t budget)
      : net_(net), c_(c), out_(net.OutEdges()), budget_(budget),
        on_path_(net.num_nodes(), false) {}

  bool Run() {
    for (std::size_t s = 0; s < net_.num_nodes(); ++s) {
      root_ = static_cast<NodeId>(s);
      on_path_[s] = true;
      if (!Extend(root_, 0.0)) return false;
      on_path_[s] = false;
    }
    return true;
  }

  std::optional<double> alpha() const { return alpha_; }

 private:
  bool Extend(NodeId v, double sum) {
    for (EdgeId e : out_[static_cast<std::size_t>(v)]) {
      const double cost = net_.attr(c_, e).battery_cost;
      if (std::isinf(cost)) continue;
      const NodeId w = net_.edge(e).head;
      if (w == root_) {
        if (++cycles_ > budget_) return false;
        const double total = sum + cost;
        if (total > 0.0 && (!alpha_ || total < *alpha_)) alpha_ = total;
        continue;
      }
      if (w < root_ || on_path_[static_cast<std::size_t>(w)]) continue;
      on_path_[static_cast<std::size_t>(w)] = true;
      const bool ok = Extend(w, sum + cost);
      on_path_[static_cast<std::size_t>(w)] = false;
      if (!ok) return false;
    }
    return true;
  }

  const Network& net_;
  CommodityId c_;
  std::vector<std::vector<EdgeId>> out_;
  std::size_t budget_;
  std::size_t cycles_ = 0;
  std::vector<bool> on_path_;
  NodeId root_ = 0;
  std::optional<double> alpha_;
};

class WalkSearch {
 public:
  WalkSearch(const Network& net, CommodityId c, int kappa,
             std::size_t max_length, std::size_t max_walks,
             CommodityCatalog& out)
      : net_(net),
        c_(c),
        commodity_(net.commodities[static_cast<std::size_t>(c)]),
        out_edges_(net.OutEdges()),
        kappa_(kappa),
        max_length_(max_length),
        max_walks_(max_walks),
        visits_(net.num_nodes(), 0),
        last_level_(net.num_nodes(), -kInf),
        out_(out) {}

  void Run() {
    const auto s = static_cast<std::size_t>(commodity_.source);
    visits_[s] = 1;
    last_level_[s] = commodity_.initial_battery;
    Visit(commodity_.source, commodity_.initial_battery);
  }

 private:
  void Visit(NodeId v, double level) {
    ++out_.stats.explored_states;
    if (v == commodity_.sink && !path_.empty()) {
      if (out_.walks.size() >= max_walks_) {
        out_.stats.truncated = true;
        return;
      }
      out_.walks.push_back(MakeWalk(net_, c_, path_));
    }
    if (out_.stats.truncated) return;
    const auto& out = out_edges_[static_cast<std::size_t>(v)];
    if (path_.size() >= max_length_) {
      if (!out.empty()) ++out_.stats.pruned_length;
      return;
    }
    for (EdgeId e : out) {
      const CommodityEdgeAttrs& a = net_.attr(c_, e);
      const double next_level =
          std::min(level - a.battery_cost, commodity_.battery_capacity);
      if (!(next_level >= -kLevelTolerance)) {
        ++out_.stats.pruned_battery;
        continue;
      }
      const double next_price = price_ + a.price;
      if (ExceedsBudget(next_price, commodity_.price_budget)) {
        ++out_.stats.pruned_budget;
        continue;
      }
      const auto w = static_cast<std::size_t>(net_.edge(e).head);
      if (visits_[w] >= kappa_) {
        ++out_.stats.pruned_visits;
        continue;
      }
      if (visits_[w] > 0 && next_level <= last_level_[w] + kLevelTolerance) {
        ++out_.stats.pruned_dominance;
        continue;
      }
      const double saved_level = last_level_[w];
      const double saved_price = price_;
      path_.push_back(e);
      ++visits_[w];
      last_level_[w] = next_level;
      price_ = next_price;
      Visit(static_cast<NodeId>(w), next_level);
      price_ = saved_price;
      last_level_[w] = saved_level;
      --visits_[w];
      path_.pop_back();
      if (out_.stats.truncated) return;
    }
  }

  const Network& net_;
  CommodityId c_;
  const Commodity& commodity_;
  std::vector<std::vector<EdgeId>> out_edges_;
  int kappa_;
  std::size_t max_length_;
  std::size_t max_walks_;
  std::vector<int> visits_;
  std::vector<double> last_level_;
  std::vector<EdgeId> path_;
  double price_ = 0.0;
  CommodityCatalog& out_;
};

}  // namespace

double Walk::min_battery() const {
  if (battery_profile.empty()) return kInf;
  return *std::min_element(battery_profile.begin(), battery_profile.end());
}

std::size_t WalkCatalog::TotalWalks() const {
  std::size_t n = 0;
  for (const auto& c : commodities) n += c.walks.size();
  return n;
}

std::vector<std::size_t> WalkCatalog::WalkCounts() const {
  std::vector<std::size_t> counts;
  counts.reserve(commodities.size());
  for (const auto& c : commodities) counts.push_back(c.walks.size());
  return counts;
}

std::vector<double> BatteryProfile(std::span<const EdgeId> edges, CommodityId c,
                                   const Network& net) {
  if (edges.empty()) throw std::invalid_argument("BatteryProfile: empty walk");
  const Commodity& com = net.commodities.at(static_cast<std::size_t>(c));
  std::vector<double> levels;
  levels.reserve(edges.size());
  NodeId at = com.source;
  double level = com.initial_battery;
  for (EdgeId e : edges) {
    if (e < 0 || static_cast<std::size_t>(e) >= net.num_edges()) {
      throw std::invalid_argument("BatteryProfile: unknown edge index");
    }
    const Edge& edge = net.edge(e);
    if (edge.tail != at) {
      throw std::invalid_argument("BatteryProfile: edge " + edge.id +
                                  " is not incident to the previous edge");
    }
    level = std::min(level - net.attr(c, e).battery_cost, com.battery_capacity);
    levels.push_back(level);
    at = edge.head;
  }
  return levels;
}

double WalkPrice(std::span<const EdgeId> edges, CommodityId c,
                 const Network& net) {
  double price = 0.0;
  for (EdgeId e : edges) price += net.attr(c, e).price;
  return price;
}

Walk MakeWalk(const Network& net, CommodityId c, std::vector<EdgeId> edges) {
  Walk w;
  w.commodity = c;
  w.battery_profile = BatteryProfile(edges, c, net);
  w.total_price = WalkPrice(edges, c, net);
  for (EdgeId e : edges) {
    w.free_flow_time += net.edge(e).transit_time;
    if (net.edge(e).kind == EdgeKind::kPhysical) {
      w.energy_consumption += net.attr(c, e).battery_cost;
    }
  }
  w.edges = std::move(edges);
  return w;
}

FeasibilityVerdict CheckEnergyFeasible(const Walk& walk,
                                       const Commodity& commodity) {
  using R = FeasibilityVerdict::Reason;
  for (std::size_t j = 0; j < walk.battery_profile.size(); ++j) {
    const double level = walk.battery_profile[j];
    if (!(level >= -kLevelTolerance)) return {false, R::kBatteryBelowZero, j};
    if (level > commodity.battery_capacity + kLevelTolerance) {
      return {false, R::kBatteryAboveCapacity, j};
    }
  }
  if (ExceedsBudget(walk.total_price, commodity.price_budget)) {
    return {false, R::kPriceBudget, walk.edges.size()};
  }
  return {};
}

KappaBound VisitBoundKappa(CommodityId c, const Network& net,
                           const EnumerationLimits& limits) {
  KappaBound out;
  CycleSearch search(net, c, limits.max_cycles);
  const bool complete = search.Run();
  const double capacity =
      net.commodities.at(static_cast<std::size_t>(c)).battery_capacity;
  if (complete && search.alpha()) {
    out.alpha = search.alpha();
    out.kappa = std::max(1, static_cast<int>(std::ceil(capacity / *out.alpha - 1e-12)));
    return out;
  }
  out.kappa = limits.kappa_hard_cap;
  out.fallback = true;
  out.warning = complete
                    ? "no simple cycle with positive battery cost; using hard cap"
                    : "simple-cycle search exceeded its budget; using hard cap";
  return out;
}

CommodityCatalog EnumerateFeasibleWalks(const Network& net, CommodityId c,
                                        const EnumerationLimits& limits) {
  CommodityCatalog catalog;
  catalog.commodity = c;
  if (limits.kappa_override) {
    catalog.stats.kappa = *limits.kappa_override;
  } else {
    const KappaBound bound = VisitBoundKappa(c, net, limits);
    catalog.stats.kappa = bound.kappa;
    catalog.stats.kappa_fallback = bound.fallback;
  }
  const std::size_t max_length =
      limits.max_length > 0
          ? limits.max_length
          : static_cast<std::size_t>(catalog.stats.kappa) * net.num_nodes();

  WalkSearch(net, c, catalog.stats.kappa, max_length, limits.max_walks, catalog)
      .Run();
  std::sort(catalog.walks.begin(), catalog.walks.end(),
            [](const Walk& a, const Walk& b) { return a.edges < b.edges; });
  if (catalog.walks.empty()) {
    throw NoFeasibleWalkError(net.commodities[static_cast<std::size_t>(c)].id);
  }
  return catalog;
}

WalkCatalog EnumerateAllFeasibleWalks(const Network& net,
                                      const EnumerationLimits& limits,
                                      int threads) {
  WalkCatalog catalog;
  catalog.commodities.resize(net.num_commodities());
  ParallelFor(net.num_commodities(), threads, [&](std::size_t c) {
    catalog.commodities[c] =
        EnumerateFeasibleWalks(net, static_cast<CommodityId>(c), limits);
  });
  return catalog;
}

std::string FormatEdgeSequence(const Network& net, std::span<const EdgeId> edges) {
  std::string out;
  for (std::size_t j = 0; j < edges.size(); ++j) {
    if (j > 0) out += ',';
    out += net.edge(edges[j]).id;
  }
  return out;
}

}  // namespace evq
