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

#include "evq/loading.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <queue>
#include <string>
#include <tuple>

#include "evq/errors.hpp"

namespace evq {

class LoadingEngine {
 public:
  LoadingEngine(const Network& net, std::vector<RouteInput> routes,
                const LoadingOptions& options)
      : net_(net), options_(options) {
    for (auto& r : routes) {
      Validate(r);
      if (!r.inflow.IsZero()) routes_.push_back(std::move(r));
    }
  }

  LoadingResult Run();

 private:
  enum class Kind { kSource, kOutflow, kDepletion };

  struct Event {
    double time;
    std::uint64_t seq;
    Kind kind;
    std::size_t index;
    std::uint64_t version;

    bool operator>(const Event& o) const {
      return std::tie(time, seq) > std::tie(o.time, o.seq);
    }
  };

  struct Slot {
    std::size_t route;
    std::size_t position;
    EdgeId edge;
    std::size_t local;  // index among the edge's slots
  };

  struct Pending {
    double time;
    std::vector<double> rates;
  };

  struct EdgeState {
    std::vector<std::size_t> slots;
    std::vector<double> in_rates;
    std::vector<double> out_rates;
    double in_total = 0.0;
    double seg_start = 0.0;
    double q_start = 0.0;
    bool active = false;
    bool dirty = false;
    bool drained = false;
    std::uint64_t version = 0;
    std::deque<Pending> pending;
  };

  void Validate(const RouteInput& r) const;
  void Push(double time, Kind kind, std::size_t index, std::uint64_t version = 0) {
    heap_.push({time, seq_++, kind, index, version});
  }
  void MarkDirty(EdgeId e) {
    auto& st = state_[static_cast<std::size_t>(e)];
    if (!st.dirty) {
      st.dirty = true;
      dirty_.push_back(e);
    }
  }
  void SetSlotInflow(std::size_t slot, double rate, double t);
  void ApplyPendingOutflow(EdgeId e, double t);
  void StartSegment(EdgeId e, double t);

  const Network& net_;
  LoadingOptions options_;
  std::vector<RouteInput> routes_;
  std::vector<Slot> slots_;
  std::vector<std::vector<std::size_t>> route_slots_;
  std::vector<StepFunction> slot_in_;
  std::vector<StepFunction> slot_out_;
  std::vector<EdgeState> state_;
  std::vector<EdgeId> dirty_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> heap_;
  std::uint64_t seq_ = 0;
  LoadingResult result_;
};

void LoadingEngine::Validate(const RouteInput& r) const {
  if (r.edges.empty()) throw LoadingError("route with no edges");
  for (std::size_t j = 0; j < r.edges.size(); ++j) {
    const EdgeId e = r.edges[j];
    if (e < 0 || static_cast<std::size_t>(e) >= net_.num_edges()) {
      throw LoadingError("route references unknown edge index " + std::to_string(e));
    }
    if (j > 0 && net_.edge(r.edges[j - 1]).head != net_.edge(e).tail) {
      throw LoadingError("route edges " + net_.edge(r.edges[j - 1]).id + " and " +
                         net_.edge(e).id + " are not incident");
    }
  }
  if (r.inflow.MinValue() < 0.0) throw LoadingError("negative walk inflow rate");
  if (!r.inflow.breakpoints().empty() && r.inflow.breakpoints().front() < 0.0) {
    throw LoadingError("walk inflow starts before time 0");
  }
  if (std::isinf(r.inflow.SupportEnd())) {
    throw LoadingError("walk inflow without bounded support");
  }
}

void LoadingEngine::SetSlotInflow(std::size_t slot, double rate, double t) {
  const Slot& s = slots_[slot];
  auto& st = state_[static_cast<std::size_t>(s.edge)];
  if (st.in_rates[s.local] == rate) return;
  st.in_rates[s.local] = rate;
  slot_in_[slot].Append(t, rate);
  MarkDirty(s.edge);
}

void LoadingEngine::ApplyPendingOutflow(EdgeId e, double t) {
  auto& st = state_[static_cast<std::size_t>(e)];
  auto& profile = result_.edges_[static_cast<std::size_t>(e)];
  bool changed = false;
  while (!st.pending.empty() && st.pending.front().time <= t + kTimeTolerance) {
    const Pending& p = st.pending.front();
    for (std::size_t k = 0; k < st.slots.size(); ++k) {
      const double rate = p.rates[k];
      if (st.out_rates[k] == rate) continue;
      st.out_rates[k] = rate;
      changed = true;
      const std::size_t slot = st.slots[k];
      slot_out_[slot].Append(t, rate);
      const Slot& s = slots_[slot];
      const auto& chain = route_slots_[s.route];
      if (s.position + 1 < chain.size()) SetSlotInflow(chain[s.position + 1], rate, t);
    }
    st.pending.pop_front();
  }
  if (changed) {
    double total = 0.0;
    for (double r : st.out_rates) total += r;
    profile.outflow_rate.Append(t, total);
  }
}

void LoadingEngine::StartSegment(EdgeId e, double t) {
  auto& st = state_[static_cast<std::size_t>(e)];
  auto& profile = result_.edges_[static_cast<std::size_t>(e)];
  const Edge& edge = net_.edge(e);
  const double nu = edge.capacity;

  double q = 0.0;
  if (st.active) q = st.q_start + (st.in_total - nu) * (t - st.seg_start);
  if (st.drained || q < 1e-12 * std::max(1.0, st.q_start)) q = 0.0;
  st.drained = false;

  double g = 0.0;
  for (double r : st.in_rates) g += r;
  const bool active = q > 0.0 || g > nu;
  const double exit = t + edge.transit_time + q / nu;

  profile.inflow_rate.Append(t, g);
  profile.queue.Append(t, q);
  profile.queue.set_tail_slope(active ? g - nu : 0.0);
  profile.exit_time.Append(t, exit);
  profile.exit_time.set_tail_slope(active ? g / nu : 1.0);

  std::vector<double> rates(st.in_rates);
  if (active) {
    for (double& r : rates) r = g > 0.0 ? r * nu / g : 0.0;
  }
  if (!st.pending.empty() && st.pending.back().time >= exit - kTimeTolerance) {
    st.pending.back().rates = std::move(rates);
  } else {
    const std::vector<double>& last =
        st.pending.empty() ? st.out_rates : st.pending.back().rates;
    if (rates != last) {
      st.pending.push_back({exit, std::move(rates)});
      Push(exit, Kind::kOutflow, static_cast<std::size_t>(e));
    }
  }

  ++st.version;
  if (active && g < nu && q > 0.0) {
    Push(t + q / (nu - g), Kind::kDepletion, static_cast<std::size_t>(e), st.version);
  }
  st.seg_start = t;
  st.q_start = q;
  st.in_total = g;
  st.active = active;
}

LoadingResult LoadingEngine::Run() {
  const std::size_t m = net_.num_edges();
  state_.assign(m, {});
  result_.edges_.assign(m, {});
  result_.transit_times_.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    const double tau = net_.edges[e].transit_time;
    result_.transit_times_[e] = tau;
    auto& p = result_.edges_[e];
    p.queue.Append(0.0, 0.0);
    p.exit_time.Append(0.0, tau);
    p.exit_time.set_tail_slope(1.0);
  }

  route_slots_.resize(routes_.size());
  for (std::size_t r = 0; r < routes_.size(); ++r) {
    for (std::size_t j = 0; j < routes_[r].edges.size(); ++j) {
      const EdgeId e = routes_[r].edges[j];
      auto& st = state_[static_cast<std::size_t>(e)];
      route_slots_[r].push_back(slots_.size());
      st.slots.push_back(slots_.size());
      slots_.push_back({r, j, e, st.in_rates.size()});
      st.in_rates.push_back(0.0);
      st.out_rates.push_back(0.0);
    }
    for (double b : routes_[r].inflow.breakpoints()) Push(b, Kind::kSource, r);
  }
  slot_in_.assign(slots_.size(), {});
  slot_out_.assign(slots_.size(), {});

  std::size_t processed = 0;
  std::vector<Event> batch;
  while (!heap_.empty()) {
    const double t = heap_.top().time;
    batch.clear();
    while (!heap_.empty() && heap_.top().time <= t + kTimeTolerance) {
      batch.push_back(heap_.top());
      heap_.pop();
    }
    processed += batch.size();
    if (processed > options_.max_events) {
      throw LoadingError("network loading exceeded the event budget of " +
                         std::to_string(options_.max_events));
    }
    for (const Event& ev : batch) {
      switch (ev.kind) {
        case Kind::kSource:
          // Evaluated at the route's own breakpoint; the batch time may sit
          // a rounding error before it.
          SetSlotInflow(route_slots_[ev.index][0], routes_[ev.index].inflow(ev.time), t);
          break;
        case Kind::kOutflow:
          ApplyPendingOutflow(static_cast<EdgeId>(ev.index), t);
          break;
        case Kind::kDepletion: {
          auto& st = state_[ev.index];
          if (ev.version == st.version) {
            st.drained = true;
            MarkDirty(static_cast<EdgeId>(ev.index));
          }
          break;
        }
      }
    }
    std::sort(dirty_.begin(), dirty_.end());
    for (EdgeId e : dirty_) {
      StartSegment(e, t);
      state_[static_cast<std::size_t>(e)].dirty = false;
    }
    dirty_.clear();
    result_.event_times_.push_back(t);
    result_.horizon_ = t;
  }
  result_.num_events_ = processed;

  for (auto& p : result_.edges_) {
    p.cumulative_inflow = p.inflow_rate.Cumulative();
    p.cumulative_outflow = p.outflow_rate.Cumulative();
  }
  result_.routes_.reserve(routes_.size());
  for (std::size_t r = 0; r < routes_.size(); ++r) {
    RouteProfile rp;
    rp.commodity = routes_[r].commodity;
    rp.walk = routes_[r].walk;
    rp.edges = routes_[r].edges;
    for (std::size_t slot : route_slots_[r]) {
      rp.inflow.push_back(std::move(slot_in_[slot]));
      rp.outflow.push_back(std::move(slot_out_[slot]));
    }
    result_.routes_.push_back(std::move(rp));
  }
  return std::move(result_);
}

const RouteProfile* LoadingResult::FindRoute(CommodityId c, std::size_t w) const {
  const auto it = std::lower_bound(
      routes_.begin(), routes_.end(), std::make_pair(c, w),
      [](const RouteProfile& r, const std::pair<CommodityId, std::size_t>& key) {
        return std::make_pair(r.commodity, r.walk) < key;
      });
  if (it != routes_.end() && it->commodity == c && it->walk == w) return &*it;
  // Routes supplied out of order fall back to a scan.
  for (const auto& r : routes_) {
    if (r.commodity == c && r.walk == w) return &r;
  }
  return nullptr;
}

double LoadingResult::ExitTime(EdgeId e, double theta) const {
  const auto& f = edges_[static_cast<std::size_t>(e)].exit_time;
  if (theta <= 0.0) return theta + transit_times_[static_cast<std::size_t>(e)];
  return f(theta);
}

double LoadingResult::WalkArrival(std::span<const EdgeId> walk, double theta) const {
  double a = theta;
  for (EdgeId e : walk) a = ExitTime(e, a);
  return a;
}

LoadingResult LoadRoutes(const Network& net, std::vector<RouteInput> routes,
                         const LoadingOptions& options) {
  return LoadingEngine(net, std::move(routes), options).Run();
}

void ValidateWalkFlow(const Network& net, const WalkCatalog& catalog,
                      const WalkFlow& h) {
  if (h.num_commodities() != net.num_commodities() ||
      h.walk_counts() != catalog.WalkCounts()) {
    throw LoadingError("walk-flow shape does not match the walk catalog");
  }
  const TimeGrid& grid = h.grid();
  for (std::size_t c = 0; c < net.num_commodities(); ++c) {
    const Commodity& com = net.commodities[c];
    if (com.inflow.SupportEnd() > grid.horizon + kTimeTolerance) {
      throw LoadingError("inflow of commodity '" + com.id +
                         "' extends beyond the time grid");
    }
    for (int j = 0; j < grid.intervals; ++j) {
      const double target = com.inflow.Average(grid.start(j), grid.end(j));
      double sum = 0.0;
      for (double x : h.row(c, j)) {
        if (!(x >= 0.0)) {
          throw LoadingError("negative or non-finite walk-flow entry for commodity '" +
                             com.id + "'");
        }
        sum += x;
      }
      if (std::abs(sum - target) > 1e-9 * std::max(1.0, std::abs(target))) {
        throw LoadingError("walk-flow of commodity '" + com.id + "' sums to " +
                           std::to_string(sum) + " instead of " +
                           std::to_string(target) + " on interval " +
                           std::to_string(j));
      }
    }
  }
}

LoadingResult NetworkLoading(const Network& net, const WalkCatalog& catalog,
                             const WalkFlow& h, const LoadingOptions& options) {
  ValidateWalkFlow(net, catalog, h);
  std::vector<RouteInput> routes;
  for (std::size_t c = 0; c < catalog.num_commodities(); ++c) {
    const auto& walks = catalog.walks(static_cast<CommodityId>(c));
    for (std::size_t w = 0; w < walks.size(); ++w) {
      StepFunction inflow = h.WalkInflow(c, w);
      if (inflow.IsZero()) continue;
      routes.push_back({static_cast<CommodityId>(c), w, walks[w].edges, std::move(inflow)});
    }
  }
  return LoadRoutes(net, std::move(routes), options);
}

bool LoadingAudit::Passed(double tolerance) const { return Worst() <= tolerance; }

double LoadingAudit::Worst() const {
  return std::max({conservation, queue_negativity, capacity_excess, fifo,
                   queue_definition, link_transfer, aggregation});
}

LoadingAudit AuditLoading(const Network& net, const LoadingResult& loading) {
  LoadingAudit audit;
  const auto& edges = loading.edges();

  struct RouteCumulatives {
    std::vector<PiecewiseLinearFn> in;
    std::vector<PiecewiseLinearFn> out;
  };
  std::vector<RouteCumulatives> routes;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edge_slots(edges.size());
  for (std::size_t r = 0; r < loading.routes().size(); ++r) {
    const RouteProfile& rp = loading.routes()[r];
    RouteCumulatives rc;
    for (std::size_t j = 0; j < rp.edges.size(); ++j) {
      rc.in.push_back(rp.inflow[j].Cumulative());
      rc.out.push_back(rp.outflow[j].Cumulative());
      edge_slots[static_cast<std::size_t>(rp.edges[j])].emplace_back(r, j);
    }
    routes.push_back(std::move(rc));
  }

  for (double t : loading.event_times()) {
    double stored = 0.0;
    for (const auto& p : edges) stored += p.cumulative_inflow(t) - p.cumulative_outflow(t);
    double injected = 0.0;
    for (const auto& rc : routes) injected += rc.in.front()(t) - rc.out.back()(t);
    audit.conservation = std::max(audit.conservation, std::abs(stored - injected));
    ++audit.checked_times;
  }

  for (std::size_t e = 0; e < edges.size(); ++e) {
    const EdgeProfile& p = edges[e];
    const Edge& edge = net.edges[e];
    for (std::size_t k = 0; k < p.queue.breakpoints().size(); ++k) {
      const double theta = p.queue.breakpoints()[k];
      const double q = p.queue.values()[k];
      audit.queue_negativity = std::max(audit.queue_negativity, -q);
      const double implied =
          p.cumulative_inflow(theta) - p.cumulative_outflow(theta + edge.transit_time);
      audit.queue_definition = std::max(audit.queue_definition, std::abs(q - implied));
    }
    audit.capacity_excess =
        std::max(audit.capacity_excess, p.outflow_rate.MaxValue() / edge.capacity - 1.0);
    const auto tv = p.exit_time.values();
    for (std::size_t k = 1; k < tv.size(); ++k) {
      audit.fifo = std::max(audit.fifo, tv[k - 1] - tv[k]);
    }
    if (p.exit_time.tail_slope() < 0.0) audit.fifo = std::numeric_limits<double>::infinity();

    std::vector<double> times(p.exit_time.breakpoints().begin(),
                              p.exit_time.breakpoints().end());
    for (const auto& [r, j] : edge_slots[e]) {
      const auto bps = routes[r].in[j].breakpoints();
      times.insert(times.end(), bps.begin(), bps.end());
    }
    for (double theta : times) {
      double in_sum = 0.0;
      double out_sum = 0.0;
      const double exit = loading.ExitTime(static_cast<EdgeId>(e), theta);
      for (const auto& [r, j] : edge_slots[e]) {
        const double fin = routes[r].in[j](theta);
        audit.link_transfer =
            std::max(audit.link_transfer, std::abs(routes[r].out[j](exit) - fin));
        in_sum += fin;
        out_sum += routes[r].out[j](theta);
      }
      audit.aggregation = std::max(
          {audit.aggregation, std::abs(in_sum - p.cumulative_inflow(theta)),
           std::abs(out_sum - p.cumulative_outflow(theta))});
    }
  }
  audit.capacity_excess = std::max(0.0, audit.capacity_excess);
  return audit;
}

}  // namespace evq
