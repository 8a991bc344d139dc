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

#include "evq/equilibrium.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "evq/errors.hpp"
#include "evq/metrics.hpp"
#include "evq/parallel.hpp"

namespace evq {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

const char* InitializationName(Initialization init) {
  switch (init) {
    case Initialization::kShortest: return "shortest";
    case Initialization::kUniform: return "uniform";
    case Initialization::kGiven: return "file";
  }
  return "unknown";
}

const char* TerminationModeName(TerminationMode mode) {
  return mode == TerminationMode::kAbsolute ? "abs" : "rel";
}

const char* TerminationReasonName(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::kConverged: return "converged";
    case TerminationReason::kMaxIterations: return "max_iters";
    case TerminationReason::kTimeLimit: return "time_limit";
  }
  return "unknown";
}

TimeGrid MakeTimeGrid(const Network& net, const FixedPointConfig& config) {
  TimeGrid grid;
  grid.intervals = config.intervals;
  grid.horizon = config.horizon > 0.0 ? config.horizon : net.InflowHorizon();
  if (!(grid.horizon > 0.0)) grid.horizon = 1.0;  // no inflow at all
  return grid;
}

std::vector<std::vector<double>> IntervalDemand(const Network& net,
                                                const TimeGrid& grid) {
  std::vector<std::vector<double>> out(net.num_commodities());
  for (std::size_t c = 0; c < net.num_commodities(); ++c) {
    out[c].resize(static_cast<std::size_t>(grid.intervals));
    for (int j = 0; j < grid.intervals; ++j) {
      out[c][static_cast<std::size_t>(j)] =
          net.commodities[c].inflow.Average(grid.start(j), grid.end(j));
    }
  }
  return out;
}

CostMatrix MidpointCosts(const Network& net, const WalkCatalog& catalog,
                         const LoadingResult& loading, const TimeGrid& grid,
                         int threads) {
  CostMatrix costs(grid, catalog.WalkCounts());
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (std::size_t c = 0; c < catalog.num_commodities(); ++c) {
    for (std::size_t w = 0; w < costs.num_walks(c); ++w) jobs.emplace_back(c, w);
  }
  ParallelFor(jobs.size(), threads, [&](std::size_t k) {
    const auto [c, w] = jobs[k];
    const Walk& walk = catalog.walks(static_cast<CommodityId>(c))[w];
    const AggregationSpec& agg = net.commodities[c].aggregation;
    for (int j = 0; j < grid.intervals; ++j) {
      const double mu = loading.WalkTravelTime(walk.edges, grid.midpoint(j));
      costs.at(c, w, j) = agg.Cost(mu, walk.total_price);
    }
  });
  return costs;
}

FpRowSolution SolveFpUpdate(std::span<const double> h, std::span<const double> cost,
                            double u, double alpha) {
  if (h.size() != cost.size() || h.empty()) {
    throw std::invalid_argument("SolveFpUpdate: row size mismatch");
  }
  if (u < 0.0) throw std::invalid_argument("SolveFpUpdate: negative demand");
  if (!(alpha > 0.0)) throw std::invalid_argument("SolveFpUpdate: alpha must be positive");

  const std::size_t n = h.size();
  std::vector<double> x(n);
  for (std::size_t w = 0; w < n; ++w) x[w] = h[w] - alpha * cost[w];

  FpRowSolution out;
  out.row.assign(n, 0.0);
  if (u == 0.0) {
    out.v = -*std::max_element(x.begin(), x.end());
    return out;
  }

  std::vector<double> sorted(x);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    prefix += sorted[k];
    const double v = (u - prefix) / static_cast<double>(k + 1);
    if (k + 1 == n || sorted[k + 1] + v <= 0.0) {
      out.v = v;
      break;
    }
  }
  double sum = 0.0;
  for (std::size_t w = 0; w < n; ++w) {
    out.row[w] = std::max(0.0, x[w] + out.v);
    sum += out.row[w];
  }
  if (sum > 0.0) {
    const double scale = u / sum;
    for (double& r : out.row) r *= scale;
  }
  return out;
}

WalkFlow FpUpdate(const WalkFlow& h, const CostMatrix& costs,
                  const std::vector<std::vector<double>>& demand, double alpha,
                  int threads) {
  if (!h.SameShape(costs)) throw std::invalid_argument("FpUpdate: shape mismatch");
  WalkFlow next(h.grid(), h.walk_counts());
  const std::size_t rows = h.num_commodities() * static_cast<std::size_t>(h.intervals());
  ParallelFor(rows, threads, [&](std::size_t r) {
    const std::size_t c = r / static_cast<std::size_t>(h.intervals());
    const int j = static_cast<int>(r % static_cast<std::size_t>(h.intervals()));
    if (h.num_walks(c) == 0) return;
    const FpRowSolution s = SolveFpUpdate(h.row(c, j), costs.row(c, j),
                                          demand[c][static_cast<std::size_t>(j)], alpha);
    std::copy(s.row.begin(), s.row.end(), next.row(c, j).begin());
  });
  return next;
}

double StepSizeUpdate(double alpha, const WalkFlow& h_old, const WalkFlow& h_new,
                      const NormOptions& norm) {
  const double denom = CombinedNorm(h_new, h_old, 1.0, norm);
  if (!(denom > 0.0)) return alpha;
  const double gamma = 1.0 - CombinedNorm(h_new, h_old, -1.0, norm) / denom;
  return gamma * (gamma * alpha) + (1.0 - gamma) * alpha;
}

WalkFlow InitialFlow(const Network& net, const WalkCatalog& catalog,
                     const TimeGrid& grid, Initialization init) {
  if (init == Initialization::kGiven) {
    throw std::invalid_argument("InitialFlow: a given flow must be supplied by the caller");
  }
  WalkFlow h(grid, catalog.WalkCounts());
  const auto demand = IntervalDemand(net, grid);
  for (std::size_t c = 0; c < catalog.num_commodities(); ++c) {
    const auto& walks = catalog.walks(static_cast<CommodityId>(c));
    if (walks.empty()) throw NoFeasibleWalkError(net.commodities[c].id);
    const AggregationSpec& agg = net.commodities[c].aggregation;
    std::size_t best = 0;
    for (std::size_t w = 1; w < walks.size(); ++w) {
      if (agg.Cost(walks[w].free_flow_time, walks[w].total_price) <
          agg.Cost(walks[best].free_flow_time, walks[best].total_price)) {
        best = w;
      }
    }
    for (int j = 0; j < grid.intervals; ++j) {
      const double u = demand[c][static_cast<std::size_t>(j)];
      if (init == Initialization::kShortest) {
        h.at(c, best, j) = u;
      } else {
        for (std::size_t w = 0; w < walks.size(); ++w) {
          h.at(c, w, j) = u / static_cast<double>(walks.size());
        }
      }
    }
  }
  return h;
}

double FixedPointResidual(const WalkFlow& h, const CostMatrix& costs,
                          const std::vector<std::vector<double>>& demand,
                          double alpha, const NormOptions& norm) {
  return CombinedNorm(FpUpdate(h, costs, demand, alpha), h, -1.0, norm);
}

double FixedPointResidual(const WalkFlow& h, const Network& net,
                          const WalkCatalog& catalog, double alpha,
                          const NormOptions& norm) {
  const LoadingResult loading = NetworkLoading(net, catalog, h);
  const CostMatrix costs = MidpointCosts(net, catalog, loading, h.grid());
  return FixedPointResidual(h, costs, IntervalDemand(net, h.grid()), alpha, norm);
}

double KViolation(const WalkFlow& h, const std::vector<std::vector<double>>& demand) {
  double worst = 0.0;
  for (std::size_t c = 0; c < h.num_commodities(); ++c) {
    for (int j = 0; j < h.intervals(); ++j) {
      const double u = demand[c][static_cast<std::size_t>(j)];
      worst = std::max(worst, std::abs(h.RowSum(c, j) - u) / std::max(1.0, std::abs(u)));
      for (double x : h.row(c, j)) worst = std::max(worst, -x);
    }
  }
  return worst;
}

EquilibriumResult RunFixedPoint(const Network& net, const WalkCatalog& catalog,
                                const FixedPointConfig& config,
                                const std::optional<WalkFlow>& initial) {
  if (!(config.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(config.alpha0 > 0.0)) throw std::invalid_argument("alpha0 must be positive");
  if (config.intervals < 1) throw std::invalid_argument("N must be at least 1");
  for (std::size_t c = 0; c < catalog.num_commodities(); ++c) {
    if (catalog.walks(static_cast<CommodityId>(c)).empty()) {
      throw NoFeasibleWalkError(net.commodities[c].id);
    }
  }

  const auto start = Clock::now();
  const TimeGrid grid = MakeTimeGrid(net, config);
  const auto demand = IntervalDemand(net, grid);
  const std::vector<double> volumes = InflowVolumes(net);

  EquilibriumResult result;
  if (config.initialization == Initialization::kGiven) {
    if (!initial) throw std::invalid_argument("initial walk-flow required");
    result.flow = *initial;
  } else {
    result.flow = InitialFlow(net, catalog, grid, config.initialization);
  }

  double alpha = config.alpha0;
  // Loads the current flow and fills the cost/metric columns of `stats`.
  auto evaluate = [&](IterationStats& stats) {
    const auto t0 = Clock::now();
    result.loading = NetworkLoading(net, catalog, result.flow, config.loading);
    result.costs = MidpointCosts(net, catalog, result.loading, grid, config.threads);
    stats.loading_seconds = SecondsSince(t0);
    stats.qopi = Qopi(result.flow, result.costs, volumes, QopiMode::kRelative);
    stats.qopi_abs = Qopi(result.flow, result.costs, volumes, QopiMode::kAbsolute);
    stats.alpha = alpha;
    stats.k_violation = KViolation(result.flow, demand);
    result.max_k_violation = std::max(result.max_k_violation, stats.k_violation);
    if (config.audit) {
      stats.audit_violation = AuditLoading(net, result.loading).Worst();
      result.max_audit_violation =
          std::max(result.max_audit_violation, stats.audit_violation);
    }
    stats.wall_time = SecondsSince(start);
    result.history.push_back(stats);
    if (config.on_iteration) config.on_iteration(stats);
  };

  IterationStats first;
  evaluate(first);

  for (int k = 1;; ++k) {
    if (k > config.max_iters) {
      result.reason = TerminationReason::kMaxIterations;
      break;
    }
    if (SecondsSince(start) > config.time_limit_s) {
      result.reason = TerminationReason::kTimeLimit;
      break;
    }
    IterationStats stats;
    stats.k = k;
    const auto t0 = Clock::now();
    WalkFlow next = FpUpdate(result.flow, result.costs, demand, alpha, config.threads);
    const DeltaH delta = ComputeDeltaH(result.flow, next, config.norm);
    alpha = StepSizeUpdate(alpha, result.flow, next, config.norm);
    stats.update_seconds = SecondsSince(t0);
    stats.delta_h_abs = delta.absolute;
    stats.delta_h_rel = delta.relative;
    result.flow = std::move(next);
    evaluate(stats);

    const bool done = config.termination == TerminationMode::kAbsolute
                          ? delta.absolute < config.epsilon
                          : delta.relative <= config.epsilon;
    if (done) {
      result.reason = TerminationReason::kConverged;
      break;
    }
  }
  return result;
}

}  // namespace evq
