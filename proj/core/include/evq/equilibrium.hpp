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

#ifndef EVQ_EQUILIBRIUM_HPP_
#define EVQ_EQUILIBRIUM_HPP_

#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evq/loading.hpp"
#include "evq/netmodel.hpp"
#include "evq/walk_flow.hpp"
#include "evq/walks.hpp"

namespace evq {

enum class Initialization { kShortest, kUniform, kGiven };
enum class TerminationMode { kAbsolute, kRelative };
enum class TerminationReason { kConverged, kMaxIterations, kTimeLimit };

const char* InitializationName(Initialization init);
const char* TerminationModeName(TerminationMode mode);
const char* TerminationReasonName(TerminationReason reason);

struct IterationStats {
  int k = 0;
  // NaN for the initial flow (k = 0).
  double delta_h_abs = std::numeric_limits<double>::quiet_NaN();
  double delta_h_rel = std::numeric_limits<double>::quiet_NaN();
  double qopi = 0.0;
  double qopi_abs = 0.0;
  double alpha = 0.0;
  double wall_time = 0.0;
  double loading_seconds = 0.0;
  double update_seconds = 0.0;
  // Largest relative row-sum mismatch and largest negative entry of h^k.
  double k_violation = 0.0;
  // Worst loading audit violation; NaN when auditing is off.
  double audit_violation = std::numeric_limits<double>::quiet_NaN();
};

struct FixedPointConfig {
  double epsilon = 0.01;
  double alpha0 = 0.5;
  int intervals = 100;
  // Length of the discretized window [0, T]; 0 uses the inflow horizon.
  double horizon = 0.0;
  int max_iters = 10000;
  double time_limit_s = std::numeric_limits<double>::infinity();
  Initialization initialization = Initialization::kShortest;
  TerminationMode termination = TerminationMode::kAbsolute;
  NormOptions norm;
  int threads = 1;
  // Run AuditLoading on every loading.
  bool audit = false;
  LoadingOptions loading;
  std::function<void(const IterationStats&)> on_iteration;
};

struct EquilibriumResult {
  WalkFlow flow;
  CostMatrix costs;
  LoadingResult loading;
  std::vector<IterationStats> history;
  TerminationReason reason = TerminationReason::kMaxIterations;
  double max_k_violation = 0.0;
  double max_audit_violation = 0.0;

  bool converged() const { return reason == TerminationReason::kConverged; }
};

// The grid used by RunFixedPoint for this network and configuration.
TimeGrid MakeTimeGrid(const Network& net, const FixedPointConfig& config);

// Interval-average inflow rate u^j_i, indexed [commodity][interval].
std::vector<std::vector<double>> IntervalDemand(const Network& net,
                                                const TimeGrid& grid);

// c_i(mu_W(midpoint_j), price_W) for every walk and interval.
CostMatrix MidpointCosts(const Network& net, const WalkCatalog& catalog,
                         const LoadingResult& loading, const TimeGrid& grid,
                         int threads = 1);

struct FpRowSolution {
  double v = 0.0;
  std::vector<double> row;
};

// Solves sum_W [h_W - alpha c_W + v]_+ = u exactly by scanning the sorted
// breakpoints, then rescales the row so that it sums to u. A zero target
// yields a zero row with v = min_W (alpha c_W - h_W). Throws
// std::invalid_argument on negative u, non-positive alpha or size mismatch.
FpRowSolution SolveFpUpdate(std::span<const double> h, std::span<const double> cost,
                            double u, double alpha);

// Applies SolveFpUpdate to every (commodity, interval) row.
WalkFlow FpUpdate(const WalkFlow& h, const CostMatrix& costs,
                  const std::vector<std::vector<double>>& demand, double alpha,
                  int threads = 1);

// gamma = 1 - ||h_new - h_old|| / ||h_new + h_old||,
// alpha' = gamma (gamma alpha) + (1 - gamma) alpha. Zero flows keep alpha.
double StepSizeUpdate(double alpha, const WalkFlow& h_old, const WalkFlow& h_new,
                      const NormOptions& norm = {});

// All demand on the walk with the smallest free-flow cost (first on ties), or
// spread evenly over the catalog.
WalkFlow InitialFlow(const Network& net, const WalkCatalog& catalog,
                     const TimeGrid& grid, Initialization init);

// ||FpUpdate(h) - h|| for given midpoint costs.
double FixedPointResidual(const WalkFlow& h, const CostMatrix& costs,
                          const std::vector<std::vector<double>>& demand,
                          double alpha, const NormOptions& norm = {});

// Loads h, evaluates midpoint costs and returns the residual.
double FixedPointResidual(const WalkFlow& h, const Network& net,
                          const WalkCatalog& catalog, double alpha,
                          const NormOptions& norm = {});

// Largest relative row-sum mismatch or negative entry of h against demand.
double KViolation(const WalkFlow& h, const std::vector<std::vector<double>>& demand);

// Iterates loading, midpoint costs, FP-Update and the step-size rule. The
// history has one entry for the initial flow (k = 0) and one per update.
// `initial` is required for Initialization::kGiven and ignored otherwise.
EquilibriumResult RunFixedPoint(const Network& net, const WalkCatalog& catalog,
                                const FixedPointConfig& config,
                                const std::optional<WalkFlow>& initial = std::nullopt);

}  // namespace evq

#endif  // EVQ_EQUILIBRIUM_HPP_
