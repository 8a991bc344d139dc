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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "evq/errors.hpp"
#include "evq/instance_io.hpp"
#include "evq/loading.hpp"
#include "oracles/oracles.hpp"

namespace evq {
namespace {

Network SingleEdge(double tau, double nu) {
  Network net;
  net.AddNode("s");
  net.AddNode("t");
  Edge e;
  e.id = "e";
  e.tail = 0;
  e.head = 1;
  e.transit_time = tau;
  e.capacity = nu;
  net.AddEdge(e);
  return net;
}

RouteInput Route(std::vector<EdgeId> edges, StepFunction inflow, std::size_t walk = 0) {
  RouteInput r;
  r.walk = walk;
  r.edges = std::move(edges);
  r.inflow = std::move(inflow);
  return r;
}

TEST(LoadingTest, SingleQueueClosedForm) {
  const Network net = SingleEdge(1.0, 1.0);
  const LoadingResult res = LoadRoutes(net, {Route({0}, StepFunction::Box(0.0, 1.0, 3.0))});
  const EdgeProfile& p = res.edge(0);
  EXPECT_NEAR(p.queue(1.0), 2.0, 1e-12);
  EXPECT_NEAR(res.ExitTime(0, 1.0), 4.0, 1e-12);
  EXPECT_NEAR(p.cumulative_outflow(4.0), 3.0, 1e-12);
  EXPECT_NEAR(p.cumulative_outflow(2.0), 1.0, 1e-12);
  // Queue drains at t = 3 while the last particle still travels.
  EXPECT_NEAR(p.queue(3.0), 0.0, 1e-12);
  EXPECT_NEAR(p.outflow_rate(3.5), 1.0, 1e-12);
  EXPECT_NEAR(p.outflow_rate(4.5), 0.0, 1e-12);
}

TEST(LoadingTest, FreeFlowIsShiftedByTransitTime) {
  const Network net = SingleEdge(2.0, 5.0);
  const LoadingResult res = LoadRoutes(net, {Route({0}, StepFunction::Box(1.0, 3.0, 4.0))});
  EXPECT_DOUBLE_EQ(res.edge(0).queue(2.0), 0.0);
  EXPECT_DOUBLE_EQ(res.edge(0).outflow_rate(3.5), 4.0);
  EXPECT_DOUBLE_EQ(res.edge(0).outflow_rate(2.5), 0.0);
  EXPECT_DOUBLE_EQ(res.ExitTime(0, 0.0), 2.0);
}

TEST(LoadingTest, FifoSplitsOutflowByComposition) {
  const Network net = SingleEdge(1.0, 1.0);
  const LoadingResult res =
      LoadRoutes(net, {Route({0}, StepFunction::Box(0.0, 1.0, 2.0), 0),
                       Route({0}, StepFunction::Box(0.0, 1.0, 1.0), 1)});
  const RouteProfile* a = res.FindRoute(0, 0);
  const RouteProfile* b = res.FindRoute(0, 1);
  ASSERT_NE(a, nullptr);
  ASSERT_NE(b, nullptr);
  EXPECT_NEAR(a->outflow[0](2.0), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(b->outflow[0](2.0), 1.0 / 3.0, 1e-12);
}

TEST(LoadingTest, ZeroInflowRoutesAreDropped) {
  const Network net = SingleEdge(1.0, 1.0);
  const LoadingResult res = LoadRoutes(
      net, {Route({0}, StepFunction(), 0), Route({0}, StepFunction::Box(0.0, 1.0, 1.0), 1)});
  EXPECT_EQ(res.FindRoute(0, 0), nullptr);
  EXPECT_NE(res.FindRoute(0, 1), nullptr);
}

TEST(LoadingTest, MatchesTimeSteppedOracle) {
  for (unsigned seed = 0; seed < 20; ++seed) {
    SCOPED_TRACE("seed " + std::to_string(seed));
    oracle::RandomLoadingCase c = oracle::RandomLoading(seed);
    const LoadingResult exact = LoadRoutes(c.net, c.routes);
    const auto stepped = oracle::SimulateTimeStepped(c.net, c.routes, 0.01, c.max_time);
    EXPECT_LT(oracle::SupGap(exact, stepped), 0.2);
    EXPECT_TRUE(AuditLoading(c.net, exact).Passed());
  }
}

TEST(LoadingTest, OracleGapShrinksLinearly) {
  for (unsigned seed = 100; seed < 105; ++seed) {
    SCOPED_TRACE("seed " + std::to_string(seed));
    oracle::RandomLoadingCase c = oracle::RandomLoading(seed);
    const LoadingResult exact = LoadRoutes(c.net, c.routes);
    const double coarse =
        oracle::SupGap(exact, oracle::SimulateTimeStepped(c.net, c.routes, 0.01, c.max_time));
    const double fine =
        oracle::SupGap(exact, oracle::SimulateTimeStepped(c.net, c.routes, 0.001, c.max_time));
    EXPECT_LE(fine, 0.2 * coarse + 1e-9);
  }
}

TEST(LoadingTest, RejectsDisconnectedRoute) {
  Network net = SingleEdge(1.0, 1.0);
  Edge extra;
  extra.id = "x";
  extra.tail = 0;
  extra.head = 1;
  net.AddEdge(extra);
  EXPECT_THROW(LoadRoutes(net, {Route({0, 1}, StepFunction::Box(0.0, 1.0, 1.0))}),
               LoadingError);
}

TEST(LoadingTest, ExampleOneBSplitCosts) {
  // Constant 2:1 split onto (e1,e3,e5) and (e2,e3,e4) from time 0.
  const Instance inst = LoadInstance(std::string(EVQ_TEST_DATA_DIR) + "/example1_b.json");
  const Network net = inst.Build();
  auto id = [&](const char* name) { return *net.FindEdge(name); };
  const std::vector<RouteInput> routes = {
      Route({id("e1"), id("e3"), id("e5")}, StepFunction::Box(0.0, 10.0, 2.0), 0),
      Route({id("e2"), id("e3"), id("e4")}, StepFunction::Box(0.0, 10.0, 1.0), 1)};
  const LoadingResult exact = LoadRoutes(net, routes);
  const auto stepped = oracle::SimulateTimeStepped(net, routes, 0.01, 60.0);
  EXPECT_LT(oracle::SupGap(exact, stepped), 0.1);
}

}  // namespace
}  // namespace evq
