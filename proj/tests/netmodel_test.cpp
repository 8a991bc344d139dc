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
#include <limits>
#include <string>
#include <vector>

#include "evq/errors.hpp"
#include "evq/netmodel.hpp"
#include "test_util.hpp"

namespace evq {
namespace {

using testing::Demand;
using testing::ExampleOne;
using testing::Link;

bool Has(const std::vector<Diagnostic>& d, Diagnostic::Kind kind) {
  return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.kind == kind; });
}

Network Line() {
  Network net;
  net.AddNode("s");
  net.AddNode("t");
  Link(net, "e", 0, 1, 1.0, 1.0);
  net.AddCommodity(Demand("c", 0, 1, 1.0, 2.0));
  return net;
}

TEST(NetModelTest, LookupsAndAdjacency) {
  const Network net = ExampleOne('a');
  EXPECT_EQ(net.num_nodes(), 4u);
  EXPECT_EQ(net.num_edges(), 5u);
  EXPECT_EQ(net.FindNode("v"), 2);
  EXPECT_FALSE(net.FindNode("x").has_value());
  EXPECT_EQ(net.FindEdge("e5"), 4);
  EXPECT_EQ(net.FindCommodity("1"), 0);
  const auto out = net.OutEdges();
  const auto in = net.InEdges();
  EXPECT_EQ(out[0].size(), 2u);
  EXPECT_EQ(in[3].size(), 2u);
  EXPECT_DOUBLE_EQ(net.InflowHorizon(), 10.0);
}

TEST(NetModelTest, ValidExampleHasNoDiagnostics) {
  for (char v : {'a', 'b', 'c'}) EXPECT_TRUE(ValidateNetwork(ExampleOne(v)).empty()) << v;
}

TEST(NetModelTest, GadgetShape) {
  const Network net = ExampleOne('c');
  ASSERT_EQ(net.gadgets.size(), 2u);
  const GadgetRecord& g = net.gadgets[0];
  EXPECT_EQ(net.node_names[static_cast<std::size_t>(g.aux_node)], "v.m1");
  const Edge& entry = net.edge(g.entry_edge);
  const Edge& ret = net.edge(g.return_edge);
  EXPECT_EQ(entry.id, "v.m1.charge");
  EXPECT_EQ(entry.kind, EdgeKind::kRechargeEntry);
  EXPECT_EQ(entry.tail, *net.FindNode("v"));
  EXPECT_DOUBLE_EQ(entry.transit_time, 1.5);
  EXPECT_DOUBLE_EQ(net.attr(0, g.entry_edge).battery_cost, -6.0);
  EXPECT_EQ(ret.kind, EdgeKind::kRechargeReturn);
  EXPECT_EQ(ret.head, *net.FindNode("v"));
  EXPECT_DOUBLE_EQ(ret.transit_time, 1e-6);
  EXPECT_DOUBLE_EQ(net.attr(0, net.gadgets[1].entry_edge).price, 7.0);
}

TEST(NetModelTest, UncapacitatedEdgesResolveToNonBindingBound) {
  const Network net = ExampleOne('c');
  for (const Edge& e : net.edges) {
    EXPECT_TRUE(std::isfinite(e.capacity)) << e.id;
  }
  // e4 leaves v, which is entered by e3 (capacity 1) and the two return edges.
  EXPECT_GE(net.edge(*net.FindEdge("e4")).capacity, 1.0 + 3.0);
}

TEST(NetModelTest, IncompatibleCommodityCannotRecharge) {
  Network base;
  base.AddNode("s");
  base.AddNode("t");
  Link(base, "e", 0, 1, 1.0);
  base.AddCommodity(Demand("car", 0, 1, 1.0, 1.0));
  base.AddCommodity(Demand("bus", 0, 1, 1.0, 1.0));
  ChargingStationSpec st;
  st.node = 0;
  RechargeOption opt;
  opt.mode_id = "fast";
  opt.recharge = 2.0;
  opt.compatible_commodities = {"bus"};
  st.options = {opt};
  const Network net = BuildBatteryExtendedNetwork(base, std::vector<ChargingStationSpec>{st});
  const EdgeId entry = net.gadgets[0].entry_edge;
  EXPECT_TRUE(std::isinf(net.attr(0, entry).battery_cost));
  EXPECT_DOUBLE_EQ(net.attr(1, entry).battery_cost, -2.0);

  opt.compatible_commodities = {"tram"};
  st.options = {opt};
  EXPECT_THROW(BuildBatteryExtendedNetwork(base, std::vector<ChargingStationSpec>{st}),
               NetworkError);
}

TEST(NetModelTest, GadgetRejectsBadOptions) {
  const Network base = Line();
  ChargingStationSpec st;
  st.node = 0;
  RechargeOption opt;
  opt.mode_id = "m";
  opt.duration = 0.0;
  st.options = {opt};
  EXPECT_THROW(BuildBatteryExtendedNetwork(base, std::vector<ChargingStationSpec>{st}),
               NetworkError);
  st.node = 7;
  st.options = {};
  EXPECT_THROW(BuildBatteryExtendedNetwork(base, std::vector<ChargingStationSpec>{st}),
               NetworkError);
  GadgetOptions bad;
  bad.return_epsilon = 0.0;
  EXPECT_THROW(BuildBatteryExtendedNetwork(base, {}, bad), NetworkError);
}

TEST(NetModelTest, DiagnosticsReportEachProblem) {
  Network net = Line();
  net.edges[0].transit_time = 0.0;
  net.edges[0].capacity = -1.0;
  net.commodities[0].initial_battery = 20.0;
  net.attr(0, 0).price = 1.0;
  const auto d = ValidateNetwork(net);
  EXPECT_TRUE(Has(d, Diagnostic::Kind::kNonPositiveTransitTime));
  EXPECT_TRUE(Has(d, Diagnostic::Kind::kNonPositiveCapacity));
  EXPECT_TRUE(Has(d, Diagnostic::Kind::kBatteryBounds));
  EXPECT_TRUE(Has(d, Diagnostic::Kind::kPriceOnPhysicalEdge));

  Network loop = Line();
  Link(loop, "l", 0, 0, 1.0);
  loop.attr(0, 0).price = -1.0;
  loop.commodities[0].inflow = StepFunction();
  const auto d2 = ValidateNetwork(loop);
  EXPECT_TRUE(Has(d2, Diagnostic::Kind::kSelfLoop));
  EXPECT_TRUE(Has(d2, Diagnostic::Kind::kNegativePrice));
  EXPECT_TRUE(Has(d2, Diagnostic::Kind::kEmptyInflow));
}

TEST(NetModelTest, UnreachableSinkIgnoresClosedEdges) {
  Network net = Line();
  EXPECT_TRUE(ValidateNetwork(net).empty());
  net.attr(0, 0).battery_cost = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(Has(ValidateNetwork(net), Diagnostic::Kind::kUnreachableSink));

  Network reversed = Line();
  reversed.commodities[0].source = 1;
  reversed.commodities[0].sink = 0;
  EXPECT_TRUE(Has(ValidateNetwork(reversed), Diagnostic::Kind::kUnreachableSink));

  Network unknown = Line();
  unknown.commodities[0].sink = 5;
  EXPECT_TRUE(Has(ValidateNetwork(unknown), Diagnostic::Kind::kUnknownNode));
}

TEST(NetModelTest, DiagnosticNames) {
  EXPECT_STREQ(DiagnosticKindName(Diagnostic::Kind::kSelfLoop), "self-loop");
  EXPECT_STREQ(EdgeKindName(EdgeKind::kRechargeEntry), "recharge-entry");
}

TEST(AggregationTest, Variants) {
  EXPECT_DOUBLE_EQ(AggregationSpec::Lambda(2.0).Cost(3.0, 1.0), 7.0);
  EXPECT_DOUBLE_EQ(AggregationSpec::LambdaTilde(2.0).Cost(3.0, 1.0), 5.0);
}

}  // namespace
}  // namespace evq
