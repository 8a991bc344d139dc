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
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "evq/errors.hpp"
#include "evq/walks.hpp"
#include "oracles/oracles.hpp"
#include "test_util.hpp"

namespace evq {
namespace {

using testing::Demand;
using testing::ExampleOne;
using testing::Link;

std::vector<std::string> Names(const Network& net, const CommodityCatalog& cat) {
  std::vector<std::string> out;
  for (const Walk& w : cat.walks) out.push_back(FormatEdgeSequence(net, w.edges));
  return out;
}

TEST(WalksTest, ExampleOneCounts) {
  EXPECT_EQ(EnumerateFeasibleWalks(ExampleOne('a'), 0).walks.size(), 4u);
  EXPECT_EQ(EnumerateFeasibleWalks(ExampleOne('b'), 0).walks.size(), 3u);
  EXPECT_EQ(EnumerateFeasibleWalks(ExampleOne('c'), 0).walks.size(), 7u);
}

TEST(WalksTest, ExampleOneBDropsFullEnergyWalk) {
  const Network net = ExampleOne('b');
  const auto names = Names(net, EnumerateFeasibleWalks(net, 0));
  EXPECT_EQ(names, (std::vector<std::string>{"e1,e3,e5", "e2,e3,e4", "e2,e3,e5"}));
}

TEST(WalksTest, ExampleOneCRechargeWalks) {
  const Network net = ExampleOne('c');
  const CommodityCatalog cat = EnumerateFeasibleWalks(net, 0);
  const auto names = Names(net, cat);
  EXPECT_NE(std::find(names.begin(), names.end(), "e1,e3,v.m1.charge,v.m1.return,e4"),
            names.end());
  for (const std::string& n : names) {
    // The priced mode exceeds the budget.
    EXPECT_EQ(n.find("m2"), std::string::npos) << n;
  }
  for (const Walk& w : cat.walks) {
    EXPECT_TRUE(CheckEnergyFeasible(w, net.commodities[0]).feasible);
    EXPECT_LE(w.total_price, 6.0);
  }
}

TEST(WalksTest, RechargeWalkEnergyCountsDrivingEdgesOnly) {
  const Network net = ExampleOne('c');
  const auto id = [&](const char* e) { return *net.FindEdge(e); };
  const Walk w = MakeWalk(
      net, 0, {id("e1"), id("e3"), id("v.m1.charge"), id("v.m1.return"), id("e4")});
  EXPECT_DOUBLE_EQ(w.energy_consumption, 8.0);
  EXPECT_DOUBLE_EQ(w.free_flow_time, 1.0 + 1.0 + 1.5 + 1e-6 + 1.0);
  EXPECT_EQ(w.battery_profile, (std::vector<double>{2.0, 2.0, 6.0, 6.0, 2.0}));
  EXPECT_DOUBLE_EQ(w.min_battery(), 2.0);
}

TEST(WalksTest, BatteryProfileCapsAtCapacity) {
  Network net;
  net.AddNode("s");
  net.AddNode("t");
  const EdgeId e = Link(net, "e", 0, 1, 1.0);
  Commodity c = Demand("c", 0, 1, 1.0, 1.0, 5.0);
  c.initial_battery = 4.0;
  net.AddCommodity(c);
  net.attr(0, e).battery_cost = -3.0;
  EXPECT_EQ(BatteryProfile(std::vector<EdgeId>{e}, 0, net), std::vector<double>{5.0});
}

TEST(WalksTest, BatteryProfileRejectsBadSequences) {
  const Network net = ExampleOne('a');
  const auto id = [&](const char* e) { return *net.FindEdge(e); };
  EXPECT_THROW(BatteryProfile(std::vector<EdgeId>{}, 0, net), std::invalid_argument);
  EXPECT_THROW(BatteryProfile(std::vector<EdgeId>{id("e3")}, 0, net),
               std::invalid_argument);
  EXPECT_THROW(BatteryProfile(std::vector<EdgeId>{id("e1"), id("e4")}, 0, net),
               std::invalid_argument);
  EXPECT_THROW(BatteryProfile(std::vector<EdgeId>{99}, 0, net), std::invalid_argument);
}

TEST(WalksTest, FeasibilityVerdictReasons) {
  const Network net = ExampleOne('c');
  const auto id = [&](const char* e) { return *net.FindEdge(e); };
  Commodity com = net.commodities[0];
  const Walk full = MakeWalk(net, 0, {id("e1"), id("e3"), id("e4")});
  const FeasibilityVerdict v = CheckEnergyFeasible(full, com);
  EXPECT_FALSE(v.feasible);
  EXPECT_EQ(v.reason, FeasibilityVerdict::Reason::kBatteryBelowZero);
  EXPECT_EQ(v.position, 2u);

  const Walk priced = MakeWalk(
      net, 0, {id("e1"), id("e3"), id("v.m2.charge"), id("v.m2.return"), id("e4")});
  EXPECT_EQ(CheckEnergyFeasible(priced, com).reason,
            FeasibilityVerdict::Reason::kPriceBudget);
  com.price_budget = 7.0;
  EXPECT_TRUE(CheckEnergyFeasible(priced, com).feasible);
}

TEST(WalksTest, NoFeasibleWalkNamesCommodity) {
  Network net;
  net.AddNode("s");
  net.AddNode("t");
  const EdgeId e = Link(net, "e", 0, 1, 1.0);
  net.AddCommodity(Demand("truck", 0, 1, 1.0, 1.0, 2.0));
  net.attr(0, e).battery_cost = 3.0;
  try {
    EnumerateFeasibleWalks(net, 0);
    FAIL() << "expected NoFeasibleWalkError";
  } catch (const NoFeasibleWalkError& err) {
    EXPECT_EQ(err.commodity(), "truck");
    EXPECT_NE(std::string(err.what()).find("truck"), std::string::npos);
  }
  EXPECT_THROW(EnumerateAllFeasibleWalks(net, {}, 2), NoFeasibleWalkError);
}

TEST(WalksTest, KappaFromPositiveCycle) {
  Network net;
  for (const char* v : {"s", "a", "t"}) net.AddNode(v);
  const EdgeId sa = Link(net, "sa", 0, 1, 1.0);
  const EdgeId as = Link(net, "as", 1, 0, 1.0);
  Link(net, "at", 1, 2, 1.0);
  net.AddCommodity(Demand("c", 0, 2, 1.0, 1.0, 7.0));
  net.attr(0, sa).battery_cost = 1.0;
  net.attr(0, as).battery_cost = 1.0;
  const KappaBound k = VisitBoundKappa(0, net);
  ASSERT_TRUE(k.alpha.has_value());
  EXPECT_DOUBLE_EQ(*k.alpha, 2.0);
  EXPECT_EQ(k.kappa, 4);
  EXPECT_FALSE(k.fallback);
}

TEST(WalksTest, KappaFallsBackWithoutPositiveCycle) {
  const Network net = ExampleOne('c');
  const KappaBound k = VisitBoundKappa(0, net);
  EXPECT_TRUE(k.fallback);
  EXPECT_EQ(k.kappa, 3);
  EXPECT_FALSE(k.warning.empty());
  EnumerationLimits limits;
  limits.kappa_hard_cap = 1;
  EXPECT_EQ(VisitBoundKappa(0, net, limits).kappa, 1);
}

TEST(WalksTest, KappaOverrideIsRecorded) {
  EnumerationLimits limits;
  limits.kappa_override = 2;
  const CommodityCatalog cat = EnumerateFeasibleWalks(ExampleOne('c'), 0, limits);
  EXPECT_EQ(cat.stats.kappa, 2);
  EXPECT_GT(cat.stats.explored_states, 0u);
}

TEST(WalksTest, MaxWalksTruncates) {
  EnumerationLimits limits;
  limits.max_walks = 2;
  const CommodityCatalog cat = EnumerateFeasibleWalks(ExampleOne('a'), 0, limits);
  EXPECT_EQ(cat.walks.size(), 2u);
  EXPECT_TRUE(cat.stats.truncated);
}

// Random graph with cycles, mixed-sign battery costs and a recharge station.
Network RandomBatteryNetwork(unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> cost(-1, 3), coin(0, 2);
  Network base;
  const int n = std::uniform_int_distribution<int>(3, 4)(rng);
  for (int v = 0; v < n; ++v) base.AddNode("n" + std::to_string(v));
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a != b && (b == a + 1 || coin(rng) == 0)) {
        Link(base, "e" + std::to_string(base.num_edges()), a, b, 1.0);
      }
    }
  }
  Commodity c = Demand("c", 0, n - 1, 1.0, 1.0,
                       std::uniform_int_distribution<int>(3, 6)(rng));
  c.initial_battery = c.battery_capacity - coin(rng);
  if (coin(rng) == 0) c.price_budget = 2.0;
  base.AddCommodity(c);
  for (std::size_t e = 0; e < base.num_edges(); ++e) {
    base.attr(0, static_cast<EdgeId>(e)).battery_cost = cost(rng);
  }
  ChargingStationSpec station;
  station.node = 1;
  RechargeOption cheap{"m1", 1.0, 0.0, 2.0, false};
  RechargeOption full{"m2", 1.0, 3.0, 0.0, true};
  station.options = {cheap, full};
  return BuildBatteryExtendedNetwork(base, std::vector<ChargingStationSpec>{station});
}

TEST(WalksTest, MatchesBruteForce) {
  int compared = 0;
  for (unsigned seed = 0; seed < 40; ++seed) {
    SCOPED_TRACE("seed " + std::to_string(seed));
    const Network net = RandomBatteryNetwork(seed);
    for (int kappa : {1, 2}) {
      EnumerationLimits limits;
      limits.kappa_override = kappa;
      const auto expected = oracle::BruteForceWalks(net, 0, kappa, kappa * net.num_nodes());
      if (expected.empty()) {
        EXPECT_THROW(EnumerateFeasibleWalks(net, 0, limits), NoFeasibleWalkError);
        continue;
      }
      const CommodityCatalog cat = EnumerateFeasibleWalks(net, 0, limits);
      std::vector<std::vector<EdgeId>> got;
      for (const Walk& w : cat.walks) got.push_back(w.edges);
      EXPECT_EQ(got, expected);
      ++compared;
    }
  }
  EXPECT_GT(compared, 40);
}

TEST(WalksTest, CycleBoundMatchesOracle) {
  for (unsigned seed = 0; seed < 40; ++seed) {
    SCOPED_TRACE("seed " + std::to_string(seed));
    const Network net = RandomBatteryNetwork(seed);
    const KappaBound k = VisitBoundKappa(0, net);
    const auto alpha = oracle::MinPositiveCycleCost(net, 0);
    ASSERT_EQ(k.alpha.has_value(), alpha.has_value());
    if (alpha) {
      EXPECT_DOUBLE_EQ(*k.alpha, *alpha);
      EXPECT_EQ(k.kappa, static_cast<int>(std::ceil(net.commodities[0].battery_capacity /
                                                    *alpha - 1e-12)));
    }
  }
}

TEST(WalksTest, ExampleOneEnumerationIsFast) {
  const auto start = std::chrono::steady_clock::now();
  for (char v : {'a', 'b', 'c'}) EnumerateAllFeasibleWalks(ExampleOne(v));
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  EXPECT_LT(elapsed.count(), 1.0);
}

}  // namespace
}  // namespace evq
