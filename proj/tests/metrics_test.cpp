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
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "evq/equilibrium.hpp"
#include "evq/loading.hpp"
#include "evq/metrics.hpp"
#include "evq/walks.hpp"
#include "test_util.hpp"

namespace evq {
namespace {

using testing::Demand;
using testing::ExampleOne;
using testing::Link;

WalkFlow OneInterval(std::vector<double> values) {
  WalkFlow h(TimeGrid{1.0, 1}, {values.size()});
  for (std::size_t w = 0; w < values.size(); ++w) h.at(0, w, 0) = values[w];
  return h;
}

WalkCatalog CatalogWithEnergy(const std::vector<std::vector<double>>& energy) {
  WalkCatalog cat;
  for (std::size_t c = 0; c < energy.size(); ++c) {
    CommodityCatalog cc;
    cc.commodity = static_cast<CommodityId>(c);
    for (double b : energy[c]) {
      Walk w;
      w.commodity = cc.commodity;
      w.energy_consumption = b;
      cc.walks.push_back(w);
    }
    cat.commodities.push_back(cc);
  }
  return cat;
}

TEST(QopiTest, HandComputedExcess) {
  const WalkFlow h = OneInterval({1.0, 0.0});
  const CostMatrix c = OneInterval({2.0, 1.0});
  const std::vector<double> volume = {1.0};
  EXPECT_DOUBLE_EQ(Qopi(h, c, volume, QopiMode::kRelative), 1.0);
  EXPECT_DOUBLE_EQ(Qopi(h, c, std::vector<double>{4.0}, QopiMode::kRelative), 0.25);
  EXPECT_DOUBLE_EQ(Qopi(h, c, std::vector<double>{4.0}, QopiMode::kAbsolute), 1.0);
  EXPECT_DOUBLE_EQ(Qopi(h, c, std::vector<double>{0.0}, QopiMode::kRelative), 0.0);
}

TEST(QopiTest, ZeroOnMinimumCostWalks) {
  const WalkFlow h = OneInterval({0.4, 0.6, 0.0});
  const CostMatrix c = OneInterval({3.0, 3.0, 5.0});
  EXPECT_EQ(Qopi(h, c, std::vector<double>{1.0}, QopiMode::kRelative), 0.0);
}

TEST(QopiTest, TrapezoidOverMidpoints) {
  // Integrand 0 at t = 0.5 and 1 at t = 1.5 on [0, 2]:
  // 0 * 0.5 + (0 + 1) / 2 * 1 + 1 * 0.5 = 1.
  WalkFlow h(TimeGrid{2.0, 2}, {2});
  CostMatrix c(TimeGrid{2.0, 2}, {2});
  h.at(0, 0, 0) = 1.0;
  h.at(0, 0, 1) = 1.0;
  c.at(0, 0, 0) = 1.0;
  c.at(0, 1, 0) = 1.0;
  c.at(0, 0, 1) = 2.0;
  c.at(0, 1, 1) = 1.0;
  EXPECT_DOUBLE_EQ(Qopi(h, c, std::vector<double>{1.0}, QopiMode::kAbsolute), 1.0);
  EXPECT_EQ(QopiIntegrand(h, c, 0), (std::vector<double>{0.0, 1.0}));
}

TEST(QopiTest, AbsoluteScalesWithVolume) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> d(0.1, 5.0);
  WalkFlow h(TimeGrid{5.0, 7}, {3, 2});
  CostMatrix c(TimeGrid{5.0, 7}, {3, 2});
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t w = 0; w < h.num_walks(k); ++w) {
      for (int j = 0; j < 7; ++j) {
        h.at(k, w, j) = d(rng);
        c.at(k, w, j) = d(rng);
      }
    }
  }
  const std::vector<double> unit = {1.0, 1.0};
  EXPECT_NEAR(Qopi(h, c, unit, QopiMode::kAbsolute), Qopi(h, c, unit, QopiMode::kRelative),
              1e-12);
  const std::vector<double> vol = {2.0, 2.0};
  EXPECT_NEAR(Qopi(h, c, vol, QopiMode::kAbsolute), 2.0 * Qopi(h, c, vol, QopiMode::kRelative),
              1e-12);
}

TEST(QopiTest, RejectsNonPositiveCosts) {
  EXPECT_THROW(Qopi(OneInterval({1.0}), OneInterval({0.0}), std::vector<double>{1.0},
                    QopiMode::kRelative),
               std::domain_error);
}

TEST(DeltaHTest, AbsoluteAndRelative) {
  const DeltaH d = ComputeDeltaH(OneInterval({1.0, 1.0}), OneInterval({2.0, 0.0}));
  EXPECT_DOUBLE_EQ(d.absolute, 2.0);
  EXPECT_DOUBLE_EQ(d.relative, 1.0);
  const DeltaH z = ComputeDeltaH(OneInterval({0.0}), OneInterval({1.0}));
  EXPECT_EQ(z.relative, std::numeric_limits<double>::infinity());
  EXPECT_EQ(ComputeDeltaH(OneInterval({0.0}), OneInterval({0.0})).relative, 0.0);
  NormOptions l2;
  l2.kind = NormOptions::Kind::kL2;
  EXPECT_DOUBLE_EQ(ComputeDeltaH(OneInterval({1.0, 1.0}), OneInterval({2.0, 0.0}), l2).absolute,
                   std::sqrt(2.0));
}

TEST(NormTest, IntervalWeights) {
  WalkFlow h(TimeGrid{10.0, 4}, {1}, 2.0);
  EXPECT_DOUBLE_EQ(Norm(h), 20.0);
  NormOptions unit;
  unit.interval_weights = false;
  EXPECT_DOUBLE_EQ(Norm(h, unit), 8.0);
  NormOptions l2;
  l2.kind = NormOptions::Kind::kL2;
  EXPECT_DOUBLE_EQ(Norm(h, l2), std::sqrt(40.0));
}

TEST(EnergyTest, ProfileOfTwoToOneSplit) {
  const WalkCatalog cat = CatalogWithEnergy({{6.0, 4.0}});
  const TimeSeries eta = EnergyProfile(OneInterval({2.0, 1.0}), cat);
  ASSERT_TRUE(eta.values[0].has_value());
  EXPECT_DOUBLE_EQ(*eta.values[0], 16.0 / 3.0);
  EXPECT_DOUBLE_EQ(*EnergyProfile(OneInterval({0.0, 3.0}), cat).values[0], 4.0);
  EXPECT_FALSE(EnergyProfile(OneInterval({0.0, 0.0}), cat).values[0].has_value());
}

TEST(EnergyTest, ProfileSumsCommodityMeans) {
  const WalkCatalog cat = CatalogWithEnergy({{1.0, 5.0}, {2.0, 3.0, 7.0}});
  WalkFlow h(TimeGrid{3.0, 3}, {2, 3});
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> d(0.0, 2.0);
  for (int j = 0; j < 3; ++j) {
    for (std::size_t w = 0; w < 2; ++w) h.at(0, w, j) = d(rng);
    for (std::size_t w = 0; w < 3; ++w) h.at(1, w, j) = j == 1 ? 0.0 : d(rng);
  }
  const TimeSeries eta = EnergyProfile(h, cat);
  for (int j = 0; j < 3; ++j) {
    double expected = 0.0;
    for (std::size_t c = 0; c < 2; ++c) {
      const auto mean = EnergyStats(h, cat, c).mean.values[static_cast<std::size_t>(j)];
      if (mean) expected += *mean;
    }
    EXPECT_NEAR(*eta.values[static_cast<std::size_t>(j)], expected, 1e-12);
  }
}

TEST(EnergyTest, StatsIgnoreUnusedWalks) {
  const WalkCatalog cat = CatalogWithEnergy({{6.0, 4.0, 9.0}});
  const EnergyStatsSeries s = EnergyStats(OneInterval({2.0, 1.0, 0.0}), cat, 0);
  EXPECT_DOUBLE_EQ(*s.min.values[0], 4.0);
  EXPECT_DOUBLE_EQ(*s.max.values[0], 6.0);
  EXPECT_DOUBLE_EQ(*s.mean.values[0], 16.0 / 3.0);
  const EnergyStatsSeries one = EnergyStats(OneInterval({0.0, 0.0, 1.0}), cat, 0);
  EXPECT_EQ(*one.min.values[0], 9.0);
  EXPECT_EQ(*one.max.values[0], 9.0);
}

TEST(EnergyTest, RechargingRaisesProfileOnExampleOne) {
  const Network net = ExampleOne('c');
  const WalkCatalog cat = EnumerateAllFeasibleWalks(net);
  double recharge = 0.0, plain = 0.0;
  for (const Walk& w : cat.walks(0)) {
    double& slot =
        FormatEdgeSequence(net, w.edges).find("charge") != std::string::npos ? recharge : plain;
    slot = std::max(slot, w.energy_consumption);
  }
  EXPECT_GT(recharge, plain);
}

TEST(TravelTimeTest, StatsOverUsedWalks) {
  Network net;
  net.AddNode("s");
  net.AddNode("t");
  Link(net, "fast", 0, 1, 1.0, 10.0);
  Link(net, "slow", 0, 1, 3.0, 10.0);
  net.AddCommodity(Demand("a", 0, 1, 1.0, 1.0));
  net.AddCommodity(Demand("b", 0, 1, 1.0, 1.0));
  const WalkCatalog cat = EnumerateAllFeasibleWalks(net);
  WalkFlow h(TimeGrid{1.0, 1}, cat.WalkCounts());
  h.at(0, 0, 0) = 0.5;
  h.at(0, 1, 0) = 0.5;
  h.at(1, 0, 0) = 1.0;
  const LoadingResult loading = NetworkLoading(net, cat, h);
  const TravelTimeSeries t = TravelTimeStats(loading, h, cat);
  EXPECT_DOUBLE_EQ(*t.min.values[0], 1.0);
  EXPECT_DOUBLE_EQ(*t.max.values[0], 3.0);
  EXPECT_DOUBLE_EQ(*t.mean.values[0], 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(*t.mean_of_min.values[0], 1.0);
  EXPECT_DOUBLE_EQ(*t.mean_of_max.values[0], 2.0);
}

}  // namespace
}  // namespace evq
