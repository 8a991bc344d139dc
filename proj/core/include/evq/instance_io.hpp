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

#ifndef EVQ_INSTANCE_IO_HPP_
#define EVQ_INSTANCE_IO_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "evq/equilibrium.hpp"
#include "evq/netmodel.hpp"

namespace evq {

// A base network together with its charging stations, as stored on disk.
struct Instance {
  std::string name;
  Network base;
  std::vector<ChargingStationSpec> stations;
  GadgetOptions gadget;

  Network Build() const { return BuildBatteryExtendedNetwork(base, stations, gadget); }
};

// JSON document:
//   {"name": ..., "nodes": [ids],
//    "edges": [{"id", "tail", "head", "tau", "nu" (null = uncapacitated),
//               "b" (default for all commodities)}],
//    "commodities": [{"id", "source", "sink", "inflow": [[t0, t1, rate]],
//                     "b_init", "b_max", "p_max" (null = unbounded),
//                     "aggregation": {"lambda": x} | {"lambda_tilde": x}}],
//    "edge_attrs": {commodity: {edge: {"b", "p"}}},
//    "stations": [{"node", "options": [{"mode", "tau", "price", "recharge" |
//                  "full_recharge", "nu", "commodities"}]}],
//    "return_epsilon": 1e-6}
// Throws ParseError with the offending location.
Instance ParseInstance(const std::string& text);
Instance LoadInstance(const std::filesystem::path& path);
std::string SerializeInstance(const Instance& instance);
void SaveInstance(const Instance& instance, const std::filesystem::path& path);

struct RunConfig {
  FixedPointConfig solver;
  // Walk-flow CSV used with Initialization::kGiven.
  std::optional<std::filesystem::path> init_file;
};

// JSON document with optional keys epsilon, alpha0, N (or intervals),
// horizon, max_iters, time_limit_s, initialization, init_file,
// termination_mode, norm, norm_weights ("interval" | "unit"), threads, audit.
RunConfig ParseRunConfig(const std::string& text);
RunConfig LoadRunConfig(const std::filesystem::path& path);

std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace evq

#endif  // EVQ_INSTANCE_IO_HPP_
