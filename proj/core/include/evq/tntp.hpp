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

#ifndef EVQ_TNTP_HPP_
#define EVQ_TNTP_HPP_

#include <string>
#include <vector>

#include "evq/instance_io.hpp"

namespace evq {

struct TntpLink {
  int init_node = 0;
  int term_node = 0;
  double capacity = 0.0;
  double free_flow_time = 0.0;
};

struct TntpNetwork {
  int num_zones = 0;
  int num_nodes = 0;
  int first_thru_node = 1;
  std::vector<TntpLink> links;
};

// Reads the metadata block and the link table of a TNTP "_net" file. Columns
// are located through the "~" header line when present and fall back to the
// standard order (init, term, capacity, length, free_flow_time, ...).
TntpNetwork ParseTntpNetwork(const std::string& text);

struct TntpImportOptions {
  double capacity_scale = 1.0;
  // Replaces non-positive free-flow times; 0 rejects them instead.
  double min_transit_time = 0.0;
};

// Nodes are named "1".."n" and edges "<init>-<term>"; the k-th parallel link
// (k >= 2) gets the suffix "#k". `attrs_json` may hold commodities,
// edge_attrs, stations, return_epsilon and "edge_b" (one battery cost for all
// links, or an object keyed by link id); an empty document yields a network
// without energy costs or commodities.
Instance ImportTntp(const TntpNetwork& tntp, const std::string& attrs_json,
                    const TntpImportOptions& options = {});

}  // namespace evq

#endif  // EVQ_TNTP_HPP_
