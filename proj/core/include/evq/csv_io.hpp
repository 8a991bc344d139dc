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

#ifndef EVQ_CSV_IO_HPP_
#define EVQ_CSV_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "evq/equilibrium.hpp"
#include "evq/loading.hpp"
#include "evq/metrics.hpp"
#include "evq/netmodel.hpp"
#include "evq/walk_flow.hpp"
#include "evq/walks.hpp"

namespace evq {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column; throws ParseError when absent.
  std::size_t Column(const std::string& name) const;
};

// RFC 4180 subset: comma separated, fields with commas, quotes or line breaks
// are quoted.
std::string FormatCsv(const CsvTable& table);
CsvTable ParseCsv(const std::string& text);

// Shortest text that parses back to the same double ("%.17g"); NaN is
// written as an empty field.
std::string FormatDouble(double x);
double ParseDouble(const std::string& field);

void WriteTextFile(const std::filesystem::path& path, const std::string& text);

// k, delta_h_abs, delta_h_rel, qopi, qopi_abs, alpha, wall_time. With
// zero_wall_time the last column is written as 0 so that repeated runs
// produce identical files.
CsvTable ConvergenceTable(const std::vector<IterationStats>& history,
                          bool zero_wall_time = false);
std::vector<IterationStats> ParseConvergenceTable(const CsvTable& table);

// commodity, walk_index, interval, <value_column>
CsvTable WalkIntervalTableCsv(const WalkIntervalTable& table, const Network& net,
                              const std::string& value_column);
// Rebuilds a table on `grid` for the catalog shape; every cell must appear.
WalkIntervalTable ParseWalkIntervalTableCsv(const CsvTable& csv, const Network& net,
                                            const TimeGrid& grid,
                                            const std::vector<std::size_t>& walk_counts,
                                            const std::string& value_column);

// time, <names...>; absent samples are empty fields.
CsvTable TimeSeriesTable(const std::vector<std::string>& names,
                         const std::vector<const TimeSeries*>& series);
std::vector<TimeSeries> ParseTimeSeriesTable(const CsvTable& table);

// walk_index, edge_sequence (ids joined by ';'), free_flow_time, total_price,
// min_battery, energy_consumption
CsvTable CatalogTable(const Network& net, const CommodityCatalog& catalog);

// commodity, walks, kappa, kappa_fallback, truncated, explored_states and
// pruning counters.
CsvTable CatalogSummaryTable(const Network& net, const WalkCatalog& catalog);

// edge_id, theta, F_plus, F_minus, q at every queue breakpoint.
CsvTable LoadingDumpTable(const Network& net, const LoadingResult& loading);

}  // namespace evq

#endif  // EVQ_CSV_IO_HPP_
