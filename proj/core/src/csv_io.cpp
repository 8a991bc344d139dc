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

#include "evq/csv_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>

#include "evq/errors.hpp"

namespace evq {
namespace {

bool NeedsQuotes(const std::string& s) {
  return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string Quote(const std::string& s) {
  if (!NeedsQuotes(s)) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string Optional(const std::optional<double>& v) {
  return v ? FormatDouble(*v) : std::string();
}

std::size_t ParseIndex(const std::string& field, const std::string& what) {
  char* end = nullptr;
  const long long v = std::strtoll(field.c_str(), &end, 10);
  if (field.empty() || *end != '\0' || v < 0) {
    throw ParseError("csv: bad " + what + " '" + field + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

std::size_t CsvTable::Column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw ParseError("csv: missing column '" + name + "'");
}

std::string FormatCsv(const CsvTable& table) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (k > 0) out += ',';
      out += Quote(fields[k]);
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

CsvTable ParseCsv(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      any = true;
    } else if (ch == ',') {
      fields.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (ch == '\n' || ch == '\r') {
      if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (any || !field.empty()) {
        fields.push_back(std::move(field));
        lines.push_back(std::move(fields));
      }
      fields.clear();
      field.clear();
      any = false;
    } else {
      field += ch;
      any = true;
    }
  }
  if (quoted) throw ParseError("csv: unterminated quoted field");
  if (any || !field.empty()) {
    fields.push_back(std::move(field));
    lines.push_back(std::move(fields));
  }
  if (lines.empty()) throw ParseError("csv: missing header");
  CsvTable table;
  table.header = std::move(lines.front());
  for (std::size_t k = 1; k < lines.size(); ++k) {
    if (lines[k].size() != table.header.size()) {
      throw ParseError("csv: row " + std::to_string(k) + " has " +
                       std::to_string(lines[k].size()) + " fields, expected " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(lines[k]));
  }
  return table;
}

std::string FormatDouble(double x) {
  if (std::isnan(x)) return {};
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // also folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double ParseDouble(const std::string& field) {
  if (field.empty()) return std::nan("");
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (*end != '\0') throw ParseError("csv: bad number '" + field + "'");
  return v;
}

void WriteTextFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

CsvTable ConvergenceTable(const std::vector<IterationStats>& history,
                          bool zero_wall_time) {
  CsvTable t;
  t.header = {"k", "delta_h_abs", "delta_h_rel", "qopi", "qopi_abs", "alpha", "wall_time"};
  for (const IterationStats& s : history) {
    t.rows.push_back({std::to_string(s.k), FormatDouble(s.delta_h_abs),
                      FormatDouble(s.delta_h_rel), FormatDouble(s.qopi),
                      FormatDouble(s.qopi_abs), FormatDouble(s.alpha),
                      FormatDouble(zero_wall_time ? 0.0 : s.wall_time)});
  }
  return t;
}

std::vector<IterationStats> ParseConvergenceTable(const CsvTable& table) {
  const std::size_t k = table.Column("k");
  const std::size_t da = table.Column("delta_h_abs");
  const std::size_t dr = table.Column("delta_h_rel");
  const std::size_t q = table.Column("qopi");
  const std::size_t qa = table.Column("qopi_abs");
  const std::size_t a = table.Column("alpha");
  const std::size_t w = table.Column("wall_time");
  std::vector<IterationStats> out;
  for (const auto& r : table.rows) {
    IterationStats s;
    s.k = static_cast<int>(ParseIndex(r[k], "iteration"));
    s.delta_h_abs = ParseDouble(r[da]);
    s.delta_h_rel = ParseDouble(r[dr]);
    s.qopi = ParseDouble(r[q]);
    s.qopi_abs = ParseDouble(r[qa]);
    s.alpha = ParseDouble(r[a]);
    s.wall_time = ParseDouble(r[w]);
    out.push_back(s);
  }
  return out;
}

CsvTable WalkIntervalTableCsv(const WalkIntervalTable& table, const Network& net,
                              const std::string& value_column) {
  CsvTable t;
  t.header = {"commodity", "walk_index", "interval", value_column};
  for (std::size_t c = 0; c < table.num_commodities(); ++c) {
    for (std::size_t w = 0; w < table.num_walks(c); ++w) {
      for (int j = 0; j < table.intervals(); ++j) {
        t.rows.push_back({net.commodities[c].id, std::to_string(w), std::to_string(j),
                          FormatDouble(table.at(c, w, j))});
      }
    }
  }
  return t;
}

WalkIntervalTable ParseWalkIntervalTableCsv(const CsvTable& csv, const Network& net,
                                            const TimeGrid& grid,
                                            const std::vector<std::size_t>& walk_counts,
                                            const std::string& value_column) {
  const std::size_t ci = csv.Column("commodity");
  const std::size_t wi = csv.Column("walk_index");
  const std::size_t ji = csv.Column("interval");
  const std::size_t vi = csv.Column(value_column);
  WalkIntervalTable out(grid, walk_counts);
  std::vector<std::vector<bool>> seen(walk_counts.size());
  for (std::size_t c = 0; c < walk_counts.size(); ++c) {
    seen[c].assign(walk_counts[c] * static_cast<std::size_t>(grid.intervals), false);
  }
  for (const auto& r : csv.rows) {
    const auto c = net.FindCommodity(r[ci]);
    if (!c) throw ParseError("csv: unknown commodity '" + r[ci] + "'");
    const auto cc = static_cast<std::size_t>(*c);
    const std::size_t w = ParseIndex(r[wi], "walk index");
    const std::size_t j = ParseIndex(r[ji], "interval");
    if (w >= walk_counts[cc] || j >= static_cast<std::size_t>(grid.intervals)) {
      throw ParseError("csv: cell (" + r[ci] + ", " + r[wi] + ", " + r[ji] +
                       ") outside the catalog/grid");
    }
    out.at(cc, w, static_cast<int>(j)) = ParseDouble(r[vi]);
    seen[cc][j * walk_counts[cc] + w] = true;
  }
  for (std::size_t c = 0; c < seen.size(); ++c) {
    for (bool s : seen[c]) {
      if (!s) throw ParseError("csv: missing cells for commodity '" + net.commodities[c].id + "'");
    }
  }
  return out;
}

CsvTable TimeSeriesTable(const std::vector<std::string>& names,
                         const std::vector<const TimeSeries*>& series) {
  if (names.size() != series.size() || series.empty()) {
    throw std::invalid_argument("TimeSeriesTable: names and series differ");
  }
  CsvTable t;
  t.header.push_back("time");
  t.header.insert(t.header.end(), names.begin(), names.end());
  for (std::size_t k = 0; k < series.front()->size(); ++k) {
    std::vector<std::string> row{FormatDouble(series.front()->times[k])};
    for (const TimeSeries* s : series) row.push_back(Optional(s->values[k]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<TimeSeries> ParseTimeSeriesTable(const CsvTable& table) {
  const std::size_t time = table.Column("time");
  std::vector<TimeSeries> out(table.header.size() - 1);
  for (const auto& r : table.rows) {
    const double t = ParseDouble(r[time]);
    std::size_t s = 0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (k == time) continue;
      out[s].times.push_back(t);
      if (r[k].empty()) {
        out[s].values.push_back(std::nullopt);
      } else {
        out[s].values.push_back(ParseDouble(r[k]));
      }
      ++s;
    }
  }
  return out;
}

CsvTable CatalogTable(const Network& net, const CommodityCatalog& catalog) {
  CsvTable t;
  t.header = {"walk_index",  "edge_sequence", "free_flow_time",
              "total_price", "min_battery",   "energy_consumption"};
  for (std::size_t w = 0; w < catalog.walks.size(); ++w) {
    const Walk& walk = catalog.walks[w];
    std::string seq;
    for (std::size_t j = 0; j < walk.edges.size(); ++j) {
      if (j > 0) seq += ';';
      seq += net.edge(walk.edges[j]).id;
    }
    t.rows.push_back({std::to_string(w), seq, FormatDouble(walk.free_flow_time),
                      FormatDouble(walk.total_price), FormatDouble(walk.min_battery()),
                      FormatDouble(walk.energy_consumption)});
  }
  return t;
}

CsvTable CatalogSummaryTable(const Network& net, const WalkCatalog& catalog) {
  CsvTable t;
  t.header = {"commodity",      "walks",          "kappa",
              "kappa_fallback", "truncated",      "explored_states",
              "pruned_battery", "pruned_budget",  "pruned_dominance",
              "pruned_visits",  "pruned_length"};
  for (std::size_t c = 0; c < catalog.num_commodities(); ++c) {
    const auto& cat = catalog.commodities[c];
    const EnumerationStats& s = cat.stats;
    t.rows.push_back({net.commodities[c].id, std::to_string(cat.walks.size()),
                      std::to_string(s.kappa), s.kappa_fallback ? "1" : "0",
                      s.truncated ? "1" : "0", std::to_string(s.explored_states),
                      std::to_string(s.pruned_battery), std::to_string(s.pruned_budget),
                      std::to_string(s.pruned_dominance), std::to_string(s.pruned_visits),
                      std::to_string(s.pruned_length)});
  }
  return t;
}

CsvTable LoadingDumpTable(const Network& net, const LoadingResult& loading) {
  CsvTable t;
  t.header = {"edge_id", "theta", "F_plus", "F_minus", "q"};
  for (std::size_t e = 0; e < net.num_edges(); ++e) {
    const EdgeProfile& p = loading.edges()[e];
    const auto bps = p.queue.breakpoints();
    for (std::size_t k = 0; k < bps.size(); ++k) {
      const double theta = bps[k];
      t.rows.push_back({net.edges[e].id, FormatDouble(theta),
                        FormatDouble(p.cumulative_inflow(theta)),
                        FormatDouble(p.cumulative_outflow(theta)),
                        FormatDouble(p.queue.values()[k])});
    }
  }
  return t;
}

}  // namespace evq
