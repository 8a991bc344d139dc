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

#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "evq/csv_io.hpp"
#include "evq/equilibrium.hpp"
#include "evq/errors.hpp"
#include "evq/instance_io.hpp"
#include "evq/metrics.hpp"
#include "evq/tntp.hpp"
#include "evq/walks.hpp"
#include "json.hpp"

namespace evq::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string UtcTimestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

std::string FileSafe(std::string s) {
  for (char& ch : s) {
    if (ch == '/' || ch == '\\' || ch == ' ' || ch == ':') ch = '_';
  }
  return s;
}

// Loads and builds the instance; prints diagnostics and returns nullopt on
// any problem.
std::optional<Network> LoadNetwork(const fs::path& path, std::ostream& err) {
  Network net;
  try {
    net = LoadInstance(path).Build();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return std::nullopt;
  }
  const auto diagnostics = ValidateNetwork(net);
  for (const auto& d : diagnostics) {
    err << "error: " << DiagnosticKindName(d.kind) << ": " << d.message << "\n";
  }
  if (!diagnostics.empty()) return std::nullopt;
  return net;
}

void WriteCatalogs(const Network& net, const WalkCatalog& catalog, const fs::path& dir) {
  for (const auto& cc : catalog.commodities) {
    const auto& id = net.commodities[static_cast<std::size_t>(cc.commodity)].id;
    WriteTextFile(dir / ("walks_" + FileSafe(id) + ".csv"), FormatCsv(CatalogTable(net, cc)));
  }
  WriteTextFile(dir / "walks_summary.csv", FormatCsv(CatalogSummaryTable(net, catalog)));
}

void WriteJson(const fs::path& path, const json& doc) { WriteTextFile(path, doc.dump(2) + "\n"); }

Initialization ParseInit(const std::string& name) {
  if (name == "shortest") return Initialization::kShortest;
  if (name == "uniform") return Initialization::kUniform;
  return Initialization::kGiven;
}

RunConfig ResolveConfig(const SolveOptions& o) {
  RunConfig cfg = o.config ? LoadRunConfig(*o.config) : RunConfig{};
  FixedPointConfig& s = cfg.solver;
  if (const char* env = std::getenv("EVQ_THREADS"); env != nullptr && *env != '\0') {
    try {
      s.threads = std::stoi(env);
    } catch (const std::exception&) {
      throw ParseError(std::string("EVQ_THREADS: not an integer: ") + env);
    }
  }
  if (o.epsilon) s.epsilon = *o.epsilon;
  if (o.alpha0) s.alpha0 = *o.alpha0;
  if (o.intervals) s.intervals = *o.intervals;
  if (o.max_iters) s.max_iters = *o.max_iters;
  if (o.time_limit_s) s.time_limit_s = *o.time_limit_s;
  if (o.init) s.initialization = ParseInit(*o.init);
  if (o.init_file) cfg.init_file = *o.init_file;
  if (o.norm) s.norm.kind = *o.norm == "l2" ? NormOptions::Kind::kL2 : NormOptions::Kind::kL1;
  if (o.termination) {
    s.termination = *o.termination == "rel" ? TerminationMode::kRelative : TerminationMode::kAbsolute;
  }
  if (o.threads) s.threads = *o.threads;
  if (o.audit) s.audit = true;

  if (!(s.epsilon > 0.0)) throw ParseError("epsilon must be positive");
  if (!(s.alpha0 > 0.0)) throw ParseError("alpha0 must be positive");
  if (s.intervals < 1) throw ParseError("intervals must be at least 1");
  if (s.max_iters < 0) throw ParseError("max-iters must be non-negative");
  if (s.threads < 1) throw ParseError("threads must be at least 1");
  if (s.initialization == Initialization::kGiven && !cfg.init_file) {
    throw ParseError("initialization 'file' needs --init-file or config init_file");
  }
  return cfg;
}

json ConfigJson(const RunConfig& cfg) {
  const FixedPointConfig& s = cfg.solver;
  json doc = {{"epsilon", s.epsilon},
              {"alpha0", s.alpha0},
              {"N", s.intervals},
              {"horizon", s.horizon},
              {"max_iters", s.max_iters},
              {"time_limit_s", std::isfinite(s.time_limit_s) ? json(s.time_limit_s) : json()},
              {"initialization", InitializationName(s.initialization)},
              {"termination_mode", TerminationModeName(s.termination)},
              {"norm", s.norm.kind == NormOptions::Kind::kL2 ? "l2" : "l1"},
              {"norm_weights", s.norm.interval_weights ? "interval" : "unit"},
              {"threads", s.threads},
              {"audit", s.audit}};
  if (cfg.init_file) doc["init_file"] = cfg.init_file->string();
  return doc;
}

void WriteResults(const Network& net, const WalkCatalog& catalog, const EquilibriumResult& r,
                  const SolveOptions& o, const fs::path& dir) {
  WriteTextFile(dir / "convergence.csv",
                FormatCsv(ConvergenceTable(r.history, o.deterministic)));
  WriteTextFile(dir / "walk_flows.csv", FormatCsv(WalkIntervalTableCsv(r.flow, net, "rate")));
  WriteTextFile(dir / "costs.csv", FormatCsv(WalkIntervalTableCsv(r.costs, net, "cost")));

  const TimeSeries eta = EnergyProfile(r.flow, catalog);
  WriteTextFile(dir / "energy_profile.csv", FormatCsv(TimeSeriesTable({"eta"}, {&eta})));
  for (std::size_t c = 0; c < net.num_commodities(); ++c) {
    const auto stats = EnergyStats(r.flow, catalog, c);
    WriteTextFile(dir / ("energy_stats_" + FileSafe(net.commodities[c].id) + ".csv"),
                  FormatCsv(TimeSeriesTable({"min", "max", "mean"},
                                            {&stats.min, &stats.max, &stats.mean})));
  }
  const auto tt = TravelTimeStats(r.loading, r.flow, catalog);
  WriteTextFile(dir / "travel_times.csv",
                FormatCsv(TimeSeriesTable({"min", "max", "mean", "mean_of_min", "mean_of_max"},
                                          {&tt.min, &tt.max, &tt.mean, &tt.mean_of_min,
                                           &tt.mean_of_max})));
  if (o.dump_loading) {
    WriteTextFile(dir / "loading.csv", FormatCsv(LoadingDumpTable(net, r.loading)));
  }
}

}  // namespace

fs::path CreateUniqueDirectory(const fs::path& base) {
  if (!base.parent_path().empty()) fs::create_directories(base.parent_path());
  fs::path candidate = base;
  for (int n = 1;; ++n) {
    if (fs::create_directory(candidate)) return candidate;
    candidate = base;
    candidate += "-" + std::to_string(n);
  }
}

int CmdEnumerate(const EnumerateOptions& options, std::ostream& out, std::ostream& err) {
  const auto net = LoadNetwork(options.instance, err);
  if (!net) return kExitError;
  EnumerationLimits limits;
  limits.kappa_override = options.kappa;
  limits.max_walks = options.max_walks;
  WalkCatalog catalog;
  try {
    catalog = EnumerateAllFeasibleWalks(*net, limits);
  } catch (const NoFeasibleWalkError& e) {
    err << "error: commodity '" << e.commodity() << "': no feasible walk could be found\n";
    return kExitError;
  }
  const bool single = net->num_commodities() == 1;
  for (const auto& cc : catalog.commodities) {
    const auto& id = net->commodities[static_cast<std::size_t>(cc.commodity)].id;
    if (!single) out << id << ": ";
    out << cc.walks.size() << " walks";
    if (cc.stats.truncated) out << " (truncated)";
    out << "\n";
    if (options.list) {
      for (const auto& w : cc.walks) out << "  " << FormatEdgeSequence(*net, w.edges) << "\n";
    }
  }
  if (options.out) {
    fs::create_directories(*options.out);
    WriteCatalogs(*net, catalog, *options.out);
  }
  return kExitOk;
}

int CmdSolve(const SolveOptions& options, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  try {
    cfg = ResolveConfig(options);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  const auto net = LoadNetwork(options.instance, err);
  if (!net) return kExitError;

  fs::path dir;
  json manifest;
  try {
    dir = CreateUniqueDirectory(options.out);
    manifest = {{"instance", options.instance.string()},
                {"config", options.config ? json(options.config->string()) : json()},
                {"output_dir", dir.string()},
                {"deterministic", options.deterministic},
                {"tool_version", kToolVersion},
                {"timestamp", UtcTimestamp()},
                {"settings", ConfigJson(cfg)},
                {"status", "running"}};
    WriteJson(dir / "manifest.json", manifest);
  } catch (const std::exception& e) {
    err << "error: cannot prepare output directory: " << e.what() << "\n";
    return kExitError;
  }
  if (!options.quiet) out << "output: " << dir.string() << "\n";

  auto fail = [&](const std::string& message) {
    err << "error: " << message << "\n";
    manifest["status"] = "error";
    manifest["error"] = message;
    WriteJson(dir / "manifest.json", manifest);
    return kExitError;
  };

  try {
    const WalkCatalog catalog = EnumerateAllFeasibleWalks(*net, {}, cfg.solver.threads);
    WriteCatalogs(*net, catalog, dir);
    std::optional<WalkFlow> initial;
    if (cfg.solver.initialization == Initialization::kGiven) {
      const CsvTable table = ParseCsv(ReadTextFile(*cfg.init_file));
      initial = ParseWalkIntervalTableCsv(table, *net, MakeTimeGrid(*net, cfg.solver),
                                          catalog.WalkCounts(), "rate");
      ValidateWalkFlow(*net, catalog, *initial);
    }
    const EquilibriumResult result = RunFixedPoint(*net, catalog, cfg.solver, initial);
    WriteResults(*net, catalog, result, options, dir);

    const IterationStats& last = result.history.back();
    manifest["status"] = "finished";
    manifest["termination"] = TerminationReasonName(result.reason);
    manifest["iterations"] = last.k;
    manifest["final_qopi"] = last.qopi;
    manifest["final_delta_h_abs"] = std::isnan(last.delta_h_abs) ? json() : json(last.delta_h_abs);
    manifest["walks"] = catalog.TotalWalks();
    manifest["max_k_violation"] = result.max_k_violation;
    if (cfg.solver.audit) manifest["max_audit_violation"] = result.max_audit_violation;
    WriteJson(dir / "manifest.json", manifest);

    if (!options.quiet) {
      out << TerminationReasonName(result.reason) << " after " << last.k
          << " iterations, QoPI " << last.qopi << "\n";
    }
    return result.converged() ? kExitOk : kExitResourceLimit;
  } catch (const NoFeasibleWalkError& e) {
    return fail("commodity '" + e.commodity() + "': no feasible walk could be found");
  } catch (const std::exception& e) {
    return fail(e.what());
  }
}

int CmdImportTntp(const ImportTntpOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const TntpNetwork tntp = ParseTntpNetwork(ReadTextFile(options.net));
    const std::string attrs = options.attrs ? ReadTextFile(*options.attrs) : std::string();
    TntpImportOptions import;
    import.capacity_scale = options.capacity_scale;
    import.min_transit_time = options.min_transit_time;
    const Instance instance = ImportTntp(tntp, attrs, import);
    SaveInstance(instance, options.out);
    out << instance.base.num_nodes() << " nodes, " << instance.base.num_edges() << " edges, "
        << instance.base.num_commodities() << " commodities\n";
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic equilibria for electric vehicles with battery constraints", "evq"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  EnumerateOptions en;
  auto* enumerate = app.add_subcommand("enumerate", "List the energy-feasible walks");
  enumerate->add_option("--instance", en.instance, "Instance JSON")->required();
  enumerate->add_option("--out", en.out, "Directory for catalog CSVs");
  enumerate->add_option("--kappa", en.kappa, "Per-node visit bound");
  enumerate->add_option("--max-walks", en.max_walks, "Stop after this many walks");
  enumerate->add_flag("--list", en.list, "Print every walk");

  SolveOptions so;
  auto* solve = app.add_subcommand("solve", "Compute an approximate dynamic equilibrium");
  solve->add_option("--instance", so.instance, "Instance JSON")->required();
  solve->add_option("--config", so.config, "Run configuration JSON");
  solve->add_option("--out", so.out, "Output directory (a suffix is added if taken)");
  solve->add_option("--epsilon", so.epsilon, "Termination threshold");
  solve->add_option("--alpha0", so.alpha0, "Initial step size");
  solve->add_option("--intervals", so.intervals, "Number of time intervals N");
  solve->add_option("--max-iters", so.max_iters, "Iteration cap");
  solve->add_option("--time-limit-s", so.time_limit_s, "Wall-clock limit in seconds");
  solve->add_option("--init", so.init, "Initial flow")
      ->check(CLI::IsMember({"shortest", "uniform", "file"}));
  solve->add_option("--init-file", so.init_file, "walk_flows.csv used with --init file");
  solve->add_option("--norm", so.norm, "Norm for the walk-flow change")
      ->check(CLI::IsMember({"l2", "l1"}));
  solve->add_option("--termination", so.termination, "Absolute or relative change")
      ->check(CLI::IsMember({"abs", "rel"}));
  solve->add_option("--threads", so.threads, "Worker threads (default: EVQ_THREADS or 1)");
  solve->add_flag("--audit", so.audit, "Audit every network loading");
  solve->add_flag("--deterministic", so.deterministic, "Write wall_time as 0");
  solve->add_flag("--dump-loading", so.dump_loading, "Write loading.csv");
  solve->add_flag("--quiet", so.quiet, "No progress output");

  ImportTntpOptions im;
  auto* import = app.add_subcommand("import-tntp", "Convert a TNTP network to an instance");
  import->add_option("--net", im.net, "TNTP _net file")->required();
  import->add_option("--attrs", im.attrs, "JSON with commodities, energy and stations");
  import->add_option("--out", im.out, "Instance JSON to write")->required();
  import->add_option("--capacity-scale", im.capacity_scale, "Factor applied to capacities");
  import->add_option("--min-tau", im.min_transit_time,
                     "Replacement for non-positive free-flow times");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = app.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? kExitOk : kExitError;
  }
  if (enumerate->parsed()) return CmdEnumerate(en, out, err);
  if (solve->parsed()) return CmdSolve(so, out, err);
  return CmdImportTntp(im, out, err);
}

}  // namespace evq::cli
