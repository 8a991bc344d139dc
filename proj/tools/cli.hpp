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

#ifndef EVQ_TOOLS_CLI_HPP_
#define EVQ_TOOLS_CLI_HPP_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace evq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitResourceLimit = 2;

inline constexpr const char* kToolVersion = "0.1.0";

struct EnumerateOptions {
  std::filesystem::path instance;
  // Catalog CSVs are written here when set.
  std::optional<std::filesystem::path> out;
  std::optional<int> kappa;
  std::size_t max_walks = 1'000'000;
  bool list = false;
};

struct SolveOptions {
  std::filesystem::path instance;
  std::optional<std::filesystem::path> config;
  std::filesystem::path out = "evq_out";
  // Command-line overrides; unset fields keep the config file value.
  std::optional<double> epsilon;
  std::optional<double> alpha0;
  std::optional<int> intervals;
  std::optional<int> max_iters;
  std::optional<double> time_limit_s;
  std::optional<std::string> init;         // shortest | uniform | file
  std::optional<std::filesystem::path> init_file;
  std::optional<std::string> norm;         // l2 | l1
  std::optional<std::string> termination;  // abs | rel
  std::optional<int> threads;
  bool audit = false;
  bool deterministic = false;
  bool dump_loading = false;
  bool quiet = false;
};

struct ImportTntpOptions {
  std::filesystem::path net;
  std::optional<std::filesystem::path> attrs;
  std::filesystem::path out;
  double capacity_scale = 1.0;
  double min_transit_time = 0.0;
};

int CmdEnumerate(const EnumerateOptions& options, std::ostream& out, std::ostream& err);
int CmdSolve(const SolveOptions& options, std::ostream& out, std::ostream& err);
int CmdImportTntp(const ImportTntpOptions& options, std::ostream& out, std::ostream& err);

// First of `base`, `base-1`, `base-2`, ... that does not exist yet. Creates it.
std::filesystem::path CreateUniqueDirectory(const std::filesystem::path& base);

// Parses argv and dispatches to a subcommand.
int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace evq::cli

#endif  // EVQ_TOOLS_CLI_HPP_
