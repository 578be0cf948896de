// SPDX-License-Identifier: Apache-2.0
//
// Experiment specification files and the protocol x seed matrix runner.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wsn/metrics_report.hpp"
#include "wsn/sim_engine.hpp"

namespace wsn {

/// Process exit codes of the CLI.
enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitIo = 2 };

/// Parse or validation failure in an experiment spec. The message names the
/// offending line and/or field.
class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Seed for replication `index` of a batch: the splitmix64 finalizer applied
/// to base + (index + 1) * 0x9E3779B97F4A7C15 (mod 2^64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

struct SeedPlan {
  std::vector<std::uint64_t> list;
  std::optional<std::uint64_t> base;
  int count = 0;

  bool empty() const noexcept { return list.empty() && (!base || count <= 0); }
  std::vector<std::uint64_t> seeds() const;
};

struct EmitFlags {
  bool csv = true;
  bool svg = true;
  bool summary = true;
};

EmitFlags parse_emit_flags(std::string_view list);

RadioParams radio_profile(std::string_view name);

struct ExperimentSpec {
  NetworkConfig network;
  std::string radio_profile = "table1-verbatim";
  /// Radio keys set explicitly in the file; applied on top of the profile.
  std::vector<std::pair<std::string, double>> radio_overrides;
  std::vector<ProtocolConfig> protocols;
  SeedPlan seeds;
  std::filesystem::path output_dir = "wsnsim-out";
  EmitFlags emit;

  /// Recomputes network.radio from the profile and the explicit overrides.
  void resolve_radio();
  /// Switches profile and discards the file's explicit radio keys.
  void set_profile(std::string_view name);
  /// Keeps the shared protocol parameters, replacing the list of kinds.
  void set_protocol_kinds(std::string_view list);
  void set_seed_count(int count);

  /// Throws SpecError naming the offending field.
  void validate() const;
};

/// Parses INI-style text: `[section]` headers, `key = value` lines, `#` or
/// `;` comments. Unknown sections or keys are errors.
ExperimentSpec parse_spec(std::string_view text, const std::string& source_name = "<spec>");
ExperimentSpec load_spec(const std::filesystem::path& path);

/// Every run of the matrix, grouped per protocol in spec order, seeds in plan order.
struct ExperimentResult {
  std::vector<std::vector<SimResult>> runs;
  BatchSummary summary;
};

/// Runs every (protocol, seed) pair on up to `threads` workers (0 picks the
/// hardware concurrency). The result does not depend on the thread count.
ExperimentResult run_matrix(const ExperimentSpec& spec, unsigned threads = 0);

std::string series_file_name(std::string_view protocol);

/// Runs the matrix and writes the artifacts into spec.output_dir. Returns
/// an ExitCode; on failure no artifact written by this call is left behind.
int run_experiment(const ExperimentSpec& spec, std::ostream& log, unsigned threads = 0);

}  // namespace wsn
