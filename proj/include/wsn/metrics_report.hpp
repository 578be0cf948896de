// SPDX-License-Identifier: Apache-2.0
//
// Lifetime metrics and serialized artifacts: per-round CSV series, seed
// aggregates, summary tables and static SVG plots.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wsn/sim_result.hpp"

namespace wsn {

/// first_dead: first round with alive < n; half_dead: first round with
/// alive <= n/2; all_dead: first round with alive == 0.
/// Throws std::invalid_argument on an empty series.
Summary summarize(const SimResult& result);

struct Stat {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stddev = 0.0;
  /// Number of runs in which the event happened; the moments cover only those.
  int reached = 0;
};

struct ProtocolAggregate {
  std::string protocol;
  int seed_count = 0;
  std::optional<Stat> first_dead;
  std::optional<Stat> half_dead;
  std::optional<Stat> all_dead;
  Stat total_packets;
};

using BatchSummary = std::vector<ProtocolAggregate>;

/// Aggregates runs that share one protocol label.
ProtocolAggregate aggregate(std::span<const SimResult> runs);

/// Orders protocols by mean first_dead, longest stability first. Protocols
/// whose first death was never reached sort ahead of all others.
void sort_by_stability(BatchSummary& batch);

inline constexpr const char* kSeriesCsvHeader =
    "protocol,seed,round,alive,packets_bs,packets_ch,residual_j,ch_count";

void write_series_csv(std::ostream& out, std::span<const SimResult> results);
/// Reads rows written by write_series_csv back into one SimResult per
/// (protocol, seed). `n` is the node count used for re-summarizing.
std::vector<SimResult> read_series_csv(std::istream& in, int n);
void emit_series_csv(std::span<const SimResult> results, const std::filesystem::path& destination);

void write_summary_text(std::ostream& out, const BatchSummary& batch);
void write_summary_csv(std::ostream& out, const BatchSummary& batch);

enum class PlotKind { alive_vs_round, packets_vs_round };

/// Seed-mean curve of one protocol; shorter runs are padded with their final row.
struct PlotSeries {
  std::string protocol;
  std::vector<double> values;
};

PlotSeries mean_curve(std::span<const SimResult> runs, PlotKind kind);

void write_plot_svg(std::ostream& out, std::span<const PlotSeries> series, PlotKind kind);
void emit_plot_svg(std::span<const PlotSeries> series, PlotKind kind,
                   const std::filesystem::path& destination);

}  // namespace wsn
