// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wsn/core_model.hpp"

namespace wsn {

/// Network-wide observables after one round. Packet counters are cumulative.
struct SeriesRow {
  Round round = 0;
  int alive = 0;
  std::uint64_t packets_bs = 0;
  std::uint64_t packets_ch = 0;
  Joules residual_j = 0.0;
  int ch_count = 0;

  friend bool operator==(const SeriesRow&, const SeriesRow&) = default;
};

/// Stability period, half-life and lifetime of one run. Events that never
/// happened before the round cap are nullopt.
struct Summary {
  std::optional<Round> first_dead;
  std::optional<Round> half_dead;
  std::optional<Round> all_dead;
  std::uint64_t total_packets_bs = 0;
  std::uint64_t total_packets_ch = 0;

  friend bool operator==(const Summary&, const Summary&) = default;
};

struct SimResult {
  std::string protocol;
  std::uint64_t seed = 0;
  int n = 0;
  std::vector<SeriesRow> series;
  Summary summary;

  friend bool operator==(const SimResult&, const SimResult&) = default;
};

}  // namespace wsn
