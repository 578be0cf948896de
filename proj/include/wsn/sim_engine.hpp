// SPDX-License-Identifier: Apache-2.0
//
// Round loop of a clustered sensor network: threshold-based cluster-head
// election, nearest-head cluster formation and one data-delivery cycle per
// round, with every radio action charged against the acting node.

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "wsn/core_model.hpp"
#include "wsn/protocols.hpp"
#include "wsn/sim_result.hpp"

namespace wsn {

/// Per-run random stream. The raw engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; uniform draws are derived from it
/// here rather than through <random> distributions, which are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer on [0, bound).
  std::uint64_t below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

struct ClassQuota {
  int normal = 0;
  int advanced = 0;
  int super = 0;
};

/// Exact class counts n(1-m), n*m*(1-m0), n*m*m0, each rounded to the
/// nearest integer with the advanced count absorbing any remainder.
ClassQuota class_quota(int n, const HeterogeneityParams& het);

struct NetworkConfig {
  int n = 100;
  FieldGeometry geometry;
  RadioParams radio;
  HeterogeneityParams het;
  ProtocolConfig protocol;
  std::uint64_t seed = 1;
  Round max_rounds = 10000;

  void validate() const;
};

inline constexpr NodeId kDirectToBs = std::numeric_limits<NodeId>::max();

struct Assignment {
  NodeId node = 0;
  /// Cluster head id, or kDirectToBs.
  NodeId target = kDirectToBs;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

using ClusterAssignment = std::vector<Assignment>;

struct RoundOutcome {
  Round round = 0;
  std::vector<NodeId> ch_ids;
  ClusterAssignment cluster_assignment;
  std::uint64_t packets_to_bs = 0;
  std::uint64_t packets_to_ch = 0;
  int alive_after = 0;
  Joules total_residual_after = 0.0;
  /// Sum of every cost charged this round.
  Joules charged_j = 0.0;
  /// Part of charged_j absorbed by clamping dying nodes at zero.
  Joules overdraft_j = 0.0;
};

/// Election pass shared by the engine and by tests that drive it with a
/// fixed probability: alive, eligible nodes draw in ascending id order and
/// are elected iff u < election_threshold(p, r).
std::vector<NodeId> elect(std::span<NodeState> nodes, Round r, Rng& rng,
                          const std::function<double(const NodeState&)>& probability);

/// Nearest-head assignment of every alive non-head node; ties go to the
/// lower head id. With no heads every alive node goes direct to the BS.
ClusterAssignment form_clusters(std::span<const NodeState> nodes, std::span<const NodeId> ch_ids);

class Network {
 public:
  /// Places nodes uniformly at random and assigns classes by shuffled quota.
  static Network initialize(const NetworkConfig& config);

  /// Builds a network from explicit nodes (ids must equal their index).
  Network(NetworkConfig config, std::vector<NodeState> nodes);

  const NetworkConfig& config() const noexcept { return config_; }
  const EnergyEstimate& estimate() const noexcept { return estimate_; }
  std::span<const NodeState> nodes() const noexcept { return nodes_; }
  std::span<NodeState> mutable_nodes() noexcept { return nodes_; }
  Round next_round() const noexcept { return next_round_; }

  int alive_count() const noexcept;
  Joules total_residual() const noexcept;

  /// Ē(r) under the configured mode, floored at kAverageEnergyFloor.
  Joules average_energy(Round r) const;

  std::vector<NodeId> elect_cluster_heads(Round r);
  ClusterAssignment form_clusters(std::span<const NodeId> ch_ids) const;
  RoundOutcome steady_state(Round r, std::vector<NodeId> ch_ids, ClusterAssignment assignment);

  /// elect, form, steady_state for the next round.
  RoundOutcome step();

 private:
  NetworkConfig config_;
  EnergyEstimate estimate_;
  std::vector<NodeState> nodes_;
  Rng rng_;
  Round next_round_ = 0;
};

using RoundObserver = std::function<void(const RoundOutcome&, const Network&)>;

/// Runs from round 0 until every node is dead or max_rounds rounds ran.
SimResult run(const NetworkConfig& config, const RoundObserver& observer = {});

}  // namespace wsn
