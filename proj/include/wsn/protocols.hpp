// SPDX-License-Identifier: Apache-2.0
//
// Election mathematics of the DEEC protocol family: the a-priori lifetime
// estimators, the rotating election threshold, and the per-protocol
// cluster-head probability functions.

#pragma once

#include <optional>
#include <string_view>

#include "wsn/core_model.hpp"

namespace wsn {

/// Three-class heterogeneous population. A fraction `m` of the nodes are
/// advanced-or-super, and a fraction `m0` of those are super. Advanced nodes
/// start with e0*(1+a), super nodes with e0*(1+b).
struct HeterogeneityParams {
  double m = 0.8;
  double m0 = 0.6;
  double a = 2.0;
  double b = 3.5;
  Joules e0 = 0.5;

  /// 1 + m*(a + m0*b): the total energy relative to an all-normal network.
  double energy_factor() const noexcept { return 1.0 + m * (a + m0 * b); }
  /// n*e0*(1 + m*(a + m0*b)), the a-priori network energy used by the estimators.
  Joules total_energy(int n) const noexcept { return n * e0 + n * e0 * m * (a + m0 * b); }
  Joules initial_energy(NodeClass cls) const noexcept;

  void validate() const;
};

enum class ProtocolKind { deec, ddeec, edeec, eddeec };

std::string_view to_string(ProtocolKind kind) noexcept;
/// Accepts lower or upper case names ("eddeec", "EDDEEC").
std::optional<ProtocolKind> parse_protocol_kind(std::string_view name) noexcept;

enum class AvgEnergyMode { estimated, true_mean };

std::string_view to_string(AvgEnergyMode mode) noexcept;
std::optional<AvgEnergyMode> parse_avg_energy_mode(std::string_view name) noexcept;

struct ProtocolConfig {
  ProtocolKind kind = ProtocolKind::eddeec;
  double p_opt = 0.1;
  /// Absolute residual threshold as a fraction of e0 (EDDEEC).
  double z = 0.7;
  /// Scale of the sub-threshold probability branch (EDDEEC and DDEEC).
  double c = 0.02;
  /// Threshold fraction used by the DDEEC comparator.
  double z_ddeec = 0.7;
  AvgEnergyMode avg_energy_mode = AvgEnergyMode::estimated;

  void validate() const;
};

/// Largest probability handed to the election threshold.
inline constexpr double kMaxProbability = 0.99;
/// Floor applied to the linear average-energy estimate once it reaches zero.
inline constexpr Joules kAverageEnergyFloor = 1e-6;

struct ExpectedDistances {
  Meters to_ch = 0.0;
  Meters to_bs = 0.0;
};

ExpectedDistances expected_distances(Meters side_m, double k);

Joules energy_per_round(int n, double k, const FieldGeometry& geometry,
                        const RadioParams& radio);

/// Real-valued optimum cluster count; callers round it when an integer k is needed.
double optimal_cluster_count(int n, Meters side_m, const RadioParams& radio, Meters d_to_bs);

Joules estimate_average_energy(Round r, int n, Joules e_total, double r_lifetime);

/// A-priori energy budget of a network: total energy, per-round dissipation,
/// estimated lifetime R = e_total / e_round and the linear average Ē(r).
struct EnergyEstimate {
  int n = 0;
  Joules e_total = 0.0;
  Joules e_round = 0.0;
  double r_lifetime = 0.0;
  double k_opt = 0.0;
  int k_used = 1;

  Joules avg_energy_at(Round r) const {
    return estimate_average_energy(r, n, e_total, r_lifetime);
  }

  static EnergyEstimate compute(int n, const FieldGeometry& geometry, const RadioParams& radio,
                                Joules e_total);
  static EnergyEstimate compute(int n, const FieldGeometry& geometry, const RadioParams& radio,
                                const HeterogeneityParams& het) {
    return compute(n, geometry, radio, het.total_energy(n));
  }
};

Joules absolute_threshold(double z, Joules e0);

/// Probability that `node` wants to serve as cluster head this round,
/// clamped to (0, kMaxProbability]. Throws std::logic_error for a dead
/// node or a non-positive average energy.
double ch_probability(const NodeState& node, Joules avg_energy, const HeterogeneityParams& het,
                      const ProtocolConfig& cfg);

/// Same as ch_probability without the final clamp.
double raw_ch_probability(const NodeState& node, Joules avg_energy,
                          const HeterogeneityParams& het, const ProtocolConfig& cfg);

/// Integer epoch length round(1/p), never below 1.
Round epoch_length(double p);

/// p / (1 - p * (r mod round(1/p))), saturated at 1.
double election_threshold(double p, Round r);

}  // namespace wsn
