// SPDX-License-Identifier: Apache-2.0

#include "wsn/protocols.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wsn {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return out;
}

// Class weight applied to p_opt*E/D above any absolute threshold.
double class_weight(NodeClass cls, const HeterogeneityParams& het, bool super_as_advanced) {
  switch (cls) {
    case NodeClass::normal:
      return 1.0;
    case NodeClass::advanced:
      return 1.0 + het.a;
    case NodeClass::super:
      return super_as_advanced ? 1.0 + het.a : 1.0 + het.b;
  }
  return 1.0;
}

}  // namespace

Joules HeterogeneityParams::initial_energy(NodeClass cls) const noexcept {
  switch (cls) {
    case NodeClass::normal:
      return e0;
    case NodeClass::advanced:
      return e0 * (1.0 + a);
    case NodeClass::super:
      return e0 * (1.0 + b);
  }
  return e0;
}

void HeterogeneityParams::validate() const {
  if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("heterogeneity.m must lie in [0,1]");
  if (!(m0 >= 0.0 && m0 <= 1.0)) throw std::invalid_argument("heterogeneity.m0 must lie in [0,1]");
  if (!(a >= 0.0)) throw std::invalid_argument("heterogeneity.a must be >= 0");
  if (!(b >= a)) throw std::invalid_argument("heterogeneity.b must be >= heterogeneity.a");
  if (!(e0 > 0.0)) throw std::invalid_argument("heterogeneity.e0 must be > 0");
}

std::string_view to_string(ProtocolKind kind) noexcept {
  switch (kind) {
    case ProtocolKind::deec:
      return "DEEC";
    case ProtocolKind::ddeec:
      return "DDEEC";
    case ProtocolKind::edeec:
      return "EDEEC";
    case ProtocolKind::eddeec:
      return "EDDEEC";
  }
  return "unknown";
}

std::optional<ProtocolKind> parse_protocol_kind(std::string_view name) noexcept {
  const std::string n = lower(name);
  if (n == "deec") return ProtocolKind::deec;
  if (n == "ddeec") return ProtocolKind::ddeec;
  if (n == "edeec") return ProtocolKind::edeec;
  if (n == "eddeec") return ProtocolKind::eddeec;
  return std::nullopt;
}

std::string_view to_string(AvgEnergyMode mode) noexcept {
  return mode == AvgEnergyMode::estimated ? "estimated" : "true";
}

std::optional<AvgEnergyMode> parse_avg_energy_mode(std::string_view name) noexcept {
  const std::string n = lower(name);
  if (n == "estimated") return AvgEnergyMode::estimated;
  if (n == "true") return AvgEnergyMode::true_mean;
  return std::nullopt;
}

void ProtocolConfig::validate() const {
  if (!(p_opt > 0.0 && p_opt < 1.0)) throw std::invalid_argument("protocol.p_opt must lie in (0,1)");
  if (!(z >= 0.0 && z < 1.0)) throw std::invalid_argument("protocol.z must lie in [0,1)");
  if (!(c > 0.0)) throw std::invalid_argument("protocol.c must be > 0");
  if (!(z_ddeec >= 0.0 && z_ddeec < 1.0)) {
    throw std::invalid_argument("protocol.z_ddeec must lie in [0,1)");
  }
}

ExpectedDistances expected_distances(Meters side_m, double k) {
  if (!(side_m > 0.0)) throw std::invalid_argument("expected_distances: side must be > 0");
  if (!(k >= 1.0)) throw std::invalid_argument("expected_distances: k must be >= 1");
  return ExpectedDistances{side_m / std::sqrt(2.0 * std::numbers::pi * k), 0.765 * side_m / 2.0};
}

Joules energy_per_round(int n, double k, const FieldGeometry& geometry,
                        const RadioParams& radio) {
  if (n <= 0) throw std::invalid_argument("energy_per_round: n must be > 0");
  const ExpectedDistances d = expected_distances(geometry.side_m, k);
  const double nn = n;
  const double to_bs2 = d.to_bs * d.to_bs;
  return radio.message_bits *
         (2.0 * nn * radio.e_elec + nn * radio.e_da + k * radio.eps_mp * to_bs2 * to_bs2 +
          nn * radio.eps_fs * d.to_ch * d.to_ch);
}

double optimal_cluster_count(int n, Meters side_m, const RadioParams& radio, Meters d_to_bs) {
  if (n <= 0) throw std::invalid_argument("optimal_cluster_count: n must be > 0");
  if (!(d_to_bs > 0.0)) throw std::invalid_argument("optimal_cluster_count: d_to_bs must be > 0");
  return std::sqrt(static_cast<double>(n)) / std::sqrt(2.0 * std::numbers::pi) *
         std::sqrt(radio.eps_fs / radio.eps_mp) * side_m / (d_to_bs * d_to_bs);
}

Joules estimate_average_energy(Round r, int n, Joules e_total, double r_lifetime) {
  if (n <= 0) throw std::invalid_argument("estimate_average_energy: n must be > 0");
  if (!(r_lifetime > 0.0)) {
    throw std::invalid_argument("estimate_average_energy: lifetime must be > 0");
  }
  if (r < 0) throw std::invalid_argument("estimate_average_energy: round must be >= 0");
  const Joules avg = e_total / n * (1.0 - static_cast<double>(r) / r_lifetime);
  return std::max(avg, kAverageEnergyFloor);
}

EnergyEstimate EnergyEstimate::compute(int n, const FieldGeometry& geometry,
                                       const RadioParams& radio, Joules e_total) {
  EnergyEstimate est;
  est.n = n;
  est.e_total = e_total;
  const Meters d_to_bs = expected_distances(geometry.side_m, 1.0).to_bs;
  est.k_opt = optimal_cluster_count(n, geometry.side_m, radio, d_to_bs);
  est.k_used = std::max(1, static_cast<int>(std::lround(est.k_opt)));
  est.e_round = energy_per_round(n, est.k_used, geometry, radio);
  est.r_lifetime = est.e_total / est.e_round;
  return est;
}

Joules absolute_threshold(double z, Joules e0) {
  if (!(z >= 0.0 && z < 1.0)) throw std::invalid_argument("absolute_threshold: z must lie in [0,1)");
  if (!(e0 > 0.0)) throw std::invalid_argument("absolute_threshold: e0 must be > 0");
  return z * e0;
}

double raw_ch_probability(const NodeState& node, Joules avg_energy,
                          const HeterogeneityParams& het, const ProtocolConfig& cfg) {
  if (!node.alive()) {
    throw std::logic_error("ch_probability called for dead node " + std::to_string(node.id()));
  }
  if (!(avg_energy > 0.0)) {
    throw std::logic_error("ch_probability called with non-positive average energy");
  }
  const Joules e = node.residual_energy();
  const double base = cfg.p_opt * e / (het.energy_factor() * avg_energy);

  switch (cfg.kind) {
    case ProtocolKind::edeec:
      return class_weight(node.node_class(), het, false) * base;
    case ProtocolKind::eddeec:
      if (e <= absolute_threshold(cfg.z, het.e0)) {
        return cfg.c * (1.0 + het.b) * base;
      }
      return class_weight(node.node_class(), het, false) * base;
    case ProtocolKind::deec:
      return class_weight(node.node_class(), het, true) * base;
    case ProtocolKind::ddeec:
      if (e <= absolute_threshold(cfg.z_ddeec, het.e0)) {
        return cfg.c * (1.0 + het.a) * base;
      }
      return class_weight(node.node_class(), het, true) * base;
  }
  return base;
}

double ch_probability(const NodeState& node, Joules avg_energy, const HeterogeneityParams& het,
                      const ProtocolConfig& cfg) {
  const double p = raw_ch_probability(node, avg_energy, het, cfg);
  if (p > kMaxProbability) return kMaxProbability;
  if (p > 0.0) return p;
  return std::numeric_limits<double>::min();
}

Round epoch_length(double p) {
  if (!(p > 0.0)) throw std::invalid_argument("epoch_length: p must be > 0");
  return std::max<Round>(1, std::llround(1.0 / p));
}

double election_threshold(double p, Round r) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("election_threshold: p must lie in (0,1)");
  const Round phase = r % epoch_length(p);
  const double denom = 1.0 - p * static_cast<double>(phase);
  if (denom <= p) return 1.0;
  return std::min(1.0, p / denom);
}

}  // namespace wsn
