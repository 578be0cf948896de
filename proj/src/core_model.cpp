// SPDX-License-Identifier: Apache-2.0

#include "wsn/core_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wsn {

Meters distance(Point p, Point q) noexcept {
  return std::hypot(p.x - q.x, p.y - q.y);
}

std::string_view to_string(NodeClass cls) noexcept {
  switch (cls) {
    case NodeClass::normal:
      return "normal";
    case NodeClass::advanced:
      return "advanced";
    case NodeClass::super:
      return "super";
  }
  return "unknown";
}

RadioParams RadioParams::table1_verbatim() noexcept {
  return RadioParams{};
}

RadioParams RadioParams::leach_standard() noexcept {
  RadioParams radio;
  radio.eps_fs = 10e-12;
  return radio;
}

void RadioParams::validate() const {
  auto require_positive = [](double v, const char* name) {
    if (!(v > 0.0)) {
      throw std::invalid_argument(std::string("radio.") + name + " must be > 0");
    }
  };
  require_positive(e_elec, "e_elec");
  require_positive(eps_fs, "eps_fs");
  require_positive(eps_mp, "eps_mp");
  require_positive(e_da, "e_da");
  require_positive(d0, "d0");
  require_positive(static_cast<double>(message_bits), "message_bits");
}

void FieldGeometry::validate() const {
  if (!(side_m > 0.0)) {
    throw std::invalid_argument("network.field_side_m must be > 0");
  }
  if (!std::isfinite(bs_position.x) || !std::isfinite(bs_position.y)) {
    throw std::invalid_argument("network.bs position must be finite");
  }
}

NodeState::NodeState(NodeId id, Point position, NodeClass cls, Joules initial_energy)
    : id_(id),
      position_(position),
      class_(cls),
      initial_energy_(initial_energy),
      residual_energy_(initial_energy) {
  if (!(initial_energy >= 0.0)) {
    throw std::invalid_argument("initial energy must be non-negative");
  }
}

Joules NodeState::deduct(Joules cost) {
  if (!(cost >= 0.0)) {
    throw std::invalid_argument("energy cost must be non-negative");
  }
  const Joules remaining = residual_energy_ - cost;
  if (remaining <= 0.0) {
    const Joules overdraft = -remaining;
    residual_energy_ = 0.0;
    return overdraft;
  }
  residual_energy_ = remaining;
  return 0.0;
}

NodeState deduct(NodeState node, Joules cost) {
  node.deduct(cost);
  return node;
}

Joules tx_energy(std::uint32_t bits, Meters d, const RadioParams& radio) {
  if (bits == 0) throw std::invalid_argument("tx_energy: bits must be > 0");
  if (!(d >= 0.0)) throw std::invalid_argument("tx_energy: distance must be >= 0");
  const double l = bits;
  if (d < radio.d0) {
    return l * radio.e_elec + l * radio.eps_fs * d * d;
  }
  const double d2 = d * d;
  return l * radio.e_elec + l * radio.eps_mp * d2 * d2;
}

Joules rx_energy(std::uint32_t bits, const RadioParams& radio) {
  if (bits == 0) throw std::invalid_argument("rx_energy: bits must be > 0");
  return static_cast<double>(bits) * radio.e_elec;
}

Joules aggregation_energy(std::uint32_t bits, std::uint32_t signals, const RadioParams& radio) {
  if (bits == 0) throw std::invalid_argument("aggregation_energy: bits must be > 0");
  if (signals == 0) throw std::invalid_argument("aggregation_energy: signals must be >= 1");
  return static_cast<double>(bits) * radio.e_da * static_cast<double>(signals);
}

}  // namespace wsn
