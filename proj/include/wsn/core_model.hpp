// SPDX-License-Identifier: Apache-2.0
//
// Physical model shared by every clustering protocol: node state, field
// geometry and the first-order radio energy costs.

#pragma once

#include <cstdint>
#include <string_view>

namespace wsn {

using Joules = double;
using Meters = double;
using Round = std::int64_t;
using NodeId = std::uint32_t;

struct Point {
  Meters x = 0.0;
  Meters y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

Meters distance(Point p, Point q) noexcept;

enum class NodeClass : std::uint8_t { normal, advanced, super };

std::string_view to_string(NodeClass cls) noexcept;

/// First-order radio constants. All values are SI: joules per bit,
/// joules per bit per m^2 (free space), joules per bit per m^4 (multipath).
struct RadioParams {
  double e_elec = 50e-9;
  double eps_fs = 10e-9;
  double eps_mp = 0.0013e-12;
  double e_da = 5e-9;
  Meters d0 = 70.0;
  std::uint32_t message_bits = 4000;

  /// Table values exactly as printed (free-space amplifier in nJ).
  static RadioParams table1_verbatim() noexcept;
  /// Same table with the free-space amplifier in pJ, as in the LEACH line of work.
  static RadioParams leach_standard() noexcept;

  /// Throws std::invalid_argument naming the first non-positive field.
  void validate() const;
};

struct FieldGeometry {
  Meters side_m = 100.0;
  Point bs_position{50.0, 50.0};

  static FieldGeometry centered(Meters side) noexcept {
    return FieldGeometry{side, Point{side / 2.0, side / 2.0}};
  }

  void validate() const;
};

/// One sensor node. The class is fixed at construction; energy only ever
/// goes down, and a node is alive exactly while its residual energy is > 0.
class NodeState {
 public:
  NodeState(NodeId id, Point position, NodeClass cls, Joules initial_energy);

  NodeId id() const noexcept { return id_; }
  Point position() const noexcept { return position_; }
  NodeClass node_class() const noexcept { return class_; }
  Joules initial_energy() const noexcept { return initial_energy_; }
  Joules residual_energy() const noexcept { return residual_energy_; }
  bool alive() const noexcept { return residual_energy_ > 0.0; }

  /// First round at which the node may again be elected cluster head.
  Round ineligible_until() const noexcept { return ineligible_until_; }
  void set_ineligible_until(Round r) noexcept { ineligible_until_ = r; }
  bool eligible_at(Round r) const noexcept { return r >= ineligible_until_; }

  /// Charges `cost` and returns the part of it that could not be paid
  /// (the overdraft absorbed by clamping at zero).
  Joules deduct(Joules cost);

 private:
  NodeId id_;
  Point position_;
  NodeClass class_;
  Joules initial_energy_;
  Joules residual_energy_;
  Round ineligible_until_ = 0;
};

/// Value-returning form of NodeState::deduct.
NodeState deduct(NodeState node, Joules cost);

Joules tx_energy(std::uint32_t bits, Meters d, const RadioParams& radio);
Joules rx_energy(std::uint32_t bits, const RadioParams& radio);
/// Cost of fusing `signals` L-bit signals at a cluster head.
Joules aggregation_energy(std::uint32_t bits, std::uint32_t signals, const RadioParams& radio);

}  // namespace wsn
