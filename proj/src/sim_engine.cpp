// SPDX-License-Identifier: Apache-2.0

#include "wsn/sim_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "wsn/metrics_report.hpp"

namespace wsn {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: bound must be > 0");
  // Reject the low 2^64 mod bound values so every residue is equally likely.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

ClassQuota class_quota(int n, const HeterogeneityParams& het) {
  ClassQuota q;
  q.normal = static_cast<int>(std::lround(n * (1.0 - het.m)));
  q.super = static_cast<int>(std::lround(n * het.m * het.m0));
  q.advanced = n - q.normal - q.super;
  if (q.advanced < 0) {
    q.super += q.advanced;
    q.advanced = 0;
  }
  return q;
}

void NetworkConfig::validate() const {
  if (n < 1) throw std::invalid_argument("network.nodes must be >= 1");
  if (max_rounds < 1) throw std::invalid_argument("network.max_rounds must be >= 1");
  geometry.validate();
  radio.validate();
  het.validate();
  protocol.validate();
}

std::vector<NodeId> elect(std::span<NodeState> nodes, Round r, Rng& rng,
                          const std::function<double(const NodeState&)>& probability) {
  std::vector<NodeId> heads;
  for (NodeState& node : nodes) {
    if (!node.alive() || !node.eligible_at(r)) continue;
    const double p = probability(node);
    const double u = rng.uniform01();
    if (u < election_threshold(p, r)) {
      heads.push_back(node.id());
      node.set_ineligible_until(r + epoch_length(p));
    }
  }
  return heads;
}

ClusterAssignment form_clusters(std::span<const NodeState> nodes, std::span<const NodeId> ch_ids) {
  std::vector<NodeId> heads(ch_ids.begin(), ch_ids.end());
  std::sort(heads.begin(), heads.end());

  ClusterAssignment out;
  for (const NodeState& node : nodes) {
    if (!node.alive()) continue;
    if (std::binary_search(heads.begin(), heads.end(), node.id())) continue;
    NodeId best = kDirectToBs;
    Meters best_d = 0.0;
    for (NodeId h : heads) {
      const Meters d = distance(node.position(), nodes[h].position());
      if (best == kDirectToBs || d < best_d) {
        best = h;
        best_d = d;
      }
    }
    out.push_back(Assignment{node.id(), best});
  }
  return out;
}

Network Network::initialize(const NetworkConfig& config) {
  config.validate();
  Rng rng(config.seed);

  std::vector<Point> positions;
  positions.reserve(config.n);
  for (int i = 0; i < config.n; ++i) {
    const double x = rng.uniform01() * config.geometry.side_m;
    const double y = rng.uniform01() * config.geometry.side_m;
    positions.push_back(Point{x, y});
  }

  const ClassQuota q = class_quota(config.n, config.het);
  std::vector<NodeClass> classes;
  classes.reserve(config.n);
  classes.insert(classes.end(), q.normal, NodeClass::normal);
  classes.insert(classes.end(), q.advanced, NodeClass::advanced);
  classes.insert(classes.end(), q.super, NodeClass::super);
  for (std::size_t i = classes.size(); i > 1; --i) {
    std::swap(classes[i - 1], classes[rng.below(i)]);
  }

  std::vector<NodeState> nodes;
  nodes.reserve(config.n);
  for (int i = 0; i < config.n; ++i) {
    nodes.emplace_back(static_cast<NodeId>(i), positions[i], classes[i],
                       config.het.initial_energy(classes[i]));
  }
  Network net(config, std::move(nodes));
  net.rng_ = rng;
  return net;
}

Network::Network(NetworkConfig config, std::vector<NodeState> nodes)
    : config_(std::move(config)), nodes_(std::move(nodes)), rng_(config_.seed) {
  config_.validate();
  if (static_cast<int>(nodes_.size()) != config_.n) {
    throw std::invalid_argument("node count does not match network.nodes");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id() != i) throw std::invalid_argument("node ids must equal their index");
  }
  estimate_ = EnergyEstimate::compute(config_.n, config_.geometry, config_.radio, config_.het);
}

int Network::alive_count() const noexcept {
  return static_cast<int>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const NodeState& s) { return s.alive(); }));
}

Joules Network::total_residual() const noexcept {
  Joules sum = 0.0;
  for (const NodeState& s : nodes_) sum += s.residual_energy();
  return sum;
}

Joules Network::average_energy(Round r) const {
  if (config_.protocol.avg_energy_mode == AvgEnergyMode::true_mean) {
    return std::max(total_residual() / config_.n, kAverageEnergyFloor);
  }
  return estimate_.avg_energy_at(r);
}

std::vector<NodeId> Network::elect_cluster_heads(Round r) {
  if (r >= config_.max_rounds) throw std::logic_error("round index beyond max_rounds");
  const Joules avg = average_energy(r);
  return elect(nodes_, r, rng_, [&](const NodeState& node) {
    return ch_probability(node, avg, config_.het, config_.protocol);
  });
}

ClusterAssignment Network::form_clusters(std::span<const NodeId> ch_ids) const {
  return wsn::form_clusters(nodes_, ch_ids);
}

RoundOutcome Network::steady_state(Round r, std::vector<NodeId> ch_ids,
                                   ClusterAssignment assignment) {
  const RadioParams& radio = config_.radio;
  const std::uint32_t bits = radio.message_bits;
  const Point bs = config_.geometry.bs_position;

  RoundOutcome out;
  out.round = r;

  auto charge = [&](NodeId id, Joules cost) {
    out.charged_j += cost;
    out.overdraft_j += nodes_[id].deduct(cost);
  };

  std::vector<std::uint32_t> members(nodes_.size(), 0);
  for (const Assignment& a : assignment) {
    const NodeState& node = nodes_[a.node];
    if (a.target == kDirectToBs) {
      charge(a.node, tx_energy(bits, distance(node.position(), bs), radio));
      ++out.packets_to_bs;
    } else {
      charge(a.node, tx_energy(bits, distance(node.position(), nodes_[a.target].position()), radio));
      ++members[a.target];
      ++out.packets_to_ch;
    }
  }

  for (NodeId h : ch_ids) {
    const std::uint32_t k = members[h];
    for (std::uint32_t i = 0; i < k; ++i) charge(h, rx_energy(bits, radio));
    charge(h, aggregation_energy(bits, k + 1, radio));
    charge(h, tx_energy(bits, distance(nodes_[h].position(), bs), radio));
    ++out.packets_to_bs;
  }

  out.ch_ids = std::move(ch_ids);
  out.cluster_assignment = std::move(assignment);
  out.alive_after = alive_count();
  out.total_residual_after = total_residual();
  return out;
}

RoundOutcome Network::step() {
  const Round r = next_round_;
  std::vector<NodeId> heads = elect_cluster_heads(r);
  ClusterAssignment assignment = form_clusters(heads);
  RoundOutcome out = steady_state(r, std::move(heads), std::move(assignment));
  ++next_round_;
  return out;
}

SimResult run(const NetworkConfig& config, const RoundObserver& observer) {
  Network net = Network::initialize(config);

  SimResult result;
  result.protocol = std::string(to_string(config.protocol.kind));
  result.seed = config.seed;
  result.n = config.n;

  SeriesRow row;
  while (net.next_round() < config.max_rounds && net.alive_count() > 0) {
    const RoundOutcome outcome = net.step();
    if (observer) observer(outcome, net);
    row.round = outcome.round;
    row.alive = outcome.alive_after;
    row.packets_bs += outcome.packets_to_bs;
    row.packets_ch += outcome.packets_to_ch;
    row.residual_j = outcome.total_residual_after;
    row.ch_count = static_cast<int>(outcome.ch_ids.size());
    result.series.push_back(row);
  }
  result.summary = summarize(result);
  return result;
}

}  // namespace wsn
