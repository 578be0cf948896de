// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: runs every exit criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "wsn/experiment.hpp"

using namespace wsn;
namespace fs = std::filesystem;

namespace {

// Pinned thresholds.
constexpr int kMinSeeds = 20;
constexpr double kRuntimeBudgetS = 120.0;
constexpr double kStabilityGain = 0.30;    // EDDEEC first-dead over DEEC
constexpr double kLifetimeAgreement = 0.05;  // EDEEC vs EDDEEC all-dead
constexpr double kLifetimeGain = 0.30;     // EDEEC/EDDEEC all-dead over DEEC
constexpr double kMagnitudeBand = 0.50;    // lifetimes vs the published rounds
constexpr double kLedgerRelErr = 1e-9;
constexpr double kThresholdTol = 1e-12;
constexpr double kRotationTol = 0.10;
constexpr int kPropertySamples = 1000;

// Published rounds: first and last node death per protocol.
const std::map<std::string, std::pair<double, double>> kPublished = {
    {"DEEC", {969, 5536}}, {"DDEEC", {1355, 5673}}, {"EDEEC", {1432, 8638}}, {"EDDEEC", {1717, 8638}}};

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::cout << fmt::format("[{}] C{} {}: {}", pass ? "PASS" : "FAIL", id, name, detail) << std::endl;
}

std::map<std::string, ProtocolAggregate> by_protocol(const BatchSummary& batch) {
  std::map<std::string, ProtocolAggregate> out;
  for (const ProtocolAggregate& p : batch) out[p.protocol] = p;
  return out;
}

double mean_or_nan(const std::optional<Stat>& s) { return s ? s->mean : std::nan(""); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  const ExperimentSpec reference = load_spec(WSN_CONFIG_DIR "/paper-sec3.cfg");
  const int seed_count = static_cast<int>(reference.seeds.seeds().size());

  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentResult matrix = run_matrix(reference);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  auto agg = by_protocol(matrix.summary);

  std::cout << fmt::format("reference scenario: {} seeds, radio profile {}, c = {}, {:.1f} s\n", seed_count,
                           reference.radio_profile, reference.protocols.front().c, elapsed);
  write_summary_text(std::cout, matrix.summary);
  std::cout << '\n';

  // C1: stability ordering.
  {
    const double deec = mean_or_nan(agg["DEEC"].first_dead);
    const double ddeec = mean_or_nan(agg["DDEEC"].first_dead);
    const double edeec = mean_or_nan(agg["EDEEC"].first_dead);
    const double eddeec = mean_or_nan(agg["EDDEEC"].first_dead);
    const bool ordered = eddeec > edeec && edeec > ddeec && ddeec > deec;
    const double gain = eddeec / deec - 1.0;
    const bool pass = seed_count >= kMinSeeds && ordered && gain >= kStabilityGain &&
                      elapsed < kRuntimeBudgetS;
    report(1, "first-dead ordering EDDEEC > EDEEC > DDEEC > DEEC, EDDEEC >= DEEC +30%", pass,
           fmt::format("means {:.1f} / {:.1f} / {:.1f} / {:.1f}, ordered={}, gain={:+.1f}%, "
                       "seeds={}, runtime={:.1f}s",
                       eddeec, edeec, ddeec, deec, ordered, 100 * gain, seed_count, elapsed));
  }

  // C2: lifetime agreement and magnitude.
  {
    const double deec = mean_or_nan(agg["DEEC"].all_dead);
    const double edeec = mean_or_nan(agg["EDEEC"].all_dead);
    const double eddeec = mean_or_nan(agg["EDDEEC"].all_dead);
    const double spread = std::abs(eddeec - edeec) / std::min(edeec, eddeec);
    const bool agree = spread <= kLifetimeAgreement;
    const bool exceed = edeec >= (1 + kLifetimeGain) * deec && eddeec >= (1 + kLifetimeGain) * deec;

    auto within_band = [](const std::map<std::string, ProtocolAggregate>& a) {
      for (const auto& [name, rounds] : kPublished) {
        const auto it = a.find(name);
        if (it == a.end()) return false;
        for (const auto& [stat, ref] : {std::pair{it->second.first_dead, rounds.first},
                                        std::pair{it->second.all_dead, rounds.second}}) {
          if (!stat || std::abs(stat->mean / ref - 1.0) > kMagnitudeBand) return false;
        }
      }
      return true;
    };
    ExperimentSpec verbatim = reference;
    verbatim.set_profile("table1-verbatim");
    const auto verbatim_agg = by_protocol(run_matrix(verbatim).summary);
    const bool leach_in_band = within_band(agg);
    const bool verbatim_in_band = within_band(verbatim_agg);
    const bool profile_ok =
        verbatim_in_band ? reference.radio_profile == "table1-verbatim"
                         : (leach_in_band && reference.radio_profile == "leach-standard");

    report(2, "all-dead EDEEC ~ EDDEEC (5%), both >= DEEC +30%, reproduction profile", agree && exceed && profile_ok,
           fmt::format("all-dead EDDEEC {:.1f} EDEEC {:.1f} DEEC {:.1f}, spread={:.1f}%, "
                       "gains {:+.1f}% / {:+.1f}%; table1-verbatim in +-50% band={} "
                       "(EDDEEC first/all {:.1f}/{:.1f}), {} in band={}",
                       eddeec, edeec, deec, 100 * spread, 100 * (edeec / deec - 1),
                       100 * (eddeec / deec - 1), verbatim_in_band,
                       mean_or_nan(verbatim_agg.at("EDDEEC").first_dead),
                       mean_or_nan(verbatim_agg.at("EDDEEC").all_dead), reference.radio_profile,
                       leach_in_band));
  }

  // C3: packets to BS.
  {
    const double deec = agg["DEEC"].total_packets.mean;
    const double edeec = agg["EDEEC"].total_packets.mean;
    const double eddeec = agg["EDDEEC"].total_packets.mean;
    report(3, "packets to BS EDDEEC >= EDEEC >= DEEC", eddeec >= edeec && edeec >= deec,
           fmt::format("means {:.1f} / {:.1f} / {:.1f}", eddeec, edeec, deec));
  }

  const HeterogeneityParams het = reference.network.het;
  std::mt19937_64 gen(0xACCE57);
  const NodeClass classes[] = {NodeClass::normal, NodeClass::advanced, NodeClass::super};

  // C4: reduction identity.
  {
    std::uniform_real_distribution<double> energy(1e-4, 2.25);
    std::uniform_real_distribution<double> avg(1e-6, 2.14);
    std::uniform_int_distribution<int> cls(0, 2);
    ProtocolConfig eddeec = reference.protocols.back();
    eddeec.kind = ProtocolKind::eddeec;
    eddeec.z = 0.0;
    ProtocolConfig edeec = eddeec;
    edeec.kind = ProtocolKind::edeec;
    int mismatches = 0;
    for (int i = 0; i < kPropertySamples; ++i) {
      const NodeState node(0, {0, 0}, classes[cls(gen)], energy(gen));
      const double a = avg(gen);
      if (ch_probability(node, a, het, eddeec) != ch_probability(node, a, het, edeec)) ++mismatches;
    }
    report(4, "EDDEEC(z=0) == EDEEC, tolerance 0", mismatches == 0,
           fmt::format("{} mismatches in {} samples", mismatches, kPropertySamples));
  }

  // C5: sub-threshold equality.
  {
    ProtocolConfig eddeec;
    for (const ProtocolConfig& p : reference.protocols) {
      if (p.kind == ProtocolKind::eddeec) eddeec = p;
    }
    const Joules t_abs = absolute_threshold(eddeec.z, het.e0);
    std::uniform_real_distribution<double> energy(1e-6, t_abs);
    std::uniform_real_distribution<double> avg(1e-6, 2.14);
    int mismatches = 0;
    for (int i = 0; i < kPropertySamples; ++i) {
      const double e = i == 0 ? t_abs : energy(gen);
      const double a = avg(gen);
      const double p0 = ch_probability(NodeState(0, {0, 0}, NodeClass::normal, e), a, het, eddeec);
      for (NodeClass c : classes) {
        if (ch_probability(NodeState(0, {0, 0}, c, e), a, het, eddeec) != p0) ++mismatches;
      }
    }
    report(5, "sub-threshold class independence (E <= 0.35 J), tolerance 0", mismatches == 0,
           fmt::format("T_absolute={} J, {} mismatches in {} samples", t_abs, mismatches,
                       kPropertySamples));
  }

  // C6: ledger closure on a full EDDEEC run.
  {
    NetworkConfig cfg = reference.network;
    for (const ProtocolConfig& p : reference.protocols) {
      if (p.kind == ProtocolKind::eddeec) cfg.protocol = p;
    }
    cfg.seed = reference.seeds.seeds().front();
    double worst = 0.0;
    Round rounds = 0;
    Joules before = 0.0;
    {
      const Network net = Network::initialize(cfg);
      before = net.total_residual();
    }
    const SimResult res = run(cfg, [&](const RoundOutcome& out, const Network& net) {
      const Joules after = net.total_residual();
      const Joules decrease = before - after;
      const double err = std::abs(out.charged_j - (decrease + out.overdraft_j)) / out.charged_j;
      worst = std::max(worst, err);
      before = after;
      ++rounds;
    });
    report(6, "energy ledger closure, rel err <= 1e-9", worst <= kLedgerRelErr && res.summary.all_dead,
           fmt::format("{} rounds, worst relative error {:.3g}", rounds, worst));
  }

  // C7: artifact determinism.
  {
    ExperimentSpec spec = reference;
    const fs::path root = fs::temp_directory_path() / "wsnsim-acceptance";
    fs::remove_all(root);
    std::ostringstream log;
    spec.output_dir = root / "a";
    const int rc_a = run_experiment(spec, log, 1);
    spec.output_dir = root / "b";
    const int rc_b = run_experiment(spec, log, 0);
    int compared = 0, differing = 0;
    if (rc_a == kExitOk && rc_b == kExitOk) {
      for (const auto& e : fs::directory_iterator(root / "a")) {
        const std::string ext = e.path().extension().string();
        if (ext != ".csv" && ext != ".svg") continue;
        ++compared;
        if (slurp(e.path()) != slurp(root / "b" / e.path().filename())) ++differing;
      }
    }
    fs::remove_all(root);
    report(7, "byte-identical CSV and SVG artifacts across executions",
           rc_a == kExitOk && rc_b == kExitOk && compared >= 6 && differing == 0,
           fmt::format("exit codes {}/{}, {} files compared, {} differ", rc_a, rc_b, compared, differing));
  }

  // C8: closed forms.
  {
    const double t_abs = absolute_threshold(0.7, 0.5);
    const double d_bs = expected_distances(100.0, 1.0).to_bs;
    const double e_total = het.total_energy(reference.network.n);
    const double thr = election_threshold(0.1, 9);
    const bool pass = t_abs == 0.35 && d_bs == 38.25 && e_total == 214.0 &&
                      std::abs(thr - 1.0) <= kThresholdTol;
    report(8, "closed forms T_abs, d_toBS, E_total, T(0.1, 9)", pass,
           fmt::format("T_abs={:.17g} d_toBS={:.17g} E_total={:.17g} T={:.17g}", t_abs, d_bs, e_total, thr));
  }

  // C9: epoch rotation.
  {
    std::vector<NodeState> nodes;
    for (NodeId i = 0; i < 100; ++i) nodes.emplace_back(i, Point{0, 0}, NodeClass::normal, 1.0);
    Rng rng(reference.seeds.seeds().front());
    std::size_t elections = 0;
    const Round rounds = 1000;  // 1e5 node-rounds
    for (Round r = 0; r < rounds; ++r) {
      elections += elect(nodes, r, rng, [](const NodeState&) { return 0.1; }).size();
    }
    const double rate = static_cast<double>(elections) / (100.0 * rounds);
    report(9, "static p=0.1 elects each node once per 10 rounds (+-10%)",
           std::abs(rate / 0.1 - 1.0) <= kRotationTol,
           fmt::format("{} elections in 1e5 node-rounds, rate {:.5f}", elections, rate));
  }

  std::cout << fmt::format("\n{} of 9 criteria failed\n", failures);
  return failures;
}
