// SPDX-License-Identifier: Apache-2.0

#include "wsn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

namespace wsn {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = std::min(s.find(',', start), s.size());
    const std::string_view item = trim(s.substr(start, end - start));
    if (!item.empty()) out.emplace_back(item);
    start = end + 1;
  }
  return out;
}

struct Entry {
  std::string value;
  int line = 0;
};

std::string where(const std::string& source, int line, const std::string& field) {
  return fmt::format("{}:{}: {}", source, line, field);
}

double to_double(const Entry& e, const std::string& field, const std::string& source) {
  // strtod honours the C locale; the spec format is fixed to '.' decimals.
  std::istringstream is(e.value);
  is.imbue(std::locale::classic());
  double v = 0.0;
  if (!(is >> v) || !(is >> std::ws).eof()) {
    throw SpecError(where(source, e.line, field) + ": expected a number, got '" + e.value + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& text, int line, const std::string& field,
                     const std::string& source) {
  std::uint64_t v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw SpecError(where(source, line, field) + ": expected a non-negative integer, got '" +
                    text + "'");
  }
  return v;
}

long long to_int(const Entry& e, const std::string& field, const std::string& source) {
  long long v = 0;
  const char* first = e.value.data();
  const char* last = e.value.data() + e.value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw SpecError(where(source, e.line, field) + ": expected an integer, got '" + e.value + "'");
  }
  return v;
}

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys = {
      {"network", {"nodes", "field_side_m", "bs_x", "bs_y", "max_rounds"}},
      {"radio", {"profile", "e_elec", "eps_fs", "eps_mp", "e_da", "d0", "message_bits"}},
      {"heterogeneity", {"m", "m0", "a", "b", "e0"}},
      {"protocol", {"kinds", "p_opt", "z", "c", "z_ddeec", "avg_energy"}},
      {"seeds", {"base", "count", "list"}},
      {"output", {"dir", "emit"}},
  };
  return keys;
}

void apply_radio_key(RadioParams& radio, const std::string& key, double v) {
  if (key == "e_elec") radio.e_elec = v;
  else if (key == "eps_fs") radio.eps_fs = v;
  else if (key == "eps_mp") radio.eps_mp = v;
  else if (key == "e_da") radio.e_da = v;
  else if (key == "d0") radio.d0 = v;
  else if (key == "message_bits") {
    if (!(v >= 1.0) || v != static_cast<double>(static_cast<std::uint32_t>(v))) {
      throw SpecError("radio.message_bits: expected a positive integer");
    }
    radio.message_bits = static_cast<std::uint32_t>(v);
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  std::uint64_t z = base + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::uint64_t> SeedPlan::seeds() const {
  if (!list.empty()) return list;
  std::vector<std::uint64_t> out;
  if (!base) return out;
  for (int i = 0; i < count; ++i) out.push_back(derive_seed(*base, static_cast<std::uint64_t>(i)));
  return out;
}

EmitFlags parse_emit_flags(std::string_view list) {
  EmitFlags flags{false, false, false};
  for (const std::string& item : split_list(list)) {
    if (item == "csv") flags.csv = true;
    else if (item == "svg") flags.svg = true;
    else if (item == "summary") flags.summary = true;
    else throw SpecError("output.emit: unknown artifact '" + item + "' (csv, svg, summary)");
  }
  return flags;
}

RadioParams radio_profile(std::string_view name) {
  if (name == "table1-verbatim") return RadioParams::table1_verbatim();
  if (name == "leach-standard") return RadioParams::leach_standard();
  throw SpecError("radio.profile: unknown profile '" + std::string(name) +
                  "' (table1-verbatim, leach-standard)");
}

void ExperimentSpec::resolve_radio() {
  RadioParams radio = wsn::radio_profile(radio_profile);
  for (const auto& [key, value] : radio_overrides) apply_radio_key(radio, key, value);
  network.radio = radio;
}

void ExperimentSpec::set_profile(std::string_view name) {
  radio_profile = std::string(name);
  radio_overrides.clear();
  resolve_radio();
}

void ExperimentSpec::set_protocol_kinds(std::string_view list) {
  const ProtocolConfig shared = protocols.empty() ? ProtocolConfig{} : protocols.front();
  protocols.clear();
  for (const std::string& item : split_list(list)) {
    const auto kind = parse_protocol_kind(item);
    if (!kind) throw SpecError("protocol.kinds: unknown protocol '" + item + "'");
    ProtocolConfig cfg = shared;
    cfg.kind = *kind;
    protocols.push_back(cfg);
  }
}

void ExperimentSpec::set_seed_count(int count) {
  if (count < 1) throw SpecError("seeds.count: must be >= 1");
  if (!seeds.list.empty()) {
    if (static_cast<std::size_t>(count) > seeds.list.size()) {
      throw SpecError("seeds.count: exceeds the explicit seed list");
    }
    seeds.list.resize(static_cast<std::size_t>(count));
    return;
  }
  if (!seeds.base) seeds.base = 1;
  seeds.count = count;
}

void ExperimentSpec::validate() const {
  if (protocols.empty()) throw SpecError("protocol.kinds: at least one protocol is required");
  if (seeds.empty()) throw SpecError("seeds: a seed list or base/count is required");
  if (output_dir.empty()) throw SpecError("output.dir: must not be empty");
  try {
    network.validate();
    for (const ProtocolConfig& p : protocols) p.validate();
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
}

ExperimentSpec parse_spec(std::string_view text, const std::string& source_name) {
  std::map<std::string, Entry> entries;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const std::size_t hash = line.find_first_of("#;"); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw SpecError(where(source_name, line_no, "unterminated section header"));
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (!known_keys().contains(section)) {
        throw SpecError(where(source_name, line_no, "unknown section [" + section + "]"));
      }
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw SpecError(where(source_name, line_no, "expected 'key = value'"));
    }
    if (section.empty()) throw SpecError(where(source_name, line_no, "key outside any section"));
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    const auto& allowed = known_keys().at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw SpecError(where(source_name, line_no, "unknown key '" + section + "." + key + "'"));
    }
    const std::string field = section + "." + key;
    if (entries.contains(field)) throw SpecError(where(source_name, line_no, "duplicate key '" + field + "'"));
    if (value.empty()) throw SpecError(where(source_name, line_no, field + ": empty value"));
    entries.emplace(field, Entry{value, line_no});
  }

  auto get = [&](const std::string& field) -> const Entry* {
    auto it = entries.find(field);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto num = [&](const std::string& field, double& target) {
    if (const Entry* e = get(field)) target = to_double(*e, field, source_name);
  };

  ExperimentSpec spec;
  NetworkConfig& net = spec.network;

  if (const Entry* e = get("network.nodes")) {
    const long long v = to_int(*e, "network.nodes", source_name);
    if (v < 1 || v > 1'000'000) throw SpecError(where(source_name, e->line, "network.nodes") + ": out of range");
    net.n = static_cast<int>(v);
  }
  num("network.field_side_m", net.geometry.side_m);
  net.geometry.bs_position = Point{net.geometry.side_m / 2.0, net.geometry.side_m / 2.0};
  num("network.bs_x", net.geometry.bs_position.x);
  num("network.bs_y", net.geometry.bs_position.y);
  if (const Entry* e = get("network.max_rounds")) {
    net.max_rounds = to_int(*e, "network.max_rounds", source_name);
  }

  if (const Entry* e = get("radio.profile")) spec.radio_profile = e->value;
  for (const char* key : {"e_elec", "eps_fs", "eps_mp", "e_da", "d0", "message_bits"}) {
    const std::string field = std::string("radio.") + key;
    if (const Entry* e = get(field)) {
      spec.radio_overrides.emplace_back(key, to_double(*e, field, source_name));
    }
  }
  try {
    spec.resolve_radio();
  } catch (const SpecError& err) {
    const Entry* e = get("radio.profile");
    throw SpecError(e ? where(source_name, e->line, err.what()) : std::string(err.what()));
  }

  num("heterogeneity.m", net.het.m);
  num("heterogeneity.m0", net.het.m0);
  num("heterogeneity.a", net.het.a);
  num("heterogeneity.b", net.het.b);
  num("heterogeneity.e0", net.het.e0);

  ProtocolConfig shared;
  num("protocol.p_opt", shared.p_opt);
  num("protocol.z", shared.z);
  num("protocol.c", shared.c);
  num("protocol.z_ddeec", shared.z_ddeec);
  if (const Entry* e = get("protocol.avg_energy")) {
    const auto mode = parse_avg_energy_mode(e->value);
    if (!mode) {
      throw SpecError(where(source_name, e->line, "protocol.avg_energy") +
                      ": expected 'estimated' or 'true'");
    }
    shared.avg_energy_mode = *mode;
  }
  spec.protocols = {shared};
  {
    const Entry* e = get("protocol.kinds");
    try {
      spec.set_protocol_kinds(e ? e->value : "deec,ddeec,edeec,eddeec");
    } catch (const SpecError& err) {
      throw SpecError(where(source_name, e->line, err.what()));
    }
  }
  net.protocol = spec.protocols.front();

  if (const Entry* e = get("seeds.list")) {
    for (const std::string& s : split_list(e->value)) {
      spec.seeds.list.push_back(to_u64(s, e->line, "seeds.list", source_name));
    }
    if (get("seeds.base") || get("seeds.count")) {
      throw SpecError(where(source_name, e->line, "seeds.list") + ": cannot be combined with base/count");
    }
  }
  if (const Entry* e = get("seeds.base")) spec.seeds.base = to_u64(e->value, e->line, "seeds.base", source_name);
  if (const Entry* e = get("seeds.count")) {
    const long long v = to_int(*e, "seeds.count", source_name);
    if (v < 1 || v > 1'000'000) throw SpecError(where(source_name, e->line, "seeds.count") + ": out of range");
    spec.seeds.count = static_cast<int>(v);
    if (!spec.seeds.base) spec.seeds.base = 1;
  }

  if (const Entry* e = get("output.dir")) spec.output_dir = e->value;
  if (const Entry* e = get("output.emit")) {
    try {
      spec.emit = parse_emit_flags(e->value);
    } catch (const SpecError& err) {
      throw SpecError(where(source_name, e->line, err.what()));
    }
  }

  spec.validate();
  return spec;
}

ExperimentSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError(path.string() + ": cannot open spec file");
  std::ostringstream buf;
  buf << in.rdbuf();
  ExperimentSpec spec = parse_spec(buf.str(), path.string());
  return spec;
}

ExperimentResult run_matrix(const ExperimentSpec& spec, unsigned threads) {
  spec.validate();
  const std::vector<std::uint64_t> seeds = spec.seeds.seeds();
  const std::size_t jobs = spec.protocols.size() * seeds.size();

  ExperimentResult result;
  result.runs.assign(spec.protocols.size(), std::vector<SimResult>(seeds.size()));

  auto run_job = [&](std::size_t job) {
    const std::size_t p = job / seeds.size();
    const std::size_t s = job % seeds.size();
    NetworkConfig cfg = spec.network;
    cfg.protocol = spec.protocols[p];
    cfg.seed = seeds[s];
    result.runs[p][s] = run(cfg);
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs));
  if (threads <= 1) {
    for (std::size_t j = 0; j < jobs; ++j) run_job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    std::vector<std::jthread> workers;
    std::mutex failure_mutex;
    for (unsigned t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t j = next++; j < jobs && !failed; j = next++) {
          try {
            run_job(j);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            failed = true;
          }
        }
      });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
  }

  for (const auto& runs : result.runs) result.summary.push_back(aggregate(runs));
  sort_by_stability(result.summary);
  return result;
}

std::string series_file_name(std::string_view protocol) {
  std::string name(protocol);
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return "series_" + name + ".csv";
}

int run_experiment(const ExperimentSpec& spec, std::ostream& log, unsigned threads) {
  try {
    spec.validate();
  } catch (const SpecError& e) {
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  namespace fs = std::filesystem;
  std::vector<fs::path> written;
  bool created_dir = false;
  auto rollback = [&] {
    std::error_code ec;
    for (const fs::path& p : written) {
      if (fs::is_regular_file(p, ec)) fs::remove(p, ec);
    }
    if (created_dir) fs::remove(spec.output_dir, ec);
  };

  try {
    std::error_code ec;
    if (!fs::exists(spec.output_dir, ec)) {
      created_dir = fs::create_directories(spec.output_dir, ec);
      if (ec) throw std::runtime_error("cannot create " + spec.output_dir.string() + ": " + ec.message());
    } else if (!fs::is_directory(spec.output_dir, ec)) {
      throw std::runtime_error(spec.output_dir.string() + " is not a directory");
    }

    // Probe writability before spending time on the matrix.
    const fs::path probe = spec.output_dir / ".wsnsim-write-probe";
    {
      std::ofstream out(probe);
      if (!out) throw std::runtime_error("output directory " + spec.output_dir.string() + " is not writable");
    }
    fs::remove(probe, ec);

    const ExperimentResult result = run_matrix(spec, threads);

    auto emit = [&](const fs::path& path, auto&& writer) {
      written.push_back(path);
      writer(path);
    };

    if (spec.emit.csv) {
      for (const auto& runs : result.runs) {
        emit(spec.output_dir / series_file_name(runs.front().protocol),
             [&](const fs::path& p) { emit_series_csv(runs, p); });
      }
    }
    if (spec.emit.svg) {
      for (PlotKind kind : {PlotKind::alive_vs_round, PlotKind::packets_vs_round}) {
        std::vector<PlotSeries> curves;
        for (const auto& runs : result.runs) curves.push_back(mean_curve(runs, kind));
        const char* name = kind == PlotKind::alive_vs_round ? "alive_vs_round.svg" : "packets_vs_round.svg";
        emit(spec.output_dir / name, [&](const fs::path& p) { emit_plot_svg(curves, kind, p); });
      }
    }
    if (spec.emit.summary) {
      auto write_text = [&](const fs::path& p, auto&& body) {
        std::ofstream out(p, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + p.string() + " for writing");
        body(out);
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + p.string());
      };
      emit(spec.output_dir / "summary.txt", [&](const fs::path& p) {
        write_text(p, [&](std::ostream& out) { write_summary_text(out, result.summary); });
      });
      emit(spec.output_dir / "summary.csv", [&](const fs::path& p) {
        write_text(p, [&](std::ostream& out) { write_summary_csv(out, result.summary); });
      });
    }

    write_summary_text(log, result.summary);
    return kExitOk;
  } catch (const SpecError& e) {
    rollback();
    log << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    rollback();
    log << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

}  // namespace wsn
