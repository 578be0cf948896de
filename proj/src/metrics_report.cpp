// SPDX-License-Identifier: Apache-2.0

#include "wsn/metrics_report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace wsn {

namespace {

std::optional<Stat> stat_of(const std::vector<double>& values) {
  if (values.empty()) return std::nullopt;
  Stat s;
  s.reached = static_cast<int>(values.size());
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = std::clamp(sum / values.size(), s.min, s.max);
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::string num(double v) { return fmt::format("{:.9g}", v); }

std::string opt_cell(const std::optional<Stat>& s, double Stat::*field) {
  return s ? num((*s).*field) : std::string("not-reached");
}

template <typename T>
T parse_field(const std::string& text, int line, const char* name) {
  std::istringstream is(text);
  is.imbue(std::locale::classic());
  T v{};
  if (!(is >> v) || !is.eof()) {
    throw std::runtime_error(fmt::format("series csv line {}: bad {} '{}'", line, name, text));
  }
  return v;
}

void write_file(const std::filesystem::path& destination,
                const std::function<void(std::ostream&)>& body) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + destination.string() + " for writing");
  body(out);
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + destination.string());
}

}  // namespace

Summary summarize(const SimResult& result) {
  if (result.series.empty()) throw std::invalid_argument("summarize: empty series");
  Summary s;
  for (const SeriesRow& row : result.series) {
    if (!s.first_dead && row.alive < result.n) s.first_dead = row.round;
    if (!s.half_dead && 2 * row.alive <= result.n) s.half_dead = row.round;
    if (!s.all_dead && row.alive == 0) s.all_dead = row.round;
  }
  s.total_packets_bs = result.series.back().packets_bs;
  s.total_packets_ch = result.series.back().packets_ch;
  return s;
}

ProtocolAggregate aggregate(std::span<const SimResult> runs) {
  ProtocolAggregate agg;
  if (runs.empty()) return agg;
  agg.protocol = runs.front().protocol;
  agg.seed_count = static_cast<int>(runs.size());
  std::vector<double> first, half, all, packets;
  for (const SimResult& r : runs) {
    if (r.protocol != agg.protocol) throw std::invalid_argument("aggregate: mixed protocol labels");
    if (r.summary.first_dead) first.push_back(static_cast<double>(*r.summary.first_dead));
    if (r.summary.half_dead) half.push_back(static_cast<double>(*r.summary.half_dead));
    if (r.summary.all_dead) all.push_back(static_cast<double>(*r.summary.all_dead));
    packets.push_back(static_cast<double>(r.summary.total_packets_bs));
  }
  agg.first_dead = stat_of(first);
  agg.half_dead = stat_of(half);
  agg.all_dead = stat_of(all);
  agg.total_packets = *stat_of(packets);
  return agg;
}

void sort_by_stability(BatchSummary& batch) {
  std::stable_sort(batch.begin(), batch.end(),
                   [](const ProtocolAggregate& lhs, const ProtocolAggregate& rhs) {
                     if (!lhs.first_dead || !rhs.first_dead) {
                       return !lhs.first_dead && rhs.first_dead;
                     }
                     return lhs.first_dead->mean > rhs.first_dead->mean;
                   });
}

void write_series_csv(std::ostream& out, std::span<const SimResult> results) {
  std::vector<const SimResult*> order;
  for (const SimResult& r : results) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [](const SimResult* a, const SimResult* b) { return a->seed < b->seed; });

  out << kSeriesCsvHeader << '\n';
  for (const SimResult* r : order) {
    for (const SeriesRow& row : r->series) {
      fmt::print(out, "{},{},{},{},{},{},{},{}\n", r->protocol, r->seed, row.round, row.alive,
                 row.packets_bs, row.packets_ch, num(row.residual_j), row.ch_count);
    }
  }
}

std::vector<SimResult> read_series_csv(std::istream& in, int n) {
  std::string line;
  if (!std::getline(in, line) || line != kSeriesCsvHeader) {
    throw std::runtime_error("series csv: missing or unexpected header");
  }
  std::vector<SimResult> out;
  std::map<std::pair<std::string, std::uint64_t>, std::size_t> index;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) {
      throw std::runtime_error(fmt::format("series csv line {}: expected 8 fields", line_no));
    }
    const auto seed = parse_field<std::uint64_t>(cells[1], line_no, "seed");
    auto key = std::make_pair(cells[0], seed);
    auto [it, inserted] = index.emplace(key, out.size());
    if (inserted) {
      SimResult r;
      r.protocol = cells[0];
      r.seed = seed;
      r.n = n;
      out.push_back(std::move(r));
    }
    SeriesRow row;
    row.round = parse_field<Round>(cells[2], line_no, "round");
    row.alive = parse_field<int>(cells[3], line_no, "alive");
    row.packets_bs = parse_field<std::uint64_t>(cells[4], line_no, "packets_bs");
    row.packets_ch = parse_field<std::uint64_t>(cells[5], line_no, "packets_ch");
    row.residual_j = parse_field<double>(cells[6], line_no, "residual_j");
    row.ch_count = parse_field<int>(cells[7], line_no, "ch_count");
    out[it->second].series.push_back(row);
  }
  for (SimResult& r : out) r.summary = summarize(r);
  return out;
}

void emit_series_csv(std::span<const SimResult> results, const std::filesystem::path& destination) {
  if (!results.empty()) {
    const std::string& label = results.front().protocol;
    for (const SimResult& r : results) {
      if (r.protocol != label) throw std::invalid_argument("emit_series_csv: mixed protocol labels");
    }
  }
  write_file(destination, [&](std::ostream& out) { write_series_csv(out, results); });
}

void write_summary_text(std::ostream& out, const BatchSummary& batch) {
  auto cell = [](const std::optional<Stat>& s) {
    if (!s) return std::string("not reached");
    return fmt::format("{:.1f} ± {:.1f}", s->mean, s->stddev);
  };
  fmt::print(out, "{:<8} {:>5} {:>20} {:>20} {:>20} {:>22}\n", "protocol", "seeds",
             "first_dead", "half_dead", "all_dead", "packets_to_bs");
  for (const ProtocolAggregate& p : batch) {
    fmt::print(out, "{:<8} {:>5} {:>20} {:>20} {:>20} {:>22}\n", p.protocol, p.seed_count,
               cell(p.first_dead), cell(p.half_dead), cell(p.all_dead),
               fmt::format("{:.1f} ± {:.1f}", p.total_packets.mean, p.total_packets.stddev));
  }
}

void write_summary_csv(std::ostream& out, const BatchSummary& batch) {
  out << "protocol,seeds";
  for (const char* metric : {"first_dead", "half_dead", "all_dead", "packets_bs"}) {
    for (const char* stat : {"mean", "min", "max", "stddev", "reached"}) {
      out << ',' << metric << '_' << stat;
    }
  }
  out << '\n';
  auto stat_cells = [&](const std::optional<Stat>& s) {
    for (double Stat::*f : {&Stat::mean, &Stat::min, &Stat::max, &Stat::stddev}) {
      out << ',' << opt_cell(s, f);
    }
    out << ',' << (s ? s->reached : 0);
  };
  for (const ProtocolAggregate& p : batch) {
    out << p.protocol << ',' << p.seed_count;
    stat_cells(p.first_dead);
    stat_cells(p.half_dead);
    stat_cells(p.all_dead);
    stat_cells(p.total_packets);
    out << '\n';
  }
}

PlotSeries mean_curve(std::span<const SimResult> runs, PlotKind kind) {
  PlotSeries curve;
  if (runs.empty()) return curve;
  curve.protocol = runs.front().protocol;
  std::size_t len = 0;
  for (const SimResult& r : runs) len = std::max(len, r.series.size());
  curve.values.assign(len, 0.0);
  for (const SimResult& r : runs) {
    if (r.series.empty()) continue;
    for (std::size_t i = 0; i < len; ++i) {
      const SeriesRow& row = r.series[std::min(i, r.series.size() - 1)];
      curve.values[i] += kind == PlotKind::alive_vs_round ? static_cast<double>(row.alive)
                                                          : static_cast<double>(row.packets_bs);
    }
  }
  for (double& v : curve.values) v /= static_cast<double>(runs.size());
  return curve;
}

void write_plot_svg(std::ostream& out, std::span<const PlotSeries> series, PlotKind kind) {
  constexpr double width = 800, height = 500;
  constexpr double left = 80, right = 170, top = 40, bottom = 60;
  constexpr double plot_w = width - left - right, plot_h = height - top - bottom;
  static constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                            "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

  std::size_t max_len = 1;
  double y_max = 0.0;
  for (const PlotSeries& s : series) {
    max_len = std::max(max_len, s.values.size());
    for (double v : s.values) y_max = std::max(y_max, v);
  }
  if (y_max <= 0.0) y_max = 1.0;
  const double x_span = max_len > 1 ? static_cast<double>(max_len - 1) : 1.0;
  auto sx = [&](double i) { return left + i / x_span * plot_w; };
  auto sy = [&](double v) { return top + plot_h - v / y_max * plot_h; };

  const bool alive = kind == PlotKind::alive_vs_round;
  const char* title = alive ? "Alive nodes during network lifetime" : "Packets sent to base station";
  const char* y_label = alive ? "Alive nodes" : "Packets to BS";

  fmt::print(out,
             "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
             "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" "
             "height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
             "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
             width, height);
  fmt::print(out,
             "<text x=\"{}\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
             "text-anchor=\"middle\">{}</text>\n",
             left + plot_w / 2, title);
  fmt::print(out,
             "<g stroke=\"black\" stroke-width=\"1\">"
             "<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\"/>"
             "<line x1=\"{0}\" y1=\"{3}\" x2=\"{0}\" y2=\"{1}\"/></g>\n",
             left, top + plot_h, left + plot_w, top);

  constexpr int ticks = 5;
  for (int t = 0; t <= ticks; ++t) {
    const double xv = x_span * t / ticks;
    const double yv = y_max * t / ticks;
    fmt::print(out,
               "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"middle\">{:.0f}</text>\n",
               sx(xv), top + plot_h + 16, xv);
    fmt::print(out,
               "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"11\" "
               "text-anchor=\"end\">{:.0f}</text>\n",
               left - 6, sy(yv) + 4, yv);
  }
  fmt::print(out,
             "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"13\" "
             "text-anchor=\"middle\">Round</text>\n",
             left + plot_w / 2, height - 16);
  fmt::print(out,
             "<text x=\"18\" y=\"{0:.2f}\" font-family=\"sans-serif\" font-size=\"13\" "
             "text-anchor=\"middle\" transform=\"rotate(-90 18 {0:.2f})\">{1}</text>\n",
             top + plot_h / 2, y_label);

  for (std::size_t k = 0; k < series.size(); ++k) {
    const PlotSeries& s = series[k];
    const char* color = palette[k % std::size(palette)];
    out << "<polyline class=\"series\" data-protocol=\"" << s.protocol << "\" fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (i) out << ' ';
      fmt::print(out, "{:.2f},{:.2f}", sx(static_cast<double>(i)), sy(s.values[i]));
    }
    out << "\"/>\n";
    const double ly = top + 20 + 22.0 * static_cast<double>(k);
    fmt::print(out,
               "<g class=\"legend\"><line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" "
               "y2=\"{1:.2f}\" stroke=\"{3}\" stroke-width=\"3\"/>"
               "<text x=\"{4:.2f}\" y=\"{5:.2f}\" font-family=\"sans-serif\" "
               "font-size=\"12\">{6}</text></g>\n",
               left + plot_w + 20, ly, left + plot_w + 45, color, left + plot_w + 52, ly + 4,
               s.protocol);
  }
  out << "</svg>\n";
}

void emit_plot_svg(std::span<const PlotSeries> series, PlotKind kind,
                   const std::filesystem::path& destination) {
  if (series.empty()) throw std::invalid_argument("emit_plot_svg: no series");
  write_file(destination, [&](std::ostream& out) { write_plot_svg(out, series, kind); });
}

}  // namespace wsn
