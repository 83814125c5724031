#include "ife/bench/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

namespace ife::bench {

namespace {

std::string ms_cell(std::uint64_t nanos) { return fmt::format("{:.1f}", static_cast<double>(nanos) / 1e6); }

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string policy_label(const BenchRow& r) {
  if (r.policy == "ntks" || r.policy == "ntkms") return fmt::format("{}(k={})", r.policy, r.k);
  return r.policy;
}

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

std::string emit_level_table(std::span<const LevelRun> runs) {
  std::size_t depth = 0;
  for (const auto& run : runs) depth = std::max(depth, run.levels.size());

  std::vector<std::vector<std::string>> table;
  std::vector<std::string> header{"level", "frontier"};
  for (const auto& run : runs) header.push_back(fmt::format("{}T ms", run.threads));
  table.push_back(header);

  std::size_t total_size = 0;
  std::vector<std::uint64_t> totals(runs.size(), 0);
  for (std::size_t lvl = 0; lvl < depth; ++lvl) {
    std::vector<std::string> row{std::to_string(lvl)};
    const auto& first = runs.front().levels;
    const std::size_t size = lvl < first.size() ? first[lvl].frontier_size : 0;
    total_size += size;
    row.push_back(std::to_string(size));
    for (std::size_t r = 0; r < runs.size(); ++r) {
      if (lvl < runs[r].levels.size()) {
        row.push_back(ms_cell(runs[r].levels[lvl].nanos));
        totals[r] += runs[r].levels[lvl].nanos;
      } else {
        row.push_back("-");
      }
    }
    table.push_back(std::move(row));
  }
  std::vector<std::string> total{"total", std::to_string(total_size)};
  for (auto t : totals) total.push_back(ms_cell(t));
  table.push_back(std::move(total));

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  std::string out;
  for (const auto& row : table) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out += "  ";
      out += fmt::format("{:>{}}", row[c], width[c]);
    }
    out += '\n';
  }
  return out;
}

std::vector<LevelRun> level_runs_from_report(const BenchReport& report, const BenchRow& like) {
  std::vector<LevelRun> out;
  for (const BenchRow* r : report.means()) {
    if (r->dataset != like.dataset || r->policy != like.policy || r->k != like.k ||
        r->return_mode != like.return_mode || r->num_sources != like.num_sources || r->status != "ok") {
      continue;
    }
    LevelRun run;
    run.threads = r->threads;
    for (std::size_t i = 0; i < r->level_sizes.size(); ++i) {
      const double ms = i < r->level_ms.size() ? r->level_ms[i] : 0.0;
      run.levels.push_back({static_cast<std::uint32_t>(i), r->level_sizes[i], static_cast<std::uint64_t>(std::llround(ms * 1e6))});
    }
    out.push_back(std::move(run));
  }
  std::sort(out.begin(), out.end(), [](const LevelRun& a, const LevelRun& b) { return a.threads < b.threads; });
  return out;
}

std::vector<SpeedupSeries> speedup_series(const BenchReport& report) {
  using Context = std::tuple<std::string, std::size_t, ReturnMode>;
  std::set<Context> contexts;
  std::map<std::pair<Context, std::string>, std::map<std::size_t, double>> cells;
  std::vector<std::pair<Context, std::string>> order;
  for (const BenchRow* r : report.means()) {
    if (r->status != "ok") continue;
    Context ctx{r->dataset, r->num_sources, r->return_mode};
    contexts.insert(ctx);
    auto key = std::make_pair(ctx, policy_label(*r));
    if (!cells.contains(key)) order.push_back(key);
    cells[key][r->threads] = r->wall_ms;
  }
  std::vector<SpeedupSeries> out;
  for (const auto& key : order) {
    const auto& by_threads = cells[key];
    const double base = by_threads.begin()->second;
    SpeedupSeries s;
    s.label = key.second;
    if (contexts.size() > 1) {
      const auto& [dataset, sources, mode] = key.first;
      s.label += fmt::format(" {} s={} {}", dataset, sources, to_string(mode));
    }
    for (const auto& [threads, wall] : by_threads) s.points.push_back({threads, wall > 0 ? base / wall : 0.0});
    out.push_back(std::move(s));
  }
  return out;
}

std::string render_speedup_svg(const BenchReport& report) {
  const auto series = speedup_series(report);
  if (series.empty()) throw ReportError("speedup chart needs at least one successful mean row");

  std::set<std::size_t> thread_set;
  double top = 1.0;
  for (const auto& s : series) {
    for (const auto& p : s.points) {
      thread_set.insert(p.threads);
      top = std::max(top, p.speedup);
    }
  }
  const std::vector<std::size_t> xs(thread_set.begin(), thread_set.end());
  const double step = std::max(1.0, std::ceil(std::ceil(top) / 10.0));
  const double y_max = std::ceil(top / step) * step;

  constexpr double kWidth = 640, kHeight = 400, kLeft = 60, kRight = 180, kTop = 30, kBottom = 50;
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto x_of = [&](std::size_t threads) {
    const auto idx = static_cast<double>(std::lower_bound(xs.begin(), xs.end(), threads) - xs.begin());
    return xs.size() == 1 ? kLeft + plot_w / 2 : kLeft + plot_w * idx / static_cast<double>(xs.size() - 1);
  };
  auto y_of = [&](double v) { return kTop + plot_h * (1.0 - v / y_max); };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight);
  svg += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
  svg += fmt::format("<text x=\"{:.1f}\" y=\"18\" text-anchor=\"middle\">speedup over smallest thread count</text>\n",
                     kLeft + plot_w / 2);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2:.1f}\" stroke=\"black\"/>\n", kLeft, kTop,
                     kTop + plot_h);
  svg += fmt::format("<line x1=\"{0}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"black\"/>\n", kLeft,
                     kTop + plot_h, kLeft + plot_w);
  for (double v = 0; v <= y_max + 1e-9; v += step) {
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"#dddddd\"/>"
        "<text x=\"{3}\" y=\"{4:.1f}\" text-anchor=\"end\">{5:g}</text>\n",
        kLeft, y_of(v), kLeft + plot_w, kLeft - 6, y_of(v) + 4, v);
  }
  for (std::size_t t : xs) {
    svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">{}</text>\n", x_of(t),
                       kTop + plot_h + 18, t);
  }
  svg += fmt::format("<text x=\"{:.1f}\" y=\"{:.1f}\" text-anchor=\"middle\">threads</text>\n", kLeft + plot_w / 2,
                     kHeight - 10);
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    std::string points;
    for (const auto& p : series[i].points) {
      if (!points.empty()) points += ' ';
      points += fmt::format("{:.1f},{:.1f}", x_of(p.threads), y_of(p.speedup));
    }
    svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", color, points);
    for (const auto& p : series[i].points) {
      svg += fmt::format("<circle cx=\"{:.1f}\" cy=\"{:.1f}\" r=\"3\" fill=\"{}\"/>\n", x_of(p.threads),
                         y_of(p.speedup), color);
    }
    const double ly = kTop + 10 + 18 * static_cast<double>(i);
    svg += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1:.1f}\" x2=\"{2:.1f}\" y2=\"{1:.1f}\" stroke=\"{3}\" stroke-width=\"2\"/>"
        "<text x=\"{4:.1f}\" y=\"{5:.1f}\">{6}</text>\n",
        kLeft + plot_w + 12, ly, kLeft + plot_w + 32, color, kLeft + plot_w + 38, ly + 4,
        xml_escape(series[i].label));
  }
  svg += "</svg>\n";
  return svg;
}

void emit_speedup_chart(const BenchReport& report, const std::filesystem::path& path) {
  const std::string svg = render_speedup_svg(report);
  std::ofstream out(path, std::ios::binary);
  out << svg;
  out.close();
  if (!out) throw Error("cannot write " + path.string());
}

}  // namespace ife::bench
