// Copyright 2026 The tokfit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tokfit/analysis.hpp"
#include "tokfit/ingest.hpp"

namespace tokfit {

enum class ReportFormat { Tsv, Json, Svg };

inline ReportFormat parse_format(std::string_view s) {
  if (s == "tsv") return ReportFormat::Tsv;
  if (s == "json") return ReportFormat::Json;
  if (s == "svg") return ReportFormat::Svg;
  throw ConfigError("unknown report format '" + std::string(s) + "' (expected tsv, json or svg)");
}

/// Settings echoed into every report so a table records how it was made.
struct ReportContext {
  std::size_t n_runs = 0;
  WindowShape window;
  double alpha = 0.05;
  bool smooth = false;
};

inline constexpr std::string_view kReportColumns =
    "group\tn_occ\tmean_offset\tstd_offset\tcensor_rate\tn_pos\tn_neg\tn_zero\tp_value\t"
    "acc_early_stop\tpotential_gain";

namespace detail {

template <typename... Args>
std::string sprintf_string(const char* fmt, Args... args) {
  char buf[128];
  const int n = std::snprintf(buf, sizeof buf, fmt, args...);
  return std::string(buf, static_cast<std::size_t>(std::min<int>(n, sizeof buf - 1)));
}

inline std::string context_line(const ReportContext& ctx, std::string_view factor) {
  return sprintf_string("# tokfit analyze factor=%s runs=%zu window=%zu:%zu alpha=%g smooth=%s",
                        std::string(factor).c_str(), ctx.n_runs, ctx.window.k,
                        ctx.window.early_stop_index, ctx.alpha, ctx.smooth ? "on" : "off");
}

inline std::string p_value_text(const GroupRow& row) {
  return row.degenerate ? std::string("degenerate") : sprintf_string("%.4e", row.sign.p_two_sided);
}

}  // namespace detail

inline std::string report_tsv(const FactorReport& report, const ReportContext& ctx) {
  std::string out = detail::context_line(ctx, report.name) + "\n";
  out += kReportColumns;
  out += '\n';
  for (const GroupRow& row : report.rows) {
    out += row.label;
    if (!row.present) {
      for (int i = 0; i < 10; ++i) out += "\tNA";
      out += '\n';
      continue;
    }
    out += '\t' + std::to_string(row.n_occ);
    out += '\t' + detail::sprintf_string("%.4f", row.summary.mean);
    out += '\t' + detail::sprintf_string("%.4f", row.summary.std);
    out += '\t' + detail::sprintf_string("%.4f", row.summary.censor_rate);
    out += '\t' + std::to_string(row.sign.n_pos);
    out += '\t' + std::to_string(row.sign.n_neg);
    out += '\t' + std::to_string(row.sign.n_zero);
    out += '\t' + detail::p_value_text(row);
    out += '\t' + detail::sprintf_string("%.2f", row.acc_early_stop);
    out += '\t' + detail::sprintf_string("%+.2f", row.potential_gain);
    out += '\n';
  }
  return out;
}

inline std::string report_json(const FactorReport& report, const ReportContext& ctx) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["factor"] = report.name;
  ordered_json factors = ordered_json::array();
  for (Factor f : report.factors) factors.push_back(std::string(to_string(f)));
  j["factors"] = factors;
  j["runs"] = ctx.n_runs;
  j["window"] = std::to_string(ctx.window.k) + ":" + std::to_string(ctx.window.early_stop_index);
  j["alpha"] = ctx.alpha;
  j["smooth"] = ctx.smooth;
  ordered_json groups = ordered_json::array();
  for (const GroupRow& row : report.rows) {
    ordered_json g;
    g["group"] = row.label;
    g["present"] = row.present;
    if (!row.present) {
      for (const char* key : {"n_occ", "mean_offset", "std_offset", "censor_rate", "n_pos", "n_neg",
                              "n_zero", "p_value", "acc_early_stop", "potential_gain"}) {
        g[key] = nullptr;
      }
      groups.push_back(std::move(g));
      continue;
    }
    g["n_occ"] = row.n_occ;
    g["mean_offset"] = row.summary.mean;
    g["std_offset"] = row.summary.std;
    g["censor_rate"] = row.summary.censor_rate;
    g["n_pos"] = row.sign.n_pos;
    g["n_neg"] = row.sign.n_neg;
    g["n_zero"] = row.sign.n_zero;
    if (row.degenerate) {
      g["p_value"] = nullptr;
    } else {
      g["p_value"] = row.sign.p_two_sided;
    }
    g["degenerate"] = row.degenerate;
    g["reject_h0"] = !row.degenerate && row.sign.rejected();
    g["acc_early_stop"] = row.acc_early_stop;
    g["potential_gain"] = row.potential_gain;
    g["seeds"] = row.seeds;
    g["offsets"] = row.offsets;
    ordered_json censored = ordered_json::array();
    for (bool c : row.censored) censored.push_back(c);
    g["censored"] = censored;
    groups.push_back(std::move(g));
  }
  j["groups"] = groups;
  return j.dump(2) + "\n";
}

/// Two-factor report laid out as a matrix of "accuracy gain" cells: rows are
/// the first factor's buckets, columns the second's. Empty cells read NA.
inline std::string cross_table_tsv(const FactorReport& report, const ReportContext& ctx) {
  if (report.factors.size() != 2) {
    throw ConfigError("cross table needs a two-factor report, '" + report.name + "' has " +
                      std::to_string(report.factors.size()));
  }
  const Factor row_f = report.factors[0];
  const Factor col_f = report.factors[1];
  std::vector<std::size_t> row_buckets;
  std::vector<std::size_t> col_buckets;
  for (const GroupRow& r : report.rows) {
    const std::size_t rb = r.key.index(row_f);
    const std::size_t cb = r.key.index(col_f);
    if (std::find(row_buckets.begin(), row_buckets.end(), rb) == row_buckets.end()) row_buckets.push_back(rb);
    if (std::find(col_buckets.begin(), col_buckets.end(), cb) == col_buckets.end()) col_buckets.push_back(cb);
  }
  std::string out = detail::context_line(ctx, report.name) + "\n";
  out += std::string(to_string(row_f)) + "\\" + std::string(to_string(col_f));
  for (std::size_t cb : col_buckets) out += '\t' + std::string(bucket_name(col_f, cb));
  out += '\n';
  for (std::size_t rb : row_buckets) {
    out += bucket_name(row_f, rb);
    for (std::size_t cb : col_buckets) {
      auto it = std::find_if(report.rows.begin(), report.rows.end(), [&](const GroupRow& r) {
        return r.key.index(row_f) == rb && r.key.index(col_f) == cb;
      });
      out += '\t';
      if (it == report.rows.end() || !it->present) {
        out += "NA";
      } else {
        out += detail::sprintf_string("%.2f %+.2f", it->acc_early_stop, it->potential_gain);
      }
    }
    out += '\n';
  }
  return out;
}

namespace detail {

/// Linear-interpolation quantile of sorted data.
inline double quantile(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

/// Horizontal box plot of per-seed offsets, one box per present group, with
/// the early-stopping checkpoint drawn as the zero line.
inline std::string report_svg(const FactorReport& report, const ReportContext& ctx) {
  using detail::sprintf_string;
  const auto lo = 1 - static_cast<std::int64_t>(ctx.window.early_stop_index);
  const auto hi = static_cast<std::int64_t>(ctx.window.k) -
                  static_cast<std::int64_t>(ctx.window.early_stop_index);
  std::vector<const GroupRow*> rows;
  for (const GroupRow& r : report.rows) {
    if (r.present) rows.push_back(&r);
  }

  constexpr double kLeft = 140.0, kRight = 30.0, kTop = 40.0, kRowH = 28.0, kBottom = 45.0;
  constexpr double kPlotW = 520.0;
  const double width = kLeft + kPlotW + kRight;
  const double height = kTop + kRowH * static_cast<double>(std::max<std::size_t>(rows.size(), 1)) + kBottom;
  const double span = static_cast<double>(hi - lo);
  auto x_of = [&](double v) {
    return kLeft + (span > 0 ? (v - static_cast<double>(lo)) / span : 0.5) * kPlotW;
  };

  std::string s;
  s += sprintf_string(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
      "viewBox=\"0 0 %.0f %.0f\" font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height, width, height);
  s += sprintf_string("<rect x=\"0\" y=\"0\" width=\"%.0f\" height=\"%.0f\" fill=\"white\"/>\n", width,
                      height);
  s += "<text x=\"" + sprintf_string("%.1f", kLeft) + "\" y=\"22\" font-size=\"14\">Fitting-offset by " +
       report.name + " (" + std::to_string(ctx.n_runs) + " runs)</text>\n";

  const double plot_bottom = kTop + kRowH * static_cast<double>(std::max<std::size_t>(rows.size(), 1));
  s += sprintf_string(
      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", kLeft,
      plot_bottom, kLeft + kPlotW, plot_bottom);
  for (std::int64_t t = lo; t <= hi; ++t) {
    const double x = x_of(static_cast<double>(t));
    s += sprintf_string(
        "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", x,
        plot_bottom, x, plot_bottom + 4);
    if ((t - lo) % 2 == 0 || t == 0) {
      s += sprintf_string("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%lld</text>\n", x,
                          plot_bottom + 17, static_cast<long long>(t));
    }
  }
  s += sprintf_string("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">fitting-offset (epochs)</text>\n",
                      kLeft + kPlotW / 2, plot_bottom + 36);
  s += sprintf_string(
      "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"red\" "
      "stroke-dasharray=\"4 3\"/>\n",
      x_of(0.0), kTop - 6, x_of(0.0), plot_bottom);

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const GroupRow& r = *rows[i];
    std::vector<double> v(r.offsets.begin(), r.offsets.end());
    std::sort(v.begin(), v.end());
    const double q1 = detail::quantile(v, 0.25);
    const double med = detail::quantile(v, 0.5);
    const double q3 = detail::quantile(v, 0.75);
    const double yc = kTop + kRowH * (static_cast<double>(i) + 0.5);
    const double bh = kRowH * 0.6;
    s += "<g>\n";
    s += sprintf_string("<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">", kLeft - 8, yc + 4) +
         r.label + "</text>\n";
    s += sprintf_string(
        "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", x_of(v.front()),
        yc, x_of(v.back()), yc);
    s += sprintf_string(
        "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"#9ecae1\" "
        "stroke=\"black\"/>\n",
        x_of(q1), yc - bh / 2, std::max(x_of(q3) - x_of(q1), 1.0), bh);
    s += sprintf_string(
        "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\" "
        "stroke-width=\"2\"/>\n",
        x_of(med), yc - bh / 2, x_of(med), yc + bh / 2);
    s += sprintf_string(
        "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"2.5\" fill=\"black\"/>\n", x_of(r.summary.mean), yc);
    s += "</g>\n";
  }
  s += "</svg>\n";
  return s;
}

/// Writes report_<name>.{tsv,json}, plot_<name>.svg and, for two-factor
/// reports written as TSV, table_<name>.tsv. Returns the files written.
inline std::vector<fs::path> write_reports(std::span<const FactorReport> reports,
                                           const ReportContext& ctx, const fs::path& out_dir,
                                           const std::set<ReportFormat>& formats) {
  fs::create_directories(out_dir);
  std::vector<fs::path> written;
  auto emit = [&](const fs::path& p, const std::string& text) {
    detail::write_file(p, text);
    written.push_back(p);
  };
  for (const FactorReport& r : reports) {
    if (formats.contains(ReportFormat::Tsv)) {
      emit(out_dir / ("report_" + r.name + ".tsv"), report_tsv(r, ctx));
      if (r.factors.size() == 2) emit(out_dir / ("table_" + r.name + ".tsv"), cross_table_tsv(r, ctx));
    }
    if (formats.contains(ReportFormat::Json)) {
      emit(out_dir / ("report_" + r.name + ".json"), report_json(r, ctx));
    }
    if (formats.contains(ReportFormat::Svg)) {
      emit(out_dir / ("plot_" + r.name + ".svg"), report_svg(r, ctx));
    }
  }
  return written;
}

}  // namespace tokfit
