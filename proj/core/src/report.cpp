#include "adaptsel/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "adaptsel/errors.hpp"

namespace adaptsel {
namespace {

constexpr const char* kTimelineHeader =
    "run,week,method,k_t,drift_s,budget,raw_precision,norm_precision,"
    "raw_revenue,norm_revenue,new_importer_norm_revenue";

void append_double(std::string& out, double v) {
  std::array<char, 40> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  out.append(buf.data(), res.ptr);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("write failed for '" + path + "'");
}

[[noreturn]] void fail_line(const std::string& path, std::size_t line_no,
                            const std::string& what) {
  throw DataError(path + " line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& field, const std::string& path,
                    std::size_t line_no, const char* name) {
  double v = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    fail_line(path, line_no,
              std::string("bad ") + name + " value '" + field + "'");
  }
  return v;
}

long parse_long(const std::string& field, const std::string& path,
                std::size_t line_no, const char* name) {
  long v = 0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    fail_line(path, line_no,
              std::string("bad ") + name + " value '" + field + "'");
  }
  return v;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

void append_fixed(std::string& out, double v, int decimals) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  out += buf;
}

// Largest "nice" step (1/2/5 x 10^k) giving at most max_ticks intervals.
double nice_step(double span, int max_ticks) {
  if (!(span > 0.0)) return 1.0;
  const double rough = span / max_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(rough)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= rough) return mag * m;
  }
  return mag * 10.0;
}

const char* palette(std::size_t i) {
  static constexpr std::array<const char*, 8> kColors = {
      "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
      "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};
  return kColors[i % kColors.size()];
}

}  // namespace

void write_timeline_csv(const std::vector<SimTimeline>& runs,
                        const std::string& path) {
  std::string buf;
  buf.reserve(1 << 16);
  buf += kTimelineHeader;
  buf += '\n';
  for (const SimTimeline& tl : runs) {
    for (const WeekRow& r : tl.rows) {
      buf += std::to_string(tl.run_index);
      buf += ',';
      buf += std::to_string(r.week);
      buf += ',';
      buf += tl.method_label;
      buf += ',';
      append_double(buf, r.k_t);
      buf += ',';
      append_double(buf, r.drift_s);
      buf += ',';
      buf += std::to_string(r.budget_n);
      buf += ',';
      append_double(buf, r.raw_precision);
      buf += ',';
      append_double(buf, r.norm_precision);
      buf += ',';
      append_double(buf, r.raw_revenue);
      buf += ',';
      append_double(buf, r.norm_revenue);
      buf += ',';
      if (r.new_importer_norm_revenue) {
        append_double(buf, *r.new_importer_norm_revenue);
      }
      buf += '\n';
    }
  }
  write_text(path, buf);
}

std::vector<SimTimeline> read_timeline_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError("'" + path + "': no data");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTimelineHeader) {
    throw DataError("'" + path + "': unexpected header '" + line + "'");
  }

  std::vector<SimTimeline> runs;
  std::array<std::string, 11> fields;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::size_t start = 0;
    std::size_t nf = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      std::string field = (comma == std::string::npos)
                              ? line.substr(start)
                              : line.substr(start, comma - start);
      if (nf >= fields.size()) fail_line(path, line_no, "too many columns");
      fields[nf++] = std::move(field);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (nf != fields.size()) {
      fail_line(path, line_no,
                "expected 11 columns, got " + std::to_string(nf));
    }

    const long run_idx = parse_long(fields[0], path, line_no, "run");
    if (runs.empty() || runs.back().run_index != static_cast<int>(run_idx)) {
      SimTimeline tl;
      tl.run_index = static_cast<int>(run_idx);
      tl.method_label = fields[2];
      runs.push_back(std::move(tl));
    }
    SimTimeline& tl = runs.back();
    if (fields[2] != tl.method_label) {
      fail_line(path, line_no, "method changed mid-run");
    }

    WeekRow r;
    r.week = static_cast<int>(parse_long(fields[1], path, line_no, "week"));
    r.k_t = parse_double(fields[3], path, line_no, "k_t");
    r.drift_s = parse_double(fields[4], path, line_no, "drift_s");
    r.budget_n =
        static_cast<int>(parse_long(fields[5], path, line_no, "budget"));
    r.raw_precision =
        parse_double(fields[6], path, line_no, "raw_precision");
    r.norm_precision =
        parse_double(fields[7], path, line_no, "norm_precision");
    r.raw_revenue = parse_double(fields[8], path, line_no, "raw_revenue");
    r.norm_revenue = parse_double(fields[9], path, line_no, "norm_revenue");
    if (!fields[10].empty()) {
      r.new_importer_norm_revenue = parse_double(
          fields[10], path, line_no, "new_importer_norm_revenue");
    }
    tl.rows.push_back(std::move(r));
  }
  if (runs.empty()) throw DataError("'" + path + "': no data");
  for (SimTimeline& tl : runs) tl.summary = summarize(tl.rows);
  return runs;
}

void write_summary_csv(
    const std::vector<std::pair<std::string, TimelineSummary>>& entries,
    const std::string& path) {
  std::string buf = "method,period,norm_precision,norm_revenue\n";
  for (const auto& [label, summary] : entries) {
    const std::array<std::pair<const char*, const PeriodStats*>, 4> periods{{
        {"all", &summary.all},
        {"2y", &summary.last_2y},
        {"1y", &summary.last_1y},
        {"0.5y", &summary.last_6m},
    }};
    for (const auto& [period, stats] : periods) {
      buf += label;
      buf += ',';
      buf += period;
      buf += ',';
      append_double(buf, stats->norm_precision);
      buf += ',';
      append_double(buf, stats->norm_revenue);
      buf += '\n';
    }
  }
  write_text(path, buf);
}

void write_sweep_csv(const OracleResult& result, const std::string& path) {
  std::string buf =
      "ratio,oracle,norm_precision_all,norm_precision_2y,norm_precision_1y,"
      "norm_precision_0.5y,norm_revenue_all,norm_revenue_2y,norm_revenue_1y,"
      "norm_revenue_0.5y\n";
  auto emit = [&buf](double ratio, bool oracle, const TimelineSummary& s) {
    append_double(buf, ratio);
    buf += oracle ? ",1," : ",0,";
    append_double(buf, s.all.norm_precision);
    buf += ',';
    append_double(buf, s.last_2y.norm_precision);
    buf += ',';
    append_double(buf, s.last_1y.norm_precision);
    buf += ',';
    append_double(buf, s.last_6m.norm_precision);
    buf += ',';
    append_double(buf, s.all.norm_revenue);
    buf += ',';
    append_double(buf, s.last_2y.norm_revenue);
    buf += ',';
    append_double(buf, s.last_1y.norm_revenue);
    buf += ',';
    append_double(buf, s.last_6m.norm_revenue);
    buf += '\n';
  };
  for (std::size_t i = 0; i < result.ratios.size(); ++i) {
    emit(result.ratios[i], false, result.mean_timelines[i].summary);
  }
  const std::size_t best = static_cast<std::size_t>(result.best_index);
  emit(result.ratios[best], true, result.mean_timelines[best].summary);
  write_text(path, buf);
}

void write_drift_csv(int first_week, const std::vector<double>& series,
                     const std::string& path) {
  std::string buf = "week,drift_s\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    buf += std::to_string(first_week + static_cast<int>(i));
    buf += ',';
    append_double(buf, series[i]);
    buf += '\n';
  }
  write_text(path, buf);
}

void write_line_chart_svg(const std::string& title,
                          const std::vector<int>& weeks,
                          const std::vector<ChartSeries>& series,
                          const std::string& path) {
  if (weeks.empty()) {
    throw std::invalid_argument("chart: no weeks");
  }
  for (const ChartSeries& s : series) {
    if (s.values.size() != weeks.size()) {
      throw std::invalid_argument("chart: series '" + s.label +
                                  "' length does not match weeks");
    }
  }

  constexpr double kW = 960, kH = 480;
  constexpr double kLeft = 64, kRight = 180, kTop = 36, kBottom = 44;
  const double plot_w = kW - kLeft - kRight;
  const double plot_h = kH - kTop - kBottom;

  double x_lo = weeks.front(), x_hi = weeks.back();
  if (x_hi <= x_lo) x_hi = x_lo + 1;
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -std::numeric_limits<double>::infinity();
  for (const ChartSeries& s : series) {
    for (double v : s.values) {
      if (!std::isfinite(v)) continue;
      y_lo = std::min(y_lo, v);
      y_hi = std::max(y_hi, v);
    }
  }
  if (!(y_lo <= y_hi)) {  // no finite points at all
    y_lo = 0.0;
    y_hi = 1.0;
  }
  if (y_hi - y_lo < 1e-12) {
    y_lo -= 0.5;
    y_hi += 0.5;
  }
  const double y_pad = 0.05 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  const auto sx = [&](double w) {
    return kLeft + (w - x_lo) / (x_hi - x_lo) * plot_w;
  };
  const auto sy = [&](double v) {
    return kTop + (y_hi - v) / (y_hi - y_lo) * plot_h;
  };

  std::string svg;
  svg.reserve(1 << 16);
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" "
         "height=\"480\" viewBox=\"0 0 960 480\">\n";
  svg += "<rect width=\"960\" height=\"480\" fill=\"white\"/>\n";
  svg += "<text x=\"";
  append_fixed(svg, kLeft, 2);
  svg += "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" "
         "font-weight=\"bold\">";
  svg += xml_escape(title);
  svg += "</text>\n";

  // Gridlines + tick labels.
  svg += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  const double xstep = nice_step(x_hi - x_lo, 8);
  for (double wx = std::ceil(x_lo / xstep) * xstep; wx <= x_hi + 1e-9;
       wx += xstep) {
    const double px = sx(wx);
    svg += "<line x1=\"";
    append_fixed(svg, px, 2);
    svg += "\" y1=\"";
    append_fixed(svg, kTop, 2);
    svg += "\" x2=\"";
    append_fixed(svg, px, 2);
    svg += "\" y2=\"";
    append_fixed(svg, kTop + plot_h, 2);
    svg += "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"";
    append_fixed(svg, px, 2);
    svg += "\" y=\"";
    append_fixed(svg, kTop + plot_h + 16, 2);
    svg += "\" text-anchor=\"middle\">";
    append_fixed(svg, wx, 0);
    svg += "</text>\n";
  }
  const double ystep = nice_step(y_hi - y_lo, 6);
  for (double vy = std::ceil(y_lo / ystep) * ystep; vy <= y_hi + 1e-9;
       vy += ystep) {
    const double py = sy(vy);
    svg += "<line x1=\"";
    append_fixed(svg, kLeft, 2);
    svg += "\" y1=\"";
    append_fixed(svg, py, 2);
    svg += "\" x2=\"";
    append_fixed(svg, kLeft + plot_w, 2);
    svg += "\" y2=\"";
    append_fixed(svg, py, 2);
    svg += "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"";
    append_fixed(svg, kLeft - 6, 2);
    svg += "\" y=\"";
    append_fixed(svg, py + 4, 2);
    svg += "\" text-anchor=\"end\">";
    append_fixed(svg, vy, std::abs(ystep) >= 1.0 ? 0 : 3);
    svg += "</text>\n";
  }
  svg += "</g>\n";

  // Axes.
  svg += "<g stroke=\"#222\" stroke-width=\"1.5\">\n<line x1=\"";
  append_fixed(svg, kLeft, 2);
  svg += "\" y1=\"";
  append_fixed(svg, kTop, 2);
  svg += "\" x2=\"";
  append_fixed(svg, kLeft, 2);
  svg += "\" y2=\"";
  append_fixed(svg, kTop + plot_h, 2);
  svg += "\"/>\n<line x1=\"";
  append_fixed(svg, kLeft, 2);
  svg += "\" y1=\"";
  append_fixed(svg, kTop + plot_h, 2);
  svg += "\" x2=\"";
  append_fixed(svg, kLeft + plot_w, 2);
  svg += "\" y2=\"";
  append_fixed(svg, kTop + plot_h, 2);
  svg += "\"/>\n</g>\n";
  svg += "<text x=\"";
  append_fixed(svg, kLeft + plot_w / 2, 2);
  svg += "\" y=\"";
  append_fixed(svg, kH - 8, 2);
  svg += "\" font-family=\"sans-serif\" font-size=\"12\" "
         "text-anchor=\"middle\">week</text>\n";

  // Series: one path per contiguous run of finite values.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const ChartSeries& s = series[si];
    std::string d;
    bool open = false;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const double v = s.values[i];
      if (!std::isfinite(v)) {
        open = false;
        continue;
      }
      d += open ? " L " : " M ";
      append_fixed(d, sx(weeks[i]), 2);
      d += ' ';
      append_fixed(d, sy(v), 2);
      open = true;
    }
    if (d.empty()) continue;
    svg += "<path d=\"";
    svg += d;
    svg += "\" fill=\"none\" stroke=\"";
    svg += palette(si);
    svg += "\" stroke-width=\"1.8\"/>\n";
  }

  // Legend in the right margin.
  svg += "<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (std::size_t si = 0; si < series.size(); ++si) {
    const double ly = kTop + 10 + 20 * static_cast<double>(si);
    svg += "<rect x=\"";
    append_fixed(svg, kLeft + plot_w + 14, 2);
    svg += "\" y=\"";
    append_fixed(svg, ly - 9, 2);
    svg += "\" width=\"14\" height=\"14\" fill=\"";
    svg += palette(si);
    svg += "\"/>\n<text x=\"";
    append_fixed(svg, kLeft + plot_w + 33, 2);
    svg += "\" y=\"";
    append_fixed(svg, ly + 2, 2);
    svg += "\">";
    svg += xml_escape(series[si].label);
    svg += "</text>\n";
  }
  svg += "</g>\n</svg>\n";
  write_text(path, svg);
}

void write_manifest(const RunManifest& m, const std::string& path) {
  nlohmann::json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["command"] = m.command;
  j["seed"] = m.seed;
  j["methods"] = m.methods;
  j["inputs"] = m.inputs;
  j["outputs"] = m.outputs;
  if (!m.ratios.empty()) j["ratios"] = m.ratios;
  j["jobs"] = m.jobs;
  if (!m.config_json.empty()) {
    j["config"] = nlohmann::json::parse(m.config_json);
  }
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm_utc{};
  gmtime_r(&tt, &tm_utc);
  char stamp[40];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  j["created_utc"] = stamp;
  write_text(path, j.dump(2) + "\n");
}

}  // namespace adaptsel
