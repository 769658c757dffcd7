// Command-line front end: generate streams, replay policies over them,
// sweep fixed ratios, score drift, and render CSV/SVG reports.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adaptsel/config.hpp"
#include "adaptsel/controller.hpp"
#include "adaptsel/datagen.hpp"
#include "adaptsel/errors.hpp"
#include "adaptsel/metrics.hpp"
#include "adaptsel/report.hpp"
#include "adaptsel/simulator.hpp"
#include "adaptsel/stream_io.hpp"

namespace fs = std::filesystem;

namespace {

using namespace adaptsel;

struct Options {
  std::string config_path;
  std::string data_path;
  std::string method = "adapt";
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int jobs = 1;
  std::string ratios;
  std::vector<std::string> timelines;
};

std::vector<double> parse_ratio_list(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) {
    for (int i = 0; i <= 10; ++i) out.push_back(static_cast<double>(i) / 10.0);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string field = (comma == std::string::npos)
                                  ? text.substr(start)
                                  : text.substr(start, comma - start);
    double v = 0.0;
    auto res = std::from_chars(field.data(), field.data() + field.size(), v);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size() ||
        !(v >= 0.0) || v > 1.0) {
      throw ConfigError("--ratios: '" + field +
                        "' is not a ratio in [0, 1]");
    }
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("--ratios: empty list");
  return out;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw DataError("cannot create output directory '" + dir +
                    "': " + ec.message());
  }
}

int run_datagen(const Options& o) {
  ScenarioConfig scen = load_scenario(o.config_path);
  if (o.seed_set) scen.seed = o.seed;

  RunManifest m;
  m.command = "datagen";
  m.config_json = to_json_string(scen);
  m.seed = scen.seed;
  m.inputs = {o.config_path};
  m.outputs = {o.out};
  write_manifest(m, o.out + ".manifest.json");

  write_stream_csv(generate(scen), o.out);
  return 0;
}

int run_simulate(const Options& o) {
  SimConfig cfg = load_sim_config(o.config_path);
  if (o.seed_set) cfg.seed = o.seed;
  const auto spec = parse_method(o.method);
  if (!spec) {
    throw ConfigError(
        "unknown method '" + o.method +
        "'; valid: adapt, apt, ada, fixed:<k>, explore, exploit");
  }

  ensure_dir(o.out);
  const std::string timeline_path = o.out + "/timeline.csv";
  const std::string summary_path = o.out + "/summary.csv";

  RunManifest m;
  m.command = "simulate";
  m.config_json = to_json_string(cfg);
  m.seed = cfg.seed;
  m.methods = {o.method};
  m.inputs = {o.config_path, o.data_path};
  m.outputs = {timeline_path, summary_path};
  m.jobs = o.jobs;
  write_manifest(m, o.out + "/manifest.json");

  const auto stream = read_stream_csv(o.data_path);
  const RunSet rs = run_averaged(stream, cfg, *spec, o.method, o.jobs);
  write_timeline_csv(rs.runs, timeline_path);
  write_summary_csv({{o.method, rs.mean.summary}}, summary_path);
  return 0;
}

int run_sweep(const Options& o) {
  SimConfig cfg = load_sim_config(o.config_path);
  if (o.seed_set) cfg.seed = o.seed;
  const std::vector<double> ratios = parse_ratio_list(o.ratios);

  ensure_dir(o.out);
  const std::string sweep_path = o.out + "/sweep.csv";

  RunManifest m;
  m.command = "sweep";
  m.config_json = to_json_string(cfg);
  m.seed = cfg.seed;
  for (double r : ratios) {
    char label[32];
    std::snprintf(label, sizeof(label), "fixed:%g", r);
    m.methods.push_back(label);
  }
  m.inputs = {o.config_path, o.data_path};
  m.outputs = {sweep_path};
  m.ratios = ratios;
  m.jobs = o.jobs;
  write_manifest(m, o.out + "/manifest.json");

  const auto stream = read_stream_csv(o.data_path);
  write_sweep_csv(oracle_sweep(stream, cfg, ratios, o.jobs), sweep_path);
  return 0;
}

int run_drift(const Options& o) {
  SimConfig cfg = load_sim_config(o.config_path);
  if (o.seed_set) cfg.seed = o.seed;

  RunManifest m;
  m.command = "drift";
  m.config_json = to_json_string(cfg);
  m.seed = cfg.seed;
  m.inputs = {o.config_path, o.data_path};
  m.outputs = {o.out};
  write_manifest(m, o.out + ".manifest.json");

  const auto stream = read_stream_csv(o.data_path);
  if (static_cast<int>(stream.size()) <= cfg.validation_window_weeks) {
    throw DataError("stream has " + std::to_string(stream.size()) +
                    " weeks; drift scoring needs more than the " +
                    std::to_string(cfg.validation_window_weeks) +
                    "-week window");
  }
  write_drift_csv(cfg.warmup_weeks, drift_series(stream, cfg), o.out);
  return 0;
}

// Across-run per-week mean of one timeline file, as plain metric columns.
struct MeanSeries {
  std::string label;
  std::vector<int> weeks;
  std::vector<double> k_t, drift_s, raw_precision, norm_precision;
  std::vector<double> raw_revenue, norm_revenue, new_importer;  // NaN = none
};

MeanSeries collapse_runs(const std::vector<SimTimeline>& runs,
                         const std::string& path) {
  const std::size_t weeks = runs.front().rows.size();
  for (const SimTimeline& tl : runs) {
    if (tl.rows.size() != weeks ||
        tl.rows.front().week != runs.front().rows.front().week) {
      throw DataError("'" + path + "': runs cover different week ranges");
    }
  }
  MeanSeries m;
  m.label = runs.front().method_label;
  const double inv = 1.0 / static_cast<double>(runs.size());
  for (std::size_t w = 0; w < weeks; ++w) {
    m.weeks.push_back(runs.front().rows[w].week);
    double kt = 0, ds = 0, rp = 0, np = 0, rr = 0, nr = 0, slice = 0;
    bool has_slice = runs.front().rows[w].new_importer_norm_revenue.has_value();
    for (const SimTimeline& tl : runs) {
      const WeekRow& r = tl.rows[w];
      kt += r.k_t * inv;
      ds += r.drift_s * inv;
      rp += r.raw_precision * inv;
      np += r.norm_precision * inv;
      rr += r.raw_revenue * inv;
      nr += r.norm_revenue * inv;
      if (r.new_importer_norm_revenue) slice += *r.new_importer_norm_revenue * inv;
      else has_slice = false;
    }
    m.k_t.push_back(kt);
    m.drift_s.push_back(ds);
    m.raw_precision.push_back(rp);
    m.norm_precision.push_back(np);
    m.raw_revenue.push_back(rr);
    m.norm_revenue.push_back(nr);
    m.new_importer.push_back(has_slice
                                 ? slice
                                 : std::numeric_limits<double>::quiet_NaN());
  }
  return m;
}

// Trailing moving average that ignores NaN entries (used so weeks without
// new importers leave gaps instead of poisoning the curve).
std::vector<double> nan_moving_average(const std::vector<double>& xs,
                                       int window) {
  std::vector<double> out(xs.size(),
                          std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const std::size_t lo = i + 1 >= static_cast<std::size_t>(window)
                               ? i + 1 - static_cast<std::size_t>(window)
                               : 0;
    double acc = 0.0;
    int n = 0;
    for (std::size_t j = lo; j <= i; ++j) {
      if (std::isnan(xs[j])) continue;
      acc += xs[j];
      ++n;
    }
    if (n > 0) out[i] = acc / n;
  }
  return out;
}

int run_report(const Options& o) {
  constexpr int kSmoothWeeks = 14;
  std::vector<MeanSeries> files;
  for (const std::string& path : o.timelines) {
    files.push_back(collapse_runs(read_timeline_csv(path), path));
  }
  // Disambiguate repeated method labels in the legend.
  for (std::size_t i = 0; i < files.size(); ++i) {
    int dup = 1;
    for (std::size_t j = 0; j < i; ++j) {
      if (files[j].label == files[i].label) ++dup;
    }
    if (dup > 1) files[i].label += " #" + std::to_string(dup);
  }

  int lo = files.front().weeks.front();
  int hi = files.front().weeks.back();
  for (const MeanSeries& f : files) {
    lo = std::max(lo, f.weeks.front());
    hi = std::min(hi, f.weeks.back());
  }
  if (lo > hi) throw DataError("timelines share no common weeks");
  bool truncated = false;
  for (const MeanSeries& f : files) {
    if (f.weeks.front() != lo || f.weeks.back() != hi) truncated = true;
  }
  if (truncated) {
    std::cerr << "warning: timelines cover different week ranges; "
                 "truncating to weeks [" << lo << ", " << hi << "]\n";
  }

  ensure_dir(o.out);
  std::vector<int> weeks;
  for (int w = lo; w <= hi; ++w) weeks.push_back(w);

  const auto trim = [&](const MeanSeries& f,
                        const std::vector<double>& xs) {
    const std::size_t off =
        static_cast<std::size_t>(lo - f.weeks.front());
    return std::vector<double>(xs.begin() + static_cast<std::ptrdiff_t>(off),
                               xs.begin() + static_cast<std::ptrdiff_t>(
                                                off + weeks.size()));
  };

  struct Metric {
    const char* file;
    const char* title;
    std::vector<double> MeanSeries::* column;
  };
  const std::vector<Metric> metrics = {
      {"norm_precision", "normalized precision", &MeanSeries::norm_precision},
      {"norm_revenue", "normalized revenue", &MeanSeries::norm_revenue},
      {"raw_precision", "raw precision", &MeanSeries::raw_precision},
      {"raw_revenue", "raw revenue", &MeanSeries::raw_revenue},
      {"k_t", "exploration ratio k_t", &MeanSeries::k_t},
      {"drift_s", "drift score", &MeanSeries::drift_s},
      {"new_importer_norm_revenue", "new-importer normalized revenue",
       &MeanSeries::new_importer},
  };

  RunManifest m;
  m.command = "report";
  m.inputs = o.timelines;
  for (const Metric& metric : metrics) {
    m.outputs.push_back(o.out + "/" + metric.file + ".svg");
  }
  m.outputs.push_back(o.out + "/pearson.csv");
  for (const MeanSeries& f : files) m.methods.push_back(f.label);
  write_manifest(m, o.out + "/manifest.json");

  for (const Metric& metric : metrics) {
    std::vector<ChartSeries> series;
    for (const MeanSeries& f : files) {
      series.push_back({f.label, nan_moving_average(trim(f, f.*(metric.column)),
                                                    kSmoothWeeks)});
    }
    write_line_chart_svg(std::string(metric.title) + " (" +
                             std::to_string(kSmoothWeeks) +
                             "-week moving average)",
                         weeks, series, o.out + "/" + metric.file + ".svg");
  }

  std::string csv = "method,r,p_value,weeks\n";
  for (const MeanSeries& f : files) {
    double r = std::numeric_limits<double>::quiet_NaN();
    double p = std::numeric_limits<double>::quiet_NaN();
    std::size_t n = weeks.size();
    try {
      const PearsonResult res =
          pearson(trim(f, f.drift_s), trim(f, f.norm_precision));
      r = res.r;
      p = res.p_value;
      n = res.n;
    } catch (const std::exception& e) {
      std::cerr << "warning: no correlation for '" << f.label
                << "': " << e.what() << "\n";
    }
    char row[160];
    std::snprintf(row, sizeof(row), "%s,%.17g,%.17g,%zu\n", f.label.c_str(),
                  r, p, n);
    csv += row;
  }
  std::ofstream out(o.out + "/pearson.csv", std::ios::binary);
  if (!out) throw DataError("cannot open '" + o.out + "/pearson.csv'");
  out << csv;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adaptive exploration-ratio control for customs fraud "
               "inspection: data generation, replay, sweeps, drift scoring, "
               "reports"};
  app.require_subcommand(1);
  Options o;

  auto add_seed = [&o](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "override the config seed")
        ->each([&o](const std::string&) { o.seed_set = true; });
  };

  CLI::App* datagen =
      app.add_subcommand("datagen", "generate a synthetic declaration stream");
  datagen->add_option("--config", o.config_path, "scenario JSON")->required();
  datagen->add_option("--out", o.out, "output stream CSV path")->required();
  add_seed(datagen);

  CLI::App* simulate =
      app.add_subcommand("simulate", "replay one policy over a stream");
  simulate->add_option("--config", o.config_path, "simulation JSON")
      ->required();
  simulate->add_option("--data", o.data_path, "stream CSV")->required();
  simulate->add_option("--method", o.method,
                       "adapt | apt | ada | fixed:<k> | explore | exploit")
      ->required();
  simulate->add_option("--out", o.out, "output directory")->required();
  simulate->add_option("--jobs", o.jobs, "worker threads");
  add_seed(simulate);

  CLI::App* sweep =
      app.add_subcommand("sweep", "fixed-ratio sweep with oracle marker");
  sweep->add_option("--config", o.config_path, "simulation JSON")->required();
  sweep->add_option("--data", o.data_path, "stream CSV")->required();
  sweep->add_option("--out", o.out, "output directory")->required();
  sweep->add_option("--ratios", o.ratios,
                    "comma-separated ratios (default 0.0,0.1,...,1.0)");
  sweep->add_option("--jobs", o.jobs, "worker threads");
  add_seed(sweep);

  CLI::App* drift =
      app.add_subcommand("drift", "weekly drift scores for a stream");
  drift->add_option("--config", o.config_path, "simulation JSON")->required();
  drift->add_option("--data", o.data_path, "stream CSV")->required();
  drift->add_option("--out", o.out, "output CSV path")->required();
  add_seed(drift);

  CLI::App* report =
      app.add_subcommand("report", "SVG charts + correlation table");
  report->add_option("timelines", o.timelines, "timeline CSV files")
      ->required()
      ->expected(-1);
  report->add_option("--out", o.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(datagen)) return run_datagen(o);
    if (app.got_subcommand(simulate)) return run_simulate(o);
    if (app.got_subcommand(sweep)) return run_sweep(o);
    if (app.got_subcommand(drift)) return run_drift(o);
    if (app.got_subcommand(report)) return run_report(o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
