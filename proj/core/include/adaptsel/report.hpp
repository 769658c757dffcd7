#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "adaptsel/config.hpp"
#include "adaptsel/simulator.hpp"

namespace adaptsel {

inline constexpr const char* kToolName = "adaptsel";
inline constexpr const char* kToolVersion = "0.1.0";

// All CSV output: '.' decimal separator, LF line endings, UTF-8, doubles in
// shortest round-trip form.

// One row per (run, week):
//   run,week,method,k_t,drift_s,budget,raw_precision,norm_precision,
//   raw_revenue,norm_revenue,new_importer_norm_revenue
// The last column is empty on weeks without new-importer declarations.
void write_timeline_csv(const std::vector<SimTimeline>& runs,
                        const std::string& path);

// Timeline read back from disk, grouped by run index in file order. Rows
// carry only the CSV columns; summaries are recomputed. DataError (with the
// line number) on malformed input.
std::vector<SimTimeline> read_timeline_csv(const std::string& path);

// method,period,norm_precision,norm_revenue with periods all/2y/1y/0.5y.
void write_summary_csv(
    const std::vector<std::pair<std::string, TimelineSummary>>& entries,
    const std::string& path);

// ratio,oracle,<norm_precision x 4 periods>,<norm_revenue x 4 periods>;
// one row per swept ratio plus a final row repeating the oracle's ratio
// with oracle=1.
void write_sweep_csv(const OracleResult& result, const std::string& path);

// week,drift_s for each post-warmup week.
void write_drift_csv(int first_week, const std::vector<double>& series,
                     const std::string& path);

// One polyline per entry of `series`, drawn against `weeks` on the x axis.
// Hand-built standalone SVG: axes, tick labels, legend; parses as XML.
struct ChartSeries {
  std::string label;
  std::vector<double> values;  // parallel to `weeks`; NaN breaks the line
};
void write_line_chart_svg(const std::string& title,
                          const std::vector<int>& weeks,
                          const std::vector<ChartSeries>& series,
                          const std::string& path);

// Everything needed to replay a command: written before any result file.
struct RunManifest {
  std::string command;                  // datagen|simulate|sweep|drift|report
  std::string config_json;              // fully-resolved config snapshot
  std::uint64_t seed = 0;
  std::vector<std::string> methods;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;     // files the command will write
  std::vector<double> ratios;           // sweep only
  int jobs = 1;
};
void write_manifest(const RunManifest& m, const std::string& path);

}  // namespace adaptsel
