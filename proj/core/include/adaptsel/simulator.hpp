#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adaptsel/config.hpp"
#include "adaptsel/controller.hpp"
#include "adaptsel/metrics.hpp"
#include "adaptsel/types.hpp"

namespace adaptsel {

// One post-warmup simulated week. The first block of fields matches the
// timeline CSV; the trailing ones are internal diagnostics.
struct WeekRow {
  int week = 0;
  double k_t = 0.0;      // exploration ratio used
  double drift_s = 0.0;  // drift score the controller saw
  int budget_n = 0;
  double raw_precision = 0.0;
  double norm_precision = 0.0;
  double raw_revenue = 0.0;
  double norm_revenue = 0.0;
  std::optional<double> new_importer_norm_revenue;

  int arm = -1;           // bandit arm played; -1 for non-bandit methods
  double reward = 0.0;    // feedback applied to the bandit
  int labeled_total = 0;  // training-set size after this week
};

struct PeriodStats {
  double norm_precision = 0.0;
  double norm_revenue = 0.0;
};

// Trailing-period means of the week rows (whole run, last two years, last
// year, last six months -- shorter when the run is shorter), plus the mean
// new-importer score over the weeks that had new importers.
struct TimelineSummary {
  PeriodStats all;
  PeriodStats last_2y;  // trailing 104 weeks
  PeriodStats last_1y;  // trailing 52 weeks
  PeriodStats last_6m;  // trailing 26 weeks
  std::optional<double> new_importer_mean;
};

TimelineSummary summarize(const std::vector<WeekRow>& rows);

struct SimTimeline {
  std::string method_label;
  std::uint64_t seed = 0;
  int run_index = 0;  // -1 marks an across-run mean
  std::vector<WeekRow> rows;
  TimelineSummary summary;
};

// Per-run timelines plus their per-week mean (run_index -1, summary
// recomputed from the averaged rows).
struct RunSet {
  std::vector<SimTimeline> runs;
  SimTimeline mean;
};

// Drift score of each post-warmup week's incoming batch against the
// trailing validation window (the previous validation_window_weeks weeks,
// all declarations regardless of inspection). Index i holds week
// warmup_weeks + i. The series depends only on (stream, cfg), so callers
// running several methods or repetitions over one stream compute it once
// and pass it to run() / run_averaged().
std::vector<double> drift_series(const std::vector<WeekBatch>& stream,
                                 const SimConfig& cfg);

// Replay one policy over the stream. Weeks [0, warmup) are fully labeled
// into the initial training set; each later week scores the incoming batch,
// decides an exploration ratio, selects under the weekly budget, reveals
// the selected labels only, feeds precision back to the controller, and
// retrains on the configured cadence. Every label read on the decision path
// goes through `audit` when one is supplied.
SimTimeline run(const std::vector<WeekBatch>& stream, const SimConfig& cfg,
                const MethodSpec& method, const std::string& method_label,
                int run_index = 0,
                const std::vector<double>* shared_drift = nullptr,
                LabelAudit* audit = nullptr);

// cfg.runs repetitions (run indices 0..runs-1) averaged per week. `jobs`
// bounds worker threads; results do not depend on it.
RunSet run_averaged(const std::vector<WeekBatch>& stream, const SimConfig& cfg,
                    const MethodSpec& method, const std::string& method_label,
                    int jobs = 1,
                    const std::vector<double>* shared_drift = nullptr);

struct OracleResult {
  std::vector<double> ratios;
  std::vector<SimTimeline> mean_timelines;  // parallel to ratios
  int best_index = 0;  // by final-six-month norm precision, ties -> smaller k
};

// Fixed-ratio run_averaged per candidate ratio; the "oracle" is the hindsight
// best ratio by last-six-month normalized precision.
OracleResult oracle_sweep(const std::vector<WeekBatch>& stream,
                          const SimConfig& cfg,
                          const std::vector<double>& ratios, int jobs = 1);

// The three adaptive policies replayed over identical streams and run seeds.
struct AblationResult {
  RunSet adapt;
  RunSet apt;
  RunSet ada;
};

AblationResult ablation(const std::vector<WeekBatch>& stream,
                        const SimConfig& cfg, int jobs = 1);

// Pearson correlation between a timeline's weekly drift score and its
// realized normalized precision (most informative on an exploitation-only
// timeline, whose precision is not confounded by adaptation).
PearsonResult correlation_report(const SimTimeline& timeline);

}  // namespace adaptsel
