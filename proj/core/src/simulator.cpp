#include "adaptsel/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "adaptsel/drift.hpp"
#include "adaptsel/errors.hpp"
#include "adaptsel/rng.hpp"
#include "adaptsel/scorer.hpp"
#include "adaptsel/select.hpp"

namespace adaptsel {
namespace {

void check_stream(const std::vector<WeekBatch>& stream, const SimConfig& cfg) {
  if (stream.empty()) throw DataError("stream is empty");
  for (std::size_t i = 0; i < stream.size(); ++i) {
    if (stream[i].week != static_cast<int>(i)) {
      throw DataError("stream weeks must be contiguous from 0; position " +
                      std::to_string(i) + " holds week " +
                      std::to_string(stream[i].week));
    }
    if (stream[i].items.empty()) {
      throw DataError("week " + std::to_string(i) + " has no declarations");
    }
  }
  if (cfg.warmup_weeks >= static_cast<int>(stream.size())) {
    throw ConfigError("warmup_weeks (" + std::to_string(cfg.warmup_weeks) +
                      ") leaves no weeks to simulate in a " +
                      std::to_string(stream.size()) + "-week stream");
  }
}

// Run fn(0..count-1) on up to `jobs` threads. Any first exception is
// rethrown on the caller after all workers join.
void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  if (jobs < 1) jobs = 1;
  const int workers = std::min(jobs, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

PeriodStats trailing_stats(const std::vector<WeekRow>& rows,
                           std::size_t span) {
  PeriodStats out;
  const std::size_t n = std::min(span, rows.size());
  if (n == 0) return out;
  for (std::size_t i = rows.size() - n; i < rows.size(); ++i) {
    out.norm_precision += rows[i].norm_precision;
    out.norm_revenue += rows[i].norm_revenue;
  }
  out.norm_precision /= static_cast<double>(n);
  out.norm_revenue /= static_cast<double>(n);
  return out;
}

std::string week_label(const char* prefix, int week) {
  return std::string(prefix) + std::to_string(week);
}

// Per-week mean of several runs of the same (stream, cfg, method).
SimTimeline mean_of(const std::vector<SimTimeline>& runs) {
  SimTimeline mean;
  mean.method_label = runs.front().method_label;
  mean.seed = runs.front().seed;
  mean.run_index = -1;
  const std::size_t weeks = runs.front().rows.size();
  const double inv = 1.0 / static_cast<double>(runs.size());
  mean.rows.resize(weeks);
  for (std::size_t w = 0; w < weeks; ++w) {
    const WeekRow& first = runs.front().rows[w];
    WeekRow& m = mean.rows[w];
    m.week = first.week;
    m.drift_s = first.drift_s;
    m.budget_n = first.budget_n;
    m.arm = -1;
    m.labeled_total = first.labeled_total;
    double slice_acc = 0.0;
    for (const SimTimeline& tl : runs) {
      const WeekRow& r = tl.rows[w];
      m.k_t += r.k_t * inv;
      m.raw_precision += r.raw_precision * inv;
      m.norm_precision += r.norm_precision * inv;
      m.raw_revenue += r.raw_revenue * inv;
      m.norm_revenue += r.norm_revenue * inv;
      m.reward += r.reward * inv;
      if (r.new_importer_norm_revenue) {
        slice_acc += *r.new_importer_norm_revenue * inv;
      }
    }
    // A week either has new importers in every run or in none: the slice's
    // existence is a property of the stream, not of the selection.
    if (first.new_importer_norm_revenue) {
      m.new_importer_norm_revenue = slice_acc;
    }
  }
  mean.summary = summarize(mean.rows);
  return mean;
}

}  // namespace

TimelineSummary summarize(const std::vector<WeekRow>& rows) {
  TimelineSummary s;
  s.all = trailing_stats(rows, rows.size());
  s.last_2y = trailing_stats(rows, 104);
  s.last_1y = trailing_stats(rows, 52);
  s.last_6m = trailing_stats(rows, 26);
  double acc = 0.0;
  std::size_t cnt = 0;
  for (const WeekRow& r : rows) {
    if (r.new_importer_norm_revenue) {
      acc += *r.new_importer_norm_revenue;
      ++cnt;
    }
  }
  if (cnt > 0) s.new_importer_mean = acc / static_cast<double>(cnt);
  return s;
}

std::vector<double> drift_series(const std::vector<WeekBatch>& stream,
                                 const SimConfig& cfg) {
  validate(cfg);
  check_stream(stream, cfg);
  const std::uint64_t salt =
      splitmix64(splitmix64(cfg.seed) ^ fnv1a64("embed"));
  const int total = static_cast<int>(stream.size());
  std::vector<double> series;
  series.reserve(static_cast<std::size_t>(total - cfg.warmup_weeks));

  std::vector<Declaration> window;
  for (int t = cfg.warmup_weeks; t < total; ++t) {
    const int lo = std::max(0, t - cfg.validation_window_weeks);
    window.clear();
    for (int w = lo; w < t; ++w) {
      window.insert(window.end(), stream[w].items.begin(),
                    stream[w].items.end());
    }
    const Embedder emb = Embedder::fit(window, cfg.embed_dim, salt);
    const PointCloud reference = embed_cloud(window, emb);
    const PointCloud current = embed_cloud(stream[t].items, emb);
    Rng rng = make_rng(cfg.seed, week_label("drift/w", t));
    const DriftConfig dc{cfg.bootstrap_sample, cfg.bootstrap_repeats};
    series.push_back(drift_score(reference, current, dc, rng));
  }
  return series;
}

SimTimeline run(const std::vector<WeekBatch>& stream, const SimConfig& cfg,
                const MethodSpec& method, const std::string& method_label,
                int run_index, const std::vector<double>* shared_drift,
                LabelAudit* audit) {
  validate(cfg);
  check_stream(stream, cfg);
  const int total = static_cast<int>(stream.size());
  const int warmup = cfg.warmup_weeks;

  std::vector<double> local_drift;
  if (shared_drift == nullptr) {
    local_drift = drift_series(stream, cfg);
    shared_drift = &local_drift;
  } else if (shared_drift->size() !=
             static_cast<std::size_t>(total - warmup)) {
    throw std::invalid_argument("run: shared drift series length mismatch");
  }

  LabelAudit local_audit;
  LabelAudit& aud = audit ? *audit : local_audit;

  Rng run_rng = make_rng(cfg.seed, week_label("run", run_index));

  // Warm-up weeks are inspected in full.
  std::vector<LabeledExample> labeled;
  std::unordered_set<std::string> seen_importers;
  for (int t = 0; t < warmup; ++t) {
    for (const Declaration& d : stream[t].items) {
      aud.allow(d.id);
      const InspectionOutcome& o = d.outcome.reveal(aud, d.id);
      labeled.push_back({&d, o.illicit});
      seen_importers.insert(d.importer_id);
    }
  }

  const ArmGrid grid{cfg.num_arms};
  ControllerState ctrl = init_controller(cfg);
  const ScorerConfig scorer_cfg;

  FraudScorer scorer;
  bool retrain_pending = true;     // initial fit happens before first scoring
  int retrain_week = warmup - 1;   // trained on labels through this week

  SimTimeline out;
  out.method_label = method_label;
  out.seed = cfg.seed;
  out.run_index = run_index;
  out.rows.reserve(static_cast<std::size_t>(total - warmup));

  std::vector<double> scores;
  std::vector<std::uint64_t> ids;
  std::vector<double> revenues;
  std::vector<int> selected;

  for (int t = warmup; t < total; ++t) {
    const WeekBatch& batch = stream[t];
    const int n = static_cast<int>(batch.items.size());
    const int budget_n = budget(batch.items.size(), cfg.inspection_rate);
    const double s = (*shared_drift)[static_cast<std::size_t>(t - warmup)];

    RatioDecision decision;
    switch (method.method) {
      case Method::Adapt: {
        Rng wk = run_rng.fork(week_label("bandit/w", t));
        decision = decide_adapt(ctrl, grid, cfg, s, wk);
        break;
      }
      case Method::Apt: {
        Rng wk = run_rng.fork(week_label("bandit/w", t));
        decision = decide_apt(ctrl, grid, cfg, wk);
        break;
      }
      case Method::Ada:
        decision = decide_ada(s);
        break;
      case Method::Fixed:
        decision.ratio = method.fixed_ratio;
        break;
    }

    // Score only when the exploitation side is non-empty; this also defers
    // (and coalesces) scheduled retrains that no decision ever consulted.
    const int explore_n = round_half_even(decision.ratio * budget_n);
    scores.assign(static_cast<std::size_t>(n), 0.0);
    if (budget_n - explore_n > 0) {
      if (retrain_pending) {
        Rng trainer = run_rng.fork(week_label("scorer/w", retrain_week));
        scorer = train_scorer(labeled, scorer_cfg, trainer);
        retrain_pending = false;
      }
      scorer.score_batch(batch.items, scores);
    }

    ids.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ids[static_cast<std::size_t>(i)] = batch.items[static_cast<std::size_t>(i)].id;
    Rng wk_select = run_rng.fork(week_label("select/w", t));
    const Selection sel =
        select_hybrid(scores, ids, budget_n, decision.ratio, wk_select);

    selected.clear();
    selected.insert(selected.end(), sel.exploit.begin(), sel.exploit.end());
    selected.insert(selected.end(), sel.explore.begin(), sel.explore.end());
    std::sort(selected.begin(), selected.end());

    // Reveal the selected labels (and only those) through the audit.
    int caught = 0;
    double revenue_sel = 0.0;
    for (int pos : selected) {
      const Declaration& d = batch.items[static_cast<std::size_t>(pos)];
      aud.allow(d.id);
      const InspectionOutcome& o = d.outcome.reveal(aud, d.id);
      if (o.illicit) ++caught;
      revenue_sel += o.revenue;
    }

    // Evaluation side: batch-wide ground truth for normalization.
    int total_frauds = 0;
    revenues.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const InspectionOutcome& o =
          batch.items[static_cast<std::size_t>(i)].outcome.evaluation();
      if (o.illicit) ++total_frauds;
      revenues[static_cast<std::size_t>(i)] = o.revenue;
    }

    WeekRow row;
    row.week = t;
    row.k_t = decision.ratio;
    row.drift_s = s;
    row.budget_n = budget_n;
    row.raw_precision = static_cast<double>(caught) / budget_n;
    row.norm_precision = norm_precision(caught, budget_n, total_frauds);
    row.raw_revenue = revenue_sel;
    row.norm_revenue = norm_revenue(revenue_sel, revenues, budget_n);
    row.new_importer_norm_revenue =
        new_importer_slice(batch, selected, seen_importers);
    row.arm = decision.arm;

    const double feedback =
        cfg.feedback_raw_precision ? row.raw_precision : row.norm_precision;
    row.reward = post_feedback(ctrl, decision, feedback, cfg);

    for (int pos : selected) {
      const Declaration& d = batch.items[static_cast<std::size_t>(pos)];
      labeled.push_back({&d, d.outcome.reveal(aud, d.id).illicit});
      seen_importers.insert(d.importer_id);
    }
    row.labeled_total = static_cast<int>(labeled.size());
    out.rows.push_back(std::move(row));

    if ((t - warmup + 1) % cfg.retrain_every_weeks == 0) {
      retrain_pending = true;
      retrain_week = t;
    }
  }

  out.summary = summarize(out.rows);
  return out;
}

RunSet run_averaged(const std::vector<WeekBatch>& stream, const SimConfig& cfg,
                    const MethodSpec& method, const std::string& method_label,
                    int jobs, const std::vector<double>* shared_drift) {
  validate(cfg);
  check_stream(stream, cfg);
  std::vector<double> local_drift;
  if (shared_drift == nullptr) {
    local_drift = drift_series(stream, cfg);
    shared_drift = &local_drift;
  }

  RunSet out;
  out.runs.resize(static_cast<std::size_t>(cfg.runs));
  parallel_for(cfg.runs, jobs, [&](int r) {
    out.runs[static_cast<std::size_t>(r)] =
        run(stream, cfg, method, method_label, r, shared_drift);
  });
  out.mean = mean_of(out.runs);
  return out;
}

OracleResult oracle_sweep(const std::vector<WeekBatch>& stream,
                          const SimConfig& cfg,
                          const std::vector<double>& ratios, int jobs) {
  if (ratios.empty()) throw ConfigError("sweep: no ratios given");
  for (double r : ratios) {
    if (!(r >= 0.0) || r > 1.0) {
      throw ConfigError("sweep: ratio " + std::to_string(r) +
                        " outside [0, 1]");
    }
  }
  validate(cfg);
  check_stream(stream, cfg);
  const std::vector<double> drift = drift_series(stream, cfg);

  const int nr = static_cast<int>(ratios.size());
  OracleResult out;
  out.ratios = ratios;
  out.mean_timelines.resize(static_cast<std::size_t>(nr));

  // Flatten (ratio, run) into one task list so --jobs can cut across both.
  std::vector<std::vector<SimTimeline>> per_ratio(
      static_cast<std::size_t>(nr));
  for (auto& v : per_ratio) v.resize(static_cast<std::size_t>(cfg.runs));
  parallel_for(nr * cfg.runs, jobs, [&](int task) {
    const int ri = task / cfg.runs;
    const int run_idx = task % cfg.runs;
    MethodSpec spec;
    spec.method = Method::Fixed;
    spec.fixed_ratio = ratios[static_cast<std::size_t>(ri)];
    char label[32];
    std::snprintf(label, sizeof(label), "fixed:%g",
                  ratios[static_cast<std::size_t>(ri)]);
    per_ratio[static_cast<std::size_t>(ri)][static_cast<std::size_t>(
        run_idx)] = run(stream, cfg, spec, label, run_idx, &drift);
  });

  for (int ri = 0; ri < nr; ++ri) {
    out.mean_timelines[static_cast<std::size_t>(ri)] =
        mean_of(per_ratio[static_cast<std::size_t>(ri)]);
  }

  out.best_index = 0;
  for (int ri = 1; ri < nr; ++ri) {
    const double best =
        out.mean_timelines[static_cast<std::size_t>(out.best_index)]
            .summary.last_6m.norm_precision;
    const double cand = out.mean_timelines[static_cast<std::size_t>(ri)]
                            .summary.last_6m.norm_precision;
    if (cand > best) out.best_index = ri;
  }
  return out;
}

AblationResult ablation(const std::vector<WeekBatch>& stream,
                        const SimConfig& cfg, int jobs) {
  validate(cfg);
  check_stream(stream, cfg);
  const std::vector<double> drift = drift_series(stream, cfg);
  AblationResult out;
  out.adapt = run_averaged(stream, cfg, {Method::Adapt, 0.0}, "adapt", jobs,
                           &drift);
  out.apt = run_averaged(stream, cfg, {Method::Apt, 0.0}, "apt", jobs, &drift);
  out.ada = run_averaged(stream, cfg, {Method::Ada, 0.0}, "ada", jobs, &drift);
  return out;
}

PearsonResult correlation_report(const SimTimeline& timeline) {
  std::vector<double> x;
  std::vector<double> y;
  x.reserve(timeline.rows.size());
  y.reserve(timeline.rows.size());
  for (const WeekRow& r : timeline.rows) {
    x.push_back(r.drift_s);
    y.push_back(r.norm_precision);
  }
  return pearson(x, y);
}

}  // namespace adaptsel
