// Microbenchmarks for the hot paths: transport solves, drift scoring,
// scorer training, and weekly selection.

#include <benchmark/benchmark.h>

#include <vector>

#include "adaptsel/assignment.hpp"
#include "adaptsel/bandit.hpp"
#include "adaptsel/datagen.hpp"
#include "adaptsel/drift.hpp"
#include "adaptsel/rng.hpp"
#include "adaptsel/scorer.hpp"
#include "adaptsel/select.hpp"

namespace {

using namespace adaptsel;

std::vector<double> random_cost(int n, int m, Rng& rng) {
  std::vector<double> c(static_cast<std::size_t>(n) * m);
  for (double& v : c) v = rng.uniform();
  return c;
}

PointCloud random_cloud(int n, int dim, Rng& rng) {
  PointCloud c;
  c.dim = dim;
  c.xs.resize(static_cast<std::size_t>(n) * dim);
  for (double& v : c.xs) v = rng.normal();
  return c;
}

void BM_solve_assignment(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1, "bench/assignment");
  const auto cost = random_cost(n, n, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_assignment(cost.data(), n));
  }
}
BENCHMARK(BM_solve_assignment)->Arg(64)->Arg(128)->Arg(256);

void BM_uniform_transport(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int m = n / 2;
  Rng rng(2, "bench/transport");
  const auto cost = random_cost(n, m, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_uniform_transport(cost.data(), n, m));
  }
}
BENCHMARK(BM_uniform_transport)->Arg(128)->Arg(256);

void BM_drift_score(benchmark::State& state) {
  Rng rng(3, "bench/drift");
  const PointCloud a = random_cloud(2000, 16, rng);
  const PointCloud b = random_cloud(8000, 16, rng);
  const DriftConfig cfg{256, 5};
  for (auto _ : state) {
    Rng r(3, "bench/drift/score");
    benchmark::DoNotOptimize(drift_score(a, b, cfg, r));
  }
}
BENCHMARK(BM_drift_score);

std::vector<WeekBatch> bench_stream(int weeks) {
  ScenarioConfig scen;
  scen.weeks = weeks;
  scen.items_per_week = 2000;
  scen.seed = 11;
  return generate(scen);
}

void BM_train_scorer(benchmark::State& state) {
  const int weeks = static_cast<int>(state.range(0));
  const auto stream = bench_stream(weeks);
  std::vector<LabeledExample> examples;
  for (const auto& wb : stream) {
    for (const auto& d : wb.items) {
      examples.push_back({&d, d.outcome.evaluation().illicit});
    }
  }
  const ScorerConfig cfg;
  for (auto _ : state) {
    Rng rng(4, "bench/train");
    benchmark::DoNotOptimize(train_scorer(examples, cfg, rng));
  }
}
BENCHMARK(BM_train_scorer)->Arg(2)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_score_batch(benchmark::State& state) {
  const auto stream = bench_stream(9);
  std::vector<LabeledExample> examples;
  for (int t = 0; t < 8; ++t) {
    for (const auto& d : stream[static_cast<std::size_t>(t)].items) {
      examples.push_back({&d, d.outcome.evaluation().illicit});
    }
  }
  Rng rng(5, "bench/score");
  const FraudScorer scorer = train_scorer(examples, ScorerConfig{}, rng);
  std::vector<double> out(stream.back().items.size());
  for (auto _ : state) {
    scorer.score_batch(stream.back().items, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_score_batch);

void BM_select_hybrid(benchmark::State& state) {
  const int n = 2000;
  Rng rng(6, "bench/select");
  std::vector<double> scores(n);
  std::vector<std::uint64_t> ids(n);
  for (int i = 0; i < n; ++i) {
    scores[static_cast<std::size_t>(i)] = rng.uniform();
    ids[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(i + 1);
  }
  for (auto _ : state) {
    Rng r(6, "bench/select/draw");
    benchmark::DoNotOptimize(select_hybrid(scores, ids, 200, 0.25, r));
  }
}
BENCHMARK(BM_select_hybrid);

void BM_bandit_update(benchmark::State& state) {
  BanditState bandit = init_state(21);
  const BanditParams params;
  Rng rng(7, "bench/bandit");
  for (auto _ : state) {
    const auto probs = selection_probabilities(bandit, params.epsilon);
    const int arm = draw_arm(probs, rng);
    update(bandit, arm, 0.25, probs[static_cast<std::size_t>(arm)], params);
    benchmark::DoNotOptimize(bandit.weights.data());
  }
}
BENCHMARK(BM_bandit_update);

}  // namespace

BENCHMARK_MAIN();
