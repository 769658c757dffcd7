#include "adaptsel/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "adaptsel/errors.hpp"
#include "adaptsel/rng.hpp"

namespace adaptsel {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) {
  throw ConfigError("scenario: " + msg);
}

// Zipf-weighted token table: token i is drawn with weight (i+1)^-exponent.
class TokenTable {
 public:
  TokenTable(char prefix, int vocab, double exponent) {
    cum_.reserve(vocab);
    double acc = 0.0;
    for (int i = 0; i < vocab; ++i) {
      acc += std::pow(static_cast<double>(i + 1), -exponent);
      cum_.push_back(acc);
    }
    names_.reserve(vocab);
    for (int i = 0; i < vocab; ++i) {
      std::ostringstream os;
      os << prefix << i;
      names_.push_back(os.str());
    }
  }

  const std::string& draw(Rng& rng) const {
    const double u = rng.uniform() * cum_.back();
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
    const std::size_t i =
        std::min<std::size_t>(it - cum_.begin(), names_.size() - 1);
    return names_[i];
  }

 private:
  std::vector<double> cum_;
  std::vector<std::string> names_;
};

// Numeric shape constants (log space). Legitimate trade declares a high
// value per kg and per unit; regime A frauds undervalue per kg; regime B
// frauds undervalue per unit while sitting, like the whole cohort, well
// *above* the legitimate value/weight band — a scorer fitted to regime A
// therefore ranks cohort items at the very bottom of its ordering.
constexpr double kFobMu = 10.0, kFobSigma = 1.0;
constexpr double kLegitVwMu = 1.5, kLegitVwSigma = 0.5;
constexpr double kLegitVqMu = 1.2, kLegitVqSigma = 0.6;
constexpr double kFraudVwMu = 0.0, kFraudVwSigma = 0.30;
constexpr double kFraudVqMu = -0.5, kFraudVqSigma = 0.4;
constexpr double kCohortVwMu = 3.0, kCohortVwSigma = 0.35;
constexpr double kCohortFraudVwMu = 3.4, kCohortFraudVwSigma = 0.30;

// A sliver of regime A frauds undervalue only partially, spread evenly
// between the fraud core and the legitimate band. Their labels teach any
// supervised ranker a *graded* suspicion slope across that whole stretch
// (more suspicious the lower the value/weight), instead of a cliff from
// "fraud band" straight to "indistinguishably legitimate". The slope is what
// keeps an inspection budget meaningfully ordered even in weeks where the
// familiar fraud band has mostly emptied out.
constexpr double kFraudVwTailShare = 0.08;
constexpr double kFraudVwTailLo = 0.8, kFraudVwTailHi = 2.2;
constexpr double kFraudVwTailSigma = 0.10;

// A thin slice of legitimate trade (dense, high-value goods) declares the
// same extreme value/weight band the regime B cohort later adopts. Those
// items are labeled legitimate from the first warmup week, so a ranker
// trained before the drift holds the whole band confidently at the bottom
// of its ordering — and inside the band it is the *highest* value densities,
// where cohort frauds sit, that look most familiar-legitimate. The cohort is
// camouflage, not an outlier: only deliberately spent inspections reveal it.
constexpr double kDenseGoodsShare = 0.012;
constexpr double kDenseGoodsVwMu = 3.0, kDenseGoodsVwSigma = 0.40;

// Regime B shifts the batch-wide feature marginals as well as the fraud
// rule: overall declared values run higher and per-unit values lower, so
// the drift is visible to the unsupervised scorer, not only to whoever
// inspects the cohort.
constexpr double kRegimeBFobShift = 0.6;
constexpr double kRegimeBVqShift = 0.5;

// Regime A frauds keep whatever tariff code they drew, so no tariff bucket
// is fraud-dominated before the drift — a scorer trained on regime A ranks
// by the numeric channels alone and cannot pull cohort items into its head
// through a lucky tariff-bucket collision. Regime B's cohort declares under
// a block of tariff codes that never appears before the drift; once explored
// labels arrive, that block is a crisp retrainable marker.
constexpr int kCohortTariffs = 12;

// Drift intensity at week t in [0, 1].
double regime_mix(const ScenarioConfig& cfg, int week) {
  if (cfg.drift_kind == "none" || week < cfg.drift_week) return 0.0;
  if (cfg.drift_kind == "sudden") return 1.0;
  if (cfg.drift_kind == "gradual" || cfg.drift_kind == "incremental") {
    const double x = static_cast<double>(week - cfg.drift_week + 1) / cfg.ramp_weeks;
    return std::min(1.0, x);
  }
  // recurrent: alternate half-periods, starting with regime B
  const int half = std::max(1, cfg.recur_period / 2);
  return ((week - cfg.drift_week) / half) % 2 == 0 ? 1.0 : 0.0;
}

}  // namespace

void validate(const ScenarioConfig& cfg) {
  if (cfg.weeks < 1) bad("weeks must be >= 1");
  if (cfg.items_per_week < 1) bad("items_per_week must be >= 1");
  if (cfg.drift_kind != "none" && cfg.drift_kind != "sudden" &&
      cfg.drift_kind != "gradual" && cfg.drift_kind != "incremental" &&
      cfg.drift_kind != "recurrent")
    bad("drift_kind must be one of none|sudden|gradual|incremental|recurrent");
  if (cfg.drift_week < 0) bad("drift_week must be >= 0");
  if (cfg.ramp_weeks < 1) bad("ramp_weeks must be >= 1");
  if (cfg.recur_period < 2) bad("recur_period must be >= 2");
  if (cfg.tariff_vocab < 1 || cfg.importer_vocab < 1 ||
      cfg.declarant_vocab < 1 || cfg.office_vocab < 1)
    bad("vocabulary sizes must be >= 1");
  if (cfg.zipf_exponent < 0.0) bad("zipf_exponent must be >= 0");
  if (cfg.churn_rate < 0.0 || cfg.churn_rate > 1.0) bad("churn_rate must be in [0, 1]");
  if (cfg.cohort_share < 0.0 || cfg.cohort_share > 1.0)
    bad("cohort_share must be in [0, 1]");
  if (cfg.churn_rate + cfg.cohort_share > 1.0)
    bad("churn_rate + cohort_share must not exceed 1");
  if (cfg.cohort_ids < 1) bad("cohort_ids must be >= 1");
  if (cfg.residual_rate < 0.0 || cfg.residual_rate > 1.0)
    bad("residual_rate must be in [0, 1]");
  for (const FraudRule* r : {&cfg.regime_a, &cfg.regime_b}) {
    if (r->rate < 0.0 || r->rate > 1.0) bad("fraud rate must be in [0, 1]");
    if (r->separability < 0.0 || r->separability > 1.0)
      bad("separability must be in [0, 1]");
    if (r->revenue_sigma < 0.0) bad("revenue_sigma must be >= 0");
  }
}

std::vector<WeekBatch> generate(const ScenarioConfig& cfg) {
  validate(cfg);

  const TokenTable tariffs('T', cfg.tariff_vocab, cfg.zipf_exponent);
  const TokenTable importers('I', cfg.importer_vocab, cfg.zipf_exponent);
  const TokenTable declarants('D', cfg.declarant_vocab, cfg.zipf_exponent);
  const TokenTable offices('O', cfg.office_vocab, cfg.zipf_exponent);

  const Rng master(cfg.seed, "datagen");
  std::vector<WeekBatch> stream;
  stream.reserve(cfg.weeks);
  std::uint64_t next_id = 1;

  for (int t = 0; t < cfg.weeks; ++t) {
    Rng rng = master.fork("w" + std::to_string(t));
    const double mix = regime_mix(cfg, t);
    // Incremental drift walks regime B's signature from legitimate-looking
    // to its target instead of switching it on.
    const double vq_mu = cfg.drift_kind == "incremental"
                             ? kLegitVqMu + mix * (kFraudVqMu - kLegitVqMu)
                             : kFraudVqMu;
    const double fob_mu_t = kFobMu + mix * kRegimeBFobShift;
    const double legit_vq_mu_t = kLegitVqMu - mix * kRegimeBVqShift;

    WeekBatch batch;
    batch.week = t;
    batch.items.reserve(cfg.items_per_week);

    int churn_seq = 0;
    for (int j = 0; j < cfg.items_per_week; ++j) {
      Declaration d;
      d.id = next_id++;
      d.week = t;
      d.tariff_code = tariffs.draw(rng);
      d.declarant_id = declarants.draw(rng);
      d.office_id = offices.draw(rng);

      const double u = rng.uniform();
      const bool in_cohort = u < cfg.cohort_share * mix;
      const bool is_churn = !in_cohort && u < cfg.cohort_share * mix + cfg.churn_rate;

      double vw_mu = kLegitVwMu, vw_sigma = kLegitVwSigma;
      double lvq_mu = legit_vq_mu_t, lvq_sigma = kLegitVqSigma;
      bool illicit = false;
      double revenue = 0.0;

      if (in_cohort) {
        d.importer_id = "C" + std::to_string(t) + "x" +
                        std::to_string(rng.below(cfg.cohort_ids));
        d.tariff_code = "TB" + std::to_string(rng.below(kCohortTariffs));
        vw_mu = kCohortVwMu;
        vw_sigma = kCohortVwSigma;
        illicit = rng.bernoulli(cfg.regime_b.rate);
        if (illicit && rng.bernoulli(cfg.regime_b.separability)) {
          lvq_mu = vq_mu;
          lvq_sigma = kFraudVqSigma;
          // Cohort frauds sit at the top of the cohort's own value/weight
          // band: anything that slips out of the band's low tail into an
          // exploitation-era inspection is almost surely legitimate, so the
          // labels an unadapted scorer collects only reinforce its blind
          // spot until genuine exploration reaches the cohort.
          vw_mu = kCohortFraudVwMu;
          vw_sigma = kCohortFraudVwSigma;
        }
        if (illicit)
          revenue = rng.lognormal(cfg.regime_b.revenue_mu, cfg.regime_b.revenue_sigma);
      } else {
        if (is_churn)
          d.importer_id = "N" + std::to_string(t) + "x" + std::to_string(churn_seq++);
        else
          d.importer_id = importers.draw(rng);
        // Outside the cohort, regime A gradually retires as the mix rises.
        const double rate =
            cfg.regime_a.rate * (1.0 - mix) + cfg.residual_rate * mix;
        illicit = rng.bernoulli(rate);
        if (illicit && rng.bernoulli(cfg.regime_a.separability)) {
          if (rng.bernoulli(kFraudVwTailShare)) {
            vw_mu = rng.uniform(kFraudVwTailLo, kFraudVwTailHi);
            vw_sigma = kFraudVwTailSigma;
          } else {
            vw_mu = kFraudVwMu;
            vw_sigma = kFraudVwSigma;
          }
        } else if (!illicit && rng.bernoulli(kDenseGoodsShare)) {
          vw_mu = kDenseGoodsVwMu;
          vw_sigma = kDenseGoodsVwSigma;
        }
        if (illicit)
          revenue = rng.lognormal(cfg.regime_a.revenue_mu, cfg.regime_a.revenue_sigma);
      }

      d.fob_value = rng.lognormal(fob_mu_t, kFobSigma);
      d.gross_weight = d.fob_value / std::exp(rng.normal(vw_mu, vw_sigma));
      d.quantity = d.fob_value / std::exp(rng.normal(lvq_mu, lvq_sigma));
      d.outcome = SealedOutcome({illicit, revenue});

      batch.items.push_back(std::move(d));
    }
    stream.push_back(std::move(batch));
  }
  return stream;
}

namespace {

double as_real(const json& v, const std::string& key) {
  if (!v.is_number()) bad(key + " must be a number");
  return v.get<double>();
}

std::int64_t as_int(const json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d == std::floor(d)) return static_cast<std::int64_t>(d);
  }
  bad(key + " must be an integer");
}

FraudRule parse_rule(const json& j, const std::string& name) {
  if (!j.is_object()) bad(name + " must be an object");
  FraudRule r = name == "regime_b" ? FraudRule{0.50, 0.95, 8.5, 1.0}
                                   : FraudRule{0.12, 0.95, 8.0, 1.0};
  for (const auto& [key, value] : j.items()) {
    const std::string full = name + "." + key;
    if (key == "rate") r.rate = as_real(value, full);
    else if (key == "separability") r.separability = as_real(value, full);
    else if (key == "revenue_mu") r.revenue_mu = as_real(value, full);
    else if (key == "revenue_sigma") r.revenue_sigma = as_real(value, full);
    else bad("unknown key \"" + full + "\"");
  }
  return r;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be a JSON object");

  ScenarioConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "weeks") cfg.weeks = static_cast<int>(as_int(value, key));
    else if (key == "items_per_week") cfg.items_per_week = static_cast<int>(as_int(value, key));
    else if (key == "drift_kind") {
      if (!value.is_string()) bad("drift_kind must be a string");
      cfg.drift_kind = value.get<std::string>();
    } else if (key == "drift_week") cfg.drift_week = static_cast<int>(as_int(value, key));
    else if (key == "ramp_weeks") cfg.ramp_weeks = static_cast<int>(as_int(value, key));
    else if (key == "recur_period") cfg.recur_period = static_cast<int>(as_int(value, key));
    else if (key == "tariff_vocab") cfg.tariff_vocab = static_cast<int>(as_int(value, key));
    else if (key == "importer_vocab") cfg.importer_vocab = static_cast<int>(as_int(value, key));
    else if (key == "declarant_vocab") cfg.declarant_vocab = static_cast<int>(as_int(value, key));
    else if (key == "office_vocab") cfg.office_vocab = static_cast<int>(as_int(value, key));
    else if (key == "zipf_exponent") cfg.zipf_exponent = as_real(value, key);
    else if (key == "churn_rate") cfg.churn_rate = as_real(value, key);
    else if (key == "cohort_share") cfg.cohort_share = as_real(value, key);
    else if (key == "cohort_ids") cfg.cohort_ids = static_cast<int>(as_int(value, key));
    else if (key == "residual_rate") cfg.residual_rate = as_real(value, key);
    else if (key == "regime_a") cfg.regime_a = parse_rule(value, "regime_a");
    else if (key == "regime_b") cfg.regime_b = parse_rule(value, "regime_b");
    else if (key == "seed") {
      const std::int64_t s = as_int(value, key);
      if (s < 0) bad("seed must be non-negative");
      cfg.seed = static_cast<std::uint64_t>(s);
    } else bad("unknown key \"" + key + "\"");
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string to_json_string(const ScenarioConfig& cfg) {
  json j;
  j["weeks"] = cfg.weeks;
  j["items_per_week"] = cfg.items_per_week;
  j["drift_kind"] = cfg.drift_kind;
  j["drift_week"] = cfg.drift_week;
  j["ramp_weeks"] = cfg.ramp_weeks;
  j["recur_period"] = cfg.recur_period;
  j["tariff_vocab"] = cfg.tariff_vocab;
  j["importer_vocab"] = cfg.importer_vocab;
  j["declarant_vocab"] = cfg.declarant_vocab;
  j["office_vocab"] = cfg.office_vocab;
  j["zipf_exponent"] = cfg.zipf_exponent;
  j["churn_rate"] = cfg.churn_rate;
  j["cohort_share"] = cfg.cohort_share;
  j["cohort_ids"] = cfg.cohort_ids;
  j["residual_rate"] = cfg.residual_rate;
  j["regime_a"] = {{"rate", cfg.regime_a.rate},
                   {"separability", cfg.regime_a.separability},
                   {"revenue_mu", cfg.regime_a.revenue_mu},
                   {"revenue_sigma", cfg.regime_a.revenue_sigma}};
  j["regime_b"] = {{"rate", cfg.regime_b.rate},
                   {"separability", cfg.regime_b.separability},
                   {"revenue_mu", cfg.regime_b.revenue_mu},
                   {"revenue_sigma", cfg.regime_b.revenue_sigma}};
  j["seed"] = cfg.seed;
  return j.dump(2);
}

}  // namespace adaptsel
