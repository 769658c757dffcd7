#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adaptsel/types.hpp"

namespace adaptsel {

// Fraud behaviour of one regime. `rate` is the illicit probability among
// the declarations the regime governs; `separability` is the fraction of
// those frauds that actually carry the regime's numeric signature (the rest
// look legitimate and bound the achievable precision). Recovered duty for a
// caught fraud is lognormal(revenue_mu, revenue_sigma).
struct FraudRule {
  double rate = 0.12;
  double separability = 0.95;
  double revenue_mu = 8.0;
  double revenue_sigma = 1.0;
};

// Synthetic weekly declaration stream. Regime A frauds undervalue against
// weight (low value/weight); regime B frauds arrive inside a weekly-fresh
// importer cohort and undervalue against quantity (low value/quantity)
// while looking perfectly ordinary on value/weight. Token popularity is
// zipf-skewed, which keeps week-over-week embedding distances small until
// the cohort (new tokens, shifted numerics) starts arriving.
//
// drift_kind:
//   none        stationary regime A throughout
//   sudden      regime B replaces A's pattern at drift_week
//   gradual     mixing probability ramps over ramp_weeks
//   incremental regime B's signature also walks from A-like to its target
//   recurrent   regimes alternate every recur_period/2 weeks after onset
struct ScenarioConfig {
  int weeks = 156;
  int items_per_week = 2000;
  std::string drift_kind = "none";
  int drift_week = 78;
  int ramp_weeks = 26;
  int recur_period = 52;

  int tariff_vocab = 60;
  int importer_vocab = 400;
  int declarant_vocab = 120;
  int office_vocab = 12;
  double zipf_exponent = 2.5;  // popularity skew shared by all four vocabs

  double churn_rate = 0.02;    // stationary share of brand-new importers
  double cohort_share = 0.24;  // in-drift share from the weekly fresh cohort
  int cohort_ids = 40;         // distinct cohort importer ids per week
  double residual_rate = 0.02; // non-cohort illicit rate once A is retired

  FraudRule regime_a{0.12, 0.95, 8.0, 1.0};
  FraudRule regime_b{0.50, 0.95, 8.5, 1.0};

  std::uint64_t seed = 7;
};

ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& json_text);
void validate(const ScenarioConfig& cfg);
std::string to_json_string(const ScenarioConfig& cfg);

std::vector<WeekBatch> generate(const ScenarioConfig& cfg);

}  // namespace adaptsel
