#pragma once

#include <cstdint>
#include <string>

namespace adaptsel {

// Knobs for one simulation. Defaults reproduce the reference setup; every
// field can be overridden from a JSON config file. See validate() for the
// accepted ranges.
struct SimConfig {
  double inspection_rate = 0.10;    // weekly capacity as a fraction of batch
  int warmup_weeks = 8;             // weeks inspected uniformly at random
  int validation_window_weeks = 4;  // trailing weeks used as drift reference
  double arm_step = 0.05;           // spacing of the exploration-ratio grid
  int num_arms = 21;                // grid size; must span [0, 1] exactly
  double eta = 3.0;                 // bandit learning rate
  double epsilon = 0.1;             // uniform exploration floor over arms
  double alpha = 0.001;             // weight-sharing rate across arms
  double gamma = 0.9;               // discount for the precision baseline
  double window_halfwidth = 0.25;   // half-width of the drift-score window
  int bootstrap_sample = 512;       // points per transport solve
  int bootstrap_repeats = 5;        // resampled solves averaged per score
  int embed_dim = 16;               // embedding dimensionality
  int retrain_every_weeks = 1;      // scorer refresh cadence
  std::uint64_t seed = 42;
  int runs = 5;                     // repetitions for averaged experiments
  int moving_avg_weeks = 14;        // smoothing window for report curves

  // The two published descriptions of the weight update disagree on the sign
  // of the exponent; +1 (reward raises the played arm's weight) is the
  // behaviour consistent with the update's own convergence claim and is the
  // default. -1 reproduces the alternative reading.
  int reward_sign = +1;
  // Whether the discounted precision baseline includes the current week as
  // its most recent term (the reference formulation does).
  bool mean_includes_current = true;
  // Feed raw precision to the controller instead of normalized precision.
  bool feedback_raw_precision = false;
};

// Read + parse + validate. Unknown keys, type mismatches, and out-of-range
// values all raise ConfigError.
SimConfig load_sim_config(const std::string& path);
SimConfig parse_sim_config(const std::string& json_text);
void validate(const SimConfig& cfg);

// Fully-resolved config as a JSON object string (used in run manifests).
std::string to_json_string(const SimConfig& cfg);

}  // namespace adaptsel
