#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adaptsel/bandit.hpp"
#include "adaptsel/config.hpp"
#include "adaptsel/rng.hpp"

namespace adaptsel {

// How the weekly exploration ratio is chosen.
//  - Adapt: bandit restricted to a drift-centered window of arms
//  - Apt:   the same bandit with the window disabled (full grid)
//  - Ada:   the drift score used directly as the ratio, no bandit
//  - Fixed: constant ratio
enum class Method { Adapt, Apt, Ada, Fixed };

struct MethodSpec {
  Method method = Method::Adapt;
  double fixed_ratio = 0.0;  // only for Method::Fixed
};

// Parse a method label: "adapt", "apt", "ada", "fixed:<r>", plus the
// aliases "exploit" (fixed:0) and "explore" (fixed:1). Returns nullopt on
// anything else.
std::optional<MethodSpec> parse_method(const std::string& label);

struct RatioDecision {
  double ratio = 0.0;  // exploration ratio k_t for the week
  int arm = -1;        // grid arm played; -1 when no bandit was involved
  double prob = 1.0;   // probability the arm was drawn with (realized law)
};

// Mutable per-run controller state: bandit weights plus the precision
// history that feeds the discounted baseline.
struct ControllerState {
  BanditState bandit;
  std::vector<double> precision_history;
};

ControllerState init_controller(const SimConfig& cfg);

// Zero out probability mass outside [max(0, s-l), min(1, s+l)] (boundary
// arms inclusive, with 1e-12 slack for grid round-off) and renormalize to a
// distribution. If the window holds no probability mass, the arm nearest s
// receives mass 1 instead.
std::vector<double> filter_arms(std::span<const double> probs,
                                const ArmGrid& grid, double s, double l);

RatioDecision decide_adapt(ControllerState& state, const ArmGrid& grid,
                           const SimConfig& cfg, double drift_s, Rng& rng);
// Identical to decide_adapt with the window widened to cover [0, 1], so the
// two produce the same draw sequence under equal seeds.
RatioDecision decide_apt(ControllerState& state, const ArmGrid& grid,
                         const SimConfig& cfg, Rng& rng);
// The drift score, used directly (not snapped to the grid).
RatioDecision decide_ada(double drift_s);

// Record this week's normalized precision, compute the reward against the
// discounted baseline, and update the played arm using the probability it
// was actually drawn with. A no-op (returns 0) for decisions that did not
// come from the bandit. Returns the reward for logging.
double post_feedback(ControllerState& state, const RatioDecision& decision,
                     double precision, const SimConfig& cfg);

// JSON object with the bandit weights, the precision history feeding the
// baseline, and the parameters in effect -- enough to inspect or replay the
// controller from a given week onward.
std::string controller_snapshot_json(const ControllerState& state,
                                     const SimConfig& cfg);

}  // namespace adaptsel
