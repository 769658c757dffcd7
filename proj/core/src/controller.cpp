#include "adaptsel/controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace adaptsel {

std::optional<MethodSpec> parse_method(const std::string& label) {
  if (label == "adapt") return MethodSpec{Method::Adapt, 0.0};
  if (label == "apt") return MethodSpec{Method::Apt, 0.0};
  if (label == "ada") return MethodSpec{Method::Ada, 0.0};
  if (label == "exploit") return MethodSpec{Method::Fixed, 0.0};
  if (label == "explore") return MethodSpec{Method::Fixed, 1.0};
  if (label.rfind("fixed:", 0) == 0) {
    const std::string num = label.substr(6);
    try {
      std::size_t used = 0;
      const double r = std::stod(num, &used);
      if (used != num.size() || !(r >= 0.0) || r > 1.0) return std::nullopt;
      return MethodSpec{Method::Fixed, r};
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

ControllerState init_controller(const SimConfig& cfg) {
  ControllerState s;
  s.bandit = init_state(cfg.num_arms);
  return s;
}

std::vector<double> filter_arms(std::span<const double> probs,
                                const ArmGrid& grid, double s, double l) {
  if (static_cast<int>(probs.size()) != grid.num_arms)
    throw std::invalid_argument("filter_arms: probs/grid size mismatch");
  if (!(l > 0.0) || l > 1.0)
    throw std::invalid_argument("filter_arms: l must be in (0, 1]");
  if (s < 0.0 || s > 1.0)
    throw std::invalid_argument("filter_arms: s must be in [0, 1]");

  const double lo = std::max(0.0, s - l) - 1e-12;
  const double hi = std::min(1.0, s + l) + 1e-12;

  std::vector<double> out(probs.size(), 0.0);
  double mass = 0.0;
  for (int i = 0; i < grid.num_arms; ++i) {
    const double r = grid.ratio(i);
    if (r >= lo && r <= hi) {
      out[i] = probs[i];
      mass += probs[i];
    }
  }
  if (mass <= 0.0) {
    // Window devoid of mass: deterministic point mass on the nearest arm.
    std::fill(out.begin(), out.end(), 0.0);
    out[grid.nearest(s)] = 1.0;
    return out;
  }
  for (double& p : out) p /= mass;
  return out;
}

namespace {

BanditParams bandit_params(const SimConfig& cfg) {
  return BanditParams{cfg.eta, cfg.epsilon, cfg.alpha, cfg.reward_sign};
}

RatioDecision decide_windowed(ControllerState& state, const ArmGrid& grid,
                              const SimConfig& cfg, double s, double l,
                              Rng& rng) {
  const auto probs = selection_probabilities(state.bandit, cfg.epsilon);
  const auto filtered = filter_arms(probs, grid, s, l);

  RatioDecision d;
  d.arm = draw_arm(filtered, rng);
  d.prob = filtered[d.arm];
  d.ratio = grid.ratio(d.arm);
  return d;
}

}  // namespace

RatioDecision decide_adapt(ControllerState& state, const ArmGrid& grid,
                           const SimConfig& cfg, double drift_s, Rng& rng) {
  return decide_windowed(state, grid, cfg, drift_s, cfg.window_halfwidth, rng);
}

RatioDecision decide_apt(ControllerState& state, const ArmGrid& grid,
                         const SimConfig& cfg, Rng& rng) {
  // l = 1 makes the window [0, 1] for any s, i.e. no filtering.
  return decide_windowed(state, grid, cfg, 0.0, 1.0, rng);
}

RatioDecision decide_ada(double drift_s) {
  if (drift_s < 0.0 || drift_s > 1.0)
    throw std::invalid_argument("decide_ada: s must be in [0, 1]");
  RatioDecision d;
  d.arm = -1;
  d.ratio = drift_s;  // continuous, deliberately not snapped to the grid
  return d;
}

double post_feedback(ControllerState& state, const RatioDecision& decision,
                     double precision, const SimConfig& cfg) {
  if (decision.arm < 0) return 0.0;  // nothing to update for ADA/FIXED
  if (precision < 0.0 || precision > 1.0)
    throw std::invalid_argument("post_feedback: precision must be in [0, 1]");

  double baseline;
  if (cfg.mean_includes_current) {
    state.precision_history.push_back(precision);
    baseline = discounted_mean(state.precision_history, cfg.gamma);
  } else {
    baseline = state.precision_history.empty()
                   ? precision
                   : discounted_mean(state.precision_history, cfg.gamma);
    state.precision_history.push_back(precision);
  }

  const double r = reward(precision, baseline);
  update(state.bandit, decision.arm, r, decision.prob, bandit_params(cfg));
  return r;
}

std::string controller_snapshot_json(const ControllerState& state,
                                     const SimConfig& cfg) {
  nlohmann::json j;
  j["weights"] = state.bandit.weights;
  j["precision_history"] = state.precision_history;
  j["params"] = {
      {"eta", cfg.eta},
      {"epsilon", cfg.epsilon},
      {"alpha", cfg.alpha},
      {"gamma", cfg.gamma},
      {"window_halfwidth", cfg.window_halfwidth},
      {"num_arms", cfg.num_arms},
      {"reward_sign", cfg.reward_sign},
      {"mean_includes_current", cfg.mean_includes_current},
  };
  return j.dump(2);
}

}  // namespace adaptsel
