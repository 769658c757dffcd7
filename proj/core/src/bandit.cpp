#include "adaptsel/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adaptsel {

double ArmGrid::ratio(int arm) const {
  if (arm < 0 || arm >= num_arms)
    throw std::out_of_range("ArmGrid::ratio: arm out of range");
  // Divide rather than multiply by the step so the endpoints are exactly
  // 0 and 1 (i / 20.0 is correctly rounded; 20 * 0.05 is not exactly 1).
  return static_cast<double>(arm) / static_cast<double>(num_arms - 1);
}

int ArmGrid::nearest(double s) const {
  const double clamped = std::clamp(s, 0.0, 1.0);
  const int arm = static_cast<int>(std::floor(clamped * (num_arms - 1) + 0.5));
  return std::min(arm, num_arms - 1);
}

BanditState init_state(int num_arms) {
  if (num_arms < 2)
    throw std::invalid_argument("init_state: num_arms must be >= 2");
  BanditState s;
  s.weights.assign(num_arms, 1.0);
  return s;
}

std::vector<double> selection_probabilities(const BanditState& state,
                                            double epsilon) {
  const std::size_t k = state.weights.size();
  if (k < 2) throw std::invalid_argument("selection_probabilities: bad state");
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("selection_probabilities: epsilon must be in [0, 1]");

  double total = 0.0;
  for (double w : state.weights) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw std::invalid_argument("selection_probabilities: weights must be finite and non-negative");
    total += w;
  }
  if (total <= 0.0)
    throw std::invalid_argument("selection_probabilities: weights sum to zero");

  std::vector<double> p(k);
  for (std::size_t i = 0; i < k; ++i)
    p[i] = epsilon / static_cast<double>(k) +
           (1.0 - epsilon) * state.weights[i] / total;
  return p;
}

int draw_arm(std::span<const double> probs, Rng& rng) {
  if (probs.empty()) throw std::invalid_argument("draw_arm: empty distribution");
  // Rng::discrete validates non-negativity, finiteness, and a positive sum.
  return static_cast<int>(rng.discrete(probs));
}

double discounted_mean(std::span<const double> history, double gamma) {
  if (history.empty())
    throw std::invalid_argument("discounted_mean: empty history");
  if (!(gamma > 0.0) || gamma > 1.0)
    throw std::invalid_argument("discounted_mean: gamma must be in (0, 1]");

  double num = 0.0, den = 0.0, w = 1.0;
  for (std::size_t j = history.size(); j-- > 0;) {
    num += w * history[j];
    den += w;
    w *= gamma;
  }
  return num / den;
}

double reward(double precision, double baseline) {
  if (precision < 0.0 || baseline < 0.0)
    throw std::invalid_argument("reward: precisions must be non-negative");
  if (precision == 0.0) return -1.0;
  return std::clamp((precision - baseline) / precision, -1.0, 1.0);
}

void update(BanditState& state, int arm, double reward_value,
            double prob_played, const BanditParams& params) {
  const std::size_t k = state.weights.size();
  if (arm < 0 || static_cast<std::size_t>(arm) >= k)
    throw std::out_of_range("update: arm out of range");
  if (!(prob_played > 0.0) || prob_played > 1.0)
    throw std::invalid_argument("update: prob_played must be in (0, 1]");
  if (reward_value < -1.0 || reward_value > 1.0)
    throw std::invalid_argument("update: reward must be in [-1, 1]");
  if (params.sign != 1 && params.sign != -1)
    throw std::invalid_argument("update: sign must be +1 or -1");

  // Importance-weighted reward estimate for the played arm.
  const double r_hat = reward_value / prob_played;
  // With the epsilon floor of the default config the exponent stays within
  // +-700 by a margin; the clamp only guards pathological parameterizations
  // from producing inf.
  const double x = std::clamp(params.sign * params.eta * r_hat, -700.0, 700.0);
  state.weights[arm] *= std::exp(x);

  if (params.alpha > 0.0) {
    double total = 0.0;
    for (double w : state.weights) total += w;
    const double share =
        std::exp(1.0) * params.alpha * total / static_cast<double>(k);
    for (double& w : state.weights) w += share;
  }

  // Renormalize to sum k. Ratios between weights are preserved, so the
  // induced probabilities are unchanged.
  double total = 0.0;
  for (double w : state.weights) total += w;
  if (!(total > 0.0) || !std::isfinite(total))
    throw std::runtime_error("update: weights degenerated");
  const double scale = static_cast<double>(k) / total;
  for (double& w : state.weights) w *= scale;
}

}  // namespace adaptsel
