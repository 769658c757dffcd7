#pragma once

#include <span>
#include <vector>

#include "adaptsel/rng.hpp"

namespace adaptsel {

// Evenly spaced exploration ratios {0, step, ..., 1}.
struct ArmGrid {
  int num_arms = 21;

  double ratio(int arm) const;  // arm / (num_arms - 1), exact at both ends
  int nearest(double s) const;  // closest arm to s in [0, 1]; ties round up
};

struct BanditParams {
  double eta = 3.0;      // learning rate
  double epsilon = 0.1;  // uniform mixing floor
  double alpha = 0.001;  // weight sharing toward uniform (tracks change)
  int sign = +1;         // sign of the exponent in the weight update
};

// Adversarial-bandit weights over the arm grid. Weights are kept normalized
// to sum to num_arms (scale does not affect the induced probabilities, and
// normalizing prevents drift toward overflow or underflow across thousands
// of updates).
struct BanditState {
  std::vector<double> weights;
};

BanditState init_state(int num_arms);

// p_i = epsilon / k + (1 - epsilon) * w_i / sum(w).
std::vector<double> selection_probabilities(const BanditState& state,
                                            double epsilon);

// Sample an index from an explicit probability vector. Rejects negative or
// non-finite entries and an all-zero vector.
int draw_arm(std::span<const double> probs, Rng& rng);

// Exponentially discounted mean of a precision history, most recent entry
// weighted 1. Errors on an empty history.
double discounted_mean(std::span<const double> history, double gamma);

// Relative improvement of this week's precision over the baseline, clamped
// to [-1, 1]. Zero precision is the worst case and maps to -1.
double reward(double precision, double baseline);

// Importance-weighted exponential update of the played arm plus uniform
// weight sharing, then renormalization to sum num_arms. prob_played is the
// probability the played arm was drawn with.
void update(BanditState& state, int arm, double reward_value,
            double prob_played, const BanditParams& params);

}  // namespace adaptsel
