#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adaptsel/rng.hpp"
#include "adaptsel/types.hpp"

namespace adaptsel {

// One labeled training row. The label is passed alongside the declaration
// (rather than read from it) so that training can only see outcomes the
// caller was entitled to reveal.
struct LabeledExample {
  const Declaration* decl = nullptr;
  bool illicit = false;
};

struct ScorerConfig {
  int rounds = 100;          // boosting rounds (depth-1 trees)
  double shrinkage = 0.1;    // learning rate on leaf values
  double l2 = 1.0;           // L2 regularization on leaf weights
  int max_bins = 64;         // histogram bins per numeric feature
  int quantile_sample = 4096;  // rows sampled to place bin edges
  int subsample_cap = 8192;    // rows per boosting round (stochastic above)
};

// Gradient-boosted decision stumps over hand-built declaration features:
// five log-scale numeric channels (value, weight, quantity, value/weight,
// value/quantity) binned by training quantiles, and the four categorical
// tokens hashed into small bucket spaces split by equality. Logistic loss
// with Newton leaf weights.
class FraudScorer {
 public:
  double score(const Declaration& d) const;  // illicit probability
  void score_batch(std::span<const Declaration> decls,
                   std::span<double> out) const;

  int stump_count() const { return static_cast<int>(stumps_.size()); }

 private:
  friend FraudScorer train_scorer(std::span<const LabeledExample>,
                                  const ScorerConfig&, Rng&);

  struct Stump {
    std::int16_t feature = 0;
    bool categorical = false;
    double threshold = 0.0;  // numeric: go left iff value < threshold
    int bucket = 0;          // categorical: go left iff bucket matches
    double w_left = 0.0;
    double w_right = 0.0;
  };

  double base_margin_ = 0.0;
  std::vector<Stump> stumps_;
};

FraudScorer train_scorer(std::span<const LabeledExample> examples,
                         const ScorerConfig& cfg, Rng& rng);

}  // namespace adaptsel
