#include "adaptsel/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <stdexcept>

namespace adaptsel {

namespace {

// Feature space: 5 numeric channels followed by 4 hashed categoricals.
constexpr int kNumeric = 5;
constexpr int kFeatures = 9;
constexpr int kCatBuckets[4] = {32, 16, 16, 8};
constexpr std::uint64_t kHashSalt = 0x7c9a1b3d5e2f4680ull;

double numeric_value(const Declaration& d, int f) {
  switch (f) {
    case 0: return std::log1p(d.fob_value);
    case 1: return std::log1p(d.gross_weight);
    case 2: return std::log1p(d.quantity);
    case 3: return std::log1p(d.fob_value / d.gross_weight);
    default: return std::log1p(d.fob_value / d.quantity);
  }
}

int cat_bucket(const Declaration& d, int c) {
  static const char tags[4] = {'t', 'i', 'd', 'o'};
  const std::string* tok;
  switch (c) {
    case 0: tok = &d.tariff_code; break;
    case 1: tok = &d.importer_id; break;
    case 2: tok = &d.declarant_id; break;
    default: tok = &d.office_id; break;
  }
  std::uint64_t h = 0xcbf29ce484222325ull ^ splitmix64(kHashSalt);
  h = (h ^ static_cast<unsigned char>(tags[c])) * 0x100000001b3ull;
  for (unsigned char ch : *tok) h = (h ^ ch) * 0x100000001b3ull;
  h = splitmix64(h);
  return static_cast<int>(h % static_cast<std::uint64_t>(kCatBuckets[c]));
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double FraudScorer::score(const Declaration& d) const {
  double margin = base_margin_;
  for (const Stump& s : stumps_) {
    bool left;
    if (s.categorical)
      left = cat_bucket(d, s.feature - kNumeric) == s.bucket;
    else
      left = numeric_value(d, s.feature) < s.threshold;
    margin += left ? s.w_left : s.w_right;
  }
  return sigmoid(margin);
}

void FraudScorer::score_batch(std::span<const Declaration> decls,
                              std::span<double> out) const {
  if (decls.size() != out.size())
    throw std::invalid_argument("score_batch: size mismatch");
  // Bucket/bin lookups per declaration are recomputed per stump; stumps
  // reuse few distinct features, so cache the 9 channels per row instead.
  for (std::size_t i = 0; i < decls.size(); ++i) {
    const Declaration& d = decls[i];
    double num[kNumeric];
    int cat[4];
    for (int f = 0; f < kNumeric; ++f) num[f] = numeric_value(d, f);
    for (int c = 0; c < 4; ++c) cat[c] = cat_bucket(d, c);
    double margin = base_margin_;
    for (const Stump& s : stumps_) {
      const bool left = s.categorical
                            ? cat[s.feature - kNumeric] == s.bucket
                            : num[s.feature] < s.threshold;
      margin += left ? s.w_left : s.w_right;
    }
    out[i] = sigmoid(margin);
  }
}

FraudScorer train_scorer(std::span<const LabeledExample> examples,
                         const ScorerConfig& cfg, Rng& rng) {
  const int n = static_cast<int>(examples.size());
  if (n == 0) throw std::invalid_argument("train_scorer: empty training set");
  if (cfg.rounds < 1 || cfg.max_bins < 2 || !(cfg.shrinkage > 0.0) ||
      cfg.l2 < 0.0 || cfg.quantile_sample < 2 || cfg.subsample_cap < 2)
    throw std::invalid_argument("train_scorer: bad config");

  int positives = 0;
  for (const auto& e : examples) positives += e.illicit ? 1 : 0;

  FraudScorer model;
  // Prior log-odds, clamped away from the degenerate one-class case.
  const double rate =
      std::clamp((positives + 0.5) / (n + 1.0), 1e-6, 1.0 - 1e-6);
  model.base_margin_ = std::log(rate / (1.0 - rate));
  if (positives == 0 || positives == n) return model;  // nothing to fit

  // --- Bin layout -------------------------------------------------------
  // Numeric channels get quantile edges from a subsample; categorical
  // channels use their hash bucket directly. All bins for one row live in
  // kFeatures consecutive bytes.
  std::vector<std::vector<double>> edges(kNumeric);
  {
    const int qs = std::min(n, cfg.quantile_sample);
    std::vector<int> pick(qs);
    if (qs == n) {
      std::iota(pick.begin(), pick.end(), 0);
    } else {
      Rng qrng = rng.fork("quantiles");
      for (int i = 0; i < qs; ++i)
        pick[i] = static_cast<int>(qrng.below(static_cast<std::uint64_t>(n)));
    }
    std::vector<double> vals(qs);
    for (int f = 0; f < kNumeric; ++f) {
      for (int i = 0; i < qs; ++i)
        vals[i] = numeric_value(*examples[pick[i]].decl, f);
      std::sort(vals.begin(), vals.end());
      auto& e = edges[f];
      for (int b = 1; b < cfg.max_bins; ++b) {
        const double v = vals[static_cast<std::size_t>(qs) * b / cfg.max_bins];
        if (e.empty() || v > e.back()) e.push_back(v);
      }
    }
  }

  int bin_count[kFeatures];
  int bin_offset[kFeatures];
  int total_bins = 0;
  for (int f = 0; f < kFeatures; ++f) {
    bin_count[f] = f < kNumeric ? static_cast<int>(edges[f].size()) + 1
                                : kCatBuckets[f - kNumeric];
    bin_offset[f] = total_bins;
    total_bins += bin_count[f];
  }

  std::vector<std::uint8_t> bins(static_cast<std::size_t>(n) * kFeatures);
  for (int i = 0; i < n; ++i) {
    const Declaration& d = *examples[i].decl;
    std::uint8_t* row = bins.data() + static_cast<std::size_t>(i) * kFeatures;
    for (int f = 0; f < kNumeric; ++f) {
      const double v = numeric_value(d, f);
      const auto& e = edges[f];
      row[f] = static_cast<std::uint8_t>(
          std::upper_bound(e.begin(), e.end(), v) - e.begin());
    }
    for (int c = 0; c < 4; ++c)
      row[kNumeric + c] = static_cast<std::uint8_t>(cat_bucket(d, c));
  }

  // --- Boosting ---------------------------------------------------------
  std::vector<double> margin(n, model.base_margin_);
  std::vector<double> hist_g(total_bins), hist_h(total_bins);

  const bool subsampled = n > cfg.subsample_cap;
  const int sample_n = subsampled ? cfg.subsample_cap : n;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng srng = rng.fork("subsample");

  for (int round = 0; round < cfg.rounds; ++round) {
    if (subsampled) {
      // Partial Fisher-Yates: the first sample_n entries become a uniform
      // draw without replacement.
      for (int i = 0; i < sample_n; ++i) {
        const int j = i + static_cast<int>(srng.below(
                              static_cast<std::uint64_t>(n - i)));
        std::swap(order[i], order[j]);
      }
    }

    std::fill(hist_g.begin(), hist_g.end(), 0.0);
    std::fill(hist_h.begin(), hist_h.end(), 0.0);
    double total_g = 0.0, total_h = 0.0;
    for (int t = 0; t < sample_n; ++t) {
      const int i = order[t];
      const double p = sigmoid(margin[i]);
      const double g = p - (examples[i].illicit ? 1.0 : 0.0);
      const double h = p * (1.0 - p);
      const std::uint8_t* row =
          bins.data() + static_cast<std::size_t>(i) * kFeatures;
      for (int f = 0; f < kFeatures; ++f) {
        hist_g[bin_offset[f] + row[f]] += g;
        hist_h[bin_offset[f] + row[f]] += h;
      }
      total_g += g;
      total_h += h;
    }

    const double parent = total_g * total_g / (total_h + cfg.l2);
    double best_gain = 1e-12;
    int best_f = -1, best_cut = 0;
    double best_gl = 0, best_hl = 0;

    for (int f = 0; f < kFeatures; ++f) {
      const double* G = hist_g.data() + bin_offset[f];
      const double* H = hist_h.data() + bin_offset[f];
      if (f < kNumeric) {
        double gl = 0.0, hl = 0.0;
        for (int b = 0; b + 1 < bin_count[f]; ++b) {
          gl += G[b];
          hl += H[b];
          const double gr = total_g - gl, hr = total_h - hl;
          const double gain = gl * gl / (hl + cfg.l2) +
                              gr * gr / (hr + cfg.l2) - parent;
          if (gain > best_gain) {
            best_gain = gain;
            best_f = f;
            best_cut = b;
            best_gl = gl;
            best_hl = hl;
          }
        }
      } else {
        for (int b = 0; b < bin_count[f]; ++b) {
          const double gr = total_g - G[b], hr = total_h - H[b];
          const double gain = G[b] * G[b] / (H[b] + cfg.l2) +
                              gr * gr / (hr + cfg.l2) - parent;
          if (gain > best_gain) {
            best_gain = gain;
            best_f = f;
            best_cut = b;
            best_gl = G[b];
            best_hl = H[b];
          }
        }
      }
    }
    if (best_f < 0) break;  // no split improves the loss; fitting is done

    FraudScorer::Stump s;
    s.feature = static_cast<std::int16_t>(best_f);
    s.categorical = best_f >= kNumeric;
    if (s.categorical)
      s.bucket = best_cut;
    else
      s.threshold = edges[best_f][best_cut];
    const double gr = total_g - best_gl, hr = total_h - best_hl;
    s.w_left = -best_gl / (best_hl + cfg.l2) * cfg.shrinkage;
    s.w_right = -gr / (hr + cfg.l2) * cfg.shrinkage;
    model.stumps_.push_back(s);

    // Apply to every row (training set margins stay exact even when the
    // histogram pass was subsampled).
    for (int i = 0; i < n; ++i) {
      const std::uint8_t b =
          bins[static_cast<std::size_t>(i) * kFeatures + best_f];
      const bool left = s.categorical ? (b == best_cut) : (b <= best_cut);
      margin[i] += left ? s.w_left : s.w_right;
    }
  }

  return model;
}

}  // namespace adaptsel
