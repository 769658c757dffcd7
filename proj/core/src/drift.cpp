#include "adaptsel/drift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "adaptsel/assignment.hpp"

namespace adaptsel {

namespace {

double euclid(const double* x, const double* y, int dim) {
  double s = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double d = x[k] - y[k];
    s += d * d;
  }
  return std::sqrt(s);
}

void pairwise_costs(const PointCloud& a, const PointCloud& b,
                    std::vector<double>& cost) {
  const int n = a.size(), m = b.size();
  cost.resize(static_cast<std::size_t>(n) * m);
  for (int i = 0; i < n; ++i) {
    const double* x = a.row(i);
    double* out = cost.data() + static_cast<std::size_t>(i) * m;
    for (int j = 0; j < m; ++j) out[j] = euclid(x, b.row(j), a.dim);
  }
}

double mean_norm(const PointCloud& c) {
  const int n = c.size();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* x = c.row(i);
    double q = 0.0;
    for (int k = 0; k < c.dim; ++k) q += x[k] * x[k];
    s += std::sqrt(q);
  }
  return s / n;
}

// Resample `target` rows with replacement if the cloud is larger, otherwise
// return the cloud unchanged.
PointCloud bootstrap_side(const PointCloud& c, int target, Rng& rng) {
  if (c.size() <= target) return c;
  PointCloud out;
  out.dim = c.dim;
  out.xs.resize(static_cast<std::size_t>(target) * c.dim);
  for (int i = 0; i < target; ++i) {
    const int pick = static_cast<int>(rng.below(static_cast<std::uint64_t>(c.size())));
    const double* src = c.row(pick);
    std::copy(src, src + c.dim, out.row(i));
  }
  return out;
}

}  // namespace

PointCloud embed_cloud(std::span<const Declaration> decls, const Embedder& emb) {
  PointCloud c;
  c.dim = emb.dim();
  c.xs.resize(decls.size() * static_cast<std::size_t>(c.dim));
  for (std::size_t i = 0; i < decls.size(); ++i)
    emb.encode_into(decls[i], c.xs.data() + i * c.dim);
  return c;
}

double emd_w1(const PointCloud& a, const PointCloud& b) {
  if (a.size() == 0 || b.size() == 0)
    throw std::invalid_argument("emd_w1: empty point cloud");
  if (a.dim != b.dim)
    throw std::invalid_argument("emd_w1: dimension mismatch");

  std::vector<double> cost;
  pairwise_costs(a, b, cost);
  const int n = a.size(), m = b.size();
  if (n == m) return solve_assignment(cost.data(), n) / n;
  return solve_uniform_transport(cost.data(), n, m);
}

double w1_upper_bound(const PointCloud& a, const PointCloud& b) {
  if (a.size() == 0 || b.size() == 0)
    throw std::invalid_argument("w1_upper_bound: empty point cloud");
  if (a.dim != b.dim)
    throw std::invalid_argument("w1_upper_bound: dimension mismatch");
  return mean_norm(a) + mean_norm(b);
}

double drift_score(const PointCloud& reference, const PointCloud& current,
                   const DriftConfig& cfg, Rng& rng) {
  if (cfg.sample_size < 2 || cfg.repeats < 1)
    throw std::invalid_argument("drift_score: bad bootstrap config");
  if (reference.size() == 0 || current.size() == 0)
    throw std::invalid_argument("insufficient data for drift scoring");

  double acc = 0.0;
  for (int r = 0; r < cfg.repeats; ++r) {
    Rng round = rng.fork("rep" + std::to_string(r));
    const PointCloud ref_s = bootstrap_side(reference, cfg.sample_size, round);
    const PointCloud cur_s = bootstrap_side(current, cfg.sample_size, round);
    const double ub = w1_upper_bound(ref_s, cur_s);
    double ratio = 0.0;
    if (ub > 0.0) ratio = emd_w1(ref_s, cur_s) / ub;
    acc += std::clamp(ratio, 0.0, 1.0);
  }
  return acc / cfg.repeats;
}

double drift_score(std::span<const Declaration> historical,
                   std::span<const Declaration> incoming, const Embedder& emb,
                   const DriftConfig& cfg, Rng& rng) {
  if (historical.empty() || incoming.empty())
    throw std::invalid_argument("insufficient data for drift scoring");
  return drift_score(embed_cloud(historical, emb), embed_cloud(incoming, emb),
                     cfg, rng);
}

}  // namespace adaptsel
