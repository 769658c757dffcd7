#pragma once

#include <span>
#include <vector>

#include "adaptsel/embed.hpp"
#include "adaptsel/rng.hpp"
#include "adaptsel/types.hpp"

namespace adaptsel {

// A set of points in R^dim with uniform mass, stored row-major.
struct PointCloud {
  int dim = 0;
  std::vector<double> xs;  // size() * dim values

  int size() const { return dim == 0 ? 0 : static_cast<int>(xs.size()) / dim; }
  const double* row(int i) const { return xs.data() + static_cast<std::size_t>(i) * dim; }
  double* row(int i) { return xs.data() + static_cast<std::size_t>(i) * dim; }
};

PointCloud embed_cloud(std::span<const Declaration> decls, const Embedder& emb);

struct DriftConfig {
  int sample_size = 256;  // points drawn per side and solve
  int repeats = 5;        // resampled solves averaged into the score
};

// Exact 1-Wasserstein distance between two uniform point clouds under the
// Euclidean ground metric. Equal sizes reduce to an assignment; unequal
// sizes go through the uniform-transport solver.
double emd_w1(const PointCloud& a, const PointCloud& b);

// Upper bound on emd_w1 obtained by routing all mass through the origin:
// the sum of the two clouds' mean point norms. Never smaller than emd_w1.
double w1_upper_bound(const PointCloud& a, const PointCloud& b);

// Normalized drift score in [0, 1]: mean over `repeats` bootstrap rounds of
// emd_w1 / w1_upper_bound on subsampled clouds. Sides larger than
// sample_size are resampled with replacement; smaller sides are used whole.
// A round with a zero upper bound contributes 0.
double drift_score(const PointCloud& reference, const PointCloud& current,
                   const DriftConfig& cfg, Rng& rng);

// Same score computed directly from declaration windows through an embedder.
double drift_score(std::span<const Declaration> historical,
                   std::span<const Declaration> incoming, const Embedder& emb,
                   const DriftConfig& cfg, Rng& rng);

}  // namespace adaptsel
