#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adaptsel/types.hpp"

namespace adaptsel {

// Fixed-dimension numeric embedding of declarations, used by the drift
// detector. Dimensions 0..2 carry log1p of the three numeric fields; the
// remaining dimensions receive the four categorical tokens by salted feature
// hashing with +/-1 signs. Every dimension is standardized with statistics
// from the fit set (degenerate dimensions keep standard deviation 1 so they
// map to exactly 0).
class Embedder {
 public:
  // dim must be >= 4 (three numeric dimensions plus at least one hash
  // bucket). The salt decouples hash layouts between unrelated embedders.
  static Embedder fit(std::span<const Declaration> decls, int dim,
                      std::uint64_t salt);

  std::vector<double> encode(const Declaration& d) const;
  void encode_into(const Declaration& d, double* out) const;

  int dim() const { return dim_; }
  std::uint64_t salt() const { return salt_; }

 private:
  Embedder() = default;
  void raw(const Declaration& d, double* out) const;

  int dim_ = 0;
  std::uint64_t salt_ = 0;
  std::vector<double> mean_;
  std::vector<double> inv_std_;
};

}  // namespace adaptsel
