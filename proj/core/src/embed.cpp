#include "adaptsel/embed.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "adaptsel/rng.hpp"

namespace adaptsel {

namespace {

// Hash one categorical token into (bucket, sign). The field tag keeps equal
// tokens in different fields apart; the salt keeps embedders apart.
inline std::uint64_t token_hash(std::uint64_t salt, char field_tag,
                                const std::string& token) {
  std::uint64_t h = 0xcbf29ce484222325ull ^ splitmix64(salt);
  h = (h ^ static_cast<unsigned char>(field_tag)) * 0x100000001b3ull;
  for (unsigned char c : token) h = (h ^ c) * 0x100000001b3ull;
  return splitmix64(h);
}

}  // namespace

void Embedder::raw(const Declaration& d, double* out) const {
  for (int k = 0; k < dim_; ++k) out[k] = 0.0;
  out[0] = std::log1p(d.fob_value);
  out[1] = std::log1p(d.gross_weight);
  out[2] = std::log1p(d.quantity);

  const int buckets = dim_ - 3;
  const auto put = [&](char tag, const std::string& token) {
    const std::uint64_t h = token_hash(salt_, tag, token);
    const int b = static_cast<int>(h % static_cast<std::uint64_t>(buckets));
    const double sign = ((h >> 32) & 1u) ? 1.0 : -1.0;
    out[3 + b] += sign;
  };
  put('t', d.tariff_code);
  put('i', d.importer_id);
  put('d', d.declarant_id);
  put('o', d.office_id);
}

Embedder Embedder::fit(std::span<const Declaration> decls, int dim,
                       std::uint64_t salt) {
  if (dim < 4) throw std::invalid_argument("Embedder::fit: dim must be >= 4");
  if (decls.empty()) throw std::invalid_argument("Embedder::fit: empty fit set");

  Embedder e;
  e.dim_ = dim;
  e.salt_ = salt;
  e.mean_.assign(dim, 0.0);
  e.inv_std_.assign(dim, 1.0);

  std::vector<double> buf(dim);
  std::vector<double> sum(dim, 0.0), sumsq(dim, 0.0);
  for (const Declaration& d : decls) {
    e.raw(d, buf.data());
    for (int k = 0; k < dim; ++k) {
      sum[k] += buf[k];
      sumsq[k] += buf[k] * buf[k];
    }
  }
  const double n = static_cast<double>(decls.size());
  for (int k = 0; k < dim; ++k) {
    e.mean_[k] = sum[k] / n;
    const double var = std::max(0.0, sumsq[k] / n - e.mean_[k] * e.mean_[k]);
    const double sd = std::sqrt(var);
    e.inv_std_[k] = sd > 1e-12 ? 1.0 / sd : 1.0;
  }
  return e;
}

void Embedder::encode_into(const Declaration& d, double* out) const {
  if (dim_ == 0) throw std::logic_error("Embedder::encode: not fitted");
  raw(d, out);
  for (int k = 0; k < dim_; ++k) out[k] = (out[k] - mean_[k]) * inv_std_[k];
}

std::vector<double> Embedder::encode(const Declaration& d) const {
  std::vector<double> out(dim_);
  encode_into(d, out.data());
  return out;
}

}  // namespace adaptsel
