#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace adaptsel {

// 64-bit FNV-1a. Used for label hashing and for feature hashing so that
// results do not depend on the platform's std::hash.
inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Deterministic random stream addressed by (seed, label). Streams with
// different labels are independent regardless of how much each one is
// consumed, which is what keeps simulation components (arm draws, bootstrap
// resamples, scenario noise, ...) reproducible when code around them changes.
//
// All distributions are implemented here on top of the raw engine output:
// the C++ standard pins down mt19937_64 bit-for-bit but *not* the library
// distributions, and byte-identical runs across platforms are a requirement.
class Rng {
 public:
  Rng(std::uint64_t seed, std::string_view label)
      : seed_(seed), label_(label) {
    engine_.seed(splitmix64(splitmix64(seed) ^ fnv1a64(label)));
  }

  // Child stream addressed by label path "parent/sub". Independent of how
  // many draws the parent has made.
  Rng fork(std::string_view sublabel) const {
    std::string child = label_;
    child += '/';
    child += sublabel;
    return Rng(seed_, child);
  }

  std::uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n). Fixed-point multiply; the bias of at most
  // n / 2^64 is far below anything observable here.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  double lognormal(double mu, double sigma) {
    return std::exp(normal(mu, sigma));
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Index draw proportional to non-negative weights (inverse CDF walk).
  std::size_t discrete(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0 || !std::isfinite(w))
        throw std::invalid_argument("Rng::discrete: weights must be finite and non-negative");
      total += w;
    }
    if (total <= 0.0)
      throw std::invalid_argument("Rng::discrete: total weight must be positive");
    const double target = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      acc += weights[i];
      if (target < acc) return i;
    }
    return weights.size() - 1;
  }

 private:
  std::uint64_t seed_;
  std::string label_;
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

inline Rng make_rng(std::uint64_t seed, std::string_view label) {
  return Rng(seed, label);
}

}  // namespace adaptsel
