#include "adaptsel/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace adaptsel {

double norm_precision(int frauds_selected, int budget, int total_frauds) {
  if (budget < 1) throw std::invalid_argument("norm_precision: budget must be >= 1");
  if (frauds_selected < 0 || total_frauds < 0 || frauds_selected > total_frauds)
    throw std::invalid_argument("norm_precision: inconsistent fraud counts");
  const int achievable = std::min(budget, total_frauds);
  if (achievable == 0) return 1.0;
  return static_cast<double>(frauds_selected) / achievable;
}

double norm_revenue(double revenue_selected,
                    std::span<const double> all_revenues, int budget) {
  if (budget < 1) throw std::invalid_argument("norm_revenue: budget must be >= 1");
  if (revenue_selected < 0.0)
    throw std::invalid_argument("norm_revenue: negative revenue");

  std::vector<double> top(all_revenues.begin(), all_revenues.end());
  const std::size_t b = std::min<std::size_t>(budget, top.size());
  std::partial_sort(top.begin(), top.begin() + b, top.end(), std::greater<>());
  double best = 0.0;
  for (std::size_t i = 0; i < b; ++i) best += top[i];
  if (best <= 0.0) return 1.0;
  return revenue_selected / best;
}

std::vector<double> moving_average(std::span<const double> series, int window) {
  if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
  std::vector<double> out(series.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    acc += series[i];
    if (i >= static_cast<std::size_t>(window)) acc -= series[i - window];
    out[i] = acc / std::min<std::size_t>(i + 1, window);
  }
  return out;
}

namespace {

// Continued fraction for the regularized incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16, kTiny = 1e-300;

  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0, d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double reg_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("reg_incomplete_beta: a, b must be positive");
  if (x < 0.0 || x > 1.0)
    throw std::invalid_argument("reg_incomplete_beta: x must be in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  // Use the continued fraction on the side where it converges fast.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

PearsonResult pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: size mismatch");
  const std::size_t n = x.size();
  if (n < 3) throw std::invalid_argument("pearson: need at least 3 points");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;

  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw std::invalid_argument("pearson: constant series");

  PearsonResult res;
  res.n = n;
  res.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);

  const double df = static_cast<double>(n - 2);
  if (std::abs(res.r) >= 1.0) {
    res.p_value = 0.0;
  } else {
    const double t2 = df * res.r * res.r / (1.0 - res.r * res.r);
    // Two-sided p: survival of |t| under Student-t(df) via the beta identity.
    res.p_value = reg_incomplete_beta(df / 2.0, 0.5, df / (df + t2));
  }
  return res;
}

std::optional<double> new_importer_slice(
    const WeekBatch& batch, std::span<const int> selected,
    const std::unordered_set<std::string>& seen_importers) {
  std::vector<char> is_new(batch.items.size(), 0);
  bool any_new = false;
  for (std::size_t i = 0; i < batch.items.size(); ++i) {
    if (!seen_importers.contains(batch.items[i].importer_id)) {
      is_new[i] = 1;
      any_new = true;
    }
  }
  if (!any_new) return std::nullopt;

  double slice_total = 0.0;  // fraud revenue available in the slice
  std::vector<double> slice_revenues;
  for (std::size_t i = 0; i < batch.items.size(); ++i) {
    if (!is_new[i]) continue;
    const double rev = batch.items[i].outcome.evaluation().revenue;
    slice_revenues.push_back(rev);
    slice_total += rev;
  }

  int slots = 0;
  double captured = 0.0;
  for (int idx : selected) {
    if (idx < 0 || static_cast<std::size_t>(idx) >= batch.items.size())
      throw std::invalid_argument("new_importer_slice: selection index out of range");
    if (!is_new[idx]) continue;
    ++slots;
    captured += batch.items[idx].outcome.evaluation().revenue;
  }

  if (slots == 0) return slice_total > 0.0 ? 0.0 : 1.0;

  std::partial_sort(slice_revenues.begin(),
                    slice_revenues.begin() +
                        std::min<std::size_t>(slots, slice_revenues.size()),
                    slice_revenues.end(), std::greater<>());
  double best = 0.0;
  for (std::size_t i = 0; i < std::min<std::size_t>(slots, slice_revenues.size()); ++i)
    best += slice_revenues[i];
  if (best <= 0.0) return 1.0;
  return captured / best;
}

}  // namespace adaptsel
