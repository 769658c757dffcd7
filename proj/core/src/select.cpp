#include "adaptsel/select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace adaptsel {

int round_half_even(double v) {
  const double twice = v * 2.0;
  const double snapped = std::round(twice);
  const double x = std::abs(twice - snapped) < 1e-9 ? snapped * 0.5 : v;
  // nearbyint under the default rounding mode resolves .5 ties to even.
  return static_cast<int>(std::nearbyint(x));
}

Selection select_hybrid(std::span<const double> scores,
                        std::span<const std::uint64_t> ids, int budget_n,
                        double ratio, Rng& rng) {
  const int n = static_cast<int>(scores.size());
  if (ids.size() != scores.size())
    throw std::invalid_argument("select_hybrid: scores/ids size mismatch");
  if (budget_n < 1) throw std::invalid_argument("select_hybrid: budget must be >= 1");
  if (budget_n > n) throw std::invalid_argument("select_hybrid: budget exceeds batch size");
  if (ratio < 0.0 || ratio > 1.0)
    throw std::invalid_argument("select_hybrid: ratio must be in [0, 1]");

  const int explore_n = round_half_even(ratio * budget_n);
  const int exploit_n = budget_n - explore_n;

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  Selection sel;

  if (exploit_n > 0) {
    const auto better = [&](int a, int b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return ids[a] < ids[b];
    };
    std::nth_element(order.begin(), order.begin() + (exploit_n - 1),
                     order.end(), better);
    sel.exploit.assign(order.begin(), order.begin() + exploit_n);
    std::sort(sel.exploit.begin(), sel.exploit.end());
  }

  if (explore_n > 0) {
    // Remaining pool in ascending position, so the draw sequence depends
    // only on the rng, not on nth_element's internal ordering.
    std::vector<int> pool(order.begin() + exploit_n, order.end());
    std::sort(pool.begin(), pool.end());
    const int m = static_cast<int>(pool.size());
    for (int i = 0; i < explore_n; ++i) {
      const int j =
          i + static_cast<int>(rng.below(static_cast<std::uint64_t>(m - i)));
      std::swap(pool[i], pool[j]);
    }
    sel.explore.assign(pool.begin(), pool.begin() + explore_n);
    std::sort(sel.explore.begin(), sel.explore.end());
  }

  return sel;
}

}  // namespace adaptsel
