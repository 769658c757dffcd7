#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adaptsel/rng.hpp"

namespace adaptsel {

// Positions (within the week's batch) chosen for inspection, split by how
// they were chosen. The two lists are disjoint by construction and their
// sizes add up to the budget.
struct Selection {
  std::vector<int> exploit;  // top-scored items, ascending position
  std::vector<int> explore;  // uniform draw from the rest, ascending position

  int size() const {
    return static_cast<int>(exploit.size() + explore.size());
  }
};

// Round to nearest with ties to even, after snapping values within 1e-9 of
// a half-integer onto it. The snap keeps grid-derived products like
// 0.05 * 10 from dodging the tie rule through representation error.
int round_half_even(double v);

// Split the budget: explore_count = round_half_even(ratio * budget); the
// exploit side takes the (budget - explore_count) highest-scored items
// first (ties broken by ascending id), then the explore side samples
// uniformly without replacement from the remaining items.
Selection select_hybrid(std::span<const double> scores,
                        std::span<const std::uint64_t> ids, int budget_n,
                        double ratio, Rng& rng);

}  // namespace adaptsel
