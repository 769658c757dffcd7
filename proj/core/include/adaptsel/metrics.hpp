#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "adaptsel/types.hpp"

namespace adaptsel {

// Precision against the best achievable this week: frauds caught divided by
// min(budget, frauds present). A fraud-free week scores 1 (there was
// nothing to miss).
double norm_precision(int frauds_selected, int budget, int total_frauds);

// Revenue captured divided by the best achievable with the same budget (sum
// of the `budget` largest revenues in the batch). Zero achievable -> 1.
double norm_revenue(double revenue_selected,
                    std::span<const double> all_revenues, int budget);

// Trailing moving average; windows are truncated at the start of the
// series, so out[i] averages the last min(i+1, window) values.
std::vector<double> moving_average(std::span<const double> series, int window);

struct PearsonResult {
  double r = 0.0;
  double p_value = 1.0;  // two-sided, Student-t with n-2 df
  std::size_t n = 0;
};

// Errors on fewer than 3 points or a constant series.
PearsonResult pearson(std::span<const double> x, std::span<const double> y);

// Regularized incomplete beta I_x(a, b); exposed for testing.
double reg_incomplete_beta(double a, double b, double x);

// Normalized revenue restricted to declarations from importers never seen
// before this week. The denominator is the best revenue obtainable from the
// slice with as many slots as the selection actually spent there. Returns
// nullopt when the week has no new-importer declarations; a slice where
// either side of the ratio is empty scores 1 if the slice holds no fraud
// revenue at all (nothing was missed) and 0 otherwise.
std::optional<double> new_importer_slice(
    const WeekBatch& batch, std::span<const int> selected,
    const std::unordered_set<std::string>& seen_importers);

}  // namespace adaptsel
