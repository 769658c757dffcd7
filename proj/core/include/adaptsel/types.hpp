#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace adaptsel {

// Ground-truth inspection result for one declaration. `revenue` is the duty
// recovered when the item is inspected and found illicit; it is 0 for clean
// items.
struct InspectionOutcome {
  bool illicit = false;
  double revenue = 0.0;
};

// Tracks which declaration labels the decision side of a simulation touched.
// The simulator registers the ids it selected for inspection; any reveal of
// an id that was never selected is a leak and is counted as a violation.
class LabelAudit {
 public:
  void allow(std::uint64_t id) { allowed_.insert(id); }
  void allow_all(std::span<const std::uint64_t> ids) {
    for (auto id : ids) allowed_.insert(id);
  }

  void record_reveal(std::uint64_t id) {
    ++reveals_;
    if (!allowed_.contains(id)) ++violations_;
  }

  std::uint64_t reveals() const { return reveals_; }
  std::uint64_t violations() const { return violations_; }

 private:
  std::unordered_set<std::uint64_t> allowed_;
  std::uint64_t reveals_ = 0;
  std::uint64_t violations_ = 0;
};

// Holds an outcome without exposing it to the decision path by accident.
// Decision-side code (feedback, training labels) must call reveal() with the
// audit so the access is checked; evaluation-side code (metrics, oracles,
// data generators) uses evaluation(), which is deliberately untracked.
class SealedOutcome {
 public:
  SealedOutcome() = default;
  explicit SealedOutcome(InspectionOutcome o) : outcome_(o) {}

  const InspectionOutcome& reveal(LabelAudit& audit, std::uint64_t id) const {
    audit.record_reveal(id);
    return outcome_;
  }

  const InspectionOutcome& evaluation() const { return outcome_; }

 private:
  InspectionOutcome outcome_;
};

// One customs declaration. Numeric fields are positive; the string fields
// are opaque categorical tokens.
struct Declaration {
  std::uint64_t id = 0;
  int week = 0;
  double fob_value = 0.0;
  double gross_weight = 0.0;
  double quantity = 0.0;
  std::string tariff_code;
  std::string importer_id;
  std::string declarant_id;
  std::string office_id;
  SealedOutcome outcome;
};

struct WeekBatch {
  int week = 0;
  std::vector<Declaration> items;
};

// Weekly inspection capacity: floor(rate * n), at least 1. The product is
// snapped to the nearest integer when it is within 1e-9 of one so that e.g.
// rate 0.29 with n = 100 gives 29 rather than falling victim to the binary
// representation of 0.29.
inline int budget(std::size_t batch_size, double inspection_rate) {
  if (batch_size == 0)
    throw std::invalid_argument("budget: empty batch");
  if (!(inspection_rate > 0.0) || inspection_rate > 1.0)
    throw std::invalid_argument("budget: inspection_rate must be in (0, 1]");
  const double v = inspection_rate * static_cast<double>(batch_size);
  const double snapped = std::round(v);
  const double b = (std::abs(v - snapped) < 1e-9) ? snapped : std::floor(v);
  const int out = static_cast<int>(b);
  return out < 1 ? 1 : out;
}

}  // namespace adaptsel
