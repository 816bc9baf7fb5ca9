#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "emblens/dataset.hpp"
#include "emblens/sample_set.hpp"

namespace emblens {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_closed = true;
  bool hi_closed = false;

  bool contains(double v) const {
    return (lo_closed ? v >= lo : v > lo) && (hi_closed ? v <= hi : v < hi);
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Condition on a single feature: a value lies in one of `intervals`
/// (numeric), has one of `categories` (categorical codes, sorted), or the
/// value is missing and `missing` is set.
struct Predicate {
  std::vector<Interval> intervals;
  std::vector<int> categories;
  bool missing = false;

  bool empty() const { return intervals.empty() && categories.empty() && !missing; }
  bool missing_only() const { return missing && intervals.empty() && categories.empty(); }
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Union of two predicates on the same feature. Touching intervals coalesce.
Predicate unite(const Predicate& a, const Predicate& b);

struct Clause {
  std::size_t feature = 0;
  Predicate predicate;
  friend bool operator==(const Clause&, const Clause&) = default;
};

/// Conjunction of single-feature clauses, at most one per feature, kept
/// sorted by feature index. A one-clause rule is an atomic rule.
class Rule {
 public:
  Rule() = default;

  static Rule interval(std::size_t feature, Interval iv);
  static Rule category_set(std::size_t feature, std::vector<int> codes);
  static Rule is_missing(std::size_t feature);
  static Rule from_clause(Clause clause);

  const std::vector<Clause>& clauses() const { return clauses_; }
  std::vector<std::size_t> features() const;
  bool empty() const { return clauses_.empty(); }

  bool evaluate(const Dataset& data, std::size_t sample) const;
  SampleSet truth(const Dataset& data) const;

  /// Conjunction with `other`; clauses on a shared feature are united.
  Rule conjoin(const Rule& other) const;
  /// Same-feature union of two atomic rules on the same feature.
  Rule unite_with(const Rule& other) const;

  std::string label(const Dataset& data) const;

  friend bool operator==(const Rule&, const Rule&) = default;

 private:
  explicit Rule(Clause clause);
  std::vector<Clause> clauses_;
};

/// Three significant digits; values >= 1000 are rounded and printed without
/// exponent.
std::string format_sig3(double v);

std::string clause_label(const Dataset& data, const Clause& clause);

}  // namespace emblens
