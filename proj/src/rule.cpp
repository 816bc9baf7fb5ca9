#include "emblens/rule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "emblens/error.hpp"

namespace emblens {

Predicate unite(const Predicate& a, const Predicate& b) {
  Predicate out;
  out.missing = a.missing || b.missing;

  std::vector<Interval> ivs = a.intervals;
  ivs.insert(ivs.end(), b.intervals.begin(), b.intervals.end());
  std::sort(ivs.begin(), ivs.end(), [](const Interval& x, const Interval& y) {
    if (x.lo != y.lo) return x.lo < y.lo;
    return x.lo_closed && !y.lo_closed;
  });
  for (const auto& iv : ivs) {
    if (!out.intervals.empty()) {
      auto& cur = out.intervals.back();
      const bool touches = iv.lo < cur.hi || (iv.lo == cur.hi && (cur.hi_closed || iv.lo_closed));
      if (touches) {
        if (iv.hi > cur.hi) {
          cur.hi = iv.hi;
          cur.hi_closed = iv.hi_closed;
        } else if (iv.hi == cur.hi) {
          cur.hi_closed = cur.hi_closed || iv.hi_closed;
        }
        continue;
      }
    }
    out.intervals.push_back(iv);
  }

  std::set_union(a.categories.begin(), a.categories.end(), b.categories.begin(),
                 b.categories.end(), std::back_inserter(out.categories));
  return out;
}

Rule::Rule(Clause clause) { clauses_.push_back(std::move(clause)); }

Rule Rule::from_clause(Clause clause) { return Rule(std::move(clause)); }

Rule Rule::interval(std::size_t feature, Interval iv) {
  if (!(iv.lo < iv.hi || (iv.lo == iv.hi && iv.lo_closed && iv.hi_closed)))
    throw Error("interval rule needs lo < hi");
  Clause c{feature, {}};
  c.predicate.intervals.push_back(iv);
  return Rule(std::move(c));
}

Rule Rule::category_set(std::size_t feature, std::vector<int> codes) {
  if (codes.empty()) throw Error("category rule needs at least one category");
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  Clause c{feature, {}};
  c.predicate.categories = std::move(codes);
  return Rule(std::move(c));
}

Rule Rule::is_missing(std::size_t feature) {
  Clause c{feature, {}};
  c.predicate.missing = true;
  return Rule(std::move(c));
}

std::vector<std::size_t> Rule::features() const {
  std::vector<std::size_t> out;
  out.reserve(clauses_.size());
  for (const auto& c : clauses_) out.push_back(c.feature);
  return out;
}

namespace {

bool clause_holds(const Dataset& data, const Clause& c, std::size_t i) {
  const Feature& f = data.features[c.feature];
  if (f.is_missing(i)) return c.predicate.missing;
  if (f.kind == FeatureKind::numeric) {
    const double v = f.numbers[i];
    return std::any_of(c.predicate.intervals.begin(), c.predicate.intervals.end(),
                       [v](const Interval& iv) { return iv.contains(v); });
  }
  return std::binary_search(c.predicate.categories.begin(), c.predicate.categories.end(), f.codes[i]);
}

}  // namespace

bool Rule::evaluate(const Dataset& data, std::size_t sample) const {
  return std::all_of(clauses_.begin(), clauses_.end(),
                     [&](const Clause& c) { return clause_holds(data, c, sample); });
}

SampleSet Rule::truth(const Dataset& data) const {
  SampleSet s(data.n_samples);
  for (std::size_t i = 0; i < data.n_samples; ++i)
    if (evaluate(data, i)) s.insert(i);
  return s;
}

Rule Rule::conjoin(const Rule& other) const {
  Rule out;
  auto a = clauses_.begin();
  auto b = other.clauses_.begin();
  while (a != clauses_.end() || b != other.clauses_.end()) {
    if (b == other.clauses_.end() || (a != clauses_.end() && a->feature < b->feature)) {
      out.clauses_.push_back(*a++);
    } else if (a == clauses_.end() || b->feature < a->feature) {
      out.clauses_.push_back(*b++);
    } else {
      out.clauses_.push_back({a->feature, unite(a->predicate, b->predicate)});
      ++a;
      ++b;
    }
  }
  return out;
}

Rule Rule::unite_with(const Rule& other) const {
  if (clauses_.size() != 1 || other.clauses_.size() != 1 ||
      clauses_.front().feature != other.clauses_.front().feature)
    throw Error("unite_with needs two atomic rules on the same feature");
  return Rule(Clause{clauses_.front().feature,
                     unite(clauses_.front().predicate, other.clauses_.front().predicate)});
}

std::string format_sig3(double v) {
  char buf[64];
  if (std::isinf(v)) return v > 0 ? "∞" : "-∞";
  if (std::abs(v) >= 1000.0) {
    const double mag = std::pow(10.0, std::floor(std::log10(std::abs(v))) - 2.0);
    std::snprintf(buf, sizeof buf, "%.0f", std::round(v / mag) * mag);
  } else {
    std::snprintf(buf, sizeof buf, "%.3g", v);
  }
  std::string s = buf;
  if (s == "-0") s = "0";
  return s;
}

std::string clause_label(const Dataset& data, const Clause& clause) {
  const Feature& f = data.features[clause.feature];
  const Predicate& p = clause.predicate;
  if (p.missing_only()) return f.name + " is missing";
  std::string s = f.name;
  if (f.kind == FeatureKind::numeric) {
    s += " ∈ ";
    for (std::size_t k = 0; k < p.intervals.size(); ++k) {
      const auto& iv = p.intervals[k];
      if (k > 0) s += " ∪ ";
      s += iv.lo_closed ? "[" : "(";
      s += format_sig3(iv.lo) + ", " + format_sig3(iv.hi);
      s += iv.hi_closed ? "]" : ")";
    }
    if (p.missing) s += " or missing";
  } else {
    s += " = ";
    for (std::size_t k = 0; k < p.categories.size(); ++k) {
      if (k > 0) s += " | ";
      s += f.categories[static_cast<std::size_t>(p.categories[k])];
    }
    if (p.missing) s += p.categories.empty() ? "missing" : " | missing";
  }
  return s;
}

std::string Rule::label(const Dataset& data) const {
  std::string s;
  for (std::size_t k = 0; k < clauses_.size(); ++k) {
    if (k > 0) s += " ∧ ";
    s += clause_label(data, clauses_[k]);
  }
  return s;
}

}  // namespace emblens
