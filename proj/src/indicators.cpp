#include "emblens/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace emblens {

namespace {

// Index of the first value of each cluster given ascending centers; cluster j
// covers [b_{j-1}, b_j) with b_j the midpoint of centers j and j+1.
std::vector<std::size_t> cluster_starts(const std::vector<double>& sorted,
                                        const std::vector<double>& centers) {
  std::vector<std::size_t> starts(centers.size() + 1);
  starts.front() = 0;
  starts.back() = sorted.size();
  for (std::size_t j = 1; j < centers.size(); ++j) {
    const double boundary = 0.5 * (centers[j - 1] + centers[j]);
    starts[j] = static_cast<std::size_t>(
        std::lower_bound(sorted.begin(), sorted.end(), boundary) - sorted.begin());
  }
  return starts;
}

}  // namespace

KMeans1D kmeans_1d(const std::vector<double>& sorted, std::size_t k) {
  KMeans1D out;
  const std::size_t n = sorted.size();
  if (n == 0 || k == 0) return out;

  std::size_t distinct = 1;
  for (std::size_t i = 1; i < n; ++i) distinct += sorted[i] != sorted[i - 1] ? 1 : 0;
  k = std::min(k, distinct);

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + sorted[i];

  std::vector<double> centers(k);
  for (std::size_t j = 0; j < k; ++j) {
    const double pos = (static_cast<double>(j) + 0.5) / static_cast<double>(k) *
                       static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, n - 1);
    const double t = pos - static_cast<double>(lo);
    centers[j] = sorted[lo] + t * (sorted[hi] - sorted[lo]);
  }

  const double tol = 1e-9 * (sorted.back() - sorted.front());
  int it = 0;
  for (; it < 300; ++it) {
    const auto starts = cluster_starts(sorted, centers);
    double shift = 0.0;
    std::vector<double> next(k);
    for (std::size_t j = 0; j < k; ++j) {
      const auto a = starts[j], b = starts[j + 1];
      next[j] = b > a ? (prefix[b] - prefix[a]) / static_cast<double>(b - a) : centers[j];
      shift = std::max(shift, std::abs(next[j] - centers[j]));
    }
    std::sort(next.begin(), next.end());
    centers = std::move(next);
    if (shift <= tol) {
      ++it;
      break;
    }
  }

  // Drop clusters left empty and duplicate centers.
  const auto starts = cluster_starts(sorted, centers);
  std::vector<double> kept;
  for (std::size_t j = 0; j < k; ++j) {
    if (starts[j + 1] > starts[j] && (kept.empty() || kept.back() != centers[j]))
      kept.push_back(centers[j]);
  }
  out.centers = std::move(kept);
  out.iterations = it;
  return out;
}

std::vector<IndicatorVariable> one_hot(const Dataset& data, std::size_t feature, Diagnostics* diag) {
  const Feature& f = data.features[feature];
  if (!f.categorical()) throw Error("one_hot: feature '" + f.name + "' is not categorical");
  std::vector<std::size_t> counts(f.categories.size(), 0);
  bool any_missing = false;
  for (int c : f.codes) {
    if (c < 0) {
      any_missing = true;
    } else {
      ++counts[static_cast<std::size_t>(c)];
    }
  }
  std::vector<IndicatorVariable> out;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) continue;
    IndicatorVariable v;
    v.rule = Rule::category_set(feature, {static_cast<int>(c)});
    v.truth = v.rule.truth(data);
    v.bin = static_cast<int>(out.size());
    out.push_back(std::move(v));
  }
  if (any_missing) {
    IndicatorVariable v;
    v.rule = Rule::is_missing(feature);
    v.truth = v.rule.truth(data);
    v.bin = kMissingBin;
    out.push_back(std::move(v));
  }
  if (out.size() == 1 && !any_missing)
    warn(diag, "feature '" + f.name + "' has a single category");
  return out;
}

std::vector<IndicatorVariable> discretize_numeric(const Dataset& data, std::size_t feature,
                                                  std::size_t k_bins, Diagnostics* diag) {
  const Feature& f = data.features[feature];
  if (f.kind != FeatureKind::numeric)
    throw Error("discretize_numeric: feature '" + f.name + "' is not numeric");
  std::vector<double> values;
  values.reserve(f.numbers.size());
  for (double v : f.numbers)
    if (!std::isnan(v)) values.push_back(v);
  if (values.empty()) {
    warn(diag, "feature '" + f.name + "' has only missing values");
    return {};
  }
  std::sort(values.begin(), values.end());
  const auto km = kmeans_1d(values, k_bins);
  const auto& c = km.centers;

  std::vector<IndicatorVariable> out;
  for (std::size_t j = 0; j < c.size(); ++j) {
    Interval iv;
    iv.lo = j == 0 ? values.front() : 0.5 * (c[j - 1] + c[j]);
    iv.lo_closed = true;
    iv.hi = j + 1 == c.size() ? values.back() : 0.5 * (c[j] + c[j + 1]);
    iv.hi_closed = j + 1 == c.size();
    IndicatorVariable v;
    v.rule = Rule::interval(feature, iv);
    v.truth = v.rule.truth(data);
    v.bin = static_cast<int>(j);
    out.push_back(std::move(v));
  }
  if (values.size() < f.numbers.size()) {
    IndicatorVariable v;
    v.rule = Rule::is_missing(feature);
    v.truth = v.rule.truth(data);
    v.bin = kMissingBin;
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<IndicatorVariable> make_indicators(const Dataset& data, std::size_t feature,
                                               std::size_t k_bins, Diagnostics* diag) {
  return data.features[feature].kind == FeatureKind::numeric
             ? discretize_numeric(data, feature, k_bins, diag)
             : one_hot(data, feature, diag);
}

}  // namespace emblens
