#pragma once

#include <cstddef>
#include <vector>

#include "emblens/dataset.hpp"
#include "emblens/error.hpp"
#include "emblens/rule.hpp"
#include "emblens/sample_set.hpp"

namespace emblens {

/// Position of an indicator among its feature's indicators. Ordered features
/// (numeric, ordinal) use it for adjacency; IsMissing uses kMissingBin.
inline constexpr int kMissingBin = 1 << 20;

struct IndicatorVariable {
  Rule rule;
  SampleSet truth;
  int bin = 0;
  std::size_t support() const { return truth.size(); }
};

struct KMeans1D {
  std::vector<double> centers;  // ascending
  int iterations = 0;
};

/// Lloyd's algorithm on sorted values, centers initialised at the
/// (i + 0.5)/k quantiles. Stops once no center moves more than
/// 1e-9 * range, or after 300 iterations.
KMeans1D kmeans_1d(const std::vector<double>& sorted_values, std::size_t k);

std::vector<IndicatorVariable> one_hot(const Dataset& data, std::size_t feature,
                                       Diagnostics* diag = nullptr);

std::vector<IndicatorVariable> discretize_numeric(const Dataset& data, std::size_t feature,
                                                  std::size_t k_bins,
                                                  Diagnostics* diag = nullptr);

/// Dispatches on the feature kind.
std::vector<IndicatorVariable> make_indicators(const Dataset& data, std::size_t feature,
                                               std::size_t k_bins,
                                               Diagnostics* diag = nullptr);

}  // namespace emblens
