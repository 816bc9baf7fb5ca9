#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "emblens/config.hpp"
#include "emblens/synthetic.hpp"

namespace emblens {

struct BenchOptions {
  std::vector<std::size_t> sizes{10000, 20000, 40000};
  std::vector<std::size_t> features{20, 40, 80};
  std::size_t repeats = 3;
  Config config;
};

struct BenchCell {
  std::string sweep;  // "n" or "f"
  std::size_t n_samples = 0;
  std::size_t n_features = 0;
  std::string stage;
  std::vector<double> seconds;
  double min() const;
  double median() const;
};

struct BenchReport {
  std::vector<BenchCell> cells;
  std::map<std::string, double> exponents;  // e.g. "kde_vs_n", "graph_vs_f"
  std::string csv() const;
};

/// Wall time of each stage for one run: bandwidth, indicators, kde (region
/// construction: KDE, contours, membership), merge, graph (pairwise overlap
/// graph over all annotations), contrastive, descriptive.
std::map<std::string, double> time_stages(const SyntheticData& synthetic, const Config& config);

/// Least-squares slope of log(y) against log(x).
double fit_exponent(const std::vector<double>& x, const std::vector<double>& y);

/// N sweep at features.front(), F sweep at sizes.front(); a sweep with a
/// single value is skipped.
BenchReport run_bench(const BenchOptions& options);

}  // namespace emblens
