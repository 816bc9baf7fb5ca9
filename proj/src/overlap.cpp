#include "emblens/overlap.hpp"

#include <algorithm>

namespace emblens {

double max_overlap(const SampleSet& a, const SampleSet& b) {
  if (a.empty() || b.empty()) return 0.0;
  const auto inter = static_cast<double>(intersection_size(a, b));
  return std::max(inter / static_cast<double>(a.size()), inter / static_cast<double>(b.size()));
}

double min_overlap(const SampleSet& a, const SampleSet& b) {
  if (a.empty() || b.empty()) return 0.0;
  const auto inter = static_cast<double>(intersection_size(a, b));
  return std::min(inter / static_cast<double>(a.size()), inter / static_cast<double>(b.size()));
}

double jaccard_overlap(const SampleSet& a, const SampleSet& b) {
  const auto inter = intersection_size(a, b);
  const auto uni = a.size() + b.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace emblens
