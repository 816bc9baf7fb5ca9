#include "emblens/panel.hpp"

#include <cmath>

#include "emblens/overlap.hpp"

namespace emblens {

const char* to_string(PanelKind kind) {
  return kind == PanelKind::contrastive ? "contrastive" : "descriptive";
}

double total_region_overlap(std::span<const RegionAnnotation> annotations) {
  const std::size_t n = annotations.size();
  if (n < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      sum += jaccard_overlap(annotations[a].members(), annotations[b].members());
  return sum / static_cast<double>(n * (n - 1) / 2);
}

double mean_purity(std::span<const RegionAnnotation> annotations) {
  if (annotations.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& a : annotations) sum += a.clause_purity;
  return sum / static_cast<double>(annotations.size());
}

double attention_score(std::size_t count) { return std::abs(3.0 - static_cast<double>(count)); }

}  // namespace emblens
