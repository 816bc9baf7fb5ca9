#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "emblens/rank.hpp"
#include "emblens/regions.hpp"

namespace emblens {

enum class PanelKind { contrastive, descriptive };

const char* to_string(PanelKind kind);

struct Panel {
  PanelKind kind = PanelKind::contrastive;
  std::vector<RegionAnnotation> annotations;
  std::vector<std::size_t> features;  // contrastive: the merged feature group
  std::string label;
  std::map<std::string, double> scores;
  std::map<std::string, double> ranks;
  double aggregate_rank = 0.0;
};

/// Panels ordered best first.
struct Layout {
  PanelKind kind = PanelKind::contrastive;
  std::vector<Panel> panels;
};

/// Mean pairwise Jaccard overlap; 0 for a single annotation.
double total_region_overlap(std::span<const RegionAnnotation> annotations);
/// Mean clause_purity, i.e. averaged over every explanatory rule shown.
double mean_purity(std::span<const RegionAnnotation> annotations);
/// |3 - count|.
double attention_score(std::size_t count);

}  // namespace emblens
