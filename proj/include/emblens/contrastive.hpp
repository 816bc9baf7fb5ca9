#pragma once

#include <array>
#include <vector>

#include "emblens/panel.hpp"
#include "emblens/regions.hpp"

namespace emblens {

struct ContrastiveParams {
  double pair_threshold = 0.85;
  std::array<double, 3> weights{1.0, 1.0, 1.0};  // overlap, purity, attention
  std::size_t k_panels = 4;
};

/// Features whose annotations were merged into one collection. Annotation
/// shapes come from the first feature; rules are conjunctions across the
/// group's features.
struct FeatureGroup {
  std::vector<std::size_t> features;
  std::vector<RegionAnnotation> annotations;
};

/// Pairs up `a` and `b` one-to-one so that every pair has Jaccard overlap
/// >= threshold. Returns match[i] = index into b, or empty when no perfect
/// matching is found (including unequal sizes).
std::vector<std::size_t> match_annotations(const std::vector<RegionAnnotation>& a,
                                           const std::vector<RegionAnnotation>& b,
                                           double threshold);

/// Greedy agglomeration in feature order: each feature joins the first
/// existing group whose annotations it matches, else starts a new group.
std::vector<FeatureGroup> contrastive_merge(const std::vector<FeatureAnnotations>& lists,
                                            double pair_threshold, const Dataset& data);

std::vector<Criterion> contrastive_criteria(const std::array<double, 3>& weights);

/// Scores panels in place and returns them ranked, best first.
std::vector<Panel> rank_contrastive(std::vector<Panel> panels, const std::vector<Criterion>& criteria);

Layout select_contrastive(const std::vector<FeatureAnnotations>& lists,
                          const ContrastiveParams& params, const Dataset& data);

}  // namespace emblens
