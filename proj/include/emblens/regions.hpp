#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "emblens/contour.hpp"
#include "emblens/dataset.hpp"
#include "emblens/density.hpp"
#include "emblens/error.hpp"
#include "emblens/indicators.hpp"
#include "emblens/rule.hpp"

namespace emblens {

struct RegionParams {
  std::optional<double> sigma;  // overrides the adaptive bandwidth
  double level_fraction = 0.25;
  std::size_t k_bins = 5;
  std::size_t resolution = 128;
  double merge_threshold = 0.8;
  double span_fraction = 0.9;
};

/// A rule borrowed from a larger region that contains this one.
struct BackgroundRule {
  Rule rule;
  double containment = 0.0;  // |g ∩ b| / |g|
};

/// A (region, rule) pair. For descriptive groups `shape.polygons` is the
/// largest member's outline while `shape.members` is the union of all member
/// regions.
struct RegionAnnotation {
  int id = -1;  // -1 until assigned
  Rule rule;
  std::vector<BackgroundRule> background;
  RegionShape shape;
  double purity = 0.0;
  /// Mean purity of the rule's single-feature clauses over the region;
  /// equals `purity` for atomic rules.
  double clause_purity = 0.0;
  std::vector<int> provenance;  // ids of the constructed annotations it derives from
  int bin_lo = 0;               // bin span for ordered features
  int bin_hi = 0;

  const SampleSet& members() const { return shape.members; }
  std::size_t size() const { return shape.members.size(); }
};

/// Fraction of `members` that satisfy the rule with truth vector `truth`.
double purity(const SampleSet& members, const SampleSet& truth);

/// Recomputes purity and clause_purity from the members and the rule.
void assess_purity(RegionAnnotation& annotation, const Dataset& data);

/// Shared state for turning rules into annotations: one KDE engine for the
/// embedding, bandwidth and grid.
class RegionBuilder {
 public:
  RegionBuilder(const Dataset& data, const Embedding& embedding, const RegionParams& params);

  const Dataset& data() const { return *data_; }
  const Embedding& embedding() const { return *embedding_; }
  const RegionParams& params() const { return params_; }
  double sigma() const { return engine_.sigma(); }
  const GridSpec& grid() const { return engine_.spec(); }

  DensityGrid density(const SampleSet& truth) const;

  /// KDE -> contour -> members -> purity. Empty when the region holds no
  /// samples. Throws "empty indicator" for an empty truth set.
  std::optional<RegionAnnotation> build(const Rule& rule, const SampleSet& truth) const;

 private:
  const Dataset* data_;
  const Embedding* embedding_;
  RegionParams params_;
  KdeEngine engine_;
};

struct FeatureAnnotations {
  std::size_t feature = 0;
  std::vector<RegionAnnotation> annotations;
};

/// One annotation per indicator of every feature, in feature order. Per
/// indicator failures become warnings; empty regions are dropped. Ids are
/// assigned sequentially.
std::vector<FeatureAnnotations> construct_annotations(const RegionBuilder& builder,
                                                      Diagnostics* diag = nullptr);

/// Greedy same-feature merge. Repeatedly merges the compatible pair with the
/// highest max_overlap above `threshold`; merged regions are re-contoured
/// from the united rule.
std::vector<RegionAnnotation> posthoc_merge(std::vector<RegionAnnotation> annotations,
                                            FeatureKind kind, double threshold,
                                            const RegionBuilder& builder);

/// posthoc_merge on every feature list (in parallel); merged annotations
/// get fresh ids after the current maximum, in feature order.
void merge_features(std::vector<FeatureAnnotations>& lists, const RegionBuilder& builder,
                    Diagnostics* diag = nullptr);

/// Drops features left with a single annotation covering at least
/// `span_fraction` of all samples.
std::vector<FeatureAnnotations> filter_uninformative(std::vector<FeatureAnnotations> lists,
                                                     std::size_t n_samples,
                                                     double span_fraction);

/// construct -> posthoc_merge -> filter. Annotations created by merging get
/// fresh ids after the constructed ones, in feature order.
std::vector<FeatureAnnotations> build_region_annotations(const RegionBuilder& builder,
                                                         Diagnostics* diag = nullptr);

/// One past the largest id in use.
int next_id(const std::vector<FeatureAnnotations>& lists);

}  // namespace emblens
