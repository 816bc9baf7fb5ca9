#pragma once

#include <cstdint>
#include <vector>

#include "emblens/error.hpp"
#include "emblens/panel.hpp"
#include "emblens/regions.hpp"

namespace emblens {

enum class CandidateMode { exact, greedy };

struct DescriptiveParams {
  double min_overlap_threshold = 0.8;
  double containment_threshold = 0.9;
  double edge_threshold = 0.05;
  std::size_t k_panels = 4;
  CandidateMode mode = CandidateMode::exact;
  std::size_t exact_cap = 20;
};

/// Undirected simple graph over annotation indices with bit-row adjacency.
class OverlapGraph {
 public:
  explicit OverlapGraph(std::size_t n = 0);

  std::size_t size() const { return n_; }
  void add_edge(std::size_t a, std::size_t b);
  bool adjacent(std::size_t a, std::size_t b) const {
    return (rows_[a * words_ + (b >> 6)] >> (b & 63)) & 1u;
  }
  std::size_t degree(std::size_t v) const;
  std::size_t edge_count() const;
  const std::uint64_t* row(std::size_t v) const { return rows_.data() + v * words_; }
  std::size_t words() const { return words_; }

  bool is_independent(const std::vector<std::size_t>& nodes) const;

 private:
  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<std::uint64_t> rows_;
};

/// One annotation per polygon; members partitioned by polygon.
std::vector<RegionAnnotation> split_disjoint(const RegionAnnotation& annotation,
                                             const Dataset& data, const Embedding& embedding);

/// Greedy agglomeration by highest min_overlap above `threshold`, where a
/// group's region is the union of its members'. Group rules are conjunctions
/// and the drawn outline is the largest member's.
std::vector<RegionAnnotation> descriptive_merge(const std::vector<RegionAnnotation>& annotations,
                                                double threshold, const Dataset& data);

/// Adds the rules of larger regions that contain at least
/// `containment_threshold` of a group's samples as background descriptors,
/// ordered by containment. Regions are left untouched.
std::vector<RegionAnnotation> background_enrich(std::vector<RegionAnnotation> groups,
                                                double containment_threshold);

/// Edge iff max_overlap > edge_threshold. Rows are computed in parallel.
OverlapGraph build_overlap_graph(const std::vector<RegionAnnotation>& groups,
                                 double edge_threshold);

namespace reference {
OverlapGraph build_overlap_graph(const std::vector<RegionAnnotation>& groups,
                                 double edge_threshold);
}  // namespace reference

/// All maximal independent sets (Bron–Kerbosch with pivoting on the
/// complement). Requires size() <= 64.
std::vector<std::vector<std::size_t>> maximal_independent_sets(const OverlapGraph& graph);

/// Color classes of a greedy coloring in descending-degree order.
std::vector<std::vector<std::size_t>> greedy_color_classes(const OverlapGraph& graph);

/// Exact mode falls back to greedy (with a warning) above `exact_cap` nodes.
/// Every set is sorted; the list is sorted lexicographically.
std::vector<std::vector<std::size_t>> candidate_panels(const OverlapGraph& graph,
                                                       CandidateMode mode,
                                                       std::size_t exact_cap = 20,
                                                       Diagnostics* diag = nullptr);

struct DescriptiveScores {
  double coverage = 0.0;
  double mean_purity = 0.0;
  double attention = 0.0;
  double mvo = 0.0;
  double via = 0.0;
};

/// Features counted per annotation are those of its rule plus its
/// background rules.
DescriptiveScores score_descriptive(std::span<const RegionAnnotation> panel,
                                    std::size_t n_samples);

std::vector<Criterion> descriptive_criteria();

/// Iterative selection: candidates -> score -> rank -> keep best -> remove
/// its annotations from the pool.
Layout select_descriptive(std::vector<RegionAnnotation> groups, const DescriptiveParams& params,
                          const Dataset& data, Diagnostics* diag = nullptr);

/// split -> merge -> enrich over every feature's annotations.
std::vector<RegionAnnotation> build_descriptive_groups(const std::vector<FeatureAnnotations>& lists,
                                                       const DescriptiveParams& params,
                                                       const Dataset& data,
                                                       const Embedding& embedding);

std::string panel_label(const Dataset& data, std::span<const RegionAnnotation> annotations);

}  // namespace emblens
