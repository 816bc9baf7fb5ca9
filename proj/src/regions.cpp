#include "emblens/regions.hpp"

#include <algorithm>
#include <exception>

#include "emblens/overlap.hpp"

namespace emblens {

double purity(const SampleSet& members, const SampleSet& truth) {
  if (members.empty()) return 0.0;
  return static_cast<double>(intersection_size(members, truth)) / static_cast<double>(members.size());
}

void assess_purity(RegionAnnotation& a, const Dataset& data) {
  a.purity = purity(a.members(), a.rule.truth(data));
  const auto& clauses = a.rule.clauses();
  if (clauses.size() <= 1) {
    a.clause_purity = a.purity;
    return;
  }
  double sum = 0.0;
  for (const auto& c : clauses) sum += purity(a.members(), Rule::from_clause(c).truth(data));
  a.clause_purity = sum / static_cast<double>(clauses.size());
}

namespace {

double resolve_sigma(const Embedding& embedding, const RegionParams& params) {
  if (params.sigma) {
    if (!(*params.sigma > 0.0)) throw Error("bandwidth override must be positive");
    return *params.sigma;
  }
  return adaptive_bandwidth(embedding);
}

}  // namespace

RegionBuilder::RegionBuilder(const Dataset& data, const Embedding& embedding, const RegionParams& params)
    : data_(&data),
      embedding_(&embedding),
      params_(params),
      engine_([&] {
        check_aligned(data, embedding);
        const double sigma = resolve_sigma(embedding, params);
        return KdeEngine(make_grid(embedding, sigma, params.resolution), sigma);
      }()) {}

DensityGrid RegionBuilder::density(const SampleSet& truth) const {
  std::span<const double> weights;
  if (data_->weights) weights = *data_->weights;
  return engine_.evaluate(*embedding_, truth, weights);
}

std::optional<RegionAnnotation> RegionBuilder::build(const Rule& rule, const SampleSet& truth) const {
  const DensityGrid grid = density(truth);
  if (!(grid.max() > 0.0)) return std::nullopt;  // every supporting sample has weight 0
  RegionAnnotation a;
  a.rule = rule;
  a.shape = extract_contours(grid, params_.level_fraction, *embedding_);
  if (a.shape.members.empty()) return std::nullopt;
  a.purity = a.clause_purity = purity(a.shape.members, truth);
  return a;
}

std::vector<FeatureAnnotations> construct_annotations(const RegionBuilder& builder, Diagnostics* diag) {
  const Dataset& data = builder.data();
  const std::size_t nf = data.features.size();

  std::vector<std::vector<IndicatorVariable>> indicators(nf);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t f = 0; f < static_cast<std::ptrdiff_t>(nf); ++f) {
    try {
      indicators[static_cast<std::size_t>(f)] =
          make_indicators(data, static_cast<std::size_t>(f), builder.params().k_bins, diag);
    } catch (const std::exception& e) {
      warn(diag, "feature '" + data.features[static_cast<std::size_t>(f)].name + "': " + e.what());
    }
  }

  struct Job {
    std::size_t feature;
    std::size_t indicator;
  };
  std::vector<Job> jobs;
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t k = 0; k < indicators[f].size(); ++k) jobs.push_back({f, k});

  std::vector<std::optional<RegionAnnotation>> built(jobs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t t = 0; t < static_cast<std::ptrdiff_t>(jobs.size()); ++t) {
    const auto& job = jobs[static_cast<std::size_t>(t)];
    const auto& ind = indicators[job.feature][job.indicator];
    try {
      built[static_cast<std::size_t>(t)] = builder.build(ind.rule, ind.truth);
    } catch (const std::exception& e) {
      warn(diag, ind.rule.label(data) + ": " + e.what());
    }
  }

  std::vector<FeatureAnnotations> lists(nf);
  int id = 0;
  for (std::size_t f = 0; f < nf; ++f) lists[f].feature = f;
  for (std::size_t t = 0; t < jobs.size(); ++t) {
    if (!built[t]) continue;
    auto a = std::move(*built[t]);
    const int bin = indicators[jobs[t].feature][jobs[t].indicator].bin;
    a.bin_lo = a.bin_hi = bin;
    a.id = id++;
    a.provenance = {a.id};
    lists[jobs[t].feature].annotations.push_back(std::move(a));
  }
  return lists;
}

namespace {

bool is_missing_rule(const RegionAnnotation& a) { return a.bin_lo == kMissingBin; }

bool compatible(const RegionAnnotation& a, const RegionAnnotation& b, FeatureKind kind) {
  if (is_missing_rule(a) || is_missing_rule(b)) return false;
  if (kind == FeatureKind::nominal) return true;
  return a.bin_hi + 1 == b.bin_lo || b.bin_hi + 1 == a.bin_lo;
}

void canonical_sort(std::vector<RegionAnnotation>& list, const Dataset& data) {
  std::stable_sort(list.begin(), list.end(), [&](const RegionAnnotation& a, const RegionAnnotation& b) {
    if (a.bin_lo != b.bin_lo) return a.bin_lo < b.bin_lo;
    return a.rule.label(data) < b.rule.label(data);
  });
}

}  // namespace

std::vector<RegionAnnotation> posthoc_merge(std::vector<RegionAnnotation> list, FeatureKind kind,
                                            double threshold, const RegionBuilder& builder) {
  const Dataset& data = builder.data();
  canonical_sort(list, data);
  for (;;) {
    double best = -1.0;
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < list.size(); ++a) {
      for (std::size_t b = a + 1; b < list.size(); ++b) {
        if (!compatible(list[a], list[b], kind)) continue;
        const double o = max_overlap(list[a].members(), list[b].members());
        if (o > threshold && o > best) {
          best = o;
          ba = a;
          bb = b;
        }
      }
    }
    if (best < 0.0) break;

    const auto& x = list[ba];
    const auto& y = list[bb];
    const Rule rule = x.rule.unite_with(y.rule);
    const SampleSet truth = rule.truth(data);
    auto merged = builder.build(rule, truth);
    if (!merged) {
      // Only reachable when all supporting weights are zero: keep both outlines.
      RegionAnnotation m;
      m.rule = rule;
      m.shape.polygons = x.shape.polygons;
      m.shape.polygons.insert(m.shape.polygons.end(), y.shape.polygons.begin(), y.shape.polygons.end());
      m.shape.members = x.members() | y.members();
      m.purity = m.clause_purity = purity(m.shape.members, truth);
      merged = std::move(m);
    }
    merged->bin_lo = std::min(x.bin_lo, y.bin_lo);
    merged->bin_hi = std::max(x.bin_hi, y.bin_hi);
    merged->provenance = x.provenance;
    merged->provenance.insert(merged->provenance.end(), y.provenance.begin(), y.provenance.end());
    std::sort(merged->provenance.begin(), merged->provenance.end());
    merged->id = -1;

    list[ba] = std::move(*merged);
    list.erase(list.begin() + static_cast<std::ptrdiff_t>(bb));
    canonical_sort(list, data);
  }
  return list;
}

std::vector<FeatureAnnotations> filter_uninformative(std::vector<FeatureAnnotations> lists,
                                                     std::size_t n_samples, double span_fraction) {
  std::vector<FeatureAnnotations> out;
  for (auto& l : lists) {
    if (l.annotations.empty()) continue;
    if (l.annotations.size() == 1 &&
        static_cast<double>(l.annotations.front().size()) >= span_fraction * static_cast<double>(n_samples))
      continue;
    out.push_back(std::move(l));
  }
  return out;
}

int next_id(const std::vector<FeatureAnnotations>& lists) {
  int id = 0;
  for (const auto& l : lists)
    for (const auto& a : l.annotations) id = std::max(id, a.id + 1);
  return id;
}

void merge_features(std::vector<FeatureAnnotations>& lists, const RegionBuilder& builder, Diagnostics* diag) {
  int id = next_id(lists);
  const double threshold = builder.params().merge_threshold;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t f = 0; f < static_cast<std::ptrdiff_t>(lists.size()); ++f) {
    auto& l = lists[static_cast<std::size_t>(f)];
    try {
      l.annotations = posthoc_merge(l.annotations, builder.data().features[l.feature].kind,
                                    threshold, builder);
    } catch (const std::exception& e) {
      warn(diag, "merging '" + builder.data().features[l.feature].name + "': " + e.what());
    }
  }
  for (auto& l : lists)
    for (auto& a : l.annotations)
      if (a.id < 0) a.id = id++;
}

std::vector<FeatureAnnotations> build_region_annotations(const RegionBuilder& builder, Diagnostics* diag) {
  auto lists = construct_annotations(builder, diag);
  merge_features(lists, builder, diag);
  return filter_uninformative(std::move(lists), builder.data().n_samples, builder.params().span_fraction);
}

}  // namespace emblens
