#include <random>

#include "doctest.h"
#include "emblens/contrastive.hpp"
#include "support.hpp"

using namespace emblens;
using fixture::categorical;
using fixture::numeric;
using fixture::set_of;
using fixture::table;

namespace {

std::vector<std::string> by_cluster(const std::vector<std::string>& labels, std::size_t per = 100) {
  std::vector<std::string> v;
  for (const auto& l : labels) v.insert(v.end(), per, l);
  return v;
}

RegionParams small_grid() {
  RegionParams p;
  p.resolution = 96;
  return p;
}

std::vector<RegionAnnotation> disjoint_panel(std::size_t count, std::size_t universe) {
  std::vector<RegionAnnotation> out;
  for (std::size_t k = 0; k < count; ++k)
    out.push_back(fixture::annotation(static_cast<int>(k), Rule::category_set(0, {0}),
                                      fixture::range_set(universe, k * 5, k * 5 + 5)));
  return out;
}

}  // namespace

TEST_CASE("matching pairs annotations by jaccard") {
  const auto r = Rule::category_set(0, {0});
  const std::vector<RegionAnnotation> a = {fixture::annotation(0, r, fixture::range_set(30, 0, 10)),
                                           fixture::annotation(1, r, fixture::range_set(30, 10, 20)),
                                           fixture::annotation(2, r, fixture::range_set(30, 20, 30))};
  auto b = a;
  std::swap(b[0], b[2]);
  CHECK(match_annotations(a, a, 0.85) == std::vector<std::size_t>{0, 1, 2});
  CHECK(match_annotations(a, b, 0.85) == std::vector<std::size_t>{2, 1, 0});
  b.pop_back();
  CHECK(match_annotations(a, b, 0.85).empty());
  b = a;
  b[1].shape.members = fixture::range_set(30, 10, 15);
  CHECK(match_annotations(a, b, 0.85).empty());
  CHECK(match_annotations(a, b, 0.5) == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("matching recovers when the greedy pairing blocks") {
  const auto r = Rule::category_set(0, {0});
  // J(a0,b0) = 0.8 is taken first, which leaves a1 without a partner.
  const std::vector<RegionAnnotation> a = {fixture::annotation(0, r, set_of(10, {0, 1, 2, 3})),
                                           fixture::annotation(1, r, set_of(10, {1, 2, 3, 4, 5}))};
  const std::vector<RegionAnnotation> b = {fixture::annotation(2, r, set_of(10, {0, 1, 2, 3, 4})),
                                           fixture::annotation(3, r, set_of(10, {0, 1, 2, 3, 6, 7}))};
  CHECK(match_annotations(a, b, 0.5) == std::vector<std::size_t>{1, 0});
}

TEST_CASE("merging combines features with matching annotations") {
  const auto d = table({numeric("x", {0, 0, 1, 1}), numeric("y", {0, 0, 1, 1}), numeric("z", {0, 1, 0, 1})});
  std::vector<FeatureAnnotations> lists(3);
  for (std::size_t f = 0; f < 3; ++f) lists[f].feature = f;
  lists[0].annotations = {fixture::annotation(0, Rule::interval(0, {0, 0.5}), set_of(4, {0, 1})),
                          fixture::annotation(1, Rule::interval(0, {0.5, 1, true, true}), set_of(4, {2, 3}))};
  lists[1].annotations = {fixture::annotation(2, Rule::interval(1, {0.5, 1, true, true}), set_of(4, {2, 3})),
                          fixture::annotation(3, Rule::interval(1, {0, 0.5}), set_of(4, {0, 1}))};
  lists[2].annotations = {fixture::annotation(4, Rule::interval(2, {0, 0.5}), set_of(4, {0, 2})),
                          fixture::annotation(5, Rule::interval(2, {0.5, 1, true, true}), set_of(4, {1, 3}))};
  for (auto& l : lists)
    for (auto& a : l.annotations) assess_purity(a, d);
  const auto groups = contrastive_merge(lists, 0.85, d);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].features == std::vector<std::size_t>{0, 1});
  CHECK(groups[1].features == std::vector<std::size_t>{2});
  const auto& first = groups[0].annotations[0];
  CHECK(first.rule.label(d) == "x ∈ [0, 0.5) ∧ y ∈ [0, 0.5)");
  CHECK(first.provenance == std::vector<int>{0, 3});
  CHECK(first.purity == 1.0);
  CHECK(groups[0].annotations[1].provenance == std::vector<int>{1, 2});
}

TEST_CASE("a duplicated feature merges into the original's panel") {
  std::mt19937_64 rng(11);
  const auto e = fixture::three_clusters(rng);
  const auto species = by_cluster({"a", "b", "c"});
  const auto flag = by_cluster({"yes", "no", "yes"});
  const auto base = table({categorical("species", species), categorical("flag", flag)});
  const auto dup = table({categorical("species", species), categorical("flag", flag), categorical("copy", species)});
  const ContrastiveParams params;

  const RegionBuilder b0(base, e, small_grid());
  const RegionBuilder b1(dup, e, small_grid());
  const auto l0 = select_contrastive(build_region_annotations(b0), params, base);
  const auto l1 = select_contrastive(build_region_annotations(b1), params, dup);
  CHECK(l0.panels.size() == 2);
  REQUIRE(l1.panels.size() == l0.panels.size());
  bool found = false;
  for (const auto& p : l1.panels) {
    if (p.features != std::vector<std::size_t>{0, 2}) continue;
    found = true;
    CHECK(p.label == "species + copy");
    for (const auto& a : p.annotations) CHECK(a.rule.features() == std::vector<std::size_t>{0, 2});
  }
  CHECK(found);
}

TEST_CASE("average ranks share ties") {
  const std::vector<double> v{3, 1, 2, 1};
  CHECK(average_ranks(v, Better::lower) == std::vector<double>{4, 1.5, 3, 1.5});
  CHECK(average_ranks(v, Better::higher) == std::vector<double>{1, 3.5, 2, 3.5});
  const std::vector<double> same{7, 7, 7};
  CHECK(average_ranks(same, Better::lower) == std::vector<double>{2, 2, 2});
}

TEST_CASE("weighted rank aggregation by hand") {
  const std::vector<ScoreRow> rows{{"P", {{"overlap", 0.1}, {"mean_purity", 0.9}, {"attention", 0}}},
                                   {"Q", {{"overlap", 0.2}, {"mean_purity", 0.9}, {"attention", 1}}},
                                   {"R", {{"overlap", 0.0}, {"mean_purity", 0.5}, {"attention", 2}}}};
  const auto ranked = rank_aggregate(rows, contrastive_criteria({1.0, 2.0, 1.0}));
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].row == 0);
  CHECK(ranked[0].aggregate == 1.5);
  CHECK(ranked[0].ranks.at("mean_purity") == 1.5);
  CHECK(ranked[1].row == 1);
  CHECK(ranked[1].aggregate == 2.0);
  CHECK(ranked[2].row == 2);
  CHECK(ranked[2].aggregate == 2.5);
  CHECK(ranked[2].ranks.at("overlap") == 1.0);
}

TEST_CASE("aggregate ties go to purity then label") {
  const std::vector<Criterion> c{{"overlap", Better::lower, 1.0}, {"mean_purity", Better::higher, 1.0}};
  const std::vector<ScoreRow> rows{{"X", {{"overlap", 0.1}, {"mean_purity", 0.8}}},
                                   {"Y", {{"overlap", 0.2}, {"mean_purity", 0.9}}}};
  const auto r = rank_aggregate(rows, c);
  CHECK(r[0].aggregate == r[1].aggregate);
  CHECK(r[0].row == 1);
  const std::vector<ScoreRow> twins{{"b", {{"overlap", 0.1}, {"mean_purity", 0.8}}},
                                    {"a", {{"overlap", 0.1}, {"mean_purity", 0.8}}}};
  CHECK(rank_aggregate(twins, c)[0].row == 1);
}

TEST_CASE("rank aggregation rejects bad input") {
  const std::vector<ScoreRow> rows{{"X", {{"overlap", 0.1}}}};
  CHECK_THROWS_WITH(rank_aggregate(rows, contrastive_criteria({1, 1, 1})),
                    doctest::Contains("missing score 'mean_purity'"));
  CHECK_THROWS_AS(rank_aggregate(rows, {{"overlap", Better::lower, 0.0}}), Error);
  CHECK_THROWS_AS(rank_aggregate(rows, {{"overlap", Better::lower, -1.0}}), Error);
}

TEST_CASE("attention favours three annotations") {
  const std::vector<double> expect{2, 1, 0, 1, 2, 3, 4, 5};
  for (std::size_t n = 1; n <= 8; ++n) CHECK(attention_score(n) == expect[n - 1]);

  std::vector<Panel> panels;
  for (std::size_t n = 1; n <= 8; ++n) {
    Panel p;
    p.annotations = disjoint_panel(n, 40);
    p.label = "p" + std::to_string(n);
    panels.push_back(std::move(p));
  }
  const auto ranked = rank_contrastive(panels, contrastive_criteria({0.0, 0.0, 1.0}));
  CHECK(ranked.front().annotations.size() == 3);
  CHECK(ranked.front().ranks.at("attention") == 1.0);
  CHECK(ranked.front().scores.at("attention") == 0.0);
  CHECK(ranked.back().annotations.size() == 8);
}

TEST_CASE("panel scores by arithmetic") {
  const auto r = Rule::category_set(0, {0});
  std::vector<RegionAnnotation> anns{fixture::annotation(0, r, fixture::range_set(10, 0, 4)),
                                     fixture::annotation(1, r, fixture::range_set(10, 2, 6)),
                                     fixture::annotation(2, r, fixture::range_set(10, 6, 10))};
  anns[0].clause_purity = 1.0;
  anns[1].clause_purity = 0.5;
  anns[2].clause_purity = 0.0;
  // Pairwise Jaccard 1/3, 0, 0.
  CHECK(total_region_overlap(anns) == doctest::Approx(1.0 / 9));
  CHECK(mean_purity(anns) == 0.5);
  CHECK(total_region_overlap(std::span(anns).first(1)) == 0.0);
}

TEST_CASE("selection keeps at most k panels") {
  std::mt19937_64 rng(12);
  const auto e = fixture::three_clusters(rng);
  std::vector<Feature> features;
  for (int f = 0; f < 6; ++f) {
    std::vector<std::string> labels(300);
    for (std::size_t i = 0; i < 300; ++i) labels[i] = (i / 100 + static_cast<std::size_t>(f)) % 3 == 0 ? "on" : "off";
    if (f >= 3) labels[7] = labels[7] == "on" ? "off" : "on";
    features.push_back(categorical("f" + std::to_string(f), labels));
  }
  const auto d = table(features);
  const RegionBuilder b(d, e, small_grid());
  const auto lists = build_region_annotations(b);
  ContrastiveParams params;
  params.k_panels = 2;
  const auto layout = select_contrastive(lists, params, d);
  CHECK(layout.panels.size() == 2);
  for (std::size_t k = 1; k < layout.panels.size(); ++k)
    CHECK(layout.panels[k - 1].aggregate_rank <= layout.panels[k].aggregate_rank);
}
