#include <random>
#include <set>

#include "doctest.h"
#include "emblens/descriptive.hpp"
#include "emblens/overlap.hpp"
#include "support.hpp"

using namespace emblens;
using fixture::numeric;
using fixture::range_set;
using fixture::set_of;
using fixture::table;

namespace {

OverlapGraph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution edge(p);
  OverlapGraph g(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (edge(rng)) g.add_edge(a, b);
  return g;
}

// Every independent set that no vertex can extend, by enumerating all subsets.
std::vector<std::vector<std::size_t>> brute_force_mis(const OverlapGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> nodes;
    for (std::size_t v = 0; v < n; ++v)
      if (mask >> v & 1u) nodes.push_back(v);
    if (!g.is_independent(nodes)) continue;
    bool maximal = true;
    for (std::size_t v = 0; v < n && maximal; ++v) {
      if (mask >> v & 1u) continue;
      bool free = true;
      for (auto u : nodes) free = free && !g.adjacent(u, v);
      maximal = !free;
    }
    if (maximal) out.push_back(nodes);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> sizes_of(const std::vector<std::vector<std::size_t>>& sets) {
  std::vector<std::size_t> s;
  for (const auto& x : sets) s.push_back(x.size());
  return s;
}

}  // namespace

TEST_CASE("split_disjoint partitions members by polygon") {
  Embedding e;
  for (int i = 0; i < 6; ++i) e.coords.push_back({0.5 + 0.1 * i, 0.5});
  for (int i = 0; i < 4; ++i) e.coords.push_back({5.5 + 0.1 * i, 5.5});
  const auto d = table({numeric("x", {0, 0, 0, 0, 1, 1, 1, 1, 1, 1})});
  auto a = fixture::annotation(3, Rule::interval(0, {0, 0.5}), range_set(10, 0, 10));
  a.shape.polygons = {fixture::square(0, 0, 2, 2), fixture::square(5, 5, 7, 7)};
  const auto parts = split_disjoint(a, d, e);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].members() == range_set(10, 0, 6));
  CHECK(parts[1].members() == range_set(10, 6, 10));
  CHECK(parts[0].purity == doctest::Approx(4.0 / 6));
  CHECK(parts[1].purity == 0.0);
  for (const auto& p : parts) {
    CHECK(p.id == -1);
    CHECK(p.provenance == std::vector<int>{3});
    CHECK(p.shape.polygons.size() == 1);
    CHECK(p.rule == a.rule);
  }

  auto single = a;
  single.shape.polygons.resize(1);
  const auto same = split_disjoint(single, d, e);
  REQUIRE(same.size() == 1);
  CHECK(same[0].id == 3);
  CHECK(same[0].members() == a.members());
}

TEST_CASE("descriptive merge respects the min-overlap threshold") {
  const auto d = table({numeric("x", std::vector<double>(20, 0.0)), numeric("y", std::vector<double>(20, 0.0))});
  auto small = fixture::annotation(0, Rule::interval(0, {0, 1}), range_set(20, 0, 5));
  auto big = fixture::annotation(1, Rule::interval(1, {0, 1}), range_set(20, 0, 10));
  big.shape.polygons = {fixture::square(0, 0, 3, 3)};
  small.shape.polygons = {fixture::square(0, 0, 1, 1)};
  const std::vector<RegionAnnotation> pair{small, big};

  const auto kept = descriptive_merge(pair, 0.8, d);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].id == 0);
  CHECK(kept[1].id == 1);

  const auto merged = descriptive_merge(pair, 0.4, d);
  REQUIRE(merged.size() == 1);
  const auto& g = merged[0];
  CHECK(g.id == -1);
  CHECK(g.rule == Rule::interval(0, {0, 1}).conjoin(Rule::interval(1, {0, 1})));
  CHECK(g.members() == range_set(20, 0, 10));
  CHECK(g.provenance == std::vector<int>{0, 1});
  REQUIRE(g.shape.polygons.size() == 1);
  CHECK(g.shape.polygons[0].outer == big.shape.polygons[0].outer);
  CHECK(g.purity == 1.0);

  const std::vector<RegionAnnotation> apart{fixture::annotation(0, Rule::interval(0, {0, 1}), range_set(20, 0, 5)),
                                            fixture::annotation(1, Rule::interval(1, {0, 1}), range_set(20, 5, 10))};
  CHECK(descriptive_merge(apart, 0.0, d).size() == 2);
}

TEST_CASE("descriptive merge takes the best pair first") {
  const auto d = table({numeric("a", std::vector<double>(20, 0.0)), numeric("b", std::vector<double>(20, 0.0)),
                        numeric("c", std::vector<double>(20, 0.0))});
  // a~b at 0.9, b~c at 0.85, a~c below threshold until a and b are united.
  const std::vector<RegionAnnotation> anns{
      fixture::annotation(0, Rule::interval(0, {0, 1}), range_set(20, 0, 10)),
      fixture::annotation(1, Rule::interval(1, {0, 1}), range_set(20, 1, 10)),
      fixture::annotation(2, Rule::interval(2, {0, 1}), range_set(20, 10, 20))};
  const auto merged = descriptive_merge(anns, 0.8, d);
  REQUIRE(merged.size() == 2);
  CHECK(merged[0].provenance == std::vector<int>{0, 1});
  CHECK(merged[1].id == 2);
}

TEST_CASE("background enrichment adds containing rules") {
  const auto small = fixture::annotation(0, Rule::interval(0, {0, 1}), range_set(100, 0, 10));
  const auto mid = fixture::annotation(1, Rule::interval(1, {0, 1}), range_set(100, 0, 20));
  const auto large = fixture::annotation(2, Rule::interval(2, {0, 1}), range_set(100, 0, 40));
  auto half = fixture::annotation(3, Rule::interval(3, {0, 1}), range_set(100, 5, 60));
  std::vector<RegionAnnotation> groups{small, mid, large, half};
  for (auto& g : groups) g.shape.polygons = {fixture::square(0, 0, static_cast<double>(g.size()), 1)};
  const auto out = background_enrich(groups, 0.9);
  REQUIRE(out.size() == 4);
  REQUIRE(out[0].background.size() == 2);
  CHECK(out[0].background[0].rule == mid.rule);
  CHECK(out[0].background[1].rule == large.rule);
  CHECK(out[0].background[0].containment == 1.0);
  REQUIRE(out[1].background.size() == 1);
  CHECK(out[1].background[0].rule == large.rule);
  CHECK(out[2].background.empty());
  CHECK(out[3].background.empty());
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(out[k].members() == groups[k].members());
    CHECK(out[k].shape.polygons[0].outer == groups[k].shape.polygons[0].outer);
    CHECK(out[k].rule == groups[k].rule);
  }
  // Containment order: the tighter fit comes first.
  std::vector<RegionAnnotation> loose{fixture::annotation(0, Rule::interval(0, {0, 1}), range_set(100, 0, 20)),
                                      fixture::annotation(1, Rule::interval(1, {0, 1}), range_set(100, 1, 40)),
                                      fixture::annotation(2, Rule::interval(2, {0, 1}), range_set(100, 0, 30))};
  const auto ordered = background_enrich(loose, 0.9);
  REQUIRE(ordered[0].background.size() == 2);
  CHECK(ordered[0].background[0].rule == loose[2].rule);
  CHECK(ordered[0].background[1].containment == 0.95);
}

TEST_CASE("overlap graph on five hand-made regions") {
  const auto r = Rule::interval(0, {0, 1});
  std::vector<RegionAnnotation> g{fixture::annotation(0, r, range_set(100, 0, 10)),
                                  fixture::annotation(1, r, range_set(100, 5, 15)),
                                  fixture::annotation(2, r, range_set(100, 20, 30)),
                                  fixture::annotation(3, r, range_set(100, 29, 49)),
                                  fixture::annotation(4, r, range_set(100, 60, 100))};
  g[4].shape.members.insert(2);
  const auto graph = build_overlap_graph(g, 0.05);
  CHECK(graph.edge_count() == 3);
  CHECK(graph.adjacent(0, 1));
  CHECK(graph.adjacent(1, 0));
  CHECK(graph.adjacent(2, 3));
  CHECK(graph.adjacent(0, 4));
  CHECK_FALSE(graph.adjacent(1, 4));
  CHECK(graph.degree(0) == 2);
  const auto strict = build_overlap_graph(g, 0.1);
  CHECK(strict.edge_count() == 1);
  CHECK(strict.adjacent(0, 1));
}

TEST_CASE("parallel overlap graph matches the serial one") {
  std::mt19937_64 rng(21);
  std::vector<RegionAnnotation> g;
  for (int k = 0; k < 150; ++k)
    g.push_back(fixture::annotation(k, Rule::interval(0, {0, 1}), fixture::random_set(500, 0.02, rng)));
  const auto a = build_overlap_graph(g, 0.05);
  const auto b = reference::build_overlap_graph(g, 0.05);
  CHECK(a.edge_count() == b.edge_count());
  for (std::size_t u = 0; u < g.size(); ++u)
    for (std::size_t v = 0; v < g.size(); ++v) REQUIRE(a.adjacent(u, v) == b.adjacent(u, v));
}

TEST_CASE("exact independent sets match brute force") {
  std::mt19937_64 rng(22);
  std::uniform_int_distribution<std::size_t> size(1, 12);
  std::uniform_real_distribution<double> density(0.0, 0.8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = random_graph(size(rng), density(rng), rng);
    REQUIRE(maximal_independent_sets(g) == brute_force_mis(g));
  }
}

TEST_CASE("independent sets of small named graphs") {
  OverlapGraph k4(4);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b) k4.add_edge(a, b);
  const std::vector<std::vector<std::size_t>> singles{{0}, {1}, {2}, {3}};
  CHECK(maximal_independent_sets(k4) == singles);
  CHECK(greedy_color_classes(k4) == singles);

  const OverlapGraph empty(5);
  const std::vector<std::vector<std::size_t>> all{{0, 1, 2, 3, 4}};
  CHECK(maximal_independent_sets(empty) == all);
  CHECK(greedy_color_classes(empty) == all);

  OverlapGraph path(3);
  path.add_edge(0, 1);
  path.add_edge(1, 2);
  CHECK(maximal_independent_sets(path) == std::vector<std::vector<std::size_t>>{{0, 2}, {1}});
  CHECK_THROWS_AS(maximal_independent_sets(OverlapGraph(65)), Error);
}

TEST_CASE("greedy color classes are independent and cover every node") {
  std::mt19937_64 rng(23);
  for (std::size_t n : {1, 2, 17, 64, 65, 120, 200}) {
    const auto g = random_graph(n, 0.1, rng);
    const auto classes = greedy_color_classes(g);
    std::set<std::size_t> seen;
    for (const auto& c : classes) {
      CHECK(g.is_independent(c));
      for (auto v : c) CHECK(seen.insert(v).second);
    }
    CHECK(seen.size() == n);
  }
}

TEST_CASE("exact mode falls back to greedy above the cap") {
  std::mt19937_64 rng(24);
  const auto g = random_graph(25, 0.3, rng);
  Diagnostics diag;
  const auto sets = candidate_panels(g, CandidateMode::exact, 20, &diag);
  REQUIRE(diag.warnings().size() == 1);
  CHECK(diag.warnings()[0].find("greedy") != std::string::npos);
  CHECK(sizes_of(sets) == sizes_of(greedy_color_classes(g)));

  Diagnostics quiet;
  const auto small = random_graph(10, 0.3, rng);
  CHECK(candidate_panels(small, CandidateMode::exact, 20, &quiet) == maximal_independent_sets(small));
  CHECK(quiet.empty());
  CHECK(candidate_panels(small, CandidateMode::greedy, 20, &quiet) == greedy_color_classes(small));
  CHECK(quiet.empty());
}

TEST_CASE("descriptive scores by arithmetic") {
  const auto a = fixture::annotation(0, Rule::interval(0, {0, 1}).conjoin(Rule::interval(1, {0, 1})),
                                     range_set(10, 0, 3));
  const auto b = fixture::annotation(1, Rule::interval(0, {1, 2}), range_set(10, 5, 7));
  const std::vector<RegionAnnotation> panel{a, b};
  const auto s = score_descriptive(panel, 10);
  CHECK(s.mvo == 1.5);
  CHECK(s.via == 1.0);
  CHECK(s.coverage == 0.5);
  CHECK(s.attention == 1.0);

  auto c = b;
  c.background = {{Rule::interval(1, {0, 5}), 1.0}};
  const std::vector<RegionAnnotation> with_bg{a, c};
  const auto t = score_descriptive(with_bg, 10);
  CHECK(t.mvo == 2.0);
  CHECK(t.via == 2.0);
}

TEST_CASE("two disjoint groups form one panel") {
  const auto d = table({numeric("x", std::vector<double>(10, 0.0))});
  std::vector<RegionAnnotation> groups{fixture::annotation(0, Rule::interval(0, {0, 1}), range_set(10, 0, 4)),
                                       fixture::annotation(1, Rule::interval(0, {1, 2}), range_set(10, 5, 9))};
  DescriptiveParams params;
  params.k_panels = 5;
  const auto layout = select_descriptive(groups, params, d);
  REQUIRE(layout.panels.size() == 1);
  CHECK(layout.panels[0].annotations.size() == 2);
  CHECK(layout.panels[0].scores.at("coverage") == 0.8);
  CHECK(layout.panels[0].label == "x ∈ [0, 1) ; x ∈ [1, 2)");
}

TEST_CASE("selected panels are independent and share no annotation") {
  std::mt19937_64 rng(25);
  const auto d = table({numeric("x", std::vector<double>(400, 0.0))});
  std::vector<RegionAnnotation> groups;
  for (int k = 0; k < 16; ++k)
    groups.push_back(fixture::annotation(k, Rule::interval(0, {static_cast<double>(k), k + 1.0}),
                                         fixture::random_set(400, 0.05, rng)));
  for (int k = 16; k < 24; ++k) {
    const auto lo = static_cast<std::size_t>(k - 16) * 50;
    groups.push_back(fixture::annotation(k, Rule::interval(0, {static_cast<double>(k), k + 1.0}),
                                         range_set(400, lo, lo + 50)));
  }
  for (auto mode : {CandidateMode::exact, CandidateMode::greedy}) {
    DescriptiveParams params;
    params.mode = mode;
    params.exact_cap = 64;
    const auto layout = select_descriptive(groups, params, d);
    CHECK(layout.panels.size() == 4);
    std::set<int> used;
    for (const auto& p : layout.panels) {
      for (std::size_t a = 0; a < p.annotations.size(); ++a) {
        CHECK(used.insert(p.annotations[a].id).second);
        for (std::size_t b = a + 1; b < p.annotations.size(); ++b)
          CHECK(max_overlap(p.annotations[a].members(), p.annotations[b].members()) <= params.edge_threshold);
      }
    }
  }
}

TEST_CASE("descriptive groups over a real embedding") {
  std::mt19937_64 rng(26);
  const auto e = fixture::three_clusters(rng);
  std::vector<std::string> kind(300), tag(300);
  for (std::size_t i = 0; i < 300; ++i) {
    kind[i] = std::string(1, static_cast<char>('a' + i / 100));
    tag[i] = i < 100 ? "left" : "right";
  }
  const auto d = table({fixture::categorical("kind", kind), fixture::categorical("tag", tag)});
  RegionParams rp;
  rp.resolution = 96;
  const RegionBuilder builder(d, e, rp);
  const auto lists = build_region_annotations(builder);
  const DescriptiveParams params;
  const auto groups = build_descriptive_groups(lists, params, d, e);
  std::set<int> ids;
  for (const auto& g : groups) CHECK(ids.insert(g.id).second);
  // "tag = right" splits into B and C, each of which merges with its "kind" region.
  std::size_t conj = 0;
  for (const auto& g : groups)
    if (g.rule.features().size() == 2) {
      ++conj;
      CHECK(g.clause_purity > 0.95);
    }
  CHECK(conj == 3);
  const auto layout = select_descriptive(groups, params, d);
  REQUIRE_FALSE(layout.panels.empty());
  CHECK(layout.panels[0].annotations.size() == 3);
  CHECK(layout.panels[0].scores.at("coverage") > 0.9);
}
