#include "emblens/descriptive.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "emblens/overlap.hpp"

namespace emblens {

// ---------------------------------------------------------------------------
// OverlapGraph

OverlapGraph::OverlapGraph(std::size_t n) : n_(n), words_((n + 63) / 64), rows_(n * words_, 0) {}

void OverlapGraph::add_edge(std::size_t a, std::size_t b) {
  if (a == b) return;
  rows_[a * words_ + (b >> 6)] |= std::uint64_t{1} << (b & 63);
  rows_[b * words_ + (a >> 6)] |= std::uint64_t{1} << (a & 63);
}

std::size_t OverlapGraph::degree(std::size_t v) const {
  std::size_t d = 0;
  for (std::size_t w = 0; w < words_; ++w) d += static_cast<std::size_t>(std::popcount(row(v)[w]));
  return d;
}

std::size_t OverlapGraph::edge_count() const {
  std::size_t e = 0;
  for (std::size_t v = 0; v < n_; ++v) e += degree(v);
  return e / 2;
}

bool OverlapGraph::is_independent(const std::vector<std::size_t>& nodes) const {
  for (std::size_t a = 0; a < nodes.size(); ++a)
    for (std::size_t b = a + 1; b < nodes.size(); ++b)
      if (adjacent(nodes[a], nodes[b])) return false;
  return true;
}

OverlapGraph build_overlap_graph(const std::vector<RegionAnnotation>& groups, double edge_threshold) {
  const std::size_t n = groups.size();
  std::vector<char> flags(n * n, 0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ia = 0; ia < static_cast<std::ptrdiff_t>(n); ++ia) {
    const auto a = static_cast<std::size_t>(ia);
    for (std::size_t b = a + 1; b < n; ++b)
      flags[a * n + b] = max_overlap(groups[a].members(), groups[b].members()) > edge_threshold;
  }
  OverlapGraph g(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (flags[a * n + b]) g.add_edge(a, b);
  return g;
}

namespace reference {

OverlapGraph build_overlap_graph(const std::vector<RegionAnnotation>& groups, double edge_threshold) {
  OverlapGraph g(groups.size());
  for (std::size_t a = 0; a < groups.size(); ++a)
    for (std::size_t b = a + 1; b < groups.size(); ++b)
      if (max_overlap(groups[a].members(), groups[b].members()) > edge_threshold) g.add_edge(a, b);
  return g;
}

}  // namespace reference

// ---------------------------------------------------------------------------
// Candidate panels

namespace {

std::vector<std::size_t> bits_to_nodes(std::uint64_t mask) {
  std::vector<std::size_t> out;
  while (mask != 0) {
    out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

struct BronKerbosch {
  std::vector<std::uint64_t> non_adjacent;  // complement graph rows
  std::vector<std::vector<std::size_t>> found;

  void run(std::uint64_t r, std::uint64_t p, std::uint64_t x) {
    if (p == 0 && x == 0) {
      found.push_back(bits_to_nodes(r));
      return;
    }
    std::size_t pivot = 0;
    int best = -1;
    for (std::uint64_t px = p | x; px != 0; px &= px - 1) {
      const auto u = static_cast<std::size_t>(std::countr_zero(px));
      const int c = std::popcount(p & non_adjacent[u]);
      if (c > best) {
        best = c;
        pivot = u;
      }
    }
    for (std::uint64_t todo = p & ~non_adjacent[pivot]; todo != 0; todo &= todo - 1) {
      const auto v = static_cast<std::size_t>(std::countr_zero(todo));
      const std::uint64_t bit = std::uint64_t{1} << v;
      run(r | bit, p & non_adjacent[v], x & non_adjacent[v]);
      p &= ~bit;
      x |= bit;
    }
  }
};

}  // namespace

std::vector<std::vector<std::size_t>> maximal_independent_sets(const OverlapGraph& graph) {
  const std::size_t n = graph.size();
  if (n > 64) throw Error("exact independent-set enumeration supports at most 64 nodes");
  if (n == 0) return {};
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  BronKerbosch bk;
  bk.non_adjacent.resize(n);
  for (std::size_t v = 0; v < n; ++v)
    bk.non_adjacent[v] = all & ~graph.row(v)[0] & ~(std::uint64_t{1} << v);
  bk.run(0, all, 0);
  std::sort(bk.found.begin(), bk.found.end());
  return bk.found;
}

std::vector<std::vector<std::size_t>> greedy_color_classes(const OverlapGraph& graph) {
  const std::size_t n = graph.size();
  std::vector<std::size_t> order(n), degree(n);
  for (std::size_t v = 0; v < n; ++v) {
    order[v] = v;
    degree[v] = graph.degree(v);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
  constexpr auto none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> color(n, none);
  std::size_t colors = 0;
  for (auto v : order) {
    std::vector<char> used(colors + 1, 0);
    for (std::size_t u = 0; u < n; ++u)
      if (color[u] != none && graph.adjacent(u, v)) used[color[u]] = 1;
    std::size_t c = 0;
    while (used[c]) ++c;
    color[v] = c;
    colors = std::max(colors, c + 1);
  }
  std::vector<std::vector<std::size_t>> classes(colors);
  for (std::size_t v = 0; v < n; ++v) classes[color[v]].push_back(v);
  std::sort(classes.begin(), classes.end());
  return classes;
}

std::vector<std::vector<std::size_t>> candidate_panels(const OverlapGraph& graph, CandidateMode mode,
                                                       std::size_t exact_cap, Diagnostics* diag) {
  if (graph.size() == 0) return {};
  std::vector<std::vector<std::size_t>> sets;
  if (mode == CandidateMode::exact && graph.size() <= std::min<std::size_t>(exact_cap, 64)) {
    sets = maximal_independent_sets(graph);
  } else {
    if (mode == CandidateMode::exact)
      warn(diag, "overlap graph has " + std::to_string(graph.size()) + " nodes (cap " +
                     std::to_string(exact_cap) + "); using greedy coloring");
    sets = greedy_color_classes(graph);
  }
  for (const auto& s : sets)
    if (!graph.is_independent(s)) throw Error("candidate panel is not an independent set");
  return sets;
}

// ---------------------------------------------------------------------------
// Split, merge, enrich

std::vector<RegionAnnotation> split_disjoint(const RegionAnnotation& annotation, const Dataset& data,
                                             const Embedding& embedding) {
  const auto& polys = annotation.shape.polygons;
  if (polys.size() <= 1) return {annotation};
  const std::size_t n = annotation.members().universe();
  std::vector<SampleSet> parts(polys.size(), SampleSet(n));
  std::vector<BBox> boxes;
  for (const auto& p : polys) boxes.push_back(bounding_box(p.outer));
  for (auto i : annotation.members().indices()) {
    const Point p = embedding.coords[i];
    for (std::size_t k = 0; k < polys.size(); ++k) {
      if (boxes[k].contains(p) && point_in_polygon(polys[k], p)) {
        parts[k].insert(i);
        break;
      }
    }
  }
  std::vector<RegionAnnotation> out;
  for (std::size_t k = 0; k < polys.size(); ++k) {
    if (parts[k].empty()) continue;
    RegionAnnotation a;
    a.rule = annotation.rule;
    a.background = annotation.background;
    a.shape.polygons = {polys[k]};
    a.shape.members = std::move(parts[k]);
    assess_purity(a, data);
    a.provenance = annotation.provenance;
    a.bin_lo = annotation.bin_lo;
    a.bin_hi = annotation.bin_hi;
    out.push_back(std::move(a));
  }
  if (out.size() == 1) {
    out.front().id = annotation.id;
  }
  return out;
}

std::vector<RegionAnnotation> descriptive_merge(const std::vector<RegionAnnotation>& annotations,
                                                double threshold, const Dataset& data) {
  const std::size_t n = annotations.size();
  std::vector<std::vector<std::size_t>> members(n);
  std::vector<SampleSet> regions;
  std::vector<char> active(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    members[i] = {i};
    regions.push_back(annotations[i].members());
  }
  std::vector<double> m(n * n, 0.0);
  auto refresh = [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      const double o = min_overlap(regions[i], regions[j]);
      m[i * n + j] = m[j * n + i] = o;
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  for (;;) {
    double best = threshold;
    std::size_t bi = n, bj = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (active[j] && m[i * n + j] > best) {
          best = m[i * n + j];
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == n) break;
    regions[bi] |= regions[bj];
    members[bi].insert(members[bi].end(), members[bj].begin(), members[bj].end());
    active[bj] = 0;
    refresh(bi);
  }

  std::vector<RegionAnnotation> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    if (members[i].size() == 1) {
      out.push_back(annotations[i]);
      continue;
    }
    std::size_t largest = members[i].front();
    Rule rule;
    RegionAnnotation g;
    for (auto k : members[i]) {
      const auto& a = annotations[k];
      rule = rule.conjoin(a.rule);
      if (a.size() > annotations[largest].size()) largest = k;
      g.provenance.insert(g.provenance.end(), a.provenance.begin(), a.provenance.end());
    }
    std::sort(g.provenance.begin(), g.provenance.end());
    g.provenance.erase(std::unique(g.provenance.begin(), g.provenance.end()), g.provenance.end());
    g.rule = std::move(rule);
    g.shape.polygons = annotations[largest].shape.polygons;
    g.shape.members = regions[i];
    assess_purity(g, data);
    g.bin_lo = annotations[largest].bin_lo;
    g.bin_hi = annotations[largest].bin_hi;
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<RegionAnnotation> background_enrich(std::vector<RegionAnnotation> groups,
                                                double containment_threshold) {
  const std::size_t n = groups.size();
  std::vector<std::vector<BackgroundRule>> extra(n);
  for (std::size_t g = 0; g < n; ++g) {
    const auto& gm = groups[g].members();
    if (gm.empty()) continue;
    std::vector<std::pair<double, std::size_t>> hits;
    for (std::size_t b = 0; b < n; ++b) {
      if (b == g || groups[b].size() <= gm.size()) continue;
      const double c = static_cast<double>(intersection_size(gm, groups[b].members())) /
                       static_cast<double>(gm.size());
      if (c >= containment_threshold) hits.emplace_back(c, b);
    }
    std::stable_sort(hits.begin(), hits.end(), [&](const auto& x, const auto& y) {
      if (x.first != y.first) return x.first > y.first;
      return groups[x.second].size() < groups[y.second].size();
    });
    for (const auto& [c, b] : hits) {
      const Rule& r = groups[b].rule;
      if (r == groups[g].rule) continue;
      const auto dup = std::any_of(extra[g].begin(), extra[g].end(),
                                   [&](const BackgroundRule& e) { return e.rule == r; });
      if (!dup) extra[g].push_back({r, c});
    }
  }
  for (std::size_t g = 0; g < n; ++g)
    groups[g].background.insert(groups[g].background.end(), extra[g].begin(), extra[g].end());
  return groups;
}

// ---------------------------------------------------------------------------
// Scoring and selection

DescriptiveScores score_descriptive(std::span<const RegionAnnotation> panel, std::size_t n_samples) {
  DescriptiveScores s;
  if (panel.empty()) return s;
  SampleSet covered(panel.front().members().universe());
  std::map<std::size_t, std::size_t> occurrences;
  for (const auto& a : panel) {
    covered |= a.members();
    std::set<std::size_t> feats;
    for (auto f : a.rule.features()) feats.insert(f);
    for (const auto& b : a.background)
      for (auto f : b.rule.features()) feats.insert(f);
    for (auto f : feats) ++occurrences[f];
  }
  s.coverage = n_samples == 0 ? 0.0 : static_cast<double>(covered.size()) / static_cast<double>(n_samples);
  s.mean_purity = mean_purity(panel);
  s.attention = attention_score(panel.size());
  std::size_t total = 0, in_all = 0;
  for (const auto& [f, c] : occurrences) {
    total += c;
    in_all += c == panel.size() ? 1 : 0;
  }
  s.mvo = occurrences.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(occurrences.size());
  s.via = static_cast<double>(in_all);
  return s;
}

std::vector<Criterion> descriptive_criteria() {
  return {{"coverage", Better::higher, 1.0},
          {"mean_purity", Better::higher, 1.0},
          {"attention", Better::lower, 1.0},
          {"mvo", Better::higher, 1.0},
          {"via", Better::higher, 1.0}};
}

std::string panel_label(const Dataset& data, std::span<const RegionAnnotation> annotations) {
  std::string s;
  for (std::size_t k = 0; k < annotations.size(); ++k) {
    if (k > 0) s += " ; ";
    s += annotations[k].rule.label(data);
  }
  return s;
}

Layout select_descriptive(std::vector<RegionAnnotation> pool, const DescriptiveParams& params,
                          const Dataset& data, Diagnostics* diag) {
  Layout layout;
  layout.kind = PanelKind::descriptive;
  const auto criteria = descriptive_criteria();
  while (layout.panels.size() < params.k_panels && !pool.empty()) {
    const auto graph = build_overlap_graph(pool, params.edge_threshold);
    const auto sets = candidate_panels(graph, params.mode, params.exact_cap, diag);

    std::vector<Panel> panels(sets.size());
    std::vector<ScoreRow> rows(sets.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(sets.size()); ++c) {
      auto& p = panels[static_cast<std::size_t>(c)];
      p.kind = PanelKind::descriptive;
      for (auto v : sets[static_cast<std::size_t>(c)]) p.annotations.push_back(pool[v]);
      const auto s = score_descriptive(p.annotations, data.n_samples);
      p.scores = {{"coverage", s.coverage}, {"mean_purity", s.mean_purity}, {"attention", s.attention},
                  {"mvo", s.mvo}, {"via", s.via}};
      p.label = panel_label(data, p.annotations);
      rows[static_cast<std::size_t>(c)] = {p.label, p.scores};
    }
    const auto ranked = rank_aggregate(rows, criteria);
    const auto& best = ranked.front();
    Panel chosen = std::move(panels[best.row]);
    chosen.ranks = best.ranks;
    chosen.aggregate_rank = best.aggregate;

    const auto& used = sets[best.row];
    std::vector<RegionAnnotation> rest;
    for (std::size_t v = 0; v < pool.size(); ++v)
      if (!std::binary_search(used.begin(), used.end(), v)) rest.push_back(std::move(pool[v]));
    pool = std::move(rest);
    layout.panels.push_back(std::move(chosen));
  }
  return layout;
}

std::vector<RegionAnnotation> build_descriptive_groups(const std::vector<FeatureAnnotations>& lists,
                                                       const DescriptiveParams& params, const Dataset& data,
                                                       const Embedding& embedding) {
  int id = next_id(lists);
  std::vector<RegionAnnotation> parts;
  for (const auto& l : lists) {
    for (const auto& a : l.annotations) {
      for (auto& p : split_disjoint(a, data, embedding)) {
        if (p.id < 0) p.id = id++;
        parts.push_back(std::move(p));
      }
    }
  }
  auto groups = descriptive_merge(parts, params.min_overlap_threshold, data);
  for (auto& g : groups)
    if (g.id < 0) g.id = id++;
  return background_enrich(std::move(groups), params.containment_threshold);
}

}  // namespace emblens
