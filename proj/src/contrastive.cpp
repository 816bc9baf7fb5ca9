#include "emblens/contrastive.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

#include "emblens/overlap.hpp"

namespace emblens {

namespace {

// Kuhn's augmenting paths; used when the greedy pairing is not perfect.
std::vector<std::size_t> exact_matching(const std::vector<std::vector<char>>& ok) {
  const std::size_t n = ok.size();
  constexpr auto none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> owner(n, none);  // b -> a
  std::function<bool(std::size_t, std::vector<char>&)> augment = [&](std::size_t a, std::vector<char>& seen) {
    for (std::size_t b = 0; b < n; ++b) {
      if (!ok[a][b] || seen[b]) continue;
      seen[b] = 1;
      if (owner[b] == none || augment(owner[b], seen)) {
        owner[b] = a;
        return true;
      }
    }
    return false;
  };
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<char> seen(n, 0);
    if (!augment(a, seen)) return {};
  }
  std::vector<std::size_t> match(n);
  for (std::size_t b = 0; b < n; ++b) match[owner[b]] = b;
  return match;
}

}  // namespace

std::vector<std::size_t> match_annotations(const std::vector<RegionAnnotation>& a,
                                           const std::vector<RegionAnnotation>& b, double threshold) {
  const std::size_t n = a.size();
  if (n == 0 || n != b.size()) return {};
  std::vector<std::vector<char>> ok(n, std::vector<char>(n, 0));
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double jac = jaccard_overlap(a[i].members(), b[j].members());
      if (jac >= threshold) {
        ok[i][j] = 1;
        pairs.emplace_back(jac, i, j);
      }
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) {
    if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
    return std::tie(std::get<1>(x), std::get<2>(x)) < std::tie(std::get<1>(y), std::get<2>(y));
  });
  constexpr auto none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> match(n, none);
  std::vector<char> taken(n, 0);
  std::size_t matched = 0;
  for (const auto& [jac, i, j] : pairs) {
    if (match[i] != none || taken[j]) continue;
    match[i] = j;
    taken[j] = 1;
    ++matched;
  }
  if (matched == n) return match;
  return exact_matching(ok);
}

std::vector<FeatureGroup> contrastive_merge(const std::vector<FeatureAnnotations>& lists,
                                            double pair_threshold, const Dataset& data) {
  std::vector<FeatureGroup> groups;
  for (const auto& l : lists) {
    if (l.annotations.empty()) continue;
    bool joined = false;
    for (auto& g : groups) {
      const auto match = match_annotations(g.annotations, l.annotations, pair_threshold);
      if (match.empty()) continue;
      for (std::size_t i = 0; i < g.annotations.size(); ++i) {
        auto& ga = g.annotations[i];
        const auto& other = l.annotations[match[i]];
        ga.rule = ga.rule.conjoin(other.rule);
        assess_purity(ga, data);
        ga.provenance.insert(ga.provenance.end(), other.provenance.begin(), other.provenance.end());
        std::sort(ga.provenance.begin(), ga.provenance.end());
      }
      g.features.push_back(l.feature);
      joined = true;
      break;
    }
    if (!joined) groups.push_back({{l.feature}, l.annotations});
  }
  return groups;
}

std::vector<Criterion> contrastive_criteria(const std::array<double, 3>& weights) {
  return {{"overlap", Better::lower, weights[0]},
          {"mean_purity", Better::higher, weights[1]},
          {"attention", Better::lower, weights[2]}};
}

std::vector<Panel> rank_contrastive(std::vector<Panel> panels, const std::vector<Criterion>& criteria) {
  std::vector<ScoreRow> rows;
  for (auto& p : panels) {
    p.scores["overlap"] = total_region_overlap(p.annotations);
    p.scores["mean_purity"] = mean_purity(p.annotations);
    p.scores["attention"] = attention_score(p.annotations.size());
    rows.push_back({p.label, p.scores});
  }
  const auto ranked = rank_aggregate(rows, criteria);
  std::vector<Panel> out;
  out.reserve(panels.size());
  for (const auto& r : ranked) {
    Panel p = std::move(panels[r.row]);
    p.ranks = r.ranks;
    p.aggregate_rank = r.aggregate;
    out.push_back(std::move(p));
  }
  return out;
}

Layout select_contrastive(const std::vector<FeatureAnnotations>& lists, const ContrastiveParams& params,
                          const Dataset& data) {
  const auto groups = contrastive_merge(lists, params.pair_threshold, data);
  std::vector<Panel> panels;
  for (const auto& g : groups) {
    Panel p;
    p.kind = PanelKind::contrastive;
    p.annotations = g.annotations;
    p.features = g.features;
    for (std::size_t k = 0; k < g.features.size(); ++k) {
      if (k > 0) p.label += " + ";
      p.label += data.features[g.features[k]].name;
    }
    panels.push_back(std::move(p));
  }
  Layout layout;
  layout.kind = PanelKind::contrastive;
  if (panels.empty()) return layout;
  layout.panels = rank_contrastive(std::move(panels), contrastive_criteria(params.weights));
  if (layout.panels.size() > params.k_panels) layout.panels.resize(params.k_panels);
  return layout;
}

}  // namespace emblens
