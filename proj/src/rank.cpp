#include "emblens/rank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "emblens/error.hpp"

namespace emblens {

std::vector<double> average_ranks(std::span<const double> values, Better better) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return better == Better::lower ? values[a] < values[b] : values[a] > values[b];
  });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

std::vector<RankedRow> rank_aggregate(const std::vector<ScoreRow>& rows,
                                      const std::vector<Criterion>& criteria,
                                      const std::string& tie_break) {
  if (criteria.empty()) throw Error("rank_aggregate: no criteria");
  double total_weight = 0.0;
  for (const auto& c : criteria) {
    if (!(c.weight >= 0.0)) throw Error("rank_aggregate: negative weight for '" + c.name + "'");
    total_weight += c.weight;
  }
  if (!(total_weight > 0.0)) throw Error("rank_aggregate: all weights are zero");

  const std::size_t n = rows.size();
  std::vector<RankedRow> ranked(n);
  for (std::size_t r = 0; r < n; ++r) ranked[r].row = r;

  for (const auto& c : criteria) {
    std::vector<double> values(n);
    for (std::size_t r = 0; r < n; ++r) {
      const auto it = rows[r].scores.find(c.name);
      if (it == rows[r].scores.end() || std::isnan(it->second))
        throw Error("missing score '" + c.name + "' for '" + rows[r].label + "'");
      values[r] = it->second;
    }
    const auto ranks = average_ranks(values, c.better);
    for (std::size_t r = 0; r < n; ++r) {
      ranked[r].ranks[c.name] = ranks[r];
      ranked[r].aggregate += c.weight * ranks[r];
    }
  }
  for (auto& r : ranked) r.aggregate /= total_weight;

  auto tie_value = [&](std::size_t row) {
    const auto it = rows[row].scores.find(tie_break);
    return it == rows[row].scores.end() ? 0.0 : it->second;
  };
  std::stable_sort(ranked.begin(), ranked.end(), [&](const RankedRow& a, const RankedRow& b) {
    if (a.aggregate != b.aggregate) return a.aggregate < b.aggregate;
    const double ta = tie_value(a.row), tb = tie_value(b.row);
    if (ta != tb) return ta > tb;
    return rows[a.row].label < rows[b.row].label;
  });
  return ranked;
}

}  // namespace emblens
