#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace emblens {

enum class Better { lower, higher };

struct Criterion {
  std::string name;
  Better better = Better::lower;
  double weight = 1.0;
};

struct ScoreRow {
  std::string label;
  std::map<std::string, double> scores;
};

struct RankedRow {
  std::size_t row = 0;                  // index into the input rows
  std::map<std::string, double> ranks;  // per criterion, 1 = best
  double aggregate = 0.0;               // weighted mean rank
};

/// Fractional ranks (1 = best, ties share their average rank).
std::vector<double> average_ranks(std::span<const double> values, Better better);

/// Weighted mean-rank aggregation. Result is ordered best first; ties on
/// the aggregate go to the higher `tie_break` score (if named), then to the
/// lexicographically smaller label. Throws when a row lacks a criterion.
std::vector<RankedRow> rank_aggregate(const std::vector<ScoreRow>& rows,
                                      const std::vector<Criterion>& criteria,
                                      const std::string& tie_break = "mean_purity");

}  // namespace emblens
