#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emblens/geometry.hpp"

namespace emblens {

enum class FeatureKind { numeric, ordinal, nominal };

const char* to_string(FeatureKind kind);

/// One column of the input table.
///
/// Numeric features keep their values in `numbers` (NaN = missing).
/// Categorical features keep category codes in `codes` (-1 = missing) that
/// index into `categories`; for ordinal features that list is the declared
/// order, for nominal features it is sorted lexicographically.
struct Feature {
  std::string name;
  FeatureKind kind = FeatureKind::nominal;
  std::vector<double> numbers;
  std::vector<int> codes;
  std::vector<std::string> categories;

  bool categorical() const { return kind != FeatureKind::numeric; }
  bool is_missing(std::size_t i) const;
  std::size_t missing_count() const;
};

struct Dataset {
  std::size_t n_samples = 0;
  std::vector<Feature> features;
  /// Per-sample KDE weights in [0,1]; absent means all ones.
  std::optional<std::vector<double>> weights;

  std::optional<std::size_t> index_of(const std::string& name) const;
};

struct Embedding {
  std::vector<Point> coords;
  std::size_t size() const { return coords.size(); }
};

/// Per-column override read from a schema file.
struct ColumnSpec {
  FeatureKind kind = FeatureKind::nominal;
  bool ignore = false;
  std::vector<std::string> order;  // ordinal only
};

using Schema = std::map<std::string, ColumnSpec>;

/// Parses `column = numeric|nominal|ordinal[: a, b, c]|ignore` lines.
/// Blank lines and lines starting with '#' are skipped.
Schema parse_schema(std::istream& in);
Schema load_schema(const std::filesystem::path& path);

/// Reads a comma- or tab-separated table with a header row. The delimiter is
/// whichever of the two occurs more often in the header. Empty cells are
/// missing values.
Dataset load_dataset(std::istream& in, const Schema& schema = {});
Dataset load_dataset(const std::filesystem::path& path, const Schema& schema = {});

/// Two numeric columns; a non-numeric first row is treated as a header.
Embedding load_embedding(std::istream& in);
Embedding load_embedding(const std::filesystem::path& path);

/// One numeric column in [0,1]; optional header.
std::vector<double> load_weights(std::istream& in);
std::vector<double> load_weights(const std::filesystem::path& path);

void attach_weights(Dataset& dataset, std::vector<double> weights);

/// Throws "row count mismatch" when the embedding is not row-aligned with
/// the dataset, and rejects non-finite coordinates.
void check_aligned(const Dataset& dataset, const Embedding& embedding);

/// Splits one delimited line, honouring double-quoted fields.
std::vector<std::string> split_delimited(const std::string& line, char delimiter);

}  // namespace emblens
