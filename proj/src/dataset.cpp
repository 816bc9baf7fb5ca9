#include "emblens/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "emblens/error.hpp"

namespace emblens {

const char* to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::numeric: return "numeric";
    case FeatureKind::ordinal: return "ordinal";
    case FeatureKind::nominal: return "nominal";
  }
  return "?";
}

bool Feature::is_missing(std::size_t i) const {
  return kind == FeatureKind::numeric ? std::isnan(numbers[i]) : codes[i] < 0;
}

std::size_t Feature::missing_count() const {
  const std::size_t n = kind == FeatureKind::numeric ? numbers.size() : codes.size();
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) c += is_missing(i) ? 1 : 0;
  return c;
}

std::optional<std::size_t> Dataset::index_of(const std::string& name) const {
  for (std::size_t f = 0; f < features.size(); ++f)
    if (features[f].name == name) return f;
  return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

bool getline_any(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

// Natural order for ordinal categories declared without an explicit list.
void natural_sort(std::vector<std::string>& cats) {
  const bool all_numeric =
      std::all_of(cats.begin(), cats.end(), [](const auto& c) { return parse_number(c).has_value(); });
  if (all_numeric) {
    std::sort(cats.begin(), cats.end(),
              [](const auto& a, const auto& b) { return *parse_number(a) < *parse_number(b); });
  } else {
    std::sort(cats.begin(), cats.end());
  }
}

}  // namespace

std::vector<std::string> split_delimited(const std::string& line, char delimiter) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delimiter) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

Schema parse_schema(std::istream& in) {
  Schema schema;
  std::string line;
  int lineno = 0;
  while (getline_any(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error("schema line " + std::to_string(lineno) + ": expected 'column = kind'");
    const std::string column = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    ColumnSpec spec;
    std::string kind = value;
    const auto colon = value.find(':');
    if (colon != std::string::npos) {
      kind = trim(std::string_view(value).substr(0, colon));
      for (auto& c : split_delimited(value.substr(colon + 1), ','))
        if (!c.empty()) spec.order.push_back(c);
    }
    if (kind == "numeric") {
      spec.kind = FeatureKind::numeric;
    } else if (kind == "nominal") {
      spec.kind = FeatureKind::nominal;
    } else if (kind == "ordinal") {
      spec.kind = FeatureKind::ordinal;
    } else if (kind == "ignore") {
      spec.ignore = true;
    } else {
      throw Error("schema line " + std::to_string(lineno) + ": unknown kind '" + kind + "'");
    }
    if (!spec.order.empty() && spec.kind != FeatureKind::ordinal)
      throw Error("schema line " + std::to_string(lineno) + ": category order only applies to ordinal");
    if (column.empty()) throw Error("schema line " + std::to_string(lineno) + ": empty column name");
    schema[column] = std::move(spec);
  }
  return schema;
}

Schema load_schema(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_schema(in);
}

Dataset load_dataset(std::istream& in, const Schema& schema) {
  std::string header_line;
  if (!getline_any(in, header_line)) throw Error("empty table: missing header row");
  const auto tabs = std::count(header_line.begin(), header_line.end(), '\t');
  const auto commas = std::count(header_line.begin(), header_line.end(), ',');
  const char delim = tabs > commas ? '\t' : ',';

  const auto header = split_delimited(header_line, delim);
  {
    std::set<std::string> seen;
    for (const auto& h : header) {
      if (!seen.insert(h).second) throw Error("duplicate column name '" + h + "'");
    }
  }
  for (const auto& [name, spec] : schema) {
    if (std::find(header.begin(), header.end(), name) == header.end())
      throw Error("schema names unknown column '" + name + "'");
  }

  std::vector<std::vector<std::string>> cells(header.size());
  std::string line;
  std::size_t lineno = 1;
  while (getline_any(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto row = split_delimited(line, delim);
    if (row.size() != header.size())
      throw Error("ragged row at line " + std::to_string(lineno) + ": expected " +
                  std::to_string(header.size()) + " fields, got " + std::to_string(row.size()));
    for (std::size_t c = 0; c < row.size(); ++c) cells[c].push_back(std::move(row[c]));
  }
  const std::size_t n = cells.empty() ? 0 : cells.front().size();
  if (n == 0) throw Error("table has zero rows");

  Dataset data;
  data.n_samples = n;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const auto it = schema.find(header[c]);
    if (it != schema.end() && it->second.ignore) continue;
    auto& column = cells[c];

    Feature f;
    f.name = header[c];
    if (it != schema.end()) {
      f.kind = it->second.kind;
    } else {
      const bool numeric = std::all_of(column.begin(), column.end(), [](const auto& s) {
        return s.empty() || parse_number(s).has_value();
      });
      f.kind = numeric ? FeatureKind::numeric : FeatureKind::nominal;
    }

    if (f.kind == FeatureKind::numeric) {
      f.numbers.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (column[i].empty()) {
          f.numbers[i] = std::nan("");
          continue;
        }
        auto v = parse_number(column[i]);
        if (!v) throw Error("column '" + f.name + "' declared numeric but has value '" + column[i] + "'");
        f.numbers[i] = *v;
      }
    } else {
      std::vector<std::string> cats;
      if (f.kind == FeatureKind::ordinal && !it->second.order.empty()) {
        cats = it->second.order;
      } else {
        std::set<std::string> distinct;
        for (const auto& s : column)
          if (!s.empty()) distinct.insert(s);
        cats.assign(distinct.begin(), distinct.end());
        if (f.kind == FeatureKind::ordinal) natural_sort(cats);
      }
      f.codes.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        if (column[i].empty()) {
          f.codes[i] = -1;
          continue;
        }
        const auto pos = std::find(cats.begin(), cats.end(), column[i]);
        if (pos == cats.end())
          throw Error("column '" + f.name + "': value '" + column[i] + "' not in declared order");
        f.codes[i] = static_cast<int>(pos - cats.begin());
      }
      f.categories = std::move(cats);
    }
    data.features.push_back(std::move(f));
  }
  return data;
}

Dataset load_dataset(const std::filesystem::path& path, const Schema& schema) {
  auto in = open_or_throw(path);
  return load_dataset(in, schema);
}

namespace {

std::vector<std::vector<double>> read_numeric_rows(std::istream& in, std::size_t columns,
                                                   const char* what) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (getline_any(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto tabs = std::count(line.begin(), line.end(), '\t');
    const auto commas = std::count(line.begin(), line.end(), ',');
    char delim = tabs > commas ? '\t' : ',';
    if (tabs == 0 && commas == 0) delim = ' ';
    std::vector<std::string> fields;
    if (delim == ' ') {
      std::istringstream ss(line);
      std::string tok;
      while (ss >> tok) fields.push_back(tok);
    } else {
      fields = split_delimited(line, delim);
    }
    if (fields.size() != columns)
      throw Error(std::string(what) + " line " + std::to_string(lineno) + ": expected " +
                  std::to_string(columns) + " columns");
    std::vector<double> row;
    bool ok = true;
    for (const auto& s : fields) {
      auto v = parse_number(s);
      if (!v) {
        ok = false;
        break;
      }
      row.push_back(*v);
    }
    if (!ok) {
      if (rows.empty() && lineno == 1) continue;  // header
      throw Error(std::string(what) + " line " + std::to_string(lineno) + ": non-numeric value");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Embedding load_embedding(std::istream& in) {
  Embedding e;
  for (const auto& r : read_numeric_rows(in, 2, "embedding")) {
    if (!std::isfinite(r[0]) || !std::isfinite(r[1])) throw Error("embedding has non-finite coordinates");
    e.coords.push_back({r[0], r[1]});
  }
  if (e.coords.empty()) throw Error("embedding has zero rows");
  return e;
}

Embedding load_embedding(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return load_embedding(in);
}

std::vector<double> load_weights(std::istream& in) {
  std::vector<double> w;
  for (const auto& r : read_numeric_rows(in, 1, "weights")) {
    if (!(r[0] >= 0.0 && r[0] <= 1.0)) throw Error("weights must lie in [0,1]");
    w.push_back(r[0]);
  }
  return w;
}

std::vector<double> load_weights(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return load_weights(in);
}

void attach_weights(Dataset& dataset, std::vector<double> weights) {
  if (weights.size() != dataset.n_samples) throw Error("weights: row count mismatch");
  for (double w : weights)
    if (!(w >= 0.0 && w <= 1.0)) throw Error("weights must lie in [0,1]");
  dataset.weights = std::move(weights);
}

void check_aligned(const Dataset& dataset, const Embedding& embedding) {
  if (embedding.size() != dataset.n_samples)
    throw Error("row count mismatch: dataset has " + std::to_string(dataset.n_samples) +
                " rows, embedding has " + std::to_string(embedding.size()));
  for (const auto& p : embedding.coords)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw Error("embedding has non-finite coordinates");
}

}  // namespace emblens
