#include "emblens/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>

namespace emblens {

RegionParams Config::region_params() const {
  RegionParams p;
  if (sigma > 0.0) p.sigma = sigma;
  p.level_fraction = level_fraction;
  p.k_bins = k_bins;
  p.resolution = resolution;
  p.merge_threshold = merge_threshold;
  p.span_fraction = span_fraction;
  return p;
}

ContrastiveParams Config::contrastive_params() const {
  ContrastiveParams p;
  p.pair_threshold = pair_threshold;
  p.weights = {weight_overlap, weight_purity, weight_attention};
  p.k_panels = k_panels;
  return p;
}

DescriptiveParams Config::descriptive_params() const {
  DescriptiveParams p;
  p.min_overlap_threshold = min_overlap_threshold;
  p.containment_threshold = containment_threshold;
  p.edge_threshold = edge_threshold;
  p.k_panels = k_panels;
  p.mode = mode;
  p.exact_cap = exact_cap;
  return p;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw Error("config '" + key + "': expected a number, got '" + v + "'");
  return out;
}

std::size_t to_count(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || out < 0)
    throw Error("config '" + key + "': expected a non-negative integer, got '" + v + "'");
  return static_cast<std::size_t>(out);
}

std::string show(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

struct Field {
  std::function<void(Config&, const std::string&, const std::string&)> set;
  std::function<std::string(const Config&)> get;
};

template <typename T>
Field real(T Config::*member) {
  return {[member](Config& c, const std::string& k, const std::string& v) { c.*member = to_double(k, v); },
          [member](const Config& c) { return show(c.*member); }};
}

template <typename T>
Field count(T Config::*member) {
  return {[member](Config& c, const std::string& k, const std::string& v) { c.*member = to_count(k, v); },
          [member](const Config& c) { return std::to_string(c.*member); }};
}

const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"k_bins", count(&Config::k_bins)},
      {"level_fraction", real(&Config::level_fraction)},
      {"sigma", real(&Config::sigma)},
      {"resolution", count(&Config::resolution)},
      {"merge_threshold", real(&Config::merge_threshold)},
      {"span_fraction", real(&Config::span_fraction)},
      {"pair_threshold", real(&Config::pair_threshold)},
      {"weight_overlap", real(&Config::weight_overlap)},
      {"weight_purity", real(&Config::weight_purity)},
      {"weight_attention", real(&Config::weight_attention)},
      {"k_panels", count(&Config::k_panels)},
      {"min_overlap_threshold", real(&Config::min_overlap_threshold)},
      {"containment_threshold", real(&Config::containment_threshold)},
      {"edge_threshold", real(&Config::edge_threshold)},
      {"mode",
       {[](Config& c, const std::string& k, const std::string& v) {
          if (v == "exact") {
            c.mode = CandidateMode::exact;
          } else if (v == "greedy") {
            c.mode = CandidateMode::greedy;
          } else {
            throw Error("config '" + k + "': expected exact or greedy, got '" + v + "'");
          }
        },
        [](const Config& c) { return std::string(c.mode == CandidateMode::exact ? "exact" : "greedy"); }}},
      {"exact_cap", count(&Config::exact_cap)},
      {"workers", count(&Config::workers)},
  };
  return table;
}

}  // namespace

void set_config_value(Config& config, const std::string& key, const std::string& value) {
  for (const auto& [name, field] : fields()) {
    if (name == key) {
      field.set(config, key, value);
      return;
    }
  }
  throw Error("unknown config key '" + key + "'");
}

Config parse_config(std::istream& in, Config base) {
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error("config line " + std::to_string(lineno) + ": expected key = value");
    set_config_value(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  validate(base);
  return base;
}

Config load_config(const std::filesystem::path& path, Config base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return parse_config(in, std::move(base));
}

void validate(const Config& c) {
  auto unit = [](const char* name, double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(std::string(name) + " must lie in [0,1]");
  };
  unit("merge_threshold", c.merge_threshold);
  unit("span_fraction", c.span_fraction);
  unit("pair_threshold", c.pair_threshold);
  unit("min_overlap_threshold", c.min_overlap_threshold);
  unit("containment_threshold", c.containment_threshold);
  unit("edge_threshold", c.edge_threshold);
  if (!(c.level_fraction > 0.0 && c.level_fraction < 1.0)) throw Error("level_fraction must lie in (0,1)");
  if (!(c.sigma >= 0.0)) throw Error("sigma must be non-negative (0 = adaptive)");
  if (c.k_bins < 1) throw Error("k_bins must be at least 1");
  if (c.k_panels < 1) throw Error("k_panels must be at least 1");
  if (c.exact_cap < 1) throw Error("exact_cap must be at least 1");
  if (c.resolution < 4) throw Error("resolution must be at least 4");
  for (double w : {c.weight_overlap, c.weight_purity, c.weight_attention})
    if (!(w >= 0.0)) throw Error("criterion weights must be non-negative");
  if (c.weight_overlap + c.weight_purity + c.weight_attention <= 0.0)
    throw Error("criterion weights must not all be zero");
}

std::vector<std::pair<std::string, std::string>> config_entries(const Config& config) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [name, field] : fields()) out.emplace_back(name, field.get(config));
  return out;
}

}  // namespace emblens
