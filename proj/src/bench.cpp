#include "emblens/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "emblens/contrastive.hpp"
#include "emblens/descriptive.hpp"
#include "emblens/indicators.hpp"
#include "emblens/pipeline.hpp"

namespace emblens {

double BenchCell::min() const { return seconds.empty() ? 0.0 : *std::min_element(seconds.begin(), seconds.end()); }

double BenchCell::median() const {
  if (seconds.empty()) return 0.0;
  auto s = seconds;
  std::sort(s.begin(), s.end());
  const std::size_t m = s.size() / 2;
  return s.size() % 2 ? s[m] : 0.5 * (s[m - 1] + s[m]);
}

std::string BenchReport::csv() const {
  std::string out = "sweep,n_samples,n_features,stage,repeats,min_s,median_s\n";
  char buf[256];
  for (const auto& c : cells) {
    std::snprintf(buf, sizeof buf, "%s,%zu,%zu,%s,%zu,%.6f,%.6f\n", c.sweep.c_str(), c.n_samples, c.n_features,
                  c.stage.c_str(), c.seconds.size(), c.min(), c.median());
    out += buf;
  }
  for (const auto& [name, e] : exponents) {
    std::snprintf(buf, sizeof buf, "# exponent %s %.3f\n", name.c_str(), e);
    out += buf;
  }
  return out;
}

std::map<std::string, double> time_stages(const SyntheticData& synthetic, const Config& config) {
  using clock = std::chrono::steady_clock;
  std::map<std::string, double> t;
  const auto& data = synthetic.data;
  auto last = clock::now();
  const auto lap = [&](const char* stage) {
    const auto now = clock::now();
    t[stage] = std::chrono::duration<double>(now - last).count();
    last = now;
  };

  set_workers(config.workers);
  const RegionBuilder builder(data, synthetic.embedding, config.region_params());
  lap("bandwidth");
  std::size_t count = 0;
  for (std::size_t f = 0; f < data.features.size(); ++f) count += make_indicators(data, f, config.k_bins).size();
  lap("indicators");
  auto lists = construct_annotations(builder);
  lap("kde");
  merge_features(lists, builder);
  lists = filter_uninformative(std::move(lists), data.n_samples, config.span_fraction);
  lap("merge");
  std::vector<RegionAnnotation> all;
  for (const auto& l : lists) all.insert(all.end(), l.annotations.begin(), l.annotations.end());
  last = clock::now();
  const auto graph = build_overlap_graph(all, config.edge_threshold);
  lap("graph");
  const auto contrastive = select_contrastive(lists, config.contrastive_params(), data);
  lap("contrastive");
  const auto params = config.descriptive_params();
  const auto descriptive =
      select_descriptive(build_descriptive_groups(lists, params, data, synthetic.embedding), params, data);
  lap("descriptive");
  (void)count, (void)graph, (void)contrastive, (void)descriptive;
  return t;
}

double fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error("exponent fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] <= 0 || y[i] <= 0) throw Error("exponent fit needs positive values");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0) throw Error("exponent fit needs distinct x values");
  return (n * sxy - sx * sy) / den;
}

namespace {

void sweep(BenchReport& report, const std::string& name, const std::vector<std::pair<std::size_t, std::size_t>>& shapes,
           const BenchOptions& options) {
  for (const auto& [n, f] : shapes) {
    const auto synthetic = gaussian_mixture({n, f});
    std::map<std::string, BenchCell> cells;
    for (std::size_t r = 0; r < std::max<std::size_t>(1, options.repeats); ++r)
      for (const auto& [stage, s] : time_stages(synthetic, options.config)) {
        auto& c = cells[stage];
        c.sweep = name, c.n_samples = n, c.n_features = f, c.stage = stage;
        c.seconds.push_back(s);
      }
    for (auto& [stage, c] : cells) report.cells.push_back(std::move(c));
  }
}

double exponent_of(const BenchReport& report, const std::string& sweep, const std::string& stage, bool by_n) {
  std::vector<double> x, y;
  for (const auto& c : report.cells)
    if (c.sweep == sweep && c.stage == stage) {
      x.push_back(static_cast<double>(by_n ? c.n_samples : c.n_features));
      y.push_back(std::max(c.min(), 1e-9));
    }
  return fit_exponent(x, y);
}

}  // namespace

BenchReport run_bench(const BenchOptions& options) {
  if (options.sizes.empty() || options.features.empty()) throw Error("bench needs sizes and features");
  BenchReport report;
  if (options.sizes.size() > 1) {
    std::vector<std::pair<std::size_t, std::size_t>> shapes;
    for (auto n : options.sizes) shapes.emplace_back(n, options.features.front());
    sweep(report, "n", shapes, options);
    report.exponents["kde_vs_n"] = exponent_of(report, "n", "kde", true);
  }
  if (options.features.size() > 1) {
    std::vector<std::pair<std::size_t, std::size_t>> shapes;
    for (auto f : options.features) shapes.emplace_back(options.sizes.front(), f);
    sweep(report, "f", shapes, options);
    report.exponents["graph_vs_f"] = exponent_of(report, "f", "graph", false);
  }
  return report;
}

}  // namespace emblens
