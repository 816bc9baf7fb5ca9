#include "emblens/pipeline.hpp"

#include <omp.h>

#include <chrono>
#include <fstream>

#include "emblens/render.hpp"

namespace emblens {

void set_workers(std::size_t workers) {
  omp_set_num_threads(workers == 0 ? omp_get_num_procs() : static_cast<int>(workers));
}

namespace {

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& out) : out_(out) {}
  void lap(std::string stage) {
    const auto now = std::chrono::steady_clock::now();
    out_.push_back({std::move(stage), std::chrono::duration<double>(now - last_).count()});
    last_ = now;
  }

 private:
  std::vector<StageTiming>& out_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

}  // namespace

Explanation explain(const Dataset& data, const Embedding& embedding, const Config& config, Diagnostics* diag) {
  validate(config);
  check_aligned(data, embedding);
  set_workers(config.workers);

  Explanation result;
  StageClock clock(result.timings);
  const RegionBuilder builder(data, embedding, config.region_params());
  result.sigma = builder.sigma();
  result.grid = builder.grid();
  clock.lap("bandwidth");

  auto lists = construct_annotations(builder, diag);
  clock.lap("regions");
  merge_features(lists, builder, diag);
  clock.lap("posthoc_merge");
  result.annotations = filter_uninformative(std::move(lists), data.n_samples, config.span_fraction);
  clock.lap("filter");

  result.contrastive = select_contrastive(result.annotations, config.contrastive_params(), data);
  clock.lap("contrastive");

  const auto dparams = config.descriptive_params();
  result.groups = build_descriptive_groups(result.annotations, dparams, data, embedding);
  result.descriptive = select_descriptive(result.groups, dparams, data, diag);
  clock.lap("descriptive");
  return result;
}

void write_explanation(const std::filesystem::path& dir, const Explanation& result, const Dataset& data,
                       const Embedding& embedding, const Config& config, const Diagnostics& diag) {
  std::filesystem::create_directories(dir);
  const Style style;
  Diagnostics render_diag;
  std::vector<StageTiming> timings = result.timings;
  StageClock clock(timings);

  for (const auto* layout : {&result.contrastive, &result.descriptive}) {
    const std::string prefix = to_string(layout->kind);
    if (layout->panels.empty()) {
      render_diag.warn("no " + prefix + " panels to render");
      continue;
    }
    const auto rendered = render_layout_svg(*layout, embedding, data, style, &render_diag);
    for (std::size_t k = 0; k < rendered.panels.size(); ++k)
      write_file(dir / (prefix + "_" + std::to_string(k + 1) + ".svg"), rendered.panels[k]);
    write_file(dir / (prefix + ".svg"), rendered.index);
  }
  write_file(dir / "manifest.json", manifest_json(result, data, config).dump(2) + "\n");
  clock.lap("render");

  std::ofstream log(dir / "run.log");
  log << "samples " << data.n_samples << "\nfeatures " << data.features.size() << "\nbandwidth " << result.sigma
      << "\n";
  for (const auto& t : timings) log << "stage " << t.stage << ' ' << t.seconds << " s\n";
  for (const auto& w : diag.warnings()) log << "warning " << w << '\n';
  for (const auto& w : render_diag.warnings()) log << "warning " << w << '\n';
}

}  // namespace emblens
