// emblens: explain a 2-D embedding with region annotations.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "emblens/bench.hpp"
#include "emblens/indicators.hpp"
#include "emblens/pipeline.hpp"
#include "emblens/render.hpp"

namespace {

using namespace emblens;

struct Inputs {
  std::string data;
  std::string embedding;
  std::string schema;
  std::string weights;
  std::string config;
  std::map<std::string, std::string> overrides;
};

std::string flag_name(std::string key) {
  std::replace(key.begin(), key.end(), '_', '-');
  return "--" + key;
}

void add_config_flags(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--config", in.config, "key = value parameter file (flags take precedence)")->check(CLI::ExistingFile);
  for (const auto& [key, value] : config_entries(Config{})) {
    auto* opt = cmd->add_option_function<std::string>(
        flag_name(key), [&in, k = key](const std::string& v) { in.overrides[k] = v; }, "default " + value);
    opt->type_name("VALUE");
  }
}

void add_inputs(CLI::App* cmd, Inputs& in) {
  cmd->add_option("data", in.data, "feature table (csv or tsv, header row)")->required()->check(CLI::ExistingFile);
  cmd->add_option("embedding", in.embedding, "2-D coordinates, row-aligned with the table")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--schema", in.schema, "column kinds: name = numeric|nominal|ordinal[: a, b]|ignore")
      ->check(CLI::ExistingFile);
  cmd->add_option("--weights", in.weights, "per-sample KDE weights in [0,1]")->check(CLI::ExistingFile);
  add_config_flags(cmd, in);
}

Config resolve_config(const Inputs& in) {
  Config c = in.config.empty() ? Config{} : load_config(in.config);
  for (const auto& [k, v] : in.overrides) set_config_value(c, k, v);
  validate(c);
  return c;
}

struct Loaded {
  Dataset data;
  Embedding embedding;
};

Loaded load_inputs(const Inputs& in) {
  Loaded out;
  const Schema schema = in.schema.empty() ? Schema{} : load_schema(in.schema);
  out.data = load_dataset(std::filesystem::path(in.data), schema);
  out.embedding = load_embedding(std::filesystem::path(in.embedding));
  if (!in.weights.empty()) attach_weights(out.data, load_weights(std::filesystem::path(in.weights)));
  check_aligned(out.data, out.embedding);
  return out;
}

void print_warnings(const Diagnostics& diag) {
  for (const auto& w : diag.warnings()) std::cerr << "warning: " << w << '\n';
}

std::string safe_name(const std::string& s) {
  std::string out;
  for (unsigned char c : s) out += std::isalnum(c) || c == '-' || c == '.' ? static_cast<char>(c) : '_';
  return out;
}

void dump_grids(const std::filesystem::path& dir, const Loaded& in, const Config& config, Diagnostics& diag) {
  std::filesystem::create_directories(dir);
  const RegionBuilder builder(in.data, in.embedding, config.region_params());
  for (std::size_t f = 0; f < in.data.features.size(); ++f)
    for (const auto& ind : make_indicators(in.data, f, config.k_bins, &diag)) {
      if (ind.truth.empty()) continue;
      const std::string bin = ind.bin == kMissingBin ? "missing" : std::to_string(ind.bin);
      std::ofstream out(dir / (safe_name(in.data.features[f].name) + "_" + bin + ".grid"));
      write_grid_text(out, builder.density(ind.truth));
    }
}

int run_explain(const Inputs& in, const std::string& out_dir, bool dump_annotations, bool debug_grids) {
  const Config config = resolve_config(in);
  const Loaded loaded = load_inputs(in);
  Diagnostics diag;
  const Explanation result = explain(loaded.data, loaded.embedding, config, &diag);
  write_explanation(out_dir, result, loaded.data, loaded.embedding, config, diag);
  if (dump_annotations) {
    std::ofstream out(std::filesystem::path(out_dir) / "annotations.json");
    out << annotations_json(result.annotations, loaded.data).dump(2) << '\n';
  }
  if (debug_grids) dump_grids(std::filesystem::path(out_dir) / "grids", loaded, config, diag);
  print_warnings(diag);
  std::cerr << "wrote " << result.contrastive.panels.size() << " contrastive and "
            << result.descriptive.panels.size() << " descriptive panels to " << out_dir << '\n';
  return 0;
}

int run_dump(const Inputs& in, const std::string& out_path) {
  const Config config = resolve_config(in);
  set_workers(config.workers);
  const Loaded loaded = load_inputs(in);
  Diagnostics diag;
  const RegionBuilder builder(loaded.data, loaded.embedding, config.region_params());
  const auto lists = build_region_annotations(builder, &diag);
  const std::string text = annotations_json(lists, loaded.data).dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write " + out_path);
    out << text;
  }
  print_warnings(diag);
  return 0;
}

int run_bench_cmd(BenchOptions options, const Inputs& in, const std::string& out_path) {
  options.config = resolve_config(in);
  const auto report = run_bench(options);
  const std::string csv = report.csv();
  if (out_path.empty() || out_path == "-") {
    std::cout << csv;
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error("cannot write " + out_path);
    out << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Region-annotation explanations for 2-D embeddings"};
  app.require_subcommand(1);

  Inputs explain_in;
  std::string out_dir = "emblens_out";
  bool dump_annotations = false, debug_grids = false;
  auto* explain_cmd = app.add_subcommand("explain", "write contrastive and descriptive panels, manifest and log");
  add_inputs(explain_cmd, explain_in);
  explain_cmd->add_option("--out,-o", out_dir, "output directory");
  explain_cmd->add_flag("--dump-annotations", dump_annotations, "also write annotations.json");
  explain_cmd->add_flag("--debug-grids", debug_grids, "write every indicator density grid as text");

  Inputs dump_in;
  std::string dump_out;
  auto* dump_cmd = app.add_subcommand("dump-annotations", "print merged and filtered region annotations as JSON");
  add_inputs(dump_cmd, dump_in);
  dump_cmd->add_option("--out,-o", dump_out, "output file (default stdout)");

  Inputs bench_in;
  BenchOptions bench;
  std::string bench_out;
  auto* bench_cmd = app.add_subcommand("bench", "time pipeline stages on synthetic Gaussian mixtures");
  bench_cmd->add_option("--sizes", bench.sizes, "sample counts for the N sweep")->delimiter(',')->capture_default_str();
  bench_cmd->add_option("--features", bench.features, "feature counts for the F sweep")
      ->delimiter(',')
      ->capture_default_str();
  bench_cmd->add_option("--repeats", bench.repeats, "runs per cell")->capture_default_str()->check(CLI::PositiveNumber);
  bench_cmd->add_option("--out,-o", bench_out, "CSV file (default stdout)");
  add_config_flags(bench_cmd, bench_in);

  CLI11_PARSE(app, argc, argv);
  try {
    if (explain_cmd->parsed()) return run_explain(explain_in, out_dir, dump_annotations, debug_grids);
    if (dump_cmd->parsed()) return run_dump(dump_in, dump_out);
    if (bench_cmd->parsed()) return run_bench_cmd(bench, bench_in, bench_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
