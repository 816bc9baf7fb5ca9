#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "emblens/pipeline.hpp"
#include "emblens/render.hpp"
#include "support.hpp"

using namespace emblens;
using fixture::categorical;
using fixture::numeric;
using fixture::table;

namespace {

struct Scene {
  Embedding embedding;
  Dataset data;
};

Scene scene(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Scene s;
  s.embedding = fixture::three_clusters(rng, 80);
  std::vector<std::string> kind(240), tag(240);
  std::vector<double> x(240);
  for (std::size_t i = 0; i < 240; ++i) {
    kind[i] = std::string(1, static_cast<char>('a' + i / 80));
    tag[i] = i < 80 ? "left" : "right";
    x[i] = s.embedding.coords[i].x + (i % 7 == 0 ? std::nan("") : 0.0);
  }
  s.data = table({categorical("kind", kind), categorical("tag", tag), numeric("x", x)});
  return s;
}

Config small_config() {
  Config c;
  c.resolution = 96;
  return c;
}

// Even-odd crossing test over outer ring and holes.
bool inside(const nlohmann::ordered_json& polygon, double x, double y) {
  bool in = false;
  auto ring = [&](const nlohmann::ordered_json& r) {
    const std::size_t n = r.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const double xi = r[i][0], yi = r[i][1], xj = r[j][0], yj = r[j][1];
      if ((yi > y) != (yj > y) && x < (xj - xi) * (y - yi) / (yj - yi) + xi) in = !in;
    }
  };
  ring(polygon["outer"]);
  for (const auto& h : polygon["holes"]) ring(h);
  return in;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("empty layout has nothing to render") {
  const auto s = scene(1);
  CHECK_THROWS_WITH(render_layout_svg(Layout{}, s.embedding, s.data, Style{}), "nothing to render");
}

TEST_CASE("label lines list background rules") {
  const auto d = table({numeric("x", {0, 1}), categorical("c", {"a", "b"})});
  auto a = fixture::annotation(0, Rule::interval(0, {0, 0.5}), fixture::range_set(2, 0, 1));
  a.background = {{Rule::category_set(1, {0}), 1.0}};
  const auto lines = annotation_label_lines(a, d);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] == "x ∈ [0, 0.5)");
  CHECK(lines[1] == "also: c = a");
}

TEST_CASE("a panel draws every sample and outline") {
  const auto s = scene(2);
  Diagnostics diag;
  const auto result = explain(s.data, s.embedding, small_config(), &diag);
  REQUIRE_FALSE(result.descriptive.panels.empty());
  const auto& panel = result.descriptive.panels.front();
  const auto svg = render_panel_svg(panel, s.embedding, s.data, Style{});
  CHECK(svg.rfind("<?xml", 0) == 0);
  CHECK(count(svg, "<circle") == s.embedding.coords.size());
  std::size_t rings = 0;
  for (const auto& a : panel.annotations) rings += a.shape.polygons.size();
  CHECK(count(svg, "<path") == rings);
  CHECK(svg.find("fill-rule=\"evenodd\"") != std::string::npos);
  CHECK(svg.find("∈") != std::string::npos);
}

TEST_CASE("degenerate polygons are skipped with a warning") {
  const auto s = scene(3);
  Panel p;
  p.label = "degenerate";
  auto a = fixture::annotation(7, Rule::category_set(0, {0}), fixture::range_set(240, 0, 10));
  Polygon line;
  line.outer = {{0, 0}, {1, 1}};
  a.shape.polygons = {line};
  p.annotations = {a};
  Diagnostics diag;
  const auto svg = render_panel_svg(p, s.embedding, s.data, Style{}, &diag);
  CHECK(count(svg, "<path") == 0);
  REQUIRE(diag.warnings().size() == 1);
  CHECK(diag.warnings()[0] == "skipping degenerate polygon of annotation 7");
}

TEST_CASE("manifest polygons reproduce member counts") {
  const auto s = scene(4);
  const Config config = small_config();
  const auto result = explain(s.data, s.embedding, config);
  const auto manifest = nlohmann::ordered_json::parse(manifest_json(result, s.data, config).dump());
  CHECK(manifest["dataset"]["samples"] == 240);
  CHECK(manifest["parameters"]["resolution"] == 96);
  CHECK_FALSE(manifest["parameters"].contains("workers"));
  std::size_t checked = 0;
  for (const char* kind : {"contrastive", "descriptive"}) {
    for (const auto& panel : manifest[kind]) {
      for (const auto& a : panel["annotations"]) {
        // Descriptive groups draw one member's outline; their members are a union.
        if (a["provenance"].size() > 1 && std::string(kind) == "descriptive") continue;
        std::size_t in = 0;
        for (const auto& p : s.embedding.coords) {
          for (const auto& poly : a["polygons"])
            if (inside(poly, p.x, p.y)) {
              ++in;
              break;
            }
        }
        CHECK(in == a["member_count"].get<std::size_t>());
        ++checked;
      }
    }
  }
  CHECK(checked > 3);
}

TEST_CASE("outputs are byte-identical across runs") {
  const auto s = scene(5);
  const Config config = small_config();
  const auto root = std::filesystem::temp_directory_path() / "emblens_test_determinism";
  std::filesystem::remove_all(root);
  for (const char* run : {"a", "b"}) {
    Diagnostics diag;
    const auto result = explain(s.data, s.embedding, config, &diag);
    write_explanation(root / run, result, s.data, s.embedding, config, diag);
  }
  std::size_t files = 0;
  for (const auto& entry : std::filesystem::directory_iterator(root / "a")) {
    const auto name = entry.path().filename();
    if (name == "run.log") continue;
    CHECK_MESSAGE(slurp(entry.path()) == slurp(root / "b" / name), name.string());
    ++files;
  }
  CHECK(std::filesystem::exists(root / "a" / "manifest.json"));
  CHECK(std::filesystem::exists(root / "a" / "descriptive.svg"));
  CHECK(std::filesystem::exists(root / "a" / "contrastive_1.svg"));
  CHECK(files >= 5);
  std::filesystem::remove_all(root);
}

TEST_CASE("config files and overrides") {
  std::istringstream text("# comment\nk_bins = 3\nmode = greedy\n\nedge_threshold=0.1  # trailing\n");
  Config c = parse_config(text);
  CHECK(c.k_bins == 3);
  CHECK(c.mode == CandidateMode::greedy);
  CHECK(c.edge_threshold == 0.1);
  CHECK(c.level_fraction == 0.25);
  set_config_value(c, "k_bins", "7");
  CHECK(c.k_bins == 7);
  CHECK(c.region_params().k_bins == 7);
  CHECK(c.descriptive_params().mode == CandidateMode::greedy);

  std::istringstream unknown("colour = red\n");
  CHECK_THROWS_WITH(parse_config(unknown), "unknown config key 'colour'");
  std::istringstream bad("k_bins = many\n");
  CHECK_THROWS_AS(parse_config(bad), Error);
  std::istringstream range("merge_threshold = 1.5\n");
  CHECK_THROWS_WITH(parse_config(range), doctest::Contains("must lie in [0,1]"));
  std::istringstream zero("weight_overlap = 0\nweight_purity = 0\nweight_attention = 0\n");
  CHECK_THROWS_WITH(parse_config(zero), "criterion weights must not all be zero");
  CHECK_THROWS_AS(set_config_value(c, "mode", "fast"), Error);

  Config round;
  for (const auto& [k, v] : config_entries(c)) set_config_value(round, k, v);
  CHECK(config_entries(round) == config_entries(c));
}

TEST_CASE("misaligned inputs are rejected") {
  const auto s = scene(6);
  Embedding shorter = s.embedding;
  shorter.coords.pop_back();
  CHECK_THROWS_WITH(explain(s.data, shorter, small_config()), doctest::Contains("row count mismatch"));
}
