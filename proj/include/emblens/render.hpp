#pragma once

#include <array>
#include <string>
#include <vector>

#include "json.hpp"

#include "emblens/config.hpp"
#include "emblens/panel.hpp"

namespace emblens {

struct Explanation;

struct Style {
  double panel_size = 360.0;
  double margin = 14.0;
  double point_radius = 1.8;
  double stroke_width = 1.5;
  double fill_opacity = 0.15;
  double font_size = 10.0;
  std::string background_point = "#c8c8c8";
  std::vector<std::string> colors{"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                                  "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};
  std::size_t columns = 2;  // index figure
};

/// Label lines of one annotation: primary rule first, then "also: ..."
/// lines for background rules.
std::vector<std::string> annotation_label_lines(const RegionAnnotation& annotation,
                                                const Dataset& data);

std::string render_panel_svg(const Panel& panel, const Embedding& embedding,
                             const Dataset& data, const Style& style,
                             Diagnostics* diag = nullptr);

struct RenderedLayout {
  std::vector<std::string> panels;
  std::string index;  // all panels as small multiples
};

/// Throws "nothing to render" for an empty layout.
RenderedLayout render_layout_svg(const Layout& layout, const Embedding& embedding,
                                 const Dataset& data, const Style& style,
                                 Diagnostics* diag = nullptr);

using Json = nlohmann::ordered_json;

Json rule_json(const Rule& rule, const Dataset& data);
Json annotation_json(const RegionAnnotation& annotation, const Dataset& data);
Json annotations_json(const std::vector<FeatureAnnotations>& lists, const Dataset& data);
Json manifest_json(const Explanation& result, const Dataset& data, const Config& config);

/// Fixed 4-decimal rounding used for polygon coordinates.
double round4(double v);

}  // namespace emblens
