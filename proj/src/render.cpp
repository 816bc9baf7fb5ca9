#include "emblens/render.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "emblens/pipeline.hpp"

namespace emblens {

double round4(double v) {
  const double r = std::round(v * 1e4) / 1e4;
  return r == 0.0 ? 0.0 : r;
}

std::vector<std::string> annotation_label_lines(const RegionAnnotation& annotation, const Dataset& data) {
  std::vector<std::string> lines{annotation.rule.label(data)};
  for (const auto& b : annotation.background) lines.push_back("also: " + b.rule.label(data));
  return lines;
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  if (std::string_view(buf) == "-0.00") return "0.00";
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::size_t glyphs(const std::string& s) {
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

// Uniform scale of the embedding bbox into the square plot area.
struct Frame {
  double scale = 1.0, ox = 0.0, oy = 0.0, top = 0.0;
  double xmin = 0.0, ymax = 0.0;

  Frame(const Embedding& emb, const Style& style, double top_offset) : top(top_offset) {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (emb.size() > 0) {
      x0 = x1 = emb.coords[0].x;
      y0 = y1 = emb.coords[0].y;
      for (const auto& p : emb.coords) {
        x0 = std::min(x0, p.x), x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y), y1 = std::max(y1, p.y);
      }
    }
    const double span = std::max({x1 - x0, y1 - y0, 1e-12});
    const double pad = 0.04 * span;
    const double side = style.panel_size - 2 * style.margin;
    scale = side / (span + 2 * pad);
    xmin = x0 - pad - 0.5 * (span - (x1 - x0));
    ymax = y1 + pad + 0.5 * (span - (y1 - y0));
    ox = style.margin;
    oy = style.margin + top;
  }
  double x(double v) const { return ox + (v - xmin) * scale; }
  double y(double v) const { return oy + (ymax - v) * scale; }
};

struct Box {
  double x0, y0, x1, y1;
  bool hits(const Box& o) const { return x0 < o.x1 && o.x0 < x1 && y0 < o.y1 && o.y0 < y1; }
};

void ring_path(std::string& out, const Ring& ring, const Frame& f) {
  for (std::size_t i = 0; i < ring.size(); ++i) {
    out += i == 0 ? 'M' : 'L';
    out += num(f.x(ring[i].x)) + ',' + num(f.y(ring[i].y)) + ' ';
  }
  out += 'Z';
}

constexpr double kTitle = 18.0;

// Panel content without the outer <svg> element; returns the content height.
double panel_body(std::string& out, const Panel& panel, const Embedding& emb, const Dataset& data,
                  const Style& style, Diagnostics* diag) {
  const Frame f(emb, style, kTitle);
  const double width = style.panel_size;
  const double bottom = style.panel_size + kTitle;
  out += "<rect x=\"0\" y=\"0\" width=\"" + num(width) + "\" height=\"" + num(bottom) +
         "\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(style.margin) + "\" y=\"" + num(style.margin) + "\" font-family=\"sans-serif\" font-size=\"" +
         num(style.font_size + 1) + "\" font-weight=\"bold\">" + escape(panel.label) + "</text>\n";

  const auto color = [&](std::size_t k) -> const std::string& { return style.colors[k % style.colors.size()]; };

  // Each point takes the color of the first annotation containing it.
  std::vector<int> owner(emb.size(), -1);
  for (std::size_t k = panel.annotations.size(); k-- > 0;)
    for (auto i : panel.annotations[k].members().indices())
      if (i < owner.size()) owner[i] = static_cast<int>(k);
  const std::string r = num(style.point_radius);
  out += "<g stroke=\"none\" fill=\"" + style.background_point + "\">\n";
  for (std::size_t i = 0; i < emb.size(); ++i)
    if (owner[i] < 0)
      out += "<circle cx=\"" + num(f.x(emb.coords[i].x)) + "\" cy=\"" + num(f.y(emb.coords[i].y)) + "\" r=\"" + r +
             "\"/>\n";
  out += "</g>\n";
  for (std::size_t k = 0; k < panel.annotations.size(); ++k) {
    out += "<g stroke=\"none\" fill=\"" + color(k) + "\">\n";
    for (std::size_t i = 0; i < emb.size(); ++i)
      if (owner[i] == static_cast<int>(k))
        out += "<circle cx=\"" + num(f.x(emb.coords[i].x)) + "\" cy=\"" + num(f.y(emb.coords[i].y)) + "\" r=\"" +
               r + "\"/>\n";
    out += "</g>\n";
  }

  for (std::size_t k = 0; k < panel.annotations.size(); ++k) {
    const auto& a = panel.annotations[k];
    std::string d;
    for (const auto& poly : a.shape.polygons) {
      if (poly.outer.size() < 3) {
        warn(diag, "skipping degenerate polygon of annotation " + std::to_string(a.id));
        continue;
      }
      if (!d.empty()) d += ' ';
      ring_path(d, poly.outer, f);
      for (const auto& h : poly.holes) {
        if (h.size() < 3) continue;
        d += ' ';
        ring_path(d, h, f);
      }
    }
    if (d.empty()) continue;
    out += "<path d=\"" + d + "\" fill=\"" + color(k) + "\" fill-opacity=\"" + num(style.fill_opacity) +
           "\" fill-rule=\"evenodd\" stroke=\"" + color(k) + "\" stroke-width=\"" + num(style.stroke_width) + "\"/>\n";
  }

  // Labels at the largest polygon's centroid, nudged vertically.
  const double line_h = style.font_size * 1.2;
  const Box area{0, kTitle, width, bottom};
  std::vector<Box> placed;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> overflow;
  for (std::size_t k = 0; k < panel.annotations.size(); ++k) {
    const auto& a = panel.annotations[k];
    const Polygon* largest = nullptr;
    double best = -1.0;
    for (const auto& poly : a.shape.polygons)
      if (poly.outer.size() >= 3 && polygon_area(poly) > best) best = polygon_area(poly), largest = &poly;
    const auto lines = annotation_label_lines(a, data);
    if (largest == nullptr) {
      overflow.emplace_back(k, lines);
      continue;
    }
    const Point c = centroid(largest->outer);
    std::size_t widest = 0;
    for (const auto& l : lines) widest = std::max(widest, glyphs(l));
    const double w = static_cast<double>(widest) * style.font_size * 0.55;
    const double h = static_cast<double>(lines.size()) * line_h;
    const double cx = std::clamp(f.x(c.x), w / 2 + 2, std::max(w / 2 + 2, width - w / 2 - 2));
    const double cy = f.y(c.y);
    const double step = h / 2 + 2;
    bool ok = false;
    Box box{};
    for (int t = 0; t <= 12 && !ok; ++t) {
      const double shift = (t == 0 ? 0.0 : ((t + 1) / 2) * step * (t % 2 == 1 ? 1.0 : -1.0));
      const double top = cy + shift - h / 2;
      box = {cx - w / 2, top, cx + w / 2, top + h};
      if (box.y0 < area.y0 || box.y1 > area.y1) continue;
      ok = std::none_of(placed.begin(), placed.end(), [&](const Box& b) { return b.hits(box); });
    }
    if (!ok) {
      overflow.emplace_back(k, lines);
      out += "<text x=\"" + num(f.x(c.x)) + "\" y=\"" + num(cy + style.font_size * 0.35) +
             "\" font-family=\"sans-serif\" font-size=\"" + num(style.font_size) +
             "\" text-anchor=\"middle\" font-weight=\"bold\" fill=\"" + color(k) + "\">" +
             std::to_string(overflow.size()) + "</text>\n";
      continue;
    }
    placed.push_back(box);
    out += "<text font-family=\"sans-serif\" font-size=\"" + num(style.font_size) +
           "\" text-anchor=\"middle\" fill=\"#222222\" stroke=\"white\" stroke-width=\"3\" paint-order=\"stroke\">";
    for (std::size_t l = 0; l < lines.size(); ++l)
      out += "<tspan x=\"" + num(cx) + "\" y=\"" + num(box.y0 + line_h * static_cast<double>(l) + style.font_size) +
             "\"" + (l == 0 ? "" : " font-style=\"italic\"") + ">" + escape(lines[l]) + "</tspan>";
    out += "</text>\n";
  }

  double height = bottom;
  if (!overflow.empty()) {
    out += "<g font-family=\"sans-serif\" font-size=\"" + num(style.font_size) + "\">\n";
    for (std::size_t j = 0; j < overflow.size(); ++j) {
      const auto& [k, lines] = overflow[j];
      for (std::size_t l = 0; l < lines.size(); ++l) {
        height += line_h;
        const std::string prefix = l == 0 ? std::to_string(j + 1) + ". " : "    ";
        out += "<text x=\"" + num(style.margin) + "\" y=\"" + num(height) + "\" fill=\"" + color(k) + "\">" +
               escape(prefix + lines[l]) + "</text>\n";
      }
    }
    out += "</g>\n";
    height += style.margin / 2;
  }
  return height;
}

std::string svg_open(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(w) + "\" height=\"" + num(h) + "\" viewBox=\"0 0 " + num(w) + ' ' + num(h) + "\">\n";
}

}  // namespace

std::string render_panel_svg(const Panel& panel, const Embedding& embedding, const Dataset& data, const Style& style,
                             Diagnostics* diag) {
  std::string body;
  const double h = panel_body(body, panel, embedding, data, style, diag);
  return svg_open(style.panel_size, h) + body + "</svg>\n";
}

RenderedLayout render_layout_svg(const Layout& layout, const Embedding& embedding, const Dataset& data,
                                 const Style& style, Diagnostics* diag) {
  if (layout.panels.empty()) throw Error("nothing to render");
  RenderedLayout out;
  std::vector<std::string> bodies;
  std::vector<double> heights;
  for (const auto& p : layout.panels) {
    std::string body;
    const double h = panel_body(body, p, embedding, data, style, diag);
    out.panels.push_back(svg_open(style.panel_size, h) + body + "</svg>\n");
    bodies.push_back(std::move(body));
    heights.push_back(h);
  }

  const std::size_t cols = std::max<std::size_t>(1, std::min(style.columns, bodies.size()));
  const std::size_t rows = (bodies.size() + cols - 1) / cols;
  std::vector<double> row_y(rows + 1, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    double h = 0;
    for (std::size_t c = 0; c < cols && r * cols + c < bodies.size(); ++c) h = std::max(h, heights[r * cols + c]);
    row_y[r + 1] = row_y[r] + h;
  }
  const double width = style.panel_size * static_cast<double>(cols);
  std::string index = svg_open(width, row_y[rows]);
  for (std::size_t k = 0; k < bodies.size(); ++k) {
    const double x = style.panel_size * static_cast<double>(k % cols);
    index += "<svg x=\"" + num(x) + "\" y=\"" + num(row_y[k / cols]) + "\" width=\"" + num(style.panel_size) +
             "\" height=\"" + num(heights[k]) + "\">\n" + bodies[k] + "</svg>\n";
  }
  out.index = index + "</svg>\n";
  return out;
}

Json rule_json(const Rule& rule, const Dataset& data) {
  Json clauses = Json::array();
  for (const auto& c : rule.clauses()) {
    const auto& feat = data.features[c.feature];
    Json j;
    j["feature"] = feat.name;
    if (!c.predicate.intervals.empty()) {
      Json ivs = Json::array();
      for (const auto& iv : c.predicate.intervals)
        ivs.push_back({{"lo", iv.lo}, {"hi", iv.hi}, {"lo_closed", iv.lo_closed}, {"hi_closed", iv.hi_closed}});
      j["intervals"] = ivs;
    }
    if (!c.predicate.categories.empty()) {
      Json cats = Json::array();
      for (int code : c.predicate.categories) cats.push_back(feat.categories[static_cast<std::size_t>(code)]);
      j["categories"] = cats;
    }
    if (c.predicate.missing) j["missing"] = true;
    clauses.push_back(std::move(j));
  }
  return clauses;
}

Json annotation_json(const RegionAnnotation& a, const Dataset& data) {
  Json j;
  j["id"] = a.id;
  j["rule"] = a.rule.label(data);
  j["clauses"] = rule_json(a.rule, data);
  Json bg = Json::array();
  for (const auto& b : a.background)
    bg.push_back({{"rule", b.rule.label(data)}, {"clauses", rule_json(b.rule, data)}, {"containment", b.containment}});
  j["background"] = bg;
  j["member_count"] = a.size();
  j["purity"] = a.purity;
  j["clause_purity"] = a.clause_purity;
  j["provenance"] = a.provenance;
  const auto ring_json = [](const Ring& ring) {
    Json r = Json::array();
    for (const auto& p : ring) r.push_back(Json::array({round4(p.x), round4(p.y)}));
    return r;
  };
  Json polys = Json::array();
  for (const auto& p : a.shape.polygons) {
    Json holes = Json::array();
    for (const auto& h : p.holes) holes.push_back(ring_json(h));
    polys.push_back({{"outer", ring_json(p.outer)}, {"holes", holes}});
  }
  j["polygons"] = polys;
  return j;
}

Json annotations_json(const std::vector<FeatureAnnotations>& lists, const Dataset& data) {
  Json out = Json::array();
  for (const auto& l : lists) {
    Json anns = Json::array();
    for (const auto& a : l.annotations) anns.push_back(annotation_json(a, data));
    const auto& f = data.features[l.feature];
    out.push_back({{"feature", f.name}, {"kind", to_string(f.kind)}, {"annotations", anns}});
  }
  return out;
}

namespace {

Json panel_json(const Panel& p, std::size_t rank, const Dataset& data) {
  Json j;
  j["rank"] = rank;
  j["label"] = p.label;
  if (!p.features.empty()) {
    Json names = Json::array();
    for (auto f : p.features) names.push_back(data.features[f].name);
    j["features"] = names;
  }
  j["scores"] = p.scores;
  j["ranks"] = p.ranks;
  j["aggregate_rank"] = p.aggregate_rank;
  Json anns = Json::array();
  for (const auto& a : p.annotations) anns.push_back(annotation_json(a, data));
  j["annotations"] = anns;
  return j;
}

Json parameter_value(const std::string& text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec == std::errc() && ptr == text.data() + text.size()) return v;
  return text;
}

}  // namespace

Json manifest_json(const Explanation& result, const Dataset& data, const Config& config) {
  Json m;
  Json features = Json::array();
  for (const auto& f : data.features) {
    Json j{{"name", f.name}, {"kind", to_string(f.kind)}, {"missing", f.missing_count()}};
    if (f.categorical()) j["categories"] = f.categories;
    features.push_back(std::move(j));
  }
  m["dataset"] = {{"samples", data.n_samples}, {"features", features}, {"weighted", data.weights.has_value()}};
  Json params;
  for (const auto& [k, v] : config_entries(config))
    if (k != "workers") params[k] = parameter_value(v);
  m["parameters"] = params;
  m["bandwidth"] = result.sigma;
  m["grid"] = {{"xmin", result.grid.xmin}, {"xmax", result.grid.xmax}, {"ymin", result.grid.ymin},
               {"ymax", result.grid.ymax}, {"gx", result.grid.gx}, {"gy", result.grid.gy}};
  for (const auto* layout : {&result.contrastive, &result.descriptive}) {
    Json panels = Json::array();
    for (std::size_t k = 0; k < layout->panels.size(); ++k) panels.push_back(panel_json(layout->panels[k], k + 1, data));
    m[to_string(layout->kind)] = panels;
  }
  return m;
}

}  // namespace emblens
