#include "emblens/contour.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "emblens/error.hpp"

namespace emblens {

namespace {

constexpr double kOutside = -std::numeric_limits<double>::infinity();

struct Segment {
  std::uint64_t from = 0;
  std::uint64_t to = 0;
  Point start;
};

// Grid sampled with one ring of below-threshold padding nodes around it.
class PaddedGrid {
 public:
  PaddedGrid(const DensityGrid& grid, double threshold) : grid_(grid), threshold_(threshold) {}

  double value(std::ptrdiff_t i, std::ptrdiff_t j) const {
    if (i < 0 || j < 0 || i >= gx() || j >= gy()) return kOutside;
    return grid_.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  bool inside(std::ptrdiff_t i, std::ptrdiff_t j) const { return value(i, j) >= threshold_; }
  bool real(std::ptrdiff_t i, std::ptrdiff_t j) const {
    return i >= 0 && j >= 0 && i < gx() && j < gy();
  }
  Point position(std::ptrdiff_t i, std::ptrdiff_t j) const {
    return grid_.spec.node(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }

  // Edge keys: horizontal edge (i,j)-(i+1,j) and vertical edge (i,j)-(i,j+1).
  std::uint64_t h_key(std::ptrdiff_t i, std::ptrdiff_t j) const { return key(i, j) * 2; }
  std::uint64_t v_key(std::ptrdiff_t i, std::ptrdiff_t j) const { return key(i, j) * 2 + 1; }

  // Crossing point on the edge between nodes a and b (a has the lower index).
  Point crossing(std::ptrdiff_t ai, std::ptrdiff_t aj, std::ptrdiff_t bi, std::ptrdiff_t bj) const {
    if (!real(ai, aj)) return position(bi, bj);
    if (!real(bi, bj)) return position(ai, aj);
    const double va = value(ai, aj), vb = value(bi, bj);
    const double t = (threshold_ - va) / (vb - va);
    const Point pa = position(ai, aj), pb = position(bi, bj);
    return {pa.x + t * (pb.x - pa.x), pa.y + t * (pb.y - pa.y)};
  }

  std::ptrdiff_t gx() const { return static_cast<std::ptrdiff_t>(grid_.spec.gx); }
  std::ptrdiff_t gy() const { return static_cast<std::ptrdiff_t>(grid_.spec.gy); }
  double threshold() const { return threshold_; }

 private:
  std::uint64_t key(std::ptrdiff_t i, std::ptrdiff_t j) const {
    return static_cast<std::uint64_t>((j + 1) * (gx() + 2) + (i + 1));
  }
  const DensityGrid& grid_;
  double threshold_;
};

struct Crossing {
  std::uint64_t key;
  Point point;
  bool leaving;  // inside -> outside when walking the cell counter-clockwise
};

void cell_segments(const PaddedGrid& g, std::ptrdiff_t i, std::ptrdiff_t j,
                   std::vector<Segment>& out) {
  // Corners counter-clockwise from bottom-left.
  const std::ptrdiff_t ci[4] = {i, i + 1, i + 1, i};
  const std::ptrdiff_t cj[4] = {j, j, j + 1, j + 1};
  bool in[4];
  int count = 0;
  for (int c = 0; c < 4; ++c) {
    in[c] = g.inside(ci[c], cj[c]);
    count += in[c] ? 1 : 0;
  }
  if (count == 0 || count == 4) return;

  Crossing xs[4];
  int nx = 0;
  for (int e = 0; e < 4; ++e) {
    const int a = e, b = (e + 1) % 4;
    if (in[a] == in[b]) continue;
    // Edges: 0 bottom (h at j), 1 right (v at i+1), 2 top (h at j+1), 3 left (v at i).
    std::uint64_t key;
    Point p;
    switch (e) {
      case 0: key = g.h_key(i, j); p = g.crossing(i, j, i + 1, j); break;
      case 1: key = g.v_key(i + 1, j); p = g.crossing(i + 1, j, i + 1, j + 1); break;
      case 2: key = g.h_key(i, j + 1); p = g.crossing(i, j + 1, i + 1, j + 1); break;
      default: key = g.v_key(i, j); p = g.crossing(i, j, i, j + 1); break;
    }
    xs[nx++] = {key, p, in[a]};
  }

  auto emit = [&](const Crossing& from, const Crossing& to) {
    out.push_back({from.key, to.key, from.point});
  };
  if (nx == 2) {
    const Crossing& leave = xs[0].leaving ? xs[0] : xs[1];
    const Crossing& enter = xs[0].leaving ? xs[1] : xs[0];
    emit(leave, enter);
    return;
  }
  // Saddle: the centre decides whether the two inside corners connect.
  const double centre =
      0.25 * (g.value(ci[0], cj[0]) + g.value(ci[1], cj[1]) + g.value(ci[2], cj[2]) + g.value(ci[3], cj[3]));
  const bool connected = centre >= g.threshold();
  for (int k = 0; k < 4; ++k) {
    if (!xs[k].leaving) continue;
    const int partner = connected ? (k + 1) % 4 : (k + 3) % 4;
    emit(xs[k], xs[partner]);
  }
}

Ring dedupe(Ring ring) {
  Ring out;
  for (const auto& p : ring)
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

}  // namespace

std::vector<Polygon> trace_contours(const DensityGrid& grid, double threshold) {
  const PaddedGrid g(grid, threshold);
  std::vector<Segment> segments;
  for (std::ptrdiff_t j = -1; j < g.gy(); ++j)
    for (std::ptrdiff_t i = -1; i < g.gx(); ++i) cell_segments(g, i, j, segments);

  std::unordered_map<std::uint64_t, std::size_t> by_start;
  by_start.reserve(segments.size() * 2);
  for (std::size_t s = 0; s < segments.size(); ++s) by_start.emplace(segments[s].from, s);

  std::vector<char> used(segments.size(), 0);
  std::vector<Ring> outers, holes;
  for (std::size_t s0 = 0; s0 < segments.size(); ++s0) {
    if (used[s0]) continue;
    Ring ring;
    std::size_t s = s0;
    while (!used[s]) {
      used[s] = 1;
      ring.push_back(segments[s].start);
      const auto it = by_start.find(segments[s].to);
      if (it == by_start.end()) throw Error("contour tracing produced an open ring");
      s = it->second;
    }
    ring = dedupe(std::move(ring));
    if (ring.size() < 3) continue;
    const double a = signed_area(ring);
    if (a > 0) {
      outers.push_back(std::move(ring));
    } else if (a < 0) {
      holes.push_back(std::move(ring));
    }
  }

  std::vector<Polygon> polygons(outers.size());
  std::vector<double> areas(outers.size());
  for (std::size_t k = 0; k < outers.size(); ++k) {
    areas[k] = signed_area(outers[k]);
    polygons[k].outer = std::move(outers[k]);
  }
  for (auto& h : holes) {
    std::ptrdiff_t best = -1;
    for (std::size_t k = 0; k < polygons.size(); ++k) {
      bool contains = false;
      for (const auto& v : h) {
        const auto side = locate_in_ring(polygons[k].outer, v);
        if (side == RingSide::boundary) continue;
        contains = side == RingSide::inside;
        break;
      }
      if (contains && (best < 0 || areas[k] < areas[static_cast<std::size_t>(best)]))
        best = static_cast<std::ptrdiff_t>(k);
    }
    if (best >= 0) polygons[static_cast<std::size_t>(best)].holes.push_back(std::move(h));
  }
  return polygons;
}

bool point_in_polygons(const std::vector<Polygon>& polygons, Point p) {
  return std::any_of(polygons.begin(), polygons.end(),
                     [p](const Polygon& poly) { return point_in_polygon(poly, p); });
}

bool point_in_region(const RegionShape& shape, Point p) { return point_in_polygons(shape.polygons, p); }

SampleSet resolve_members(const std::vector<Polygon>& polygons, const Embedding& embedding,
                          const DensityGrid* grid, double threshold) {
  const std::size_t n = embedding.size();
  std::vector<BBox> boxes;
  boxes.reserve(polygons.size());
  for (const auto& poly : polygons) boxes.push_back(bounding_box(poly.outer));

  auto exact = [&](Point p) {
    for (std::size_t k = 0; k < polygons.size(); ++k)
      if (boxes[k].contains(p) && point_in_polygon(polygons[k], p)) return true;
    return false;
  };

  std::vector<char> flags(n, 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const Point p = embedding.coords[i];
    if (grid != nullptr) {
      const auto& s = grid->spec;
      const double u = (p.x - s.xmin) / s.dx(), v = (p.y - s.ymin) / s.dy();
      if (u >= 0 && v >= 0 && u <= static_cast<double>(s.gx - 1) && v <= static_cast<double>(s.gy - 1)) {
        const auto ci = std::min(static_cast<std::size_t>(u), s.gx - 2);
        const auto cj = std::min(static_cast<std::size_t>(v), s.gy - 2);
        const bool a = grid->at(ci, cj) >= threshold, b = grid->at(ci + 1, cj) >= threshold;
        const bool c = grid->at(ci + 1, cj + 1) >= threshold, d = grid->at(ci, cj + 1) >= threshold;
        if (a == b && b == c && c == d) {
          flags[i] = a ? 1 : 0;
          continue;
        }
      }
    }
    flags[i] = exact(p) ? 1 : 0;
  }
  SampleSet members(n);
  for (std::size_t i = 0; i < n; ++i)
    if (flags[i]) members.insert(i);
  return members;
}

RegionShape extract_contours(const DensityGrid& grid, double level_fraction, const Embedding& embedding) {
  if (!(level_fraction > 0.0 && level_fraction < 1.0))
    throw Error("level fraction must lie in (0,1)");
  const double peak = grid.max();
  if (!(peak > 0.0)) throw Error("density grid is identically zero");
  const double threshold = level_fraction * peak;
  if (threshold > peak) throw Error("contour level above grid maximum");
  RegionShape shape;
  shape.polygons = trace_contours(grid, threshold);
  shape.members = resolve_members(shape.polygons, embedding, &grid, threshold);
  return shape;
}

namespace reference {

SampleSet resolve_members(const std::vector<Polygon>& polygons, const Embedding& embedding) {
  SampleSet members(embedding.size());
  for (std::size_t i = 0; i < embedding.size(); ++i)
    if (point_in_polygons(polygons, embedding.coords[i])) members.insert(i);
  return members;
}

}  // namespace reference

}  // namespace emblens
