#include "emblens/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace emblens {

double signed_area(const Ring& ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  double twice = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    twice += ring[j].x * ring[i].y - ring[i].x * ring[j].y;
  }
  return 0.5 * twice;
}

double polygon_area(const Polygon& polygon) {
  double a = std::abs(signed_area(polygon.outer));
  for (const auto& h : polygon.holes) a -= std::abs(signed_area(h));
  return a;
}

BBox bounding_box(const Ring& ring) {
  BBox b{INFINITY, -INFINITY, INFINITY, -INFINITY};
  for (const auto& p : ring) {
    b.xmin = std::min(b.xmin, p.x);
    b.xmax = std::max(b.xmax, p.x);
    b.ymin = std::min(b.ymin, p.y);
    b.ymax = std::max(b.ymax, p.y);
  }
  return b;
}

Point centroid(const Ring& ring) {
  const std::size_t n = ring.size();
  if (n == 0) return {};
  const double a = signed_area(ring);
  if (std::abs(a) < 1e-300 || n < 3) {
    Point m;
    for (const auto& p : ring) {
      m.x += p.x;
      m.y += p.y;
    }
    return {m.x / static_cast<double>(n), m.y / static_cast<double>(n)};
  }
  // Shift to the first vertex to limit cancellation.
  const Point o = ring.front();
  double cx = 0.0, cy = 0.0;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const double xj = ring[j].x - o.x, yj = ring[j].y - o.y;
    const double xi = ring[i].x - o.x, yi = ring[i].y - o.y;
    const double cross = xj * yi - xi * yj;
    cx += (xj + xi) * cross;
    cy += (yj + yi) * cross;
  }
  return {o.x + cx / (6.0 * a), o.y + cy / (6.0 * a)};
}

namespace {

bool on_segment(Point a, Point b, Point p) {
  const double ex = b.x - a.x, ey = b.y - a.y;
  const double cross = ex * (p.y - a.y) - ey * (p.x - a.x);
  const double scale = std::max({std::abs(a.x), std::abs(a.y), std::abs(b.x), std::abs(b.y), 1.0});
  const double len2 = ex * ex + ey * ey;
  if (std::abs(cross) > 1e-12 * scale * std::max(std::sqrt(len2), 1e-300)) return false;
  const double tol = 1e-12 * scale;
  return p.x >= std::min(a.x, b.x) - tol && p.x <= std::max(a.x, b.x) + tol &&
         p.y >= std::min(a.y, b.y) - tol && p.y <= std::max(a.y, b.y) + tol;
}

}  // namespace

RingSide locate_in_ring(const Ring& ring, Point p) {
  const std::size_t n = ring.size();
  if (n < 3) return RingSide::outside;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = ring[j], b = ring[i];
    if (on_segment(a, b, p)) return RingSide::boundary;
    if ((b.y > p.y) != (a.y > p.y)) {
      const double x = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside ? RingSide::inside : RingSide::outside;
}

bool point_in_polygon(const Polygon& polygon, Point p) {
  if (locate_in_ring(polygon.outer, p) == RingSide::outside) return false;
  for (const auto& h : polygon.holes) {
    if (locate_in_ring(h, p) == RingSide::inside) return false;
  }
  return true;
}

}  // namespace emblens
