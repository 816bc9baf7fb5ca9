#pragma once

#include <vector>

namespace emblens {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Closed ring; the closing edge back to front() is implicit.
using Ring = std::vector<Point>;

/// Outer ring is counter-clockwise, holes are clockwise.
struct Polygon {
  Ring outer;
  std::vector<Ring> holes;
};

struct BBox {
  double xmin, xmax, ymin, ymax;
  bool contains(Point p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
};

enum class RingSide { outside, inside, boundary };

double signed_area(const Ring& ring);
double polygon_area(const Polygon& polygon);
BBox bounding_box(const Ring& ring);

/// Area-weighted centroid of the outer ring (vertex mean for degenerate rings).
Point centroid(const Ring& ring);

RingSide locate_in_ring(const Ring& ring, Point p);

/// Boundary points (outer edge or hole edge) count as inside.
bool point_in_polygon(const Polygon& polygon, Point p);

}  // namespace emblens
