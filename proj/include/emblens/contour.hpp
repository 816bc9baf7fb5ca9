#pragma once

#include <vector>

#include "emblens/density.hpp"
#include "emblens/geometry.hpp"
#include "emblens/sample_set.hpp"

namespace emblens {

/// Contour polygons plus the embedding points they enclose.
struct RegionShape {
  std::vector<Polygon> polygons;
  SampleSet members;
};

/// Marching squares at an absolute threshold. Nodes >= threshold are inside.
/// The grid is treated as surrounded by below-threshold nodes, so contours
/// reaching the border are closed along it. Ambiguous saddle cells are
/// resolved by the mean of their four corners.
std::vector<Polygon> trace_contours(const DensityGrid& grid, double threshold);

/// Level set at `level_fraction * max(grid)` with members resolved over all
/// embedding points.
RegionShape extract_contours(const DensityGrid& grid, double level_fraction,
                             const Embedding& embedding);

bool point_in_region(const RegionShape& shape, Point p);
bool point_in_polygons(const std::vector<Polygon>& polygons, Point p);

/// Membership of every embedding point. When `grid`/`threshold` are given,
/// points in grid cells whose four corners agree are classified from the
/// corners and only boundary cells run the polygon test.
SampleSet resolve_members(const std::vector<Polygon>& polygons, const Embedding& embedding,
                          const DensityGrid* grid = nullptr, double threshold = 0.0);

namespace reference {
/// Polygon test for every point, serially.
SampleSet resolve_members(const std::vector<Polygon>& polygons, const Embedding& embedding);
}  // namespace reference

}  // namespace emblens
