#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "emblens/dataset.hpp"
#include "emblens/sample_set.hpp"

namespace emblens {

/// Regular lattice of gx x gy nodes spanning [xmin,xmax] x [ymin,ymax].
struct GridSpec {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  std::size_t gx = 2, gy = 2;

  double dx() const { return (xmax - xmin) / static_cast<double>(gx - 1); }
  double dy() const { return (ymax - ymin) / static_cast<double>(gy - 1); }
  Point node(std::size_t i, std::size_t j) const {
    return {xmin + static_cast<double>(i) * dx(), ymin + static_cast<double>(j) * dy()};
  }
  std::size_t nodes() const { return gx * gy; }
};

/// Bounding box of the embedding padded by `pad_sigmas * sigma` on each side.
GridSpec make_grid(const Embedding& embedding, double sigma, std::size_t resolution,
                   double pad_sigmas = 3.0);

/// Unnormalised density sampled on a GridSpec, row-major (index j * gx + i).
struct DensityGrid {
  GridSpec spec;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[j * spec.gx + i]; }
  double max() const;
};

/// Plain-text dump: a "gx gy xmin xmax ymin ymax" header, then gy rows of gx values.
void write_grid_text(std::ostream& out, const DensityGrid& grid);

/// k-th nearest-neighbour distance of every point (self excluded), using a
/// uniform bucket grid; points are processed in parallel.
std::vector<double> kth_neighbor_distances(const Embedding& embedding, std::size_t k);

/// Median distance to the ceil(sqrt(N))-th nearest neighbour.
double adaptive_bandwidth(const Embedding& embedding);

enum class KdeMethod {
  automatic,  // cheaper of the two for the call
  fft,        // cubic spreading + FFT convolution
  truncated   // exact kernel over a +-6 sigma node window per point
};

/// Gaussian KDE on a fixed grid and bandwidth.
///
/// Each selected point's weight is spread onto the surrounding 4x4 grid
/// nodes with cubic Lagrange weights, and the spread grid is convolved with
/// the sampled kernel through a zero-padded FFT. Cost is linear in the number
/// of points plus one FFT pair per call. The kernel transform is computed
/// once per engine, so an engine should be reused across indicators. When
/// the node spacing is coarse relative to sigma the spreading lattice is
/// refined internally, and calls with few points (or grids too coarse to
/// refine) sum the truncated kernel directly instead.
/// `evaluate` is safe to call concurrently.
class KdeEngine {
 public:
  KdeEngine(const GridSpec& spec, double sigma);
  ~KdeEngine();
  KdeEngine(KdeEngine&&) noexcept;
  KdeEngine& operator=(KdeEngine&&) noexcept;

  const GridSpec& spec() const { return spec_; }
  double sigma() const { return sigma_; }

  /// sum_{i in selected} w_i exp(-|g - y_i|^2 / (2 sigma^2)) at every node g.
  /// `weights` may be empty (all ones).
  DensityGrid evaluate(const Embedding& embedding, const SampleSet& selected,
                       std::span<const double> weights = {},
                       KdeMethod method = KdeMethod::automatic) const;

  /// Method `automatic` would pick for `count` selected points.
  KdeMethod choose(std::size_t count) const;

 private:
  DensityGrid spread_fft(const Embedding& embedding, const SampleSet& selected,
                         std::span<const double> weights) const;
  DensityGrid truncated(const Embedding& embedding, const SampleSet& selected,
                        std::span<const double> weights) const;

  struct Plans;
  GridSpec spec_;
  double sigma_;
  std::unique_ptr<Plans> plans_;
};

/// One-shot convenience wrapper around KdeEngine. Throws "empty indicator"
/// when nothing is selected.
DensityGrid kde_grid(const Embedding& embedding, const SampleSet& selected,
                     std::span<const double> weights, double sigma, const GridSpec& spec);

/// Direct O(N * G) summation, parallel over grid nodes.
DensityGrid kde_direct(const Embedding& embedding, const SampleSet& selected,
                       std::span<const double> weights, double sigma, const GridSpec& spec);

namespace reference {

/// Serial O(N * G) summation of the same kernel sum.
DensityGrid kde_direct(const Embedding& embedding, const SampleSet& selected,
                       std::span<const double> weights, double sigma, const GridSpec& spec);

/// Serial exhaustive O(N^2) k-NN.
std::vector<double> kth_neighbor_distances(const Embedding& embedding, std::size_t k);

}  // namespace reference

}  // namespace emblens
