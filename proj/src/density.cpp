#include "emblens/density.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <ostream>

#include "emblens/error.hpp"

namespace emblens {

GridSpec make_grid(const Embedding& embedding, double sigma, std::size_t resolution,
                   double pad_sigmas) {
  if (embedding.coords.empty()) throw Error("make_grid: empty embedding");
  if (resolution < 4) throw Error("grid resolution must be at least 4");
  if (!(sigma > 0.0)) throw Error("bandwidth must be positive");
  BBox b = bounding_box(embedding.coords);
  const double pad = pad_sigmas * sigma;
  GridSpec g;
  g.xmin = b.xmin - pad;
  g.xmax = b.xmax + pad;
  g.ymin = b.ymin - pad;
  g.ymax = b.ymax + pad;
  g.gx = g.gy = resolution;
  return g;
}

double DensityGrid::max() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

void write_grid_text(std::ostream& out, const DensityGrid& grid) {
  const auto& s = grid.spec;
  out << s.gx << ' ' << s.gy << ' ' << s.xmin << ' ' << s.xmax << ' ' << s.ymin << ' ' << s.ymax
      << '\n';
  for (std::size_t j = 0; j < s.gy; ++j) {
    for (std::size_t i = 0; i < s.gx; ++i) out << (i ? " " : "") << grid.at(i, j);
    out << '\n';
  }
}

namespace {

std::size_t ceil_sqrt(std::size_t n) {
  auto k = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
  while (k * k < n) ++k;
  while (k > 0 && (k - 1) * (k - 1) >= n) --k;
  return k;
}

double median(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void check_k(std::size_t n, std::size_t k) {
  if (k == 0 || k >= n) throw Error("k-NN: need 1 <= k < N");
}

}  // namespace

std::vector<double> kth_neighbor_distances(const Embedding& embedding, std::size_t k) {
  const auto& pts = embedding.coords;
  const std::size_t n = pts.size();
  check_k(n, k);
  const BBox b = bounding_box(pts);
  const double wx = b.xmax - b.xmin, wy = b.ymax - b.ymin;
  double cell = (wx > 0 && wy > 0) ? std::sqrt(wx * wy * static_cast<double>(k) / static_cast<double>(n))
                                   : std::max(wx, wy) * static_cast<double>(k) / static_cast<double>(n);
  if (!(cell > 0)) cell = 1.0;
  const auto nx = static_cast<std::ptrdiff_t>(std::min(4096.0, std::floor(wx / cell) + 1));
  const auto ny = static_cast<std::ptrdiff_t>(std::min(4096.0, std::floor(wy / cell) + 1));
  const double cx = std::max(wx / static_cast<double>(nx), 1e-300);
  const double cy = std::max(wy / static_cast<double>(ny), 1e-300);
  const double ring_step = std::min(wx > 0 ? cx : cy, wy > 0 ? cy : cx);

  auto cell_of = [&](Point p) {
    auto ix = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>((p.x - b.xmin) / cx), 0, nx - 1);
    auto iy = std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>((p.y - b.ymin) / cy), 0, ny - 1);
    return std::pair{ix, iy};
  };

  // Counting sort of points into cells.
  std::vector<std::size_t> offsets(static_cast<std::size_t>(nx * ny) + 1, 0);
  std::vector<std::size_t> cell_id(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [ix, iy] = cell_of(pts[i]);
    cell_id[i] = static_cast<std::size_t>(iy * nx + ix);
    ++offsets[cell_id[i] + 1];
  }
  for (std::size_t c = 1; c < offsets.size(); ++c) offsets[c] += offsets[c - 1];
  std::vector<std::uint32_t> order(n);
  {
    auto fill = offsets;
    for (std::size_t i = 0; i < n; ++i) order[fill[cell_id[i]]++] = static_cast<std::uint32_t>(i);
  }

  std::vector<double> out(n);
  const std::ptrdiff_t max_ring = std::max(nx, ny);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t pi = 0; pi < static_cast<std::ptrdiff_t>(n); ++pi) {
    const Point p = pts[static_cast<std::size_t>(pi)];
    auto [px, py] = cell_of(p);
    std::vector<double> cand;
    auto visit = [&](std::ptrdiff_t ix, std::ptrdiff_t iy) {
      if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) return;
      const auto c = static_cast<std::size_t>(iy * nx + ix);
      for (std::size_t t = offsets[c]; t < offsets[c + 1]; ++t) {
        const auto q = order[t];
        if (q == static_cast<std::size_t>(pi)) continue;
        const double dx = pts[q].x - p.x, dy = pts[q].y - p.y;
        cand.push_back(dx * dx + dy * dy);
      }
    };
    double kth = 0.0;
    for (std::ptrdiff_t r = 0; r <= max_ring; ++r) {
      if (r == 0) {
        visit(px, py);
      } else {
        for (std::ptrdiff_t ix = px - r; ix <= px + r; ++ix) {
          visit(ix, py - r);
          visit(ix, py + r);
        }
        for (std::ptrdiff_t iy = py - r + 1; iy <= py + r - 1; ++iy) {
          visit(px - r, iy);
          visit(px + r, iy);
        }
      }
      if (cand.size() < k) continue;
      // Keep only the k nearest so far.
      std::nth_element(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k - 1), cand.end());
      cand.resize(k);
      kth = *std::max_element(cand.begin(), cand.end());
      const double reach = static_cast<double>(r) * ring_step;
      if (kth <= reach * reach) break;
    }
    out[static_cast<std::size_t>(pi)] = std::sqrt(kth);
  }
  return out;
}

double adaptive_bandwidth(const Embedding& embedding) {
  const std::size_t n = embedding.size();
  if (n < 2) throw Error("adaptive bandwidth needs at least two points");
  const auto& pts = embedding.coords;
  if (std::all_of(pts.begin(), pts.end(), [&](const Point& p) { return p == pts.front(); }))
    throw Error("degenerate embedding: all points coincide");
  const std::size_t k = std::min(ceil_sqrt(n), n - 1);
  auto d = kth_neighbor_distances(embedding, k);
  const double m = median(d);
  if (m > 0.0) return m;
  // Heavy duplication can zero the median; fall back to the positive distances.
  std::vector<double> positive;
  for (double v : d)
    if (v > 0.0) positive.push_back(v);
  if (!positive.empty()) return median(std::move(positive));
  // Every k-NN distance is zero; use the mean spacing along the longer extent.
  const BBox b = bounding_box(pts);
  return std::max(b.xmax - b.xmin, b.ymax - b.ymin) / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// FFT-backed KDE

namespace {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t next_pow2(std::size_t v) {
  std::size_t p = 1;
  while (p < v) p <<= 1;
  return p;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};
using RealBuffer = std::unique_ptr<double[], FftwFree>;
using ComplexBuffer = std::unique_ptr<fftw_complex[], FftwFree>;

// Cubic Lagrange weights for the four nodes base..base+3 at fractional position u.
std::size_t lagrange4(double u, std::size_t nodes, double w[4]) {
  auto base = static_cast<std::ptrdiff_t>(std::floor(u)) - 1;
  base = std::clamp<std::ptrdiff_t>(base, 0, static_cast<std::ptrdiff_t>(nodes) - 4);
  const double t = u - static_cast<double>(base);
  w[0] = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  w[1] = t * (t - 2.0) * (t - 3.0) / 2.0;
  w[2] = -t * (t - 1.0) * (t - 3.0) / 2.0;
  w[3] = t * (t - 1.0) * (t - 2.0) / 6.0;
  return static_cast<std::size_t>(base);
}

// Cubic spreading stays within 1e-3 of the kernel peak up to about 0.3 sigma
// per node; refine below that with some margin.
constexpr double kMaxStep = 0.2;
// Truncation radius of the direct path; the dropped tail is below 2e-8 per point.
constexpr double kCutoff = 6.0;
// Largest padded FFT lattice (per axis) worth refining to.
constexpr std::size_t kMaxFft = 1024;

std::size_t refinement(double step, double sigma) {
  return static_cast<std::size_t>(std::max(1.0, std::ceil(step / (kMaxStep * sigma))));
}

}  // namespace

struct KdeEngine::Plans {
  GridSpec fine;               // spreading lattice, refined so spacing <= kMaxStep * sigma
  std::size_t mx = 1, my = 1;  // refinement factors
  std::size_t lx = 0, ly = 0;  // padded FFT extents; 0 when only the direct path is used
  std::size_t rx = 0, ry = 0;  // truncation half-widths in nodes
  std::size_t cx = 0;          // complex row length lx/2+1
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  ComplexBuffer kernel_hat;

  ~Plans() {
    std::lock_guard lock(fftw_planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

KdeEngine::KdeEngine(const GridSpec& spec, double sigma) : spec_(spec), sigma_(sigma) {
  if (!(sigma > 0.0)) throw Error("bandwidth must be positive");
  if (spec.gx < 4 || spec.gy < 4) throw Error("grid resolution must be at least 4");
  plans_ = std::make_unique<Plans>();
  auto& p = *plans_;
  p.mx = refinement(spec.dx(), sigma);
  p.my = refinement(spec.dy(), sigma);
  p.fine = spec;
  p.fine.gx = (spec.gx - 1) * p.mx + 1;
  p.fine.gy = (spec.gy - 1) * p.my + 1;
  const GridSpec& f = p.fine;
  p.lx = next_pow2(2 * f.gx - 1);
  p.ly = next_pow2(2 * f.gy - 1);
  p.rx = static_cast<std::size_t>(std::ceil(kCutoff * sigma / spec.dx()));
  p.ry = static_cast<std::size_t>(std::ceil(kCutoff * sigma / spec.dy()));
  if (p.lx > kMaxFft || p.ly > kMaxFft) {
    p.lx = p.ly = 0;
    return;
  }
  p.cx = p.lx / 2 + 1;
  const std::size_t nreal = p.lx * p.ly, ncomplex = p.ly * p.cx;

  RealBuffer kernel(fftw_alloc_real(nreal));
  p.kernel_hat.reset(fftw_alloc_complex(ncomplex));
  ComplexBuffer scratch(fftw_alloc_complex(ncomplex));
  {
    std::lock_guard lock(fftw_planner_mutex());
    const int ny = static_cast<int>(p.ly), nx = static_cast<int>(p.lx);
    p.forward = fftw_plan_dft_r2c_2d(ny, nx, kernel.get(), p.kernel_hat.get(), FFTW_ESTIMATE);
    p.inverse = fftw_plan_dft_c2r_2d(ny, nx, scratch.get(), kernel.get(), FFTW_ESTIMATE);
  }
  if (!p.forward || !p.inverse) throw Error("FFT planning failed");

  // Kernel sampled at signed node offsets, wrapped for circular convolution.
  auto taps = [&](std::size_t len, std::size_t nodes, double step) {
    std::vector<double> k(len, 0.0);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    for (std::size_t d = 0; d < nodes; ++d) {
      const double v = std::exp(-(static_cast<double>(d) * step) * (static_cast<double>(d) * step) * inv);
      k[d] = v;
      if (d > 0) k[len - d] = v;
    }
    return k;
  };
  const auto kx = taps(p.lx, f.gx, f.dx());
  const auto ky = taps(p.ly, f.gy, f.dy());
  for (std::size_t j = 0; j < p.ly; ++j)
    for (std::size_t i = 0; i < p.lx; ++i) kernel[j * p.lx + i] = kx[i] * ky[j];
  fftw_execute_dft_r2c(p.forward, kernel.get(), p.kernel_hat.get());
}

KdeEngine::~KdeEngine() = default;
KdeEngine::KdeEngine(KdeEngine&&) noexcept = default;
KdeEngine& KdeEngine::operator=(KdeEngine&&) noexcept = default;

KdeMethod KdeEngine::choose(std::size_t count) const {
  const auto& p = *plans_;
  if (p.lx == 0) return KdeMethod::truncated;
  const double n = static_cast<double>(count);
  const double wx = static_cast<double>(std::min(2 * p.rx + 1, spec_.gx));
  const double wy = static_cast<double>(std::min(2 * p.ry + 1, spec_.gy));
  const double direct = n * (wx * wy + 8.0 * (wx + wy));
  const double len = static_cast<double>(p.lx * p.ly);
  const double fft = 6.0 * len * std::log2(len) + 16.0 * n;
  return direct <= fft ? KdeMethod::truncated : KdeMethod::fft;
}

DensityGrid KdeEngine::evaluate(const Embedding& embedding, const SampleSet& selected,
                                std::span<const double> weights, KdeMethod method) const {
  if (selected.empty()) throw Error("empty indicator");
  if (method == KdeMethod::automatic) method = choose(selected.size());
  if (method == KdeMethod::fft && plans_->lx == 0) method = KdeMethod::truncated;
  return method == KdeMethod::fft ? spread_fft(embedding, selected, weights)
                                  : truncated(embedding, selected, weights);
}

DensityGrid KdeEngine::truncated(const Embedding& embedding, const SampleSet& selected,
                                 std::span<const double> weights) const {
  const auto& p = *plans_;
  const auto& s = spec_;
  DensityGrid grid{s, std::vector<double>(s.nodes(), 0.0)};
  const double inv = 1.0 / (2.0 * sigma_ * sigma_);
  const double dx = s.dx(), dy = s.dy();
  auto window = [](double u, std::size_t r, std::size_t nodes) {
    const double c = std::round(u);
    const double lo = std::max(0.0, c - static_cast<double>(r));
    const double hi = std::min(static_cast<double>(nodes) - 1.0, c + static_cast<double>(r));
    return std::pair{static_cast<std::ptrdiff_t>(lo), static_cast<std::ptrdiff_t>(hi)};
  };
  std::vector<double> ex, ey;
  for (auto i : selected.indices()) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (w == 0.0) continue;
    const Point pt = embedding.coords[i];
    const auto [x0, x1] = window((pt.x - s.xmin) / dx, p.rx, s.gx);
    const auto [y0, y1] = window((pt.y - s.ymin) / dy, p.ry, s.gy);
    if (x1 < x0 || y1 < y0) continue;
    ex.clear();
    ey.clear();
    for (auto a = x0; a <= x1; ++a) {
      const double d = s.xmin + static_cast<double>(a) * dx - pt.x;
      ex.push_back(std::exp(-d * d * inv));
    }
    for (auto b = y0; b <= y1; ++b) {
      const double d = s.ymin + static_cast<double>(b) * dy - pt.y;
      ey.push_back(w * std::exp(-d * d * inv));
    }
    for (std::size_t b = 0; b < ey.size(); ++b) {
      double* row = grid.values.data() + (static_cast<std::size_t>(y0) + b) * s.gx + static_cast<std::size_t>(x0);
      for (std::size_t a = 0; a < ex.size(); ++a) row[a] += ey[b] * ex[a];
    }
  }
  return grid;
}

DensityGrid KdeEngine::spread_fft(const Embedding& embedding, const SampleSet& selected,
                                  std::span<const double> weights) const {
  const auto& p = *plans_;
  const auto& s = p.fine;
  const std::size_t nreal = p.lx * p.ly, ncomplex = p.ly * p.cx;
  RealBuffer field(fftw_alloc_real(nreal));
  ComplexBuffer spectrum(fftw_alloc_complex(ncomplex));
  std::fill(field.get(), field.get() + nreal, 0.0);

  const double inv_dx = 1.0 / s.dx(), inv_dy = 1.0 / s.dy();
  for (auto i : selected.indices()) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (w == 0.0) continue;
    const Point pt = embedding.coords[i];
    double wx[4], wy[4];
    const std::size_t bx = lagrange4((pt.x - s.xmin) * inv_dx, s.gx, wx);
    const std::size_t by = lagrange4((pt.y - s.ymin) * inv_dy, s.gy, wy);
    for (std::size_t b = 0; b < 4; ++b) {
      double* row = field.get() + (by + b) * p.lx + bx;
      const double wb = w * wy[b];
      for (std::size_t a = 0; a < 4; ++a) row[a] += wb * wx[a];
    }
  }

  fftw_execute_dft_r2c(p.forward, field.get(), spectrum.get());
  for (std::size_t k = 0; k < ncomplex; ++k) {
    const std::complex<double> a(spectrum[k][0], spectrum[k][1]);
    const std::complex<double> b(p.kernel_hat[k][0], p.kernel_hat[k][1]);
    const auto c = a * b;
    spectrum[k][0] = c.real();
    spectrum[k][1] = c.imag();
  }
  fftw_execute_dft_c2r(p.inverse, spectrum.get(), field.get());

  DensityGrid grid;
  grid.spec = spec_;
  grid.values.resize(spec_.nodes());
  const double scale = 1.0 / static_cast<double>(nreal);
  for (std::size_t j = 0; j < spec_.gy; ++j)
    for (std::size_t i = 0; i < spec_.gx; ++i)
      grid.values[j * spec_.gx + i] = std::max(0.0, field[j * p.my * p.lx + i * p.mx] * scale);
  return grid;
}

DensityGrid kde_grid(const Embedding& embedding, const SampleSet& selected,
                     std::span<const double> weights, double sigma, const GridSpec& spec) {
  return KdeEngine(spec, sigma).evaluate(embedding, selected, weights);
}

namespace {

double direct_node(const Embedding& embedding, const std::vector<std::uint32_t>& idx,
                   std::span<const double> weights, double inv2s2, Point g) {
  double sum = 0.0;
  for (auto i : idx) {
    const double dx = g.x - embedding.coords[i].x, dy = g.y - embedding.coords[i].y;
    const double w = weights.empty() ? 1.0 : weights[i];
    sum += w * std::exp(-(dx * dx + dy * dy) * inv2s2);
  }
  return sum;
}

}  // namespace

DensityGrid kde_direct(const Embedding& embedding, const SampleSet& selected,
                       std::span<const double> weights, double sigma, const GridSpec& spec) {
  if (selected.empty()) throw Error("empty indicator");
  const auto idx = selected.indices();
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  DensityGrid grid{spec, std::vector<double>(spec.nodes())};
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(spec.gy); ++j)
    for (std::size_t i = 0; i < spec.gx; ++i)
      grid.values[static_cast<std::size_t>(j) * spec.gx + i] =
          direct_node(embedding, idx, weights, inv2s2, spec.node(i, static_cast<std::size_t>(j)));
  return grid;
}

namespace reference {

DensityGrid kde_direct(const Embedding& embedding, const SampleSet& selected,
                       std::span<const double> weights, double sigma, const GridSpec& spec) {
  if (selected.empty()) throw Error("empty indicator");
  const auto idx = selected.indices();
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  DensityGrid grid{spec, std::vector<double>(spec.nodes())};
  for (std::size_t j = 0; j < spec.gy; ++j)
    for (std::size_t i = 0; i < spec.gx; ++i)
      grid.values[j * spec.gx + i] = direct_node(embedding, idx, weights, inv2s2, spec.node(i, j));
  return grid;
}

std::vector<double> kth_neighbor_distances(const Embedding& embedding, std::size_t k) {
  const auto& pts = embedding.coords;
  const std::size_t n = pts.size();
  check_k(n, k);
  std::vector<double> out(n);
  std::vector<double> d;
  for (std::size_t i = 0; i < n; ++i) {
    d.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      d.push_back(std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y));
    }
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1), d.end());
    out[i] = d[k - 1];
  }
  return out;
}

}  // namespace reference

}  // namespace emblens
