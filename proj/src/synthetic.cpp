#include "emblens/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "emblens/error.hpp"

namespace emblens {

std::uint64_t SplitMix::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double SplitMix::normal() {
  double u = uniform();
  while (u <= 0.0) u = uniform();
  const double v = uniform();
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

std::size_t SplitMix::below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

SyntheticData gaussian_mixture(const SyntheticSpec& spec) {
  if (spec.n_samples == 0 || spec.clusters == 0) throw Error("synthetic data needs samples and clusters");
  SplitMix rng(spec.seed);
  const std::size_t n = spec.n_samples, c = spec.clusters;

  SyntheticData out;
  std::vector<std::size_t> label(n);
  out.embedding.coords.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    label[i] = rng.below(c);
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(label[i]) / static_cast<double>(c);
    out.embedding.coords[i] = {10.0 * std::cos(angle) + 1.5 * rng.normal(), 10.0 * std::sin(angle) + 1.5 * rng.normal()};
  }

  auto& data = out.data;
  data.n_samples = n;
  std::vector<std::string> names(c);
  for (std::size_t k = 0; k < c; ++k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "c%02zu", k);
    names[k] = buf;
  }
  for (std::size_t f = 0; f < spec.n_features; ++f) {
    Feature feat;
    char buf[32];
    std::snprintf(buf, sizeof buf, "f%03zu", f);
    feat.name = buf;
    if (f % 2 == 0) {
      feat.kind = FeatureKind::numeric;
      feat.numbers.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        feat.numbers[i] = static_cast<double>((label[i] * 7 + f * 3) % c) + 0.5 * rng.normal();
    } else {
      feat.kind = FeatureKind::nominal;
      feat.categories = names;
      feat.codes.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t k = rng.uniform() < 0.1 ? rng.below(c) : (label[i] + f) % c;
        feat.codes[i] = static_cast<int>(k);
      }
    }
    data.features.push_back(std::move(feat));
  }
  return out;
}

}  // namespace emblens
