#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "emblens/dataset.hpp"
#include "emblens/regions.hpp"
#include "emblens/sample_set.hpp"

namespace fixture {

using namespace emblens;

inline Feature numeric(std::string name, std::vector<double> values) {
  Feature f;
  f.name = std::move(name);
  f.kind = FeatureKind::numeric;
  f.numbers = std::move(values);
  return f;
}

// "" is missing; categories sorted, or kept in the given order when ordinal.
inline Feature categorical(std::string name, const std::vector<std::string>& values,
                           FeatureKind kind = FeatureKind::nominal, std::vector<std::string> order = {}) {
  Feature f;
  f.name = std::move(name);
  f.kind = kind;
  f.categories = std::move(order);
  if (f.categories.empty()) {
    for (const auto& v : values)
      if (!v.empty()) f.categories.push_back(v);
    std::sort(f.categories.begin(), f.categories.end());
    f.categories.erase(std::unique(f.categories.begin(), f.categories.end()), f.categories.end());
  }
  for (const auto& v : values) {
    if (v.empty()) {
      f.codes.push_back(-1);
      continue;
    }
    const auto it = std::find(f.categories.begin(), f.categories.end(), v);
    f.codes.push_back(static_cast<int>(it - f.categories.begin()));
  }
  return f;
}

inline Dataset table(std::vector<Feature> features) {
  Dataset d;
  d.n_samples = features.empty() ? 0 : std::max(features[0].numbers.size(), features[0].codes.size());
  d.features = std::move(features);
  return d;
}

inline SampleSet set_of(std::size_t universe, std::initializer_list<std::uint32_t> idx) {
  std::vector<std::uint32_t> v(idx);
  return SampleSet::from_indices(universe, v);
}

inline SampleSet range_set(std::size_t universe, std::size_t lo, std::size_t hi) {
  SampleSet s(universe);
  for (std::size_t i = lo; i < hi; ++i) s.insert(i);
  return s;
}

inline SampleSet random_set(std::size_t universe, double p, std::mt19937_64& rng) {
  std::bernoulli_distribution keep(p);
  SampleSet s(universe);
  for (std::size_t i = 0; i < universe; ++i)
    if (keep(rng)) s.insert(i);
  return s;
}

inline Embedding gaussian_cloud(std::size_t n, std::mt19937_64& rng, double cx = 0, double cy = 0, double sd = 1) {
  std::normal_distribution<double> g(0.0, sd);
  Embedding e;
  for (std::size_t i = 0; i < n; ++i) e.coords.push_back({cx + g(rng), cy + g(rng)});
  return e;
}

inline Embedding concat(Embedding a, const Embedding& b) {
  a.coords.insert(a.coords.end(), b.coords.begin(), b.coords.end());
  return a;
}

// Three tight, well separated clusters of `per` points: A at (0,0), B at (10,0), C at (0,10).
inline Embedding three_clusters(std::mt19937_64& rng, std::size_t per = 100) {
  return concat(concat(gaussian_cloud(per, rng, 0, 0, 0.6), gaussian_cloud(per, rng, 10, 0, 0.6)),
                gaussian_cloud(per, rng, 0, 10, 0.6));
}

// Bare annotation over a member set; no geometry.
inline RegionAnnotation annotation(int id, Rule rule, SampleSet members) {
  RegionAnnotation a;
  a.id = id;
  a.rule = std::move(rule);
  a.shape.members = std::move(members);
  a.provenance = {id};
  return a;
}

inline Polygon square(double x0, double y0, double x1, double y1) {
  Polygon p;
  p.outer = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  return p;
}

}  // namespace fixture
