#pragma once

#include <cstddef>
#include <cstdint>

#include "emblens/dataset.hpp"

namespace emblens {

struct SyntheticSpec {
  std::size_t n_samples = 1000;
  std::size_t n_features = 10;
  std::size_t clusters = 6;
  std::uint64_t seed = 1;
};

struct SyntheticData {
  Dataset data;
  Embedding embedding;
};

/// Planted Gaussian mixture: cluster centres on a circle in 2-D, features
/// alternate between numeric (cluster-specific mean plus noise) and nominal
/// (cluster label with 10% noise). Fully determined by the spec.
SyntheticData gaussian_mixture(const SyntheticSpec& spec);

/// Small deterministic generator (splitmix64) with portable uniform and
/// normal draws.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  double uniform();  // [0,1)
  double normal();
  std::size_t below(std::size_t n);

 private:
  std::uint64_t state_;
};

}  // namespace emblens
