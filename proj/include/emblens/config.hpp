#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "emblens/contrastive.hpp"
#include "emblens/descriptive.hpp"
#include "emblens/regions.hpp"

namespace emblens {

/// Every pipeline knob. Defaults are the documented defaults; `sigma == 0`
/// selects the adaptive bandwidth and `workers == 0` uses all cores.
struct Config {
  std::size_t k_bins = 5;
  double level_fraction = 0.25;
  double sigma = 0.0;
  std::size_t resolution = 128;
  double merge_threshold = 0.8;
  double span_fraction = 0.9;
  double pair_threshold = 0.85;
  double weight_overlap = 1.0;
  double weight_purity = 1.0;
  double weight_attention = 1.0;
  std::size_t k_panels = 4;
  double min_overlap_threshold = 0.8;
  double containment_threshold = 0.9;
  double edge_threshold = 0.05;
  CandidateMode mode = CandidateMode::exact;
  std::size_t exact_cap = 20;
  std::size_t workers = 0;

  RegionParams region_params() const;
  ContrastiveParams contrastive_params() const;
  DescriptiveParams descriptive_params() const;
};

/// Sets one key from its textual value. Unknown keys and unparsable values
/// throw.
void set_config_value(Config& config, const std::string& key, const std::string& value);

/// Flat `key = value` lines; '#' starts a comment. Values are applied on top
/// of `base` and the result is validated.
Config parse_config(std::istream& in, Config base = {});
Config load_config(const std::filesystem::path& path, Config base = {});

/// Thresholds in [0,1], level_fraction in (0,1), k values >= 1, weights
/// non-negative and not all zero.
void validate(const Config& config);

/// All keys with their current values, in a fixed order.
std::vector<std::pair<std::string, std::string>> config_entries(const Config& config);

}  // namespace emblens
