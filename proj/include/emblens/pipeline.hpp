#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "emblens/config.hpp"
#include "emblens/contrastive.hpp"
#include "emblens/descriptive.hpp"
#include "emblens/regions.hpp"

namespace emblens {

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct Explanation {
  double sigma = 0.0;
  GridSpec grid;
  std::vector<FeatureAnnotations> annotations;  // post merge and filter
  std::vector<RegionAnnotation> groups;         // descriptive pool
  Layout contrastive;
  Layout descriptive;
  std::vector<StageTiming> timings;
};

/// Applies the worker count (0 = all cores) to subsequent parallel regions.
void set_workers(std::size_t workers);

Explanation explain(const Dataset& data, const Embedding& embedding, const Config& config,
                    Diagnostics* diag = nullptr);

/// Writes contrastive_*.svg, descriptive_*.svg, the two index figures,
/// manifest.json and run.log into `dir`.
void write_explanation(const std::filesystem::path& dir, const Explanation& result,
                       const Dataset& data, const Embedding& embedding, const Config& config,
                       const Diagnostics& diag);

}  // namespace emblens
