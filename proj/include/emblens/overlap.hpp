#pragma once

#include "emblens/sample_set.hpp"

namespace emblens {

/// max(|A∩B|/|A|, |A∩B|/|B|). Zero when either set is empty.
double max_overlap(const SampleSet& a, const SampleSet& b);
/// min(|A∩B|/|A|, |A∩B|/|B|). Zero when either set is empty.
double min_overlap(const SampleSet& a, const SampleSet& b);
/// |A∩B|/|A∪B|. Zero when both sets are empty.
double jaccard_overlap(const SampleSet& a, const SampleSet& b);

}  // namespace emblens
