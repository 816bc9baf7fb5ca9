#include "emblens/sample_set.hpp"

#include <bit>
#include <cassert>

namespace emblens {

SampleSet::SampleSet(std::size_t universe)
    : universe_(universe), words_((universe + 63) / 64, 0) {}

SampleSet SampleSet::from_indices(std::size_t universe, std::span<const std::uint32_t> indices) {
  SampleSet s(universe);
  for (auto i : indices) s.insert(i);
  return s;
}

SampleSet SampleSet::full(std::size_t universe) {
  SampleSet s(universe);
  for (std::size_t i = 0; i < universe; ++i) s.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  s.count_ = universe;
  return s;
}

void SampleSet::insert(std::size_t i) {
  assert(i < universe_);
  auto& w = words_[i >> 6];
  const auto bit = std::uint64_t{1} << (i & 63);
  if ((w & bit) == 0) {
    w |= bit;
    ++count_;
  }
}

std::vector<std::uint32_t> SampleSet::indices() const {
  std::vector<std::uint32_t> out;
  out.reserve(count_);
  for (std::size_t k = 0; k < words_.size(); ++k) {
    auto w = words_[k];
    while (w != 0) {
      const int b = std::countr_zero(w);
      out.push_back(static_cast<std::uint32_t>(k * 64 + b));
      w &= w - 1;
    }
  }
  return out;
}

SampleSet& SampleSet::operator|=(const SampleSet& other) {
  assert(universe_ == other.universe_);
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
  recount();
  return *this;
}

SampleSet& SampleSet::operator&=(const SampleSet& other) {
  assert(universe_ == other.universe_);
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
  recount();
  return *this;
}

void SampleSet::recount() {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
  count_ = c;
}

std::size_t intersection_size(const SampleSet& a, const SampleSet& b) {
  assert(a.universe_ == b.universe_);
  std::size_t c = 0;
  for (std::size_t k = 0; k < a.words_.size(); ++k)
    c += static_cast<std::size_t>(std::popcount(a.words_[k] & b.words_[k]));
  return c;
}

}  // namespace emblens
