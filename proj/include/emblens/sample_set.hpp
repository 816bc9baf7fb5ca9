#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace emblens {

/// Fixed-universe set of sample indices backed by a bitset.
///
/// Region member sets and indicator truth vectors are both SampleSets so the
/// overlap metrics reduce to popcounts over AND/OR of words.
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(std::size_t universe);

  static SampleSet from_indices(std::size_t universe,
                                std::span<const std::uint32_t> indices);
  static SampleSet full(std::size_t universe);

  void insert(std::size_t i);
  bool contains(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }
  std::size_t universe() const { return universe_; }
  std::vector<std::uint32_t> indices() const;

  SampleSet& operator|=(const SampleSet& other);
  SampleSet& operator&=(const SampleSet& other);
  friend SampleSet operator|(SampleSet a, const SampleSet& b) { return a |= b; }
  friend SampleSet operator&(SampleSet a, const SampleSet& b) { return a &= b; }
  friend bool operator==(const SampleSet& a, const SampleSet& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

  friend std::size_t intersection_size(const SampleSet& a, const SampleSet& b);

 private:
  void recount();

  std::size_t universe_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint64_t> words_;
};

std::size_t intersection_size(const SampleSet& a, const SampleSet& b);

}  // namespace emblens
