#pragma once

#include <vector>

#include "cloze/types.hpp"

namespace cloze {

/// The four per-position context features:
///   0: word appears among the visible target-sentence tokens
///   1: frequency of the word in the context
///   2: first occurrence position of the word / context length
///   3: left neighbor equals the token immediately left of the blank
constexpr size_t kNumFeatures = 4;

struct PositionFeatures {
  size_t context_length = 0;
  std::vector<double> values;  // row-major [context_length x kNumFeatures]

  double at(size_t pos, size_t f) const { return values[pos * kNumFeatures + f]; }
};

PositionFeatures compute_features(const Instance& inst);

}  // namespace cloze
