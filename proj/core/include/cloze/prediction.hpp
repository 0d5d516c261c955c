#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "cloze/types.hpp"

namespace cloze {

struct ScoredCandidate {
  Token token;
  double score = 0.0;
};

/// Candidates in strictly decreasing preference. Ties on score are broken
/// by earliest first occurrence in the context.
struct Prediction {
  std::vector<ScoredCandidate> ranked;

  const Token& top() const { return ranked.front().token; }

  bool has_in_top(const Token& gold, size_t k) const {
    const size_t lim = std::min(k, ranked.size());
    for (size_t i = 0; i < lim; ++i)
      if (ranked[i].token == gold) return true;
    return false;
  }
};

/// Sorts (candidate-entry-order, score) pairs into a Prediction. The input
/// order must be the candidate first-occurrence order; stable sort then
/// implements the tie-break.
inline Prediction rank_candidates(std::vector<ScoredCandidate> scored) {
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredCandidate& a, const ScoredCandidate& b) {
                     return a.score > b.score;
                   });
  return Prediction{std::move(scored)};
}

}  // namespace cloze
