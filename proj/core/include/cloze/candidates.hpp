#pragma once

#include <cstddef>
#include <unordered_map>
#include <vector>

#include "cloze/resources.hpp"
#include "cloze/types.hpp"

namespace cloze {

/// The distinct non-punctuation context words with the 0-based positions
/// (over the flattened context) at which each occurs. Entries are ordered
/// by first occurrence, which is also the argmax tie-break order.
class CandidateSet {
 public:
  struct Entry {
    Token token;
    std::vector<size_t> positions;  // strictly increasing, non-empty
  };

  const std::vector<Entry>& entries() const { return entries_; }
  size_t size() const { return entries_.size(); }

  /// Index into entries() for a token, or -1 if not a candidate.
  int index_of(const Token& t) const {
    auto it = index_.find(t);
    return it == index_.end() ? -1 : static_cast<int>(it->second);
  }

  bool contains(const Token& t) const { return index_.count(t) > 0; }

  void add_position(const Token& t, size_t pos);

 private:
  std::vector<Entry> entries_;
  std::unordered_map<Token, size_t> index_;
};

/// Builds the candidate set for an instance. Throws DataError
/// ("degenerate instance") when no non-punctuation context word exists.
CandidateSet extract_candidates(const Instance& inst, const TokenSet& punctuation);

}  // namespace cloze
