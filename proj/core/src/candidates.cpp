#include "cloze/candidates.hpp"

#include "cloze/error.hpp"

namespace cloze {

void CandidateSet::add_position(const Token& t, size_t pos) {
  auto it = index_.find(t);
  if (it == index_.end()) {
    index_.emplace(t, entries_.size());
    entries_.push_back({t, {pos}});
  } else {
    entries_[it->second].positions.push_back(pos);
  }
}

CandidateSet extract_candidates(const Instance& inst, const TokenSet& punctuation) {
  CandidateSet cs;
  size_t pos = 0;
  for (const auto& sentence : inst.context) {
    for (const auto& token : sentence) {
      if (!punctuation.count(token)) cs.add_position(token, pos);
      ++pos;
    }
  }
  if (cs.size() == 0)
    throw DataError("degenerate instance: no non-punctuation context word (id=" +
                    inst.id + ")");
  return cs;
}

}  // namespace cloze
