#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cloze {

/// Whitespace-free, non-empty token. Comparison is exact and case-sensitive;
/// nothing in the pipeline ever lowercases or rewrites a token.
using Token = std::string;

using Sentence = std::vector<Token>;

struct Document {
  std::string id;
  std::vector<Sentence> sentences;
};

/// One cloze example. The target word is always the final token of the
/// target sentence; candidate sets are recomputed on demand, never stored.
struct Instance {
  std::string id;
  std::vector<Sentence> context;
  Sentence target_sentence;
  Token target_word;
  std::vector<std::string> labels;  // phenomenon tags, possibly empty

  bool operator==(const Instance& other) const {
    return id == other.id && context == other.context &&
           target_sentence == other.target_sentence &&
           target_word == other.target_word && labels == other.labels;
  }
};

inline std::vector<Token> flatten_context(const Instance& inst) {
  std::vector<Token> out;
  size_t n = 0;
  for (const auto& s : inst.context) n += s.size();
  out.reserve(n);
  for (const auto& s : inst.context)
    out.insert(out.end(), s.begin(), s.end());
  return out;
}

inline size_t context_token_count(const Instance& inst) {
  size_t n = 0;
  for (const auto& s : inst.context) n += s.size();
  return n;
}

inline bool answer_in_context(const Instance& inst) {
  for (const auto& s : inst.context)
    for (const auto& t : s)
      if (t == inst.target_word) return true;
  return false;
}

/// Query tokens: the target sentence with the final (blanked) word removed.
inline Sentence query_tokens(const Instance& inst) {
  if (inst.target_sentence.empty()) return {};
  return Sentence(inst.target_sentence.begin(), inst.target_sentence.end() - 1);
}

/// The phenomenon label taxonomy accepted in instance files.
const std::vector<std::string>& phenomenon_labels();

bool is_known_label(const std::string& label);

}  // namespace cloze
