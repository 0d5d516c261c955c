#include "cloze/vocab.hpp"

#include "cloze/error.hpp"

namespace cloze {

Vocabulary::Vocabulary() {
  add("<unk>");
  add("<pad>");
  add("<blank>");
}

uint32_t Vocabulary::add(const Token& t) {
  auto it = index_.find(t);
  if (it != index_.end()) return it->second;
  const uint32_t id = static_cast<uint32_t>(tokens_.size());
  tokens_.push_back(t);
  index_.emplace(t, id);
  return id;
}

Vocabulary Vocabulary::build(const std::vector<Instance>& instances) {
  Vocabulary v;
  for (const auto& inst : instances) {
    for (const auto& s : inst.context)
      for (const auto& t : s) v.add(t);
    for (const auto& t : inst.target_sentence) v.add(t);
  }
  return v;
}

Vocabulary Vocabulary::from_tokens(const std::vector<Token>& tokens) {
  Vocabulary v;
  if (tokens.size() < 3 || tokens[0] != "<unk>" || tokens[1] != "<pad>" ||
      tokens[2] != "<blank>")
    throw DataError("vocabulary list missing reserved tokens");
  for (size_t i = 3; i < tokens.size(); ++i) v.add(tokens[i]);
  return v;
}

}  // namespace cloze
