#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "cloze/types.hpp"

namespace cloze {

/// Case-sensitive token <-> id bijection with reserved ids for the unknown
/// token, padding, and the query blank marker.
class Vocabulary {
 public:
  static constexpr uint32_t kUnk = 0;
  static constexpr uint32_t kPad = 1;
  static constexpr uint32_t kBlank = 2;

  Vocabulary();

  /// Adds a token if absent; returns its id.
  uint32_t add(const Token& t);

  /// Id of a token, or kUnk when unseen.
  uint32_t id(const Token& t) const {
    auto it = index_.find(t);
    return it == index_.end() ? kUnk : it->second;
  }

  bool contains(const Token& t) const { return index_.count(t) > 0; }
  const Token& token(uint32_t id) const { return tokens_.at(id); }
  uint32_t size() const { return static_cast<uint32_t>(tokens_.size()); }

  const std::vector<Token>& tokens() const { return tokens_; }

  std::vector<uint32_t> ids(const Sentence& s) const {
    std::vector<uint32_t> out;
    out.reserve(s.size());
    for (const auto& t : s) out.push_back(id(t));
    return out;
  }

  static Vocabulary build(const std::vector<Instance>& instances);
  static Vocabulary from_tokens(const std::vector<Token>& tokens);

 private:
  std::vector<Token> tokens_;
  std::unordered_map<Token, uint32_t> index_;
};

}  // namespace cloze
