#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "cloze/types.hpp"

namespace cloze {

/// Interpolated modified Kneser-Ney n-gram model estimated from a plain
/// token stream. Top-order counts are raw; lower orders use continuation
/// (distinct-left-extension) counts. Three discounts per order come from
/// count-of-count statistics, clamped so that per-history distributions
/// sum to one exactly; degenerate statistics fall back to a flat 0.75
/// discount with a warning.
class NGramModel {
 public:
  static constexpr uint32_t kUnkId = 0;

  static NGramModel train(const std::vector<Token>& stream, size_t order = 4);

  size_t order() const { return order_; }
  size_t vocab_size() const { return types_.size(); }  // includes <unk>
  bool fallback_discounts() const { return fallback_; }

  /// p(w | history): uses at most the last order-1 history tokens. Unknown
  /// words map to <unk>. Always a proper probability over the vocabulary.
  double prob(const Token& w, const std::vector<Token>& history) const;

  /// Discounts [D1, D2, D3+] for n-grams of length k (1-based).
  const std::array<double, 3>& discounts(size_t k) const {
    return discounts_.at(k - 1);
  }

  uint32_t token_id(const Token& t) const {
    auto it = index_.find(t);
    return it == index_.end() ? kUnkId : it->second;
  }

 private:
  struct Gram {
    std::array<uint32_t, 4> ids{};
    uint8_t len = 0;
    bool operator==(const Gram& o) const {
      if (len != o.len) return false;
      for (uint8_t i = 0; i < len; ++i)
        if (ids[i] != o.ids[i]) return false;
      return true;
    }
  };
  struct GramHash {
    size_t operator()(const Gram& g) const {
      uint64_t h = 0xcbf29ce484222325ULL ^ g.len;
      for (uint8_t i = 0; i < g.len; ++i) {
        h ^= g.ids[i];
        h *= 0x100000001b3ULL;
      }
      return static_cast<size_t>(h);
    }
  };
  struct HistStats {
    uint64_t denom = 0;  // sum of adjusted counts over continuations
    uint64_t n1 = 0, n2 = 0, n3p = 0;
  };

  double discount_for(size_t k, uint64_t count) const;

  size_t order_ = 4;
  std::vector<Token> types_;  // id -> token, [0] = <unk>
  std::unordered_map<Token, uint32_t> index_;
  // adjusted counts per order (index k-1): raw at the top order,
  // continuation counts below
  std::vector<std::unordered_map<Gram, uint64_t, GramHash>> counts_;
  // history -> stats per order (index k-1); history length k-1
  std::vector<std::unordered_map<Gram, HistStats, GramHash>> hist_;
  std::vector<std::array<double, 3>> discounts_;
  bool fallback_ = false;
};

/// Unigram cache over the at most `capacity` most recent tokens.
class CacheState {
 public:
  explicit CacheState(size_t capacity = 100, double lambda = 0.1)
      : capacity_(capacity), lambda_(lambda) {}

  void push(const Token& t) {
    window_.push_back(t);
    if (window_.size() > capacity_) window_.pop_front();
  }

  void push_all(const std::vector<Token>& tokens) {
    for (const auto& t : tokens) push(t);
  }

  double prob(const Token& w) const {
    if (window_.empty()) return 0.0;
    size_t c = 0;
    for (const auto& t : window_)
      if (t == w) ++c;
    return static_cast<double>(c) / static_cast<double>(window_.size());
  }

  double lambda() const { return lambda_; }
  size_t size() const { return window_.size(); }
  const std::deque<Token>& window() const { return window_; }

 private:
  size_t capacity_;
  double lambda_;
  std::deque<Token> window_;
};

}  // namespace cloze
