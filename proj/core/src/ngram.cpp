#include "cloze/ngram.hpp"

#include <algorithm>
#include <iostream>

#include "cloze/error.hpp"

namespace cloze {

NGramModel NGramModel::train(const std::vector<Token>& stream, size_t order) {
  if (stream.empty()) throw DataError("ngram train: empty token stream");
  if (order < 1 || order > 4) throw DataError("ngram order must be in [1,4]");
  NGramModel m;
  m.order_ = order;
  m.types_.push_back("<unk>");
  m.index_.emplace("<unk>", kUnkId);

  std::vector<uint32_t> ids;
  ids.reserve(stream.size());
  for (const auto& t : stream) {
    auto [it, fresh] = m.index_.try_emplace(t, static_cast<uint32_t>(m.types_.size()));
    if (fresh) m.types_.push_back(t);
    ids.push_back(it->second);
  }

  // Raw counts at every order.
  std::vector<std::unordered_map<Gram, uint64_t, GramHash>> raw(order);
  for (size_t i = 0; i < ids.size(); ++i) {
    Gram g;
    for (size_t k = 1; k <= order && i + k <= ids.size(); ++k) {
      g.ids[k - 1] = ids[i + k - 1];
      g.len = static_cast<uint8_t>(k);
      ++raw[k - 1][g];
    }
  }

  // Adjusted counts: raw at the top, distinct-left-extension counts below.
  m.counts_.resize(order);
  m.counts_[order - 1] = raw[order - 1];
  for (size_t k = order - 1; k >= 1; --k) {
    auto& adj = m.counts_[k - 1];
    for (const auto& [gram, count] : raw[k]) {
      (void)count;
      Gram suffix;
      suffix.len = static_cast<uint8_t>(k);
      for (size_t i = 0; i < k; ++i) suffix.ids[i] = gram.ids[i + 1];
      ++adj[suffix];
    }
  }

  // History stats and count-of-counts over adjusted counts.
  m.hist_.resize(order);
  m.discounts_.resize(order);
  for (size_t k = 1; k <= order; ++k) {
    uint64_t n[5] = {0, 0, 0, 0, 0};
    auto& hist = m.hist_[k - 1];
    for (const auto& [gram, count] : m.counts_[k - 1]) {
      if (count == 0) continue;
      Gram h;
      h.len = static_cast<uint8_t>(k - 1);
      for (size_t i = 0; i + 1 < k; ++i) h.ids[i] = gram.ids[i];
      auto& hs = hist[h];
      hs.denom += count;
      if (count == 1)
        ++hs.n1;
      else if (count == 2)
        ++hs.n2;
      else
        ++hs.n3p;
      if (count <= 4) ++n[count];
    }
    auto& d = m.discounts_[k - 1];
    if (n[1] == 0 || n[2] == 0 || n[3] == 0 || n[4] == 0) {
      d = {0.75, 0.75, 0.75};
      if (!m.fallback_) {
        std::cerr << "[ngram] warning: too few count-of-counts at order " << k
                  << "; using flat 0.75 discounts\n";
        m.fallback_ = true;
      }
    } else {
      const double y = static_cast<double>(n[1]) /
                       (static_cast<double>(n[1]) + 2.0 * static_cast<double>(n[2]));
      d[0] = 1.0 - 2.0 * y * static_cast<double>(n[2]) / static_cast<double>(n[1]);
      d[1] = 2.0 - 3.0 * y * static_cast<double>(n[3]) / static_cast<double>(n[2]);
      d[2] = 3.0 - 4.0 * y * static_cast<double>(n[4]) / static_cast<double>(n[3]);
      // keep 0 <= D(c) <= c so per-history mass balances exactly
      d[0] = std::clamp(d[0], 0.0, 1.0);
      d[1] = std::clamp(d[1], 0.0, 2.0);
      d[2] = std::clamp(d[2], 0.0, 3.0);
    }
  }
  return m;
}

double NGramModel::discount_for(size_t k, uint64_t count) const {
  const auto& d = discounts_[k - 1];
  if (count == 0) return 0.0;
  if (count == 1) return d[0];
  if (count == 2) return d[1];
  return d[2];
}

double NGramModel::prob(const Token& w, const std::vector<Token>& history) const {
  const uint32_t wid = token_id(w);
  std::vector<uint32_t> hids;
  const size_t use = std::min(history.size(), order_ - 1);
  hids.reserve(use);
  for (size_t i = history.size() - use; i < history.size(); ++i)
    hids.push_back(token_id(history[i]));

  double p = 1.0 / static_cast<double>(types_.size());
  for (size_t k = 1; k <= use + 1; ++k) {
    Gram h;
    h.len = static_cast<uint8_t>(k - 1);
    for (size_t i = 0; i + 1 < k; ++i) h.ids[i] = hids[use - (k - 1) + i];
    const auto hs_it = hist_[k - 1].find(h);
    if (hs_it == hist_[k - 1].end() || hs_it->second.denom == 0) continue;
    const auto& hs = hs_it->second;
    Gram full = h;
    full.ids[k - 1] = wid;
    full.len = static_cast<uint8_t>(k);
    const auto c_it = counts_[k - 1].find(full);
    const uint64_t c = c_it == counts_[k - 1].end() ? 0 : c_it->second;
    const double denom = static_cast<double>(hs.denom);
    const auto& d = discounts_[k - 1];
    const double gamma = (d[0] * static_cast<double>(hs.n1) +
                          d[1] * static_cast<double>(hs.n2) +
                          d[2] * static_cast<double>(hs.n3p)) /
                         denom;
    const double num =
        std::max(static_cast<double>(c) - discount_for(k, c), 0.0);
    p = num / denom + gamma * p;
  }
  return p;
}

}  // namespace cloze
