#include "cloze/baselines.hpp"

#include <algorithm>

#include "cloze/rng.hpp"

namespace cloze {

std::optional<PickerKind> picker_kind_from_name(const std::string& s) {
  if (s == "random") return PickerKind::Random;
  if (s == "first") return PickerKind::First;
  if (s == "last") return PickerKind::Last;
  if (s == "mostfreq") return PickerKind::MostFrequent;
  return std::nullopt;
}

namespace {

struct Eligible {
  const CandidateSet::Entry* entry;
  size_t entry_index;
};

std::vector<Eligible> eligible_candidates(const CandidateSet& cands,
                                          const TokenSet& stopwords) {
  std::vector<Eligible> out;
  const auto& entries = cands.entries();
  for (size_t i = 0; i < entries.size(); ++i)
    if (!stopwords.count(entries[i].token)) out.push_back({&entries[i], i});
  return out;
}

}  // namespace

std::optional<Prediction> run_picker(PickerKind kind, const Instance& inst,
                                     const CandidateSet& cands,
                                     const TokenSet& stopwords, uint64_t seed) {
  auto eligible = eligible_candidates(cands, stopwords);
  if (eligible.empty()) return std::nullopt;  // abstain
  std::vector<ScoredCandidate> scored;
  scored.reserve(eligible.size());
  switch (kind) {
    case PickerKind::First:
      // entries are already in first-occurrence order
      for (const auto& e : eligible)
        scored.push_back({e.entry->token,
                          -static_cast<double>(e.entry->positions.front())});
      break;
    case PickerKind::Last:
      for (const auto& e : eligible)
        scored.push_back({e.entry->token,
                          static_cast<double>(e.entry->positions.back())});
      break;
    case PickerKind::MostFrequent:
      for (const auto& e : eligible)
        scored.push_back({e.entry->token,
                          static_cast<double>(e.entry->positions.size())});
      break;
    case PickerKind::Random: {
      Rng rng(derive_seed(seed, fnv1a(inst.id)));
      const size_t pick = static_cast<size_t>(rng.below(eligible.size()));
      for (size_t i = 0; i < eligible.size(); ++i)
        scored.push_back({eligible[i].entry->token, i == pick ? 1.0 : 0.0});
      break;
    }
  }
  return rank_candidates(std::move(scored));
}

std::vector<Token> instance_token_stream(const Instance& inst) {
  std::vector<Token> out = flatten_context(inst);
  out.insert(out.end(), inst.target_sentence.begin(), inst.target_sentence.end());
  return out;
}

std::optional<Prediction> ngram_score_blank(const NGramModel& model,
                                            const Instance& inst,
                                            const CandidateSet& cands,
                                            const TokenSet& stopwords,
                                            bool use_cache, size_t cache_size,
                                            double lambda) {
  auto eligible = eligible_candidates(cands, stopwords);
  if (eligible.empty()) return std::nullopt;

  const auto query = query_tokens(inst);
  std::vector<Token> history;
  const size_t h = std::min<size_t>(query.size(), model.order() - 1);
  history.assign(query.end() - static_cast<std::ptrdiff_t>(h), query.end());

  CacheState cache(cache_size, lambda);
  if (use_cache) {
    cache.push_all(flatten_context(inst));
    cache.push_all(query);
  }

  std::vector<ScoredCandidate> scored;
  scored.reserve(eligible.size());
  for (const auto& e : eligible) {
    const double p_kn = model.prob(e.entry->token, history);
    const double p = use_cache
                         ? (1.0 - lambda) * p_kn + lambda * cache.prob(e.entry->token)
                         : p_kn;
    scored.push_back({e.entry->token, p});
  }
  return rank_candidates(std::move(scored));
}

}  // namespace cloze
