#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cloze/candidates.hpp"
#include "cloze/ngram.hpp"
#include "cloze/prediction.hpp"
#include "cloze/resources.hpp"
#include "cloze/types.hpp"

namespace cloze {

enum class PickerKind { Random, First, Last, MostFrequent };

std::optional<PickerKind> picker_kind_from_name(const std::string& s);

/// Context-restricted pickers over non-stopword candidates. Returns
/// nullopt (abstain) when every candidate is a stopword; abstentions score
/// as wrong downstream. The random picker is pure given (instance, seed).
std::optional<Prediction> run_picker(PickerKind kind, const Instance& inst,
                                     const CandidateSet& cands,
                                     const TokenSet& stopwords, uint64_t seed);

/// Scores each non-stopword context word with the n-gram model conditioned
/// on the last up-to-3 visible target-sentence tokens, optionally
/// interpolated with a unigram cache over the at most `cache_size` tokens
/// preceding the blank: p' = (1-lambda) p_kn + lambda p_cache.
std::optional<Prediction> ngram_score_blank(const NGramModel& model,
                                            const Instance& inst,
                                            const CandidateSet& cands,
                                            const TokenSet& stopwords,
                                            bool use_cache, size_t cache_size,
                                            double lambda);

/// The token stream an instance contributes to LM estimation.
std::vector<Token> instance_token_stream(const Instance& inst);

}  // namespace cloze
