#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cloze/resources.hpp"
#include "cloze/types.hpp"

namespace cloze {

struct SplitSpec {
  double train_fraction = 1618782.0 / 1827123.0;
  uint64_t rng_seed = 0;
  bool by_document = false;  // keep all instances of a document on one side
};

struct CorpusStats {
  size_t instance_count = 0;
  double answer_in_context_fraction = 0.0;
  double mean_context_sentences = 0.0;
  double mean_context_tokens = 0.0;
};

struct BuilderOptions {
  size_t min_context_tokens = 50;
  size_t min_target_tokens = 11;  // target sentence must exceed 10 tokens
  size_t base_context_sentences = 4;
  size_t max_context_sentences = 5;
};

/// Reads every regular file under `dir` (sorted by relative path) as one
/// whitespace-tokenized, sentence-split document.
std::vector<Document> read_corpus_dir(const std::string& dir);

/// Scans documents in order, sliding the window start one sentence at a
/// time. For each start the context is 4 sentences, extended to 5 when 4
/// fall short of 50 tokens; the following sentence (with its trailing
/// punctuation run stripped) is the target sentence. An instance is emitted
/// when the target sentence exceeds 10 tokens, the target word is a
/// non-punctuation word, and the target word occurs in the context.
std::vector<Instance> build_instances(const std::vector<Document>& corpus,
                                      const TokenSet& punctuation,
                                      const BuilderOptions& opts = {});

/// Unfiltered control sample: the window geometry above without the
/// answer-in-context or target-length filters. Uniform without replacement
/// over qualifying window positions, seed-deterministic. Throws DataError
/// when n is zero or exceeds the number of qualifying windows.
std::vector<Instance> sample_control(const std::vector<Document>& corpus,
                                     const TokenSet& punctuation, size_t n,
                                     uint64_t seed);

/// Seeded shuffle split; disjoint and exhaustive. Train size is
/// round(train_fraction * n).
std::pair<std::vector<Instance>, std::vector<Instance>> split_instances(
    const std::vector<Instance>& instances, const SplitSpec& spec);

/// Throws DataError on an empty instance list.
CorpusStats corpus_stats(const std::vector<Instance>& instances);

}  // namespace cloze
