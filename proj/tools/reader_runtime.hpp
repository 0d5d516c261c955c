#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "cloze/model_io.hpp"
#include "cloze/prediction.hpp"
#include "common.hpp"

namespace cloze::cli {

/// A checkpointed reader behind a type-erased predict function; the stored
/// precision decides which instantiation serves the calls. Degenerate
/// instances (no candidates) come back as abstentions.
struct LoadedReader {
  LoadedReaderMeta meta;
  std::function<std::optional<Prediction>(const Instance&)> predict;
};

template <typename S>
LoadedReader make_reader_runtime(const Checkpoint& ckpt,
                                 const LoadedReaderMeta& meta,
                                 const TokenSet& punctuation) {
  auto reader = std::make_shared<Reader<S>>(
      reader_params_from_checkpoint<S>(ckpt, meta));
  auto vocab = std::make_shared<Vocabulary>(meta.vocab);
  auto punct = std::make_shared<TokenSet>(punctuation);
  LoadedReader out;
  out.meta = meta;
  const bool features = meta.config.use_features;
  out.predict = [reader, vocab, punct,
                 features](const Instance& inst) -> std::optional<Prediction> {
    try {
      const auto prep = prepare_instance(inst, *vocab, *punct, features);
      return reader->predict(prep);
    } catch (const DataError&) {
      return std::nullopt;  // degenerate instance: abstain
    }
  };
  return out;
}

inline LoadedReader load_reader(const std::string& path,
                                const TokenSet& punctuation) {
  const Checkpoint ckpt = load_checkpoint(path);
  const LoadedReaderMeta meta = read_reader_meta(ckpt);
  return ckpt.precision == "f64"
             ? make_reader_runtime<double>(ckpt, meta, punctuation)
             : make_reader_runtime<float>(ckpt, meta, punctuation);
}

}  // namespace cloze::cli
