#pragma once

#include <cstdint>
#include <string>

#include "cloze/gradcheck.hpp"
#include "cloze/readers.hpp"
#include "cloze/text.hpp"

namespace cloze {

/// A fixed 18-token toy instance whose target occurs twice in the context.
inline Instance gradcheck_toy_instance() {
  Instance inst;
  inst.id = "gradcheck-toy";
  inst.context = {
      tokenize_whitespace("the cat sat on the mat ."),
      tokenize_whitespace("a dog saw the cat ."),
  };
  inst.target_sentence = tokenize_whitespace("then it was the cat");
  inst.target_word = "cat";
  return inst;
}

struct ReaderGradCheckOptions {
  uint64_t seed = 7;
  double epsilon = 1e-5;
  double tolerance = 1e-4;
  size_t embed_dim = 6;
  size_t hidden_dim = 5;
  size_t ga_hops = 2;
  CellKind cell = CellKind::Gru;
  bool corrupt = false;  // negative control: perturb one analytic gradient
};

/// Central-difference verification of one reader configuration in 64-bit
/// on the toy instance. Every parameter coordinate is checked.
inline GradCheckReport run_reader_gradcheck(ReaderKind kind, bool features,
                                            const TokenSet& punctuation,
                                            const ReaderGradCheckOptions& opts = {}) {
  const Instance inst = gradcheck_toy_instance();
  Vocabulary vocab = Vocabulary::build({inst});

  ReaderConfig cfg;
  cfg.kind = kind;
  cfg.embed_dim = opts.embed_dim;
  cfg.hidden_dim = opts.hidden_dim;
  cfg.cell = opts.cell;
  cfg.use_features = features;
  cfg.ga_hops = opts.ga_hops;

  Reader<double> reader(cfg, vocab.size(), opts.seed);
  const auto prep = prepare_instance(inst, vocab, punctuation, features);

  ReaderParams<double> grads = reader.params().zeros_like();
  reader.loss_grad(prep, grads);
  if (opts.corrupt) grads.embeddings[0] += 1.0;

  auto refs = reader.params().refs(grads);
  return grad_check(refs, [&]() { return reader.loss(prep); }, opts.epsilon,
                    opts.tolerance);
}

}  // namespace cloze
