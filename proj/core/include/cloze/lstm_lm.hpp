#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cloze/baselines.hpp"
#include "cloze/candidates.hpp"
#include "cloze/nn.hpp"
#include "cloze/optimizer.hpp"
#include "cloze/prediction.hpp"
#include "cloze/types.hpp"
#include "cloze/vocab.hpp"

namespace cloze {

struct LstmLmConfig {
  size_t embed_dim = 64;
  size_t hidden_dim = 64;
  size_t epochs = 5;
  uint64_t seed = 42;
  OptimizerConfig opt;
};

template <typename S>
struct LstmLmParams {
  size_t vocab_size = 0;
  size_t embed_dim = 0;
  size_t hidden_dim = 0;
  Tensor<S> embeddings;  // [V x v]
  RnnCellParams<S> cell;
  Tensor<S> w_out;  // [V x H]
  Tensor<S> b_out;  // [V]

  static LstmLmParams create(size_t vocab, size_t v, size_t h) {
    LstmLmParams p;
    p.vocab_size = vocab;
    p.embed_dim = v;
    p.hidden_dim = h;
    p.embeddings = Tensor<S>(vocab, v);
    p.cell = RnnCellParams<S>::create(CellKind::Lstm, v, h);
    p.w_out = Tensor<S>(vocab, h);
    p.b_out = Tensor<S>(vocab);
    return p;
  }

  void init(uint64_t seed) {
    Rng rng(derive_seed(seed, 0x157717));
    fill_uniform(embeddings, rng, -0.05, 0.05);
    init_rnn_params(cell, rng);
    const double s = std::sqrt(1.0 / static_cast<double>(hidden_dim));
    fill_uniform(w_out, rng, -s, s);
    b_out.zero();
  }

  LstmLmParams zeros_like() const { return create(vocab_size, embed_dim, hidden_dim); }

  std::vector<std::pair<std::string, Tensor<S>*>> named() {
    return {{"embeddings", &embeddings}, {"cell.w", &cell.w},
            {"cell.u", &cell.u},         {"cell.b", &cell.b},
            {"w_out", &w_out},           {"b_out", &b_out}};
  }

  std::vector<ParamRef<S>> refs(LstmLmParams& grads) {
    auto vals = named();
    auto gs = grads.named();
    std::vector<ParamRef<S>> out;
    for (size_t i = 0; i < vals.size(); ++i)
      out.push_back({vals[i].first, vals[i].second, gs[i].second});
    return out;
  }
};

/// Unidirectional LSTM next-word model. The padding id doubles as the
/// sequence-start input; the loss is cross entropy summed over every
/// position of an instance.
template <typename S>
class LstmLm {
 public:
  LstmLm(const LstmLmConfig& cfg, size_t vocab_size)
      : cfg_(cfg),
        params_(LstmLmParams<S>::create(vocab_size, cfg.embed_dim, cfg.hidden_dim)) {
    params_.init(cfg.seed);
  }
  explicit LstmLm(LstmLmParams<S> params) : params_(std::move(params)) {}

  LstmLmParams<S>& params() { return params_; }

  /// Sum of per-position cross entropies for one token sequence.
  double sequence_loss(const std::vector<uint32_t>& tokens) const {
    return run(tokens, nullptr);
  }

  double sequence_loss_grad(const std::vector<uint32_t>& tokens,
                            LstmLmParams<S>& grads) const {
    return run(tokens, &grads);
  }

  /// Next-token distribution after consuming `prefix`.
  std::vector<S> next_distribution(const std::vector<uint32_t>& prefix) const {
    const size_t h = params_.hidden_dim;
    std::vector<S> state(h, S(0)), cell(h, S(0));
    std::vector<S> gates(4 * h), extra(2 * h), next(h);
    for (uint32_t id : prefix) {
      detail::rnn_step(params_.cell, params_.embeddings.row(id), state.data(),
                       cell.data(), next.data(), gates.data(), extra.data());
      state = next;
      std::copy(extra.begin(), extra.begin() + static_cast<std::ptrdiff_t>(h),
                cell.begin());
    }
    std::vector<S> logits(params_.vocab_size);
    gemv(params_.w_out, state.data(), logits.data(), false);
    for (size_t i = 0; i < logits.size(); ++i) logits[i] += params_.b_out[i];
    return softmax(logits);
  }

  /// Trains on instance token streams for cfg.epochs, one optimizer step
  /// per instance. Returns the mean per-token loss of each epoch.
  std::vector<double> train(const std::vector<std::vector<uint32_t>>& sequences) {
    LstmLmParams<S> grads = params_.zeros_like();
    auto refs = params_.refs(grads);
    Optimizer<S> opt(cfg_.opt);
    std::vector<double> epoch_losses;
    std::vector<size_t> order(sequences.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (size_t epoch = 1; epoch <= cfg_.epochs; ++epoch) {
      Rng shuffle_rng(derive_seed(cfg_.seed, 0xE90C + epoch));
      shuffle_rng.shuffle(order);
      double loss_sum = 0;
      size_t token_count = 0;
      for (size_t idx : order) {
        const auto& seq = sequences[idx];
        if (seq.empty()) continue;
        zero_grads(refs);
        loss_sum += sequence_loss_grad(seq, grads);
        token_count += seq.size();
        opt.step(refs);
      }
      epoch_losses.push_back(token_count ? loss_sum / static_cast<double>(token_count)
                                         : 0.0);
    }
    return epoch_losses;
  }

 private:
  // Forward (and optionally backward) over one sequence. The input at
  // position t is the embedding of tokens[t-1], with <pad> as start.
  double run(const std::vector<uint32_t>& tokens, LstmLmParams<S>* grads) const {
    const size_t n = tokens.size();
    const size_t h = params_.hidden_dim;
    const size_t v = params_.embed_dim;
    std::vector<uint32_t> inputs(n);
    inputs[0] = Vocabulary::kPad;
    for (size_t t = 1; t < n; ++t) inputs[t] = tokens[t - 1];

    Tensor<S> x = embed(inputs, params_.embeddings);
    Tensor<S> states(n, h);
    Tensor<S> gates(n, 4 * h);
    Tensor<S> extra(n, 2 * h);
    std::vector<S> zero(h, S(0));
    const S* h_prev = zero.data();
    const S* c_prev = zero.data();
    double loss = 0;
    std::vector<std::vector<S>> probs_cache;
    if (grads) probs_cache.resize(n);
    std::vector<S> logits(params_.vocab_size);
    for (size_t t = 0; t < n; ++t) {
      detail::rnn_step(params_.cell, x.row(t), h_prev, c_prev, states.row(t),
                       gates.row(t), extra.row(t));
      gemv(params_.w_out, states.row(t), logits.data(), false);
      for (size_t i = 0; i < logits.size(); ++i) logits[i] += params_.b_out[i];
      auto probs = softmax(logits);
      const double p = static_cast<double>(probs[tokens[t]]);
      loss += -std::log(std::max(p, 1e-300));
      if (grads) probs_cache[t] = std::move(probs);
      h_prev = states.row(t);
      c_prev = extra.row(t);
    }
    if (!grads) return loss;

    Tensor<S> d_states(n, h);
    for (size_t t = 0; t < n; ++t) {
      auto& dlogits = probs_cache[t];
      dlogits[tokens[t]] -= S(1);
      for (size_t i = 0; i < params_.vocab_size; ++i) {
        const S d = dlogits[i];
        if (d == S(0)) continue;
        grads->b_out[i] += d;
        axpy(d, states.row(t), grads->w_out.row(i), h);
        axpy(d, params_.w_out.row(i), d_states.row(t), h);
      }
    }
    Tensor<S> d_x(n, v);
    std::vector<S> dh(h), dh_prev(h), dc(h, S(0)), dc_prev(h);
    std::vector<S> dh_carry(h, S(0));
    for (size_t t = n; t-- > 0;) {
      for (size_t i = 0; i < h; ++i) dh[i] = d_states(t, i) + dh_carry[i];
      std::fill(dh_prev.begin(), dh_prev.end(), S(0));
      std::fill(dc_prev.begin(), dc_prev.end(), S(0));
      const S* hp = t == 0 ? zero.data() : states.row(t - 1);
      const S* cp = t == 0 ? zero.data() : extra.row(t - 1);
      detail::rnn_step_backward(params_.cell, x.row(t), hp, cp, gates.row(t),
                                extra.row(t), dh.data(), dc.data(),
                                dh_prev.data(), dc_prev.data(), d_x.row(t),
                                grads->cell);
      dh_carry = dh_prev;
      dc = dc_prev;
    }
    embed_backward(inputs, d_x, grads->embeddings);
    return loss;
  }

  LstmLmConfig cfg_;
  LstmLmParams<S> params_;
};

/// Scores the blank with the LM distribution after consuming the context
/// and visible target prefix, restricted to non-stopword context words.
template <typename S>
std::optional<Prediction> lstm_lm_score_blank(const LstmLm<S>& lm,
                                              const Vocabulary& vocab,
                                              const Instance& inst,
                                              const CandidateSet& cands,
                                              const TokenSet& stopwords) {
  std::vector<const CandidateSet::Entry*> eligible;
  for (const auto& e : cands.entries())
    if (!stopwords.count(e.token)) eligible.push_back(&e);
  if (eligible.empty()) return std::nullopt;
  std::vector<uint32_t> prefix;
  for (const auto& t : flatten_context(inst)) prefix.push_back(vocab.id(t));
  for (const auto& t : query_tokens(inst)) prefix.push_back(vocab.id(t));
  auto dist = lm.next_distribution(prefix);
  std::vector<ScoredCandidate> scored;
  scored.reserve(eligible.size());
  for (const auto* e : eligible)
    scored.push_back({e->token, static_cast<double>(dist[vocab.id(e->token)])});
  return rank_candidates(std::move(scored));
}

}  // namespace cloze
