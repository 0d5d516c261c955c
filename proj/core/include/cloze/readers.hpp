#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cloze/candidates.hpp"
#include "cloze/features.hpp"
#include "cloze/nn.hpp"
#include "cloze/optimizer.hpp"
#include "cloze/prediction.hpp"
#include "cloze/types.hpp"
#include "cloze/vocab.hpp"

namespace cloze {

enum class ReaderKind { Stanford, StanfordMod, AttentionSum, GatedAttention };

inline const char* reader_kind_name(ReaderKind k) {
  switch (k) {
    case ReaderKind::Stanford: return "stanford";
    case ReaderKind::StanfordMod: return "stanford-mod";
    case ReaderKind::AttentionSum: return "as";
    case ReaderKind::GatedAttention: return "ga";
  }
  return "?";
}

inline std::optional<ReaderKind> reader_kind_from_name(const std::string& s) {
  if (s == "stanford") return ReaderKind::Stanford;
  if (s == "stanford-mod") return ReaderKind::StanfordMod;
  if (s == "as") return ReaderKind::AttentionSum;
  if (s == "ga") return ReaderKind::GatedAttention;
  return std::nullopt;
}

struct ReaderConfig {
  ReaderKind kind = ReaderKind::AttentionSum;
  size_t embed_dim = 128;
  size_t hidden_dim = 128;
  CellKind cell = CellKind::Gru;
  bool use_features = false;
  size_t ga_hops = 3;
  bool ga_unit_gates = false;  // debug: gates replaced by all-ones vectors

  size_t doc_hops() const {
    return kind == ReaderKind::GatedAttention ? ga_hops : 1;
  }
  size_t doc_input_dim() const {
    return embed_dim + (use_features ? kNumFeatures : 0);
  }
};

/// All learnable arrays of one reader. Doubles as the gradient holder.
template <typename S>
struct ReaderParams {
  ReaderConfig config;
  size_t vocab_size = 0;
  Tensor<S> embeddings;      // [V x v]
  Tensor<S> out_embeddings;  // [V x 2H], Stanford only
  Tensor<S> att_bilinear;    // [2H x 2H], Stanford variants
  Tensor<S> out_matcher;     // [v x 2H], modified Stanford only
  std::vector<RnnCellParams<S>> doc_fwd, doc_bwd;  // one per hop
  RnnCellParams<S> query_fwd, query_bwd;

  static ReaderParams create(const ReaderConfig& cfg, size_t vocab_size) {
    ReaderParams p;
    p.config = cfg;
    p.vocab_size = vocab_size;
    const size_t h2 = 2 * cfg.hidden_dim;
    p.embeddings = Tensor<S>(vocab_size, cfg.embed_dim);
    if (cfg.kind == ReaderKind::Stanford)
      p.out_embeddings = Tensor<S>(vocab_size, h2);
    if (cfg.kind == ReaderKind::Stanford || cfg.kind == ReaderKind::StanfordMod)
      p.att_bilinear = Tensor<S>(h2, h2);
    if (cfg.kind == ReaderKind::StanfordMod)
      p.out_matcher = Tensor<S>(cfg.embed_dim, h2);
    for (size_t hop = 0; hop < cfg.doc_hops(); ++hop) {
      const size_t in = hop == 0 ? cfg.doc_input_dim() : h2;
      p.doc_fwd.push_back(RnnCellParams<S>::create(cfg.cell, in, cfg.hidden_dim));
      p.doc_bwd.push_back(RnnCellParams<S>::create(cfg.cell, in, cfg.hidden_dim));
    }
    p.query_fwd = RnnCellParams<S>::create(cfg.cell, cfg.embed_dim, cfg.hidden_dim);
    p.query_bwd = RnnCellParams<S>::create(cfg.cell, cfg.embed_dim, cfg.hidden_dim);
    return p;
  }

  /// No pretrained vectors anywhere: embeddings start uniform(-0.05, 0.05).
  void init(uint64_t seed) {
    Rng rng(derive_seed(seed, 0x1217));
    fill_uniform(embeddings, rng, -0.05, 0.05);
    if (out_embeddings.size()) fill_uniform(out_embeddings, rng, -0.05, 0.05);
    if (att_bilinear.size()) {
      const double s = std::sqrt(1.0 / static_cast<double>(att_bilinear.cols()));
      fill_uniform(att_bilinear, rng, -s, s);
    }
    if (out_matcher.size()) {
      const double s = std::sqrt(1.0 / static_cast<double>(out_matcher.cols()));
      fill_uniform(out_matcher, rng, -s, s);
    }
    for (size_t hop = 0; hop < doc_fwd.size(); ++hop) {
      init_rnn_params(doc_fwd[hop], rng);
      init_rnn_params(doc_bwd[hop], rng);
    }
    init_rnn_params(query_fwd, rng);
    init_rnn_params(query_bwd, rng);
  }

  ReaderParams zeros_like() const { return create(config, vocab_size); }

  /// Canonical (name, tensor) order shared by optimizer and checkpoints.
  std::vector<std::pair<std::string, Tensor<S>*>> named() {
    std::vector<std::pair<std::string, Tensor<S>*>> out;
    out.emplace_back("embeddings", &embeddings);
    if (out_embeddings.size()) out.emplace_back("out_embeddings", &out_embeddings);
    if (att_bilinear.size()) out.emplace_back("att_bilinear", &att_bilinear);
    if (out_matcher.size()) out.emplace_back("out_matcher", &out_matcher);
    auto add_cell = [&](const std::string& prefix, RnnCellParams<S>& c) {
      out.emplace_back(prefix + ".w", &c.w);
      out.emplace_back(prefix + ".u", &c.u);
      out.emplace_back(prefix + ".b", &c.b);
    };
    for (size_t hop = 0; hop < doc_fwd.size(); ++hop) {
      add_cell("doc" + std::to_string(hop) + ".fwd", doc_fwd[hop]);
      add_cell("doc" + std::to_string(hop) + ".bwd", doc_bwd[hop]);
    }
    add_cell("query.fwd", query_fwd);
    add_cell("query.bwd", query_bwd);
    return out;
  }

  std::vector<ParamRef<S>> refs(ReaderParams& grads) {
    auto vals = named();
    auto gs = grads.named();
    std::vector<ParamRef<S>> out;
    for (size_t i = 0; i < vals.size(); ++i)
      out.push_back({vals[i].first, vals[i].second, gs[i].second});
    return out;
  }

  template <typename T>
  ReaderParams<T> cast() const {
    ReaderParams<T> out = ReaderParams<T>::create(config, vocab_size);
    auto self = const_cast<ReaderParams*>(this)->named();
    auto dst = out.named();
    for (size_t i = 0; i < self.size(); ++i)
      *dst[i].second = self[i].second->template cast<T>();
    return out;
  }
};

/// An instance resolved against a vocabulary: token ids, candidate set,
/// optional feature rows. Cheap to build, safe to cache.
struct PreparedInstance {
  std::vector<Token> context_tokens;
  std::vector<uint32_t> doc_ids;
  std::vector<uint32_t> query_ids;  // visible query tokens plus <blank>
  std::vector<uint32_t> cand_ids;   // aligned with candidates.entries()
  CandidateSet candidates;
  int target_candidate = -1;
  Token target_word;
  PositionFeatures features;  // populated when the reader uses features
};

inline PreparedInstance prepare_instance(const Instance& inst,
                                         const Vocabulary& vocab,
                                         const TokenSet& punctuation,
                                         bool with_features) {
  PreparedInstance prep;
  prep.context_tokens = flatten_context(inst);
  if (prep.context_tokens.empty())
    throw DataError("degenerate instance: empty context (id=" + inst.id + ")");
  prep.doc_ids.reserve(prep.context_tokens.size());
  for (const auto& t : prep.context_tokens) prep.doc_ids.push_back(vocab.id(t));
  for (const auto& t : query_tokens(inst)) prep.query_ids.push_back(vocab.id(t));
  prep.query_ids.push_back(Vocabulary::kBlank);
  prep.candidates = extract_candidates(inst, punctuation);
  for (const auto& e : prep.candidates.entries())
    prep.cand_ids.push_back(vocab.id(e.token));
  prep.target_candidate = prep.candidates.index_of(inst.target_word);
  prep.target_word = inst.target_word;
  if (with_features) prep.features = compute_features(inst);
  return prep;
}

// ---- attention ops ---------------------------------------------------------

template <typename S>
std::vector<S> inner_scores(const Tensor<S>& h, const std::vector<S>& g) {
  std::vector<S> s(h.rows());
  for (size_t t = 0; t < h.rows(); ++t) s[t] = dot(h.row(t), g.data(), h.cols());
  return s;
}

template <typename S>
std::vector<S> bilinear_scores(const Tensor<S>& h, const std::vector<S>& g,
                               const Tensor<S>& w) {
  std::vector<S> wg(w.rows());
  gemv(w, g.data(), wg.data(), /*accumulate=*/false);
  return inner_scores(h, wg);
}

/// alpha = softmax_i(h_i . g). Throws on an empty document.
template <typename S>
std::vector<S> attend_inner(const Tensor<S>& h, const std::vector<S>& g) {
  return softmax(inner_scores(h, g));
}

/// alpha = softmax_i(h_i^T W g).
template <typename S>
std::vector<S> attend_bilinear(const Tensor<S>& h, const std::vector<S>& g,
                               const Tensor<S>& w) {
  return softmax(bilinear_scores(h, g, w));
}

// ---- the reader ------------------------------------------------------------

template <typename S>
class Reader {
 public:
  Reader(const ReaderConfig& cfg, size_t vocab_size, uint64_t seed)
      : params_(ReaderParams<S>::create(cfg, vocab_size)) {
    params_.init(seed);
  }
  explicit Reader(ReaderParams<S> params) : params_(std::move(params)) {}

  const ReaderConfig& config() const { return params_.config; }
  ReaderParams<S>& params() { return params_; }
  const ReaderParams<S>& params() const { return params_; }

  /// Ranked candidate scores. Pointer readers report raw attention-mass
  /// sums; Stanford variants report raw match scores.
  Prediction predict(const PreparedInstance& prep) const {
    Fwd fwd;
    forward(prep, fwd);
    std::vector<ScoredCandidate> scored;
    scored.reserve(prep.candidates.size());
    for (size_t a = 0; a < prep.candidates.size(); ++a)
      scored.push_back({prep.candidates.entries()[a].token,
                        static_cast<double>(fwd.cand_scores[a])});
    return rank_candidates(std::move(scored));
  }

  /// Negative log probability of the target under the candidate
  /// normalization. Throws when the target is not a candidate.
  double loss(const PreparedInstance& prep) const {
    Fwd fwd;
    forward(prep, fwd);
    return loss_from_forward(prep, fwd);
  }

  /// Loss plus gradient accumulation into `grads` (same shapes as params).
  double loss_grad(const PreparedInstance& prep, ReaderParams<S>& grads) const {
    Fwd fwd;
    forward(prep, fwd);
    const double loss = loss_from_forward(prep, fwd);
    backward(prep, fwd, grads);
    return loss;
  }

  /// The final attention distribution over context positions.
  std::vector<S> attention(const PreparedInstance& prep) const {
    Fwd fwd;
    forward(prep, fwd);
    return fwd.alpha;
  }

  /// Final-hop document encoding [T x 2H]; used by verification code.
  Tensor<S> document_encoding(const PreparedInstance& prep) const {
    Fwd fwd;
    forward(prep, fwd);
    return fwd.hop_outputs.back();
  }

 private:
  struct Fwd {
    std::vector<Tensor<S>> hop_inputs;   // X per hop; hop 0 is embeddings(+features)
    std::vector<Tensor<S>> hop_outputs;  // D per hop [T x 2H]
    std::vector<BiRnnTrace<S>> hop_traces;
    std::vector<Tensor<S>> hop_attn;  // A per intermediate hop [T x Tq]
    std::vector<Tensor<S>> hop_qa;    // A Q per intermediate hop [T x 2H]
    Tensor<S> x_q;                    // [Tq x v]
    Tensor<S> q_seq;                  // [Tq x 2H]
    BiRnnTrace<S> q_trace;
    std::vector<S> g;           // [2H]
    std::vector<S> att_scores;  // [T]
    std::vector<S> alpha;       // [T]
    std::vector<S> ctx;         // c (Stanford variants) [2H]
    std::vector<S> wc;          // out_matcher c (modified) [v]
    std::vector<S> cand_scores;
    std::vector<S> cand_probs;
  };

  void forward(const PreparedInstance& prep, Fwd& fwd) const {
    const ReaderConfig& cfg = params_.config;
    if (prep.candidates.size() == 0)
      throw DataError("degenerate instance: empty candidate set");
    const size_t t_doc = prep.doc_ids.size();
    const size_t h2 = 2 * cfg.hidden_dim;

    // Document input: embeddings, optionally widened by the four features.
    Tensor<S> x0(t_doc, cfg.doc_input_dim());
    for (size_t t = 0; t < t_doc; ++t) {
      const uint32_t id = prep.doc_ids[t];
      if (id >= params_.embeddings.rows())
        throw DataError("embed: id out of range");
      std::copy(params_.embeddings.row(id),
                params_.embeddings.row(id) + cfg.embed_dim, x0.row(t));
      if (cfg.use_features)
        for (size_t f = 0; f < kNumFeatures; ++f)
          x0(t, cfg.embed_dim + f) = static_cast<S>(prep.features.at(t, f));
    }

    // Query encoding, shared by every hop.
    fwd.x_q = embed(prep.query_ids, params_.embeddings);
    fwd.q_seq = birnn_forward(fwd.x_q, params_.query_fwd, params_.query_bwd,
                              &fwd.q_trace);
    fwd.g = encode_query_from_birnn(fwd.q_seq, fwd.x_q.rows());

    const size_t hops = cfg.doc_hops();
    fwd.hop_inputs.resize(hops);
    fwd.hop_outputs.resize(hops);
    fwd.hop_traces.resize(hops);
    fwd.hop_inputs[0] = std::move(x0);
    for (size_t k = 0; k < hops; ++k) {
      fwd.hop_outputs[k] =
          birnn_forward(fwd.hop_inputs[k], params_.doc_fwd[k], params_.doc_bwd[k],
                        &fwd.hop_traces[k]);
      if (k + 1 < hops) {
        const Tensor<S>& d = fwd.hop_outputs[k];
        if (cfg.ga_unit_gates) {
          fwd.hop_inputs[k + 1] = d;
        } else {
          Tensor<S> scores(t_doc, fwd.q_seq.rows());
          gemm(d, false, fwd.q_seq, true, scores, false);
          Tensor<S> attn(t_doc, fwd.q_seq.rows());
          for (size_t t = 0; t < t_doc; ++t) {
            std::vector<S> row(scores.row(t), scores.row(t) + scores.cols());
            auto sm = softmax(row);
            std::copy(sm.begin(), sm.end(), attn.row(t));
          }
          Tensor<S> qa(t_doc, h2);
          gemm(attn, false, fwd.q_seq, false, qa, false);
          Tensor<S> gated(t_doc, h2);
          for (size_t i = 0; i < gated.size(); ++i) gated[i] = d[i] * qa[i];
          fwd.hop_attn.push_back(std::move(attn));
          fwd.hop_qa.push_back(std::move(qa));
          fwd.hop_inputs[k + 1] = std::move(gated);
        }
      }
    }

    const Tensor<S>& h = fwd.hop_outputs.back();
    switch (cfg.kind) {
      case ReaderKind::Stanford:
      case ReaderKind::StanfordMod:
        fwd.att_scores = bilinear_scores(h, fwd.g, params_.att_bilinear);
        break;
      case ReaderKind::AttentionSum:
      case ReaderKind::GatedAttention:
        fwd.att_scores = inner_scores(h, fwd.g);
        break;
    }
    fwd.alpha = softmax(fwd.att_scores);

    const auto& entries = prep.candidates.entries();
    fwd.cand_scores.assign(entries.size(), S(0));
    if (cfg.kind == ReaderKind::AttentionSum ||
        cfg.kind == ReaderKind::GatedAttention) {
      for (size_t a = 0; a < entries.size(); ++a)
        for (size_t pos : entries[a].positions)
          fwd.cand_scores[a] += fwd.alpha[pos];
    } else {
      // c = sum_i alpha_i h_i
      fwd.ctx.assign(h2, S(0));
      for (size_t t = 0; t < t_doc; ++t)
        axpy(fwd.alpha[t], h.row(t), fwd.ctx.data(), h2);
      if (cfg.kind == ReaderKind::Stanford) {
        for (size_t a = 0; a < entries.size(); ++a)
          fwd.cand_scores[a] = dot(params_.out_embeddings.row(prep.cand_ids[a]),
                                   fwd.ctx.data(), h2);
      } else {
        fwd.wc.assign(cfg.embed_dim, S(0));
        gemv(params_.out_matcher, fwd.ctx.data(), fwd.wc.data(), false);
        for (size_t a = 0; a < entries.size(); ++a)
          fwd.cand_scores[a] = dot(params_.embeddings.row(prep.cand_ids[a]),
                                   fwd.wc.data(), cfg.embed_dim);
      }
    }
  }

  double loss_from_forward(const PreparedInstance& prep, Fwd& fwd) const {
    if (prep.target_candidate < 0)
      throw DataError("reader loss: target word '" + prep.target_word +
                      "' is not a candidate");
    const ReaderConfig& cfg = params_.config;
    double loss = 0;
    if (cfg.kind == ReaderKind::AttentionSum ||
        cfg.kind == ReaderKind::GatedAttention) {
      double z = 0;
      for (S p : fwd.cand_scores) z += static_cast<double>(p);
      const double pt =
          static_cast<double>(fwd.cand_scores[prep.target_candidate]);
      loss = -(std::log(pt) - std::log(z));
    } else {
      fwd.cand_probs = softmax(fwd.cand_scores);
      loss = -std::log(
          static_cast<double>(fwd.cand_probs[prep.target_candidate]));
    }
    if (!std::isfinite(loss)) throw VerifyError("reader loss is not finite");
    return loss;
  }

  void backward(const PreparedInstance& prep, const Fwd& fwd,
                ReaderParams<S>& grads) const {
    const ReaderConfig& cfg = params_.config;
    const size_t t_doc = prep.doc_ids.size();
    const size_t h2 = 2 * cfg.hidden_dim;
    const Tensor<S>& h = fwd.hop_outputs.back();
    const auto& entries = prep.candidates.entries();

    std::vector<S> d_alpha(t_doc, S(0));
    Tensor<S> d_h(t_doc, h2);
    std::vector<S> d_g(h2, S(0));

    if (cfg.kind == ReaderKind::AttentionSum ||
        cfg.kind == ReaderKind::GatedAttention) {
      double z = 0;
      for (S p : fwd.cand_scores) z += static_cast<double>(p);
      const double pt =
          static_cast<double>(fwd.cand_scores[prep.target_candidate]);
      for (size_t a = 0; a < entries.size(); ++a) {
        const double d_pa =
            1.0 / z -
            (a == static_cast<size_t>(prep.target_candidate) ? 1.0 / pt : 0.0);
        for (size_t pos : entries[a].positions)
          d_alpha[pos] += static_cast<S>(d_pa);
      }
    } else {
      // d scores = probs - onehot(target)
      std::vector<S> d_scores = fwd.cand_probs;
      d_scores[prep.target_candidate] -= S(1);
      std::vector<S> d_c(h2, S(0));
      if (cfg.kind == ReaderKind::Stanford) {
        for (size_t a = 0; a < entries.size(); ++a) {
          const S ds = d_scores[a];
          if (ds == S(0)) continue;
          axpy(ds, params_.out_embeddings.row(prep.cand_ids[a]), d_c.data(), h2);
          axpy(ds, fwd.ctx.data(), grads.out_embeddings.row(prep.cand_ids[a]), h2);
        }
      } else {
        std::vector<S> d_wc(cfg.embed_dim, S(0));
        for (size_t a = 0; a < entries.size(); ++a) {
          const S ds = d_scores[a];
          if (ds == S(0)) continue;
          axpy(ds, params_.embeddings.row(prep.cand_ids[a]), d_wc.data(),
               cfg.embed_dim);
          axpy(ds, fwd.wc.data(), grads.embeddings.row(prep.cand_ids[a]),
               cfg.embed_dim);
        }
        ger(grads.out_matcher, d_wc.data(), fwd.ctx.data());
        gemv_t(params_.out_matcher, d_wc.data(), d_c.data(), /*accumulate=*/false);
      }
      // c = sum alpha_i h_i
      for (size_t t = 0; t < t_doc; ++t) {
        d_alpha[t] += dot(d_c.data(), h.row(t), h2);
        axpy(fwd.alpha[t], d_c.data(), d_h.row(t), h2);
      }
    }

    // attention softmax and scores
    std::vector<S> d_scores = softmax_backward(fwd.alpha, d_alpha);
    if (cfg.kind == ReaderKind::Stanford || cfg.kind == ReaderKind::StanfordMod) {
      std::vector<S> wg(h2, S(0));
      gemv(params_.att_bilinear, fwd.g.data(), wg.data(), false);
      std::vector<S> hbar(h2, S(0));  // sum_t ds_t h_t
      for (size_t t = 0; t < t_doc; ++t) {
        axpy(d_scores[t], wg.data(), d_h.row(t), h2);
        axpy(d_scores[t], h.row(t), hbar.data(), h2);
      }
      ger(grads.att_bilinear, hbar.data(), fwd.g.data());
      gemv_t(params_.att_bilinear, hbar.data(), d_g.data(), /*accumulate=*/true);
    } else {
      for (size_t t = 0; t < t_doc; ++t) {
        axpy(d_scores[t], fwd.g.data(), d_h.row(t), h2);
        axpy(d_scores[t], h.row(t), d_g.data(), h2);
      }
    }

    // document hops, last to first
    Tensor<S> d_q_seq(fwd.q_seq.rows(), h2);
    Tensor<S> d_d = std::move(d_h);
    for (size_t k = fwd.hop_outputs.size(); k-- > 0;) {
      Tensor<S> d_x = birnn_backward(fwd.hop_inputs[k], params_.doc_fwd[k],
                                     params_.doc_bwd[k], fwd.hop_traces[k], d_d,
                                     grads.doc_fwd[k], grads.doc_bwd[k]);
      if (k == 0) {
        // into embeddings (feature columns are inputs, not parameters)
        for (size_t t = 0; t < t_doc; ++t)
          axpy(S(1), d_x.row(t), grads.embeddings.row(prep.doc_ids[t]),
               cfg.embed_dim);
        break;
      }
      const Tensor<S>& d_prev_out = fwd.hop_outputs[k - 1];
      Tensor<S> d_d_prev(t_doc, h2);
      if (cfg.ga_unit_gates) {
        d_d_prev = std::move(d_x);
      } else {
        const Tensor<S>& attn = fwd.hop_attn[k - 1];
        const Tensor<S>& qa = fwd.hop_qa[k - 1];
        Tensor<S> d_qa(t_doc, h2);
        for (size_t i = 0; i < d_qa.size(); ++i) {
          d_d_prev[i] = d_x[i] * qa[i];
          d_qa[i] = d_x[i] * d_prev_out[i];
        }
        Tensor<S> d_attn(t_doc, attn.cols());
        gemm(d_qa, false, fwd.q_seq, true, d_attn, false);
        gemm(attn, true, d_qa, false, d_q_seq, true);
        Tensor<S> d_attn_scores(t_doc, attn.cols());
        for (size_t t = 0; t < t_doc; ++t) {
          std::vector<S> row_p(attn.row(t), attn.row(t) + attn.cols());
          std::vector<S> row_d(d_attn.row(t), d_attn.row(t) + attn.cols());
          auto ds = softmax_backward(row_p, row_d);
          std::copy(ds.begin(), ds.end(), d_attn_scores.row(t));
        }
        gemm(d_attn_scores, false, fwd.q_seq, false, d_d_prev, true);
        gemm(d_attn_scores, true, d_prev_out, false, d_q_seq, true);
      }
      d_d = std::move(d_d_prev);
    }

    // query side
    encode_query_backward(d_g, fwd.x_q.rows(), d_q_seq);
    Tensor<S> d_xq =
        birnn_backward(fwd.x_q, params_.query_fwd, params_.query_bwd,
                       fwd.q_trace, d_q_seq, grads.query_fwd, grads.query_bwd);
    embed_backward(prep.query_ids, d_xq, grads.embeddings);
  }

  ReaderParams<S> params_;
};

/// Per-word attention-mass aggregation over all context positions,
/// punctuation words included; the grand total must equal the full
/// attention mass. Used by the pointer-sum verification.
template <typename S>
double pointer_mass_total(const std::vector<S>& alpha,
                          const std::vector<Token>& context_tokens) {
  std::unordered_map<Token, double> per_word;
  for (size_t i = 0; i < context_tokens.size(); ++i)
    per_word[context_tokens[i]] += static_cast<double>(alpha[i]);
  double total = 0;
  for (const auto& [w, m] : per_word) total += m;
  return total;
}

}  // namespace cloze
