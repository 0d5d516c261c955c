#pragma once

#include <cstdint>
#include <limits>
#include <type_traits>
#include <vector>

#include "cloze/error.hpp"
#include "cloze/rng.hpp"
#include "cloze/tensor.hpp"

namespace cloze {

enum class CellKind { Gru, Lstm };

inline const char* cell_kind_name(CellKind k) {
  return k == CellKind::Gru ? "gru" : "lstm";
}

template <typename S>
S sigmoid(S x) {
  return S(1) / (S(1) + std::exp(-x));
}

/// Gate-stacked recurrent cell parameters. GRU stacks r,z,h; LSTM stacks
/// i,f,o,g. The same struct doubles as the gradient holder.
template <typename S>
struct RnnCellParams {
  CellKind kind = CellKind::Gru;
  size_t input_dim = 0;
  size_t hidden_dim = 0;
  Tensor<S> w;  // [G*H x input_dim]
  Tensor<S> u;  // [G*H x H]
  Tensor<S> b;  // [G*H]

  size_t gates() const { return kind == CellKind::Gru ? 3 : 4; }

  static RnnCellParams create(CellKind kind, size_t input_dim, size_t hidden_dim) {
    RnnCellParams p;
    p.kind = kind;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    const size_t g = p.gates() * hidden_dim;
    p.w = Tensor<S>(g, input_dim);
    p.u = Tensor<S>(g, hidden_dim);
    p.b = Tensor<S>(g);
    return p;
  }

  RnnCellParams zeros_like() const {
    return create(kind, input_dim, hidden_dim);
  }
};

// ---- initialization --------------------------------------------------------

template <typename S>
void fill_uniform(Tensor<S>& t, Rng& rng, double lo, double hi) {
  for (size_t i = 0; i < t.size(); ++i)
    t[i] = static_cast<S>(rng.uniform(lo, hi));
}

/// Orthogonalizes the rows (or columns when rows > cols) of a Gaussian
/// draw with modified Gram-Schmidt, then scales by `gain`.
template <typename S>
void fill_orthogonal(Tensor<S>& t, Rng& rng, double gain = 1.0) {
  const size_t r = t.rows(), c = t.cols();
  const bool wide = r <= c;
  const size_t nvec = wide ? r : c;
  const size_t dim = wide ? c : r;
  std::vector<std::vector<double>> q(nvec, std::vector<double>(dim));
  for (auto& v : q)
    for (auto& x : v) x = rng.normal();
  for (size_t i = 0; i < nvec; ++i) {
    for (;;) {
      for (size_t j = 0; j < i; ++j) {
        double proj = 0;
        for (size_t k = 0; k < dim; ++k) proj += q[i][k] * q[j][k];
        for (size_t k = 0; k < dim; ++k) q[i][k] -= proj * q[j][k];
      }
      double norm = 0;
      for (double x : q[i]) norm += x * x;
      norm = std::sqrt(norm);
      if (norm > 1e-8) {
        for (double& x : q[i]) x /= norm;
        break;
      }
      for (double& x : q[i]) x = rng.normal();  // degenerate draw, retry
    }
  }
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j)
      t(i, j) = static_cast<S>(gain * (wide ? q[i][j] : q[j][i]));
}

/// Recurrent blocks get per-gate orthogonal init, input blocks scaled
/// uniform, biases zero.
template <typename S>
void init_rnn_params(RnnCellParams<S>& p, Rng& rng) {
  const size_t h = p.hidden_dim;
  const double wscale = std::sqrt(1.0 / static_cast<double>(p.input_dim));
  fill_uniform(p.w, rng, -wscale, wscale);
  for (size_t g = 0; g < p.gates(); ++g) {
    Tensor<S> block(h, h);
    fill_orthogonal(block, rng);
    for (size_t i = 0; i < h; ++i)
      for (size_t j = 0; j < h; ++j) p.u(g * h + i, j) = block(i, j);
  }
  p.b.zero();
}

// ---- embedding -------------------------------------------------------------

/// Row i of the result is table row ids[i]. Throws on out-of-range ids.
template <typename S>
Tensor<S> embed(const std::vector<uint32_t>& ids, const Tensor<S>& table) {
  const size_t v = table.cols();
  Tensor<S> out(ids.size(), v);
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= table.rows())
      throw DataError("embed: id " + std::to_string(ids[i]) +
                      " out of range (vocab " + std::to_string(table.rows()) + ")");
    std::copy(table.row(ids[i]), table.row(ids[i]) + v, out.row(i));
  }
  return out;
}

template <typename S>
void embed_backward(const std::vector<uint32_t>& ids, const Tensor<S>& d_out,
                    Tensor<S>& d_table) {
  const size_t v = d_table.cols();
  for (size_t i = 0; i < ids.size(); ++i)
    axpy(S(1), d_out.row(i), d_table.row(ids[i]), v);
}

// ---- softmax ---------------------------------------------------------------

/// Numerically stable softmax over a score vector. Masked positions carry
/// -inf and come out exactly zero. Throws when empty or fully masked.
template <typename S>
std::vector<S> softmax(const std::vector<S>& scores) {
  if (scores.empty()) throw DataError("softmax: empty input");
  S mx = -std::numeric_limits<S>::infinity();
  for (S s : scores) mx = std::max(mx, s);
  if (!(mx > -std::numeric_limits<S>::infinity()))
    throw DataError("softmax: all positions masked");
  std::vector<S> out(scores.size());
  S z = S(0);
  for (size_t i = 0; i < scores.size(); ++i) {
    const S e = scores[i] == -std::numeric_limits<S>::infinity()
                    ? S(0)
                    : std::exp(scores[i] - mx);
    out[i] = e;
    z += e;
  }
  for (S& e : out) e /= z;
  return out;
}

/// d_scores from d_probs: ds_i = p_i * (dp_i - sum_j dp_j p_j).
template <typename S>
std::vector<S> softmax_backward(const std::vector<S>& probs,
                                const std::vector<S>& d_probs) {
  S acc = S(0);
  for (size_t i = 0; i < probs.size(); ++i) acc += d_probs[i] * probs[i];
  std::vector<S> out(probs.size());
  for (size_t i = 0; i < probs.size(); ++i)
    out[i] = probs[i] * (d_probs[i] - acc);
  return out;
}

// ---- recurrent encoders ------------------------------------------------------

/// Per-direction activation cache for backprop through time.
template <typename S>
struct RnnTrace {
  Tensor<S> h;      // [T x H] state after each step
  Tensor<S> gates;  // [T x G*H] post-activation gate values
  Tensor<S> extra;  // GRU: r*h_prev [T x H]; LSTM: cell state and tanh(cell) [T x 2H]
};

template <typename S>
struct BiRnnTrace {
  RnnTrace<S> fwd, bwd;
  size_t valid = 0;
};

namespace detail {

/// pre[row_begin..row_end) += rows of m times x.
template <typename S>
void gemv_acc_rows(const Tensor<S>& m, const S* x, S* pre, size_t row_begin,
                   size_t row_end) {
  const size_t c = m.cols();
  for (size_t i = row_begin; i < row_end; ++i) {
    S acc = pre[i];
    const S* mi = m.row(i);
    for (size_t j = 0; j < c; ++j) acc += mi[j] * x[j];
    pre[i] = acc;
  }
}

template <typename S>
void rnn_step(const RnnCellParams<S>& p, const S* x, const S* h_prev,
              const S* c_prev, S* h_out, S* gates, S* extra) {
  const size_t h = p.hidden_dim;
  std::vector<S> pre(p.gates() * h);
  std::copy(p.b.data(), p.b.data() + pre.size(), pre.data());
  gemv_acc_rows(p.w, x, pre.data(), 0, p.gates() * h);
  if (p.kind == CellKind::Gru) {
    // r,z from h_prev; the candidate sees r (.) h_prev through u.
    gemv_acc_rows(p.u, h_prev, pre.data(), 0, 2 * h);
    S* r = gates;
    S* z = gates + h;
    S* cand = gates + 2 * h;
    S* rh = extra;
    for (size_t i = 0; i < h; ++i) {
      r[i] = sigmoid(pre[i]);
      z[i] = sigmoid(pre[h + i]);
      rh[i] = r[i] * h_prev[i];
    }
    gemv_acc_rows(p.u, rh, pre.data(), 2 * h, 3 * h);
    for (size_t i = 0; i < h; ++i) {
      cand[i] = std::tanh(pre[2 * h + i]);
      h_out[i] = z[i] * h_prev[i] + (S(1) - z[i]) * cand[i];
    }
  } else {
    gemv_acc_rows(p.u, h_prev, pre.data(), 0, 4 * h);
    S* ig = gates;
    S* fg = gates + h;
    S* og = gates + 2 * h;
    S* gg = gates + 3 * h;
    S* cell = extra;
    S* tcell = extra + h;
    for (size_t i = 0; i < h; ++i) {
      ig[i] = sigmoid(pre[i]);
      fg[i] = sigmoid(pre[h + i]);
      og[i] = sigmoid(pre[2 * h + i]);
      gg[i] = std::tanh(pre[3 * h + i]);
      cell[i] = fg[i] * c_prev[i] + ig[i] * gg[i];
      tcell[i] = std::tanh(cell[i]);
      h_out[i] = og[i] * tcell[i];
    }
  }
}

template <typename S>
void rnn_step_backward(const RnnCellParams<S>& p, const S* x, const S* h_prev,
                       const S* c_prev, const S* gates, const S* extra,
                       const S* dh, const S* dc_in, S* dh_prev, S* dc_prev,
                       S* dx, RnnCellParams<S>& g) {
  const size_t h = p.hidden_dim;
  std::vector<S> dpre(p.gates() * h, S(0));
  if (p.kind == CellKind::Gru) {
    const S* r = gates;
    const S* z = gates + h;
    const S* cand = gates + 2 * h;
    std::vector<S> drh(h);
    for (size_t i = 0; i < h; ++i) {
      const S dz = dh[i] * (h_prev[i] - cand[i]);
      const S dcand = dh[i] * (S(1) - z[i]);
      dh_prev[i] += dh[i] * z[i];
      dpre[2 * h + i] = dcand * (S(1) - cand[i] * cand[i]);
      dpre[h + i] = dz * z[i] * (S(1) - z[i]);
    }
    // through u_cand: drh = u_cand^T dpre_cand
    for (size_t i = 0; i < h; ++i) drh[i] = S(0);
    for (size_t i = 0; i < h; ++i) {
      const S d = dpre[2 * h + i];
      if (d == S(0)) continue;
      const S* ui = p.u.row(2 * h + i);
      for (size_t j = 0; j < h; ++j) drh[j] += d * ui[j];
    }
    for (size_t i = 0; i < h; ++i) {
      const S dr = drh[i] * h_prev[i];
      dh_prev[i] += drh[i] * r[i];
      dpre[i] = dr * r[i] * (S(1) - r[i]);
    }
  } else {
    const S* ig = gates;
    const S* fg = gates + h;
    const S* og = gates + 2 * h;
    const S* gg = gates + 3 * h;
    const S* tcell = extra + h;
    for (size_t i = 0; i < h; ++i) {
      const S dog = dh[i] * tcell[i];
      S dcell = dh[i] * og[i] * (S(1) - tcell[i] * tcell[i]) + dc_in[i];
      const S dig = dcell * gg[i];
      const S dfg = dcell * c_prev[i];
      const S dgg = dcell * ig[i];
      dc_prev[i] = dcell * fg[i];
      dpre[i] = dig * ig[i] * (S(1) - ig[i]);
      dpre[h + i] = dfg * fg[i] * (S(1) - fg[i]);
      dpre[2 * h + i] = dog * og[i] * (S(1) - og[i]);
      dpre[3 * h + i] = dgg * (S(1) - gg[i] * gg[i]);
    }
  }
  // Shared accumulation into parameter grads and upstream signals.
  const size_t rows = p.gates() * h;
  for (size_t i = 0; i < rows; ++i) {
    const S d = dpre[i];
    if (d == S(0)) continue;
    g.b[i] += d;
    axpy(d, x, g.w.row(i), p.input_dim);
    if (dx != nullptr) {
      const S* wi = p.w.row(i);
      for (size_t j = 0; j < p.input_dim; ++j) dx[j] += d * wi[j];
    }
  }
  if (p.kind == CellKind::Gru) {
    const S* rh = extra;
    for (size_t i = 0; i < rows; ++i) {
      const S d = dpre[i];
      if (d == S(0)) continue;
      const bool cand_row = i >= 2 * h;
      const S* carrier = cand_row ? rh : h_prev;
      axpy(d, carrier, g.u.row(i), h);
      if (!cand_row) {
        const S* ui = p.u.row(i);
        for (size_t j = 0; j < h; ++j) dh_prev[j] += d * ui[j];
      }
      // candidate row: handled above via drh
    }
  } else {
    for (size_t i = 0; i < rows; ++i) {
      const S d = dpre[i];
      if (d == S(0)) continue;
      axpy(d, h_prev, g.u.row(i), h);
      const S* ui = p.u.row(i);
      for (size_t j = 0; j < h; ++j) dh_prev[j] += d * ui[j];
    }
  }
}

}  // namespace detail

/// Bidirectional encoder. Row i of the output is the concatenation of the
/// forward state after inputs[0..i] and the backward state after
/// inputs[T-1..i]. Rows at and beyond `valid` are padding: zero output, no
/// state update.
template <typename S>
Tensor<S> birnn_forward(const Tensor<S>& x, const RnnCellParams<S>& fwd,
                        const RnnCellParams<S>& bwd,
                        std::type_identity_t<BiRnnTrace<S>*> trace,
                        size_t valid = SIZE_MAX) {
  if (x.cols() != fwd.input_dim || x.cols() != bwd.input_dim)
    throw VerifyError("birnn: input width " + std::to_string(x.cols()) +
                      " does not match cell input dim");
  if (fwd.hidden_dim != bwd.hidden_dim || fwd.kind != bwd.kind)
    throw VerifyError("birnn: direction cells disagree");
  const size_t t_total = x.rows();
  const size_t t_valid = std::min(valid, t_total);
  const size_t h = fwd.hidden_dim;
  const size_t g = fwd.gates() * h;
  const size_t e = fwd.kind == CellKind::Gru ? h : 2 * h;
  Tensor<S> out(t_total, 2 * h);
  BiRnnTrace<S> local;
  BiRnnTrace<S>& tr = trace ? *trace : local;
  tr.valid = t_valid;
  for (RnnTrace<S>* dir : {&tr.fwd, &tr.bwd}) {
    dir->h = Tensor<S>(t_total, h);
    dir->gates = Tensor<S>(t_total, g);
    dir->extra = Tensor<S>(t_total, e);
  }
  std::vector<S> zero_state(h, S(0));
  const S* h_prev = zero_state.data();
  const S* c_prev = zero_state.data();
  for (size_t t = 0; t < t_valid; ++t) {
    detail::rnn_step(fwd, x.row(t), h_prev, c_prev, tr.fwd.h.row(t),
                     tr.fwd.gates.row(t), tr.fwd.extra.row(t));
    std::copy(tr.fwd.h.row(t), tr.fwd.h.row(t) + h, out.row(t));
    h_prev = tr.fwd.h.row(t);
    if (fwd.kind == CellKind::Lstm) c_prev = tr.fwd.extra.row(t);
  }
  h_prev = zero_state.data();
  c_prev = zero_state.data();
  for (size_t ti = t_valid; ti-- > 0;) {
    detail::rnn_step(bwd, x.row(ti), h_prev, c_prev, tr.bwd.h.row(ti),
                     tr.bwd.gates.row(ti), tr.bwd.extra.row(ti));
    std::copy(tr.bwd.h.row(ti), tr.bwd.h.row(ti) + h, out.row(ti) + h);
    h_prev = tr.bwd.h.row(ti);
    if (bwd.kind == CellKind::Lstm) c_prev = tr.bwd.extra.row(ti);
  }
  return out;
}

/// Backward through both directions; returns d_input and accumulates cell
/// grads. `x` must be the forward input and `d_out` the gradient w.r.t.
/// the [T x 2H] output.
template <typename S>
Tensor<S> birnn_backward(const Tensor<S>& x, const RnnCellParams<S>& fwd,
                         const RnnCellParams<S>& bwd, const BiRnnTrace<S>& tr,
                         const Tensor<S>& d_out, RnnCellParams<S>& d_fwd,
                         RnnCellParams<S>& d_bwd) {
  const size_t h = fwd.hidden_dim;
  const size_t t_valid = tr.valid;
  Tensor<S> dx(x.rows(), x.cols());
  std::vector<S> zero_state(h, S(0));
  std::vector<S> dh(h), dh_prev(h), dc(h, S(0)), dc_prev(h);
  // forward direction: iterate t from last valid step down
  std::fill(dc.begin(), dc.end(), S(0));
  std::vector<S> dh_carry(h, S(0));
  for (size_t t = t_valid; t-- > 0;) {
    for (size_t i = 0; i < h; ++i) dh[i] = d_out(t, i) + dh_carry[i];
    std::fill(dh_prev.begin(), dh_prev.end(), S(0));
    std::fill(dc_prev.begin(), dc_prev.end(), S(0));
    const S* h_prev = t == 0 ? zero_state.data() : tr.fwd.h.row(t - 1);
    const S* c_prev = (fwd.kind == CellKind::Lstm && t > 0)
                          ? tr.fwd.extra.row(t - 1)
                          : zero_state.data();
    detail::rnn_step_backward(fwd, x.row(t), h_prev, c_prev, tr.fwd.gates.row(t),
                              tr.fwd.extra.row(t), dh.data(), dc.data(),
                              dh_prev.data(), dc_prev.data(), dx.row(t), d_fwd);
    dh_carry = dh_prev;
    dc = dc_prev;
  }
  // backward direction: its "previous" step is t+1
  std::fill(dh_carry.begin(), dh_carry.end(), S(0));
  std::fill(dc.begin(), dc.end(), S(0));
  for (size_t t = 0; t < t_valid; ++t) {
    for (size_t i = 0; i < h; ++i) dh[i] = d_out(t, h + i) + dh_carry[i];
    std::fill(dh_prev.begin(), dh_prev.end(), S(0));
    std::fill(dc_prev.begin(), dc_prev.end(), S(0));
    const S* h_prev =
        t + 1 < t_valid ? tr.bwd.h.row(t + 1) : zero_state.data();
    const S* c_prev = (bwd.kind == CellKind::Lstm && t + 1 < t_valid)
                          ? tr.bwd.extra.row(t + 1)
                          : zero_state.data();
    detail::rnn_step_backward(bwd, x.row(t), h_prev, c_prev, tr.bwd.gates.row(t),
                              tr.bwd.extra.row(t), dh.data(), dc.data(),
                              dh_prev.data(), dc_prev.data(), dx.row(t), d_bwd);
    dh_carry = dh_prev;
    dc = dc_prev;
  }
  return dx;
}

/// Query encoding g = [final forward state ; backward state at position 0].
template <typename S>
std::vector<S> encode_query_from_birnn(const Tensor<S>& seq_out, size_t valid) {
  if (valid == 0) throw DataError("encode_query: empty query");
  const size_t h2 = seq_out.cols();
  const size_t h = h2 / 2;
  std::vector<S> g(h2);
  std::copy(seq_out.row(valid - 1), seq_out.row(valid - 1) + h, g.data());
  std::copy(seq_out.row(0) + h, seq_out.row(0) + h2, g.data() + h);
  return g;
}

template <typename S>
void encode_query_backward(const std::vector<S>& dg, size_t valid,
                           Tensor<S>& d_seq_out) {
  const size_t h = dg.size() / 2;
  for (size_t i = 0; i < h; ++i) d_seq_out(valid - 1, i) += dg[i];
  for (size_t i = 0; i < h; ++i) d_seq_out(0, h + i) += dg[h + i];
}

}  // namespace cloze
