#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "cloze/error.hpp"

namespace cloze {

/// Dense row-major array of 32- or 64-bit reals. Rank is 1 or 2 everywhere
/// in this codebase; higher ranks are not needed by the layer set.
template <typename S>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<size_t> shape)
      : shape_(std::move(shape)), data_(numel(shape_), S(0)) {}
  Tensor(size_t rows, size_t cols) : Tensor(std::vector<size_t>{rows, cols}) {}
  explicit Tensor(size_t n) : Tensor(std::vector<size_t>{n}) {}

  static size_t numel(const std::vector<size_t>& shape) {
    size_t n = 1;
    for (size_t d : shape) n *= d;
    return n;
  }

  const std::vector<size_t>& shape() const { return shape_; }
  size_t ndim() const { return shape_.size(); }
  size_t size() const { return data_.size(); }
  size_t rows() const { return shape_.empty() ? 0 : shape_[0]; }
  size_t cols() const { return shape_.size() < 2 ? 1 : shape_[1]; }

  S* data() { return data_.data(); }
  const S* data() const { return data_.data(); }
  S* row(size_t r) { return data_.data() + r * cols(); }
  const S* row(size_t r) const { return data_.data() + r * cols(); }

  S& operator[](size_t i) { return data_[i]; }
  const S& operator[](size_t i) const { return data_[i]; }
  S& operator()(size_t r, size_t c) { return data_[r * cols() + c]; }
  const S& operator()(size_t r, size_t c) const { return data_[r * cols() + c]; }

  void fill(S v) { std::fill(data_.begin(), data_.end(), v); }
  void zero() { fill(S(0)); }

  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  bool all_finite() const {
    for (S v : data_)
      if (!std::isfinite(static_cast<double>(v))) return false;
    return true;
  }

  std::vector<S>& values() { return data_; }
  const std::vector<S>& values() const { return data_; }

  template <typename T>
  Tensor<T> cast() const {
    Tensor<T> out(shape_);
    for (size_t i = 0; i < data_.size(); ++i)
      out[i] = static_cast<T>(data_[i]);
    return out;
  }

 private:
  std::vector<size_t> shape_;
  std::vector<S> data_;
};

inline std::string shape_string(const std::vector<size_t>& shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

// ---- small dense kernels -------------------------------------------------

template <typename S>
S dot(const S* a, const S* b, size_t n) {
  S acc = S(0);
  for (size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

template <typename S>
void axpy(S alpha, const S* x, S* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

/// y (+)= M x for row-major M[r x c].
template <typename S>
void gemv(const Tensor<S>& m, const S* x, S* y, bool accumulate) {
  const size_t r = m.rows(), c = m.cols();
  for (size_t i = 0; i < r; ++i) {
    S acc = accumulate ? y[i] : S(0);
    const S* mi = m.row(i);
    for (size_t j = 0; j < c; ++j) acc += mi[j] * x[j];
    y[i] = acc;
  }
}

/// y (+)= M^T x for row-major M[r x c]; x has length r, y length c.
template <typename S>
void gemv_t(const Tensor<S>& m, const S* x, S* y, bool accumulate) {
  const size_t r = m.rows(), c = m.cols();
  if (!accumulate)
    for (size_t j = 0; j < c; ++j) y[j] = S(0);
  for (size_t i = 0; i < r; ++i) {
    const S xi = x[i];
    if (xi == S(0)) continue;
    const S* mi = m.row(i);
    for (size_t j = 0; j < c; ++j) y[j] += xi * mi[j];
  }
}

/// Rank-1 accumulate: A += x y^T for A[r x c].
template <typename S>
void ger(Tensor<S>& a, const S* x, const S* y) {
  const size_t r = a.rows(), c = a.cols();
  for (size_t i = 0; i < r; ++i) {
    const S xi = x[i];
    if (xi == S(0)) continue;
    axpy(xi, y, a.row(i), c);
  }
}

/// C (+)= A B with optional transposes; naive but cache-friendly loops.
template <typename S>
void gemm(const Tensor<S>& a, bool ta, const Tensor<S>& b, bool tb,
          Tensor<S>& c, bool accumulate) {
  const size_t m = ta ? a.cols() : a.rows();
  const size_t k = ta ? a.rows() : a.cols();
  const size_t kb = tb ? b.cols() : b.rows();
  const size_t n = tb ? b.rows() : b.cols();
  if (k != kb || c.rows() != m || c.cols() != n)
    throw VerifyError("gemm shape mismatch: " + shape_string(a.shape()) +
                      (ta ? "^T x " : " x ") + shape_string(b.shape()) +
                      (tb ? "^T -> " : " -> ") + shape_string(c.shape()));
  if (!accumulate) c.zero();
  if (!ta && !tb) {
    for (size_t i = 0; i < m; ++i)
      for (size_t p = 0; p < k; ++p) {
        const S aip = a(i, p);
        if (aip == S(0)) continue;
        axpy(aip, b.row(p), c.row(i), n);
      }
  } else if (!ta && tb) {
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < n; ++j)
        c(i, j) += dot(a.row(i), b.row(j), k);
  } else if (ta && !tb) {
    for (size_t p = 0; p < k; ++p)
      for (size_t i = 0; i < m; ++i) {
        const S api = a(p, i);
        if (api == S(0)) continue;
        axpy(api, b.row(p), c.row(i), n);
      }
  } else {
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < n; ++j) {
        S acc = S(0);
        for (size_t p = 0; p < k; ++p) acc += a(p, i) * b(j, p);
        c(i, j) += acc;
      }
  }
}

}  // namespace cloze
