#include <doctest.h>

#include <cmath>

#include "cloze/error.hpp"
#include "cloze/nn.hpp"
#include "cloze/tensor.hpp"

using namespace cloze;

TEST_CASE("gemm matches hand-multiplied values under all transpose flags") {
  Tensor<double> a(2, 3);
  Tensor<double> b(3, 2);
  double v = 1;
  for (size_t i = 0; i < a.size(); ++i) a[i] = v++;
  for (size_t i = 0; i < b.size(); ++i) b[i] = v++;
  Tensor<double> c(2, 2);
  gemm(a, false, b, false, c, false);
  CHECK(c(0, 0) == doctest::Approx(1 * 7 + 2 * 9 + 3 * 11));
  CHECK(c(0, 1) == doctest::Approx(1 * 8 + 2 * 10 + 3 * 12));
  CHECK(c(1, 0) == doctest::Approx(4 * 7 + 5 * 9 + 6 * 11));
  CHECK(c(1, 1) == doctest::Approx(4 * 8 + 5 * 10 + 6 * 12));

  // A^T path: (3x2)^T x (3x2) = 2x2
  Tensor<double> at(3, 2);
  for (size_t i = 0; i < 3; ++i)
    for (size_t j = 0; j < 2; ++j) at(i, j) = a(j, i);
  Tensor<double> c2(2, 2);
  gemm(at, true, b, false, c2, false);
  for (size_t i = 0; i < 4; ++i) CHECK(c2[i] == doctest::Approx(c[i]));

  // B^T path
  Tensor<double> bt(2, 3);
  for (size_t i = 0; i < 2; ++i)
    for (size_t j = 0; j < 3; ++j) bt(i, j) = b(j, i);
  Tensor<double> c3(2, 2);
  gemm(a, false, bt, true, c3, false);
  for (size_t i = 0; i < 4; ++i) CHECK(c3[i] == doctest::Approx(c[i]));

  Tensor<double> c4(2, 2);
  gemm(at, true, bt, true, c4, false);
  for (size_t i = 0; i < 4; ++i) CHECK(c4[i] == doctest::Approx(c[i]));

  Tensor<double> bad(3, 3);
  CHECK_THROWS_AS(gemm(a, false, bad, false, c, false), VerifyError);
}

TEST_CASE("gemv, gemv_t and ger agree with explicit loops") {
  Rng rng(3);
  Tensor<double> m(4, 3);
  fill_uniform(m, rng, -1, 1);
  std::vector<double> x = {0.5, -1.25, 2.0};
  std::vector<double> y(4, 0.0);
  gemv(m, x.data(), y.data(), false);
  for (size_t i = 0; i < 4; ++i) {
    double acc = 0;
    for (size_t j = 0; j < 3; ++j) acc += m(i, j) * x[j];
    CHECK(y[i] == doctest::Approx(acc));
  }
  std::vector<double> yt(3, 0.0);
  gemv_t(m, y.data(), yt.data(), false);
  for (size_t j = 0; j < 3; ++j) {
    double acc = 0;
    for (size_t i = 0; i < 4; ++i) acc += m(i, j) * y[i];
    CHECK(yt[j] == doctest::Approx(acc));
  }
  Tensor<double> outer(4, 3);
  ger(outer, y.data(), x.data());
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 3; ++j)
      CHECK(outer(i, j) == doctest::Approx(y[i] * x[j]));
}

TEST_CASE("softmax closed forms") {
  auto p = softmax(std::vector<double>{0.0, 0.0});
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.5));

  auto q = softmax(std::vector<double>{std::log(1.0), std::log(3.0)});
  CHECK(q[0] == doctest::Approx(0.25));
  CHECK(q[1] == doctest::Approx(0.75));
}

TEST_CASE("softmax is shift-invariant and sums to one") {
  Rng rng(9);
  for (int iter = 0; iter < 100; ++iter) {
    const size_t n = 1 + rng.below(32);
    std::vector<double> s(n);
    for (auto& v : s) v = rng.uniform(-6, 6);
    auto p = softmax(s);
    double sum = 0;
    for (double v : p) {
      CHECK(v > 0);
      sum += v;
    }
    CHECK(std::abs(sum - 1.0) < 1e-6);
    const double shift = rng.uniform(-50, 50);
    auto shifted = s;
    for (auto& v : shifted) v += shift;
    auto p2 = softmax(shifted);
    for (size_t i = 0; i < n; ++i) CHECK(std::abs(p2[i] - p[i]) < 1e-12);
  }
}

TEST_CASE("softmax on float32 stays normalized") {
  Rng rng(10);
  for (int iter = 0; iter < 50; ++iter) {
    const size_t n = 1 + rng.below(64);
    std::vector<float> s(n);
    for (auto& v : s) v = static_cast<float>(rng.uniform(-8, 8));
    auto p = softmax(s);
    double sum = 0;
    for (float v : p) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-5);
  }
}

TEST_CASE("softmax masking") {
  const double inf = std::numeric_limits<double>::infinity();
  auto p = softmax(std::vector<double>{-inf, 0.0, -inf, 0.0});
  CHECK(p[0] == 0.0);
  CHECK(p[2] == 0.0);
  CHECK(p[1] == doctest::Approx(0.5));
  CHECK(p[3] == doctest::Approx(0.5));
  CHECK_THROWS_AS(softmax(std::vector<double>{-inf, -inf}), DataError);
  CHECK_THROWS_AS(softmax(std::vector<double>{}), DataError);
}

TEST_CASE("softmax backward matches finite differences") {
  Rng rng(12);
  std::vector<double> s(6);
  for (auto& v : s) v = rng.uniform(-2, 2);
  std::vector<double> dp(6);
  for (auto& v : dp) v = rng.uniform(-1, 1);
  auto p = softmax(s);
  auto ds = softmax_backward(p, dp);
  const double eps = 1e-6;
  for (size_t i = 0; i < s.size(); ++i) {
    auto sp = s, sm = s;
    sp[i] += eps;
    sm[i] -= eps;
    auto pp = softmax(sp), pm = softmax(sm);
    double fd = 0;
    for (size_t j = 0; j < s.size(); ++j)
      fd += dp[j] * (pp[j] - pm[j]) / (2 * eps);
    CHECK(ds[i] == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("tensor cast round trip and finiteness check") {
  Tensor<float> t(2, 2);
  t(0, 0) = 1.5f;
  t(1, 1) = -2.25f;
  auto d = t.cast<double>();
  auto back = d.cast<float>();
  for (size_t i = 0; i < t.size(); ++i) CHECK(back[i] == t[i]);
  CHECK(t.all_finite());
  t(0, 1) = std::numeric_limits<float>::infinity();
  CHECK(!t.all_finite());
}
