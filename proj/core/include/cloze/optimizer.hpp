#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cloze/error.hpp"
#include "cloze/tensor.hpp"

namespace cloze {

/// A named parameter tensor paired with its gradient buffer.
template <typename S>
struct ParamRef {
  std::string name;
  Tensor<S>* value = nullptr;
  Tensor<S>* grad = nullptr;
};

enum class OptKind { Sgd, Adam };

struct OptimizerConfig {
  OptKind kind = OptKind::Adam;
  double learning_rate = 1e-3;
  double clip_norm = 10.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Gradient-clipped SGD/Adam over a fixed parameter list. Moments are
/// allocated lazily on the first step and are serializable for resume.
template <typename S>
class Optimizer {
 public:
  explicit Optimizer(const OptimizerConfig& cfg = {}) : cfg_(cfg) {}

  const OptimizerConfig& config() const { return cfg_; }
  uint64_t step_count() const { return step_; }

  /// Global grad norm across all parameters before clipping.
  static double global_norm(const std::vector<ParamRef<S>>& params) {
    double acc = 0;
    for (const auto& p : params)
      for (size_t i = 0; i < p.grad->size(); ++i) {
        const double g = static_cast<double>((*p.grad)[i]);
        acc += g * g;
      }
    return std::sqrt(acc);
  }

  /// Clips gradients to the configured global norm and applies one update.
  /// Returns the pre-clip norm. Gradients are left scaled, not zeroed.
  double step(const std::vector<ParamRef<S>>& params) {
    ensure_state(params);
    const double norm = global_norm(params);
    if (!std::isfinite(norm)) throw VerifyError("optimizer: non-finite gradient norm");
    const double scale = (cfg_.clip_norm > 0 && norm > cfg_.clip_norm)
                             ? cfg_.clip_norm / norm
                             : 1.0;
    ++step_;
    const double lr = cfg_.learning_rate;
    if (cfg_.kind == OptKind::Sgd) {
      for (const auto& p : params)
        for (size_t i = 0; i < p.grad->size(); ++i)
          (*p.value)[i] -= static_cast<S>(lr * scale * static_cast<double>((*p.grad)[i]));
      return norm;
    }
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    for (size_t pi = 0; pi < params.size(); ++pi) {
      auto& p = params[pi];
      auto& mo = m_[pi];
      auto& ve = v_[pi];
      for (size_t i = 0; i < p.grad->size(); ++i) {
        const double g = scale * static_cast<double>((*p.grad)[i]);
        mo[i] = cfg_.beta1 * mo[i] + (1.0 - cfg_.beta1) * g;
        ve[i] = cfg_.beta2 * ve[i] + (1.0 - cfg_.beta2) * g * g;
        const double mhat = mo[i] / bc1;
        const double vhat = ve[i] / bc2;
        (*p.value)[i] -= static_cast<S>(lr * mhat / (std::sqrt(vhat) + cfg_.epsilon));
      }
    }
    return norm;
  }

  // Moment state access for checkpointing (Adam only; empty for SGD).
  std::vector<std::vector<double>>& moments_m() { return m_; }
  std::vector<std::vector<double>>& moments_v() { return v_; }
  void set_step_count(uint64_t s) { step_ = s; }

  void ensure_state(const std::vector<ParamRef<S>>& params) {
    if (cfg_.kind != OptKind::Adam || !m_.empty()) return;
    for (const auto& p : params) {
      m_.emplace_back(p.value->size(), 0.0);
      v_.emplace_back(p.value->size(), 0.0);
    }
  }

 private:
  OptimizerConfig cfg_;
  uint64_t step_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

template <typename S>
void zero_grads(const std::vector<ParamRef<S>>& params) {
  for (const auto& p : params) p.grad->zero();
}

}  // namespace cloze
