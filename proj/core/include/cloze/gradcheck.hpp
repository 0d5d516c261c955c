#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "cloze/error.hpp"
#include "cloze/optimizer.hpp"
#include "cloze/rng.hpp"

namespace cloze {

struct GradCheckReport {
  bool pass = true;
  size_t coords_checked = 0;
  double worst_rel_err = 0.0;
  std::string worst_param;
  size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

/// Central-difference verification of analytic gradients, run in 64-bit.
/// `loss_fn` must recompute the loss from the current parameter values;
/// the analytic gradient is read from each ParamRef's grad buffer. With
/// max_coords_per_tensor == 0 every coordinate is checked, otherwise a
/// seeded sample per tensor.
inline GradCheckReport grad_check(const std::vector<ParamRef<double>>& params,
                                  const std::function<double()>& loss_fn,
                                  double epsilon = 1e-5, double tolerance = 1e-4,
                                  size_t max_coords_per_tensor = 0,
                                  uint64_t seed = 0) {
  GradCheckReport report;
  {
    const double base = loss_fn();
    if (!std::isfinite(base)) throw VerifyError("grad_check: non-finite loss");
  }
  Rng rng(derive_seed(seed, 0x6c0de));
  for (const auto& p : params) {
    const size_t n = p.value->size();
    std::vector<size_t> coords;
    if (max_coords_per_tensor == 0 || n <= max_coords_per_tensor) {
      coords.resize(n);
      for (size_t i = 0; i < n; ++i) coords[i] = i;
    } else {
      for (size_t k = 0; k < max_coords_per_tensor; ++k)
        coords.push_back(static_cast<size_t>(rng.below(n)));
    }
    for (size_t i : coords) {
      const double saved = (*p.value)[i];
      (*p.value)[i] = saved + epsilon;
      const double plus = loss_fn();
      (*p.value)[i] = saved - epsilon;
      const double minus = loss_fn();
      (*p.value)[i] = saved;
      if (!std::isfinite(plus) || !std::isfinite(minus))
        throw VerifyError("grad_check: non-finite loss at perturbed " + p.name);
      const double numeric = (plus - minus) / (2.0 * epsilon);
      const double analytic = (*p.grad)[i];
      const double rel =
          std::abs(analytic - numeric) / std::max(1.0, std::abs(numeric));
      ++report.coords_checked;
      if (rel > report.worst_rel_err) {
        report.worst_rel_err = rel;
        report.worst_param = p.name;
        report.worst_index = i;
        report.worst_analytic = analytic;
        report.worst_numeric = numeric;
      }
    }
  }
  report.pass = report.worst_rel_err <= tolerance;
  return report;
}

}  // namespace cloze
