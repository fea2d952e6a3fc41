#pragma once
// Helpers shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "duvio/nn/autograd.hpp"

namespace duvio::test_util {

struct GradCheckStats {
  std::size_t checked = 0;
  std::size_t passed = 0;
  double worst = 0.0;
  double pass_rate() const { return checked ? static_cast<double>(passed) / static_cast<double>(checked) : 0.0; }
};

// Absolute floor below which both gradients count as zero.
inline constexpr double kGradAbsFloor = 1e-8;

inline double grad_rel_error(double analytic, double numeric) {
  const double diff = std::abs(analytic - numeric);
  if (diff < kGradAbsFloor) return 0.0;
  return diff / std::max(std::abs(analytic), std::abs(numeric));
}

// Compares backprop against central differences on `per_param` random entries
// of each parameter (all entries when the tensor is small enough).
inline GradCheckStats grad_check(const std::function<nn::Var()>& loss_fn, std::vector<nn::Var> params,
                                 std::size_t per_param, double tol, std::uint64_t seed = 5,
                                 double eps = 1e-6) {
  for (auto& p : params) p.zero_grad();
  loss_fn().backward();
  std::vector<Tensor> analytic;
  for (auto& p : params) analytic.push_back(p.has_grad() ? p.grad() : Tensor::zeros_like(p.value()));

  std::mt19937_64 rng(seed);
  GradCheckStats stats;
  nn::NoGradGuard guard;
  for (std::size_t k = 0; k < params.size(); ++k) {
    Tensor& w = params[k].mutable_value();
    std::vector<std::size_t> idx(w.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    if (idx.size() > per_param) {
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(per_param);
    }
    for (std::size_t i : idx) {
      const double keep = w[i];
      w[i] = keep + eps;
      const double up = loss_fn().item();
      w[i] = keep - eps;
      const double down = loss_fn().item();
      w[i] = keep;
      const double err = grad_rel_error(analytic[k][i], (up - down) / (2 * eps));
      ++stats.checked;
      if (err < tol) ++stats.passed;
      stats.worst = std::max(stats.worst, err);
    }
  }
  return stats;
}

inline Tensor random_tensor(Shape shape, std::mt19937_64& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  std::normal_distribution<double> n(0.0, scale);
  for (auto& v : t.values()) v = n(rng);
  return t;
}

}  // namespace duvio::test_util
