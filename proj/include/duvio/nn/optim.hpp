#pragma once

#include <vector>

#include "duvio/nn/autograd.hpp"

namespace duvio::nn {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

class Adam {
 public:
  Adam(std::vector<Var> params, AdamOptions opts);

  // Parameters without a gradient are skipped.
  void step();
  void zero_grad();
  void set_lr(double lr) { opts_.lr = lr; }
  const AdamOptions& options() const { return opts_; }
  long steps() const { return t_; }

 private:
  std::vector<Var> params_;
  std::vector<Tensor> m_;
  std::vector<Tensor> v_;
  AdamOptions opts_;
  long t_ = 0;
};

}  // namespace duvio::nn
