#pragma once

#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "duvio/nn/autograd.hpp"
#include "duvio/nn/ops.hpp"

namespace duvio::nn {

using Rng = std::mt19937_64;

// Ordered, named collection of a model's tensors. Non-trainable entries hold
// buffers such as batch-norm running statistics.
class ParamSet {
 public:
  struct Entry {
    std::string name;
    Var var;
    bool trainable;
  };

  void add(std::string name, Var var, bool trainable = true);
  const std::vector<Entry>& entries() const { return entries_; }
  std::vector<Var> trainable() const;
  std::size_t trainable_count() const;
  void zero_grad();

  // Copies values by name; every entry must be present with a matching shape.
  void assign(const std::map<std::string, Tensor>& values);
  std::map<std::string, Tensor> snapshot() const;

 private:
  std::vector<Entry> entries_;
};

// Kaiming-normal fill for a layer followed by LeakyReLU(slope).
Tensor kaiming_normal(Shape shape, std::size_t fan_in, double slope, Rng& rng);

struct Conv2d {
  Var weight;
  Var bias;
  Conv2dOptions opts;

  Conv2d() = default;
  Conv2d(std::size_t in, std::size_t out, std::size_t kh, std::size_t kw, Conv2dOptions opts,
         Rng& rng, double slope = 0.0, bool with_bias = true);
  Var operator()(const Var& x) const { return conv2d(x, weight, bias, opts); }
  void collect(ParamSet& set, const std::string& prefix) const;
};

struct ConvTranspose2d {
  Var weight;
  Var bias;
  std::size_t stride = 2;
  std::size_t pad = 1;
  std::size_t output_padding = 0;

  ConvTranspose2d() = default;
  ConvTranspose2d(std::size_t in, std::size_t out, std::size_t k, std::size_t stride,
                  std::size_t pad, Rng& rng, double slope = 0.0);
  Var operator()(const Var& x) const {
    return conv_transpose2d(x, weight, bias, stride, pad, output_padding);
  }
  void collect(ParamSet& set, const std::string& prefix) const;
};

struct Conv1d {
  Var weight;
  Var bias;
  std::size_t stride = 1;
  std::size_t pad = 0;

  Conv1d() = default;
  Conv1d(std::size_t in, std::size_t out, std::size_t k, std::size_t stride, std::size_t pad,
         Rng& rng, double slope = 0.0);
  Var operator()(const Var& x) const { return conv1d(x, weight, bias, stride, pad); }
  void collect(ParamSet& set, const std::string& prefix) const;
};

struct Linear {
  Var weight;
  Var bias;

  Linear() = default;
  Linear(std::size_t in, std::size_t out, Rng& rng, double slope = 0.0);
  Var operator()(const Var& x) const { return linear(x, weight, bias); }
  void collect(ParamSet& set, const std::string& prefix) const;
};

struct BatchNorm {
  Var gamma;
  Var beta;
  Var running_mean;
  Var running_var;
  double momentum = 0.1;
  double eps = 1e-5;

  BatchNorm() = default;
  explicit BatchNorm(std::size_t channels);
  Var operator()(const Var& x, bool training) {
    return batch_norm(x, gamma, beta, running_mean, running_var, training, momentum, eps);
  }
  void collect(ParamSet& set, const std::string& prefix) const;
};

}  // namespace duvio::nn
