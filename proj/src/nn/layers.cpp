#include "duvio/nn/layers.hpp"

#include <cmath>

#include <fmt/format.h>

#include "duvio/core/error.hpp"

namespace duvio::nn {

void ParamSet::add(std::string name, Var var, bool trainable) {
  if (!var.defined()) return;
  entries_.push_back({std::move(name), std::move(var), trainable});
}

std::vector<Var> ParamSet::trainable() const {
  std::vector<Var> out;
  for (const auto& e : entries_)
    if (e.trainable) out.push_back(e.var);
  return out;
}

std::size_t ParamSet::trainable_count() const {
  std::size_t n = 0;
  for (const auto& e : entries_)
    if (e.trainable) n += e.var.value().size();
  return n;
}

void ParamSet::zero_grad() {
  for (auto& e : entries_) e.var.zero_grad();
}

void ParamSet::assign(const std::map<std::string, Tensor>& values) {
  for (auto& e : entries_) {
    const auto it = values.find(e.name);
    if (it == values.end()) throw ShapeError(fmt::format("weights: missing tensor '{}'", e.name));
    if (it->second.shape() != e.var.shape()) {
      throw ShapeError(fmt::format("weights: tensor '{}' expected {}, got {}", e.name,
                                   to_string(e.var.shape()), to_string(it->second.shape())));
    }
    e.var.mutable_value() = it->second;
  }
}

std::map<std::string, Tensor> ParamSet::snapshot() const {
  std::map<std::string, Tensor> out;
  for (const auto& e : entries_) out.emplace(e.name, e.var.value());
  return out;
}

Tensor kaiming_normal(Shape shape, std::size_t fan_in, double slope, Rng& rng) {
  Tensor t(std::move(shape));
  const double stddev = std::sqrt(2.0 / ((1.0 + slope * slope) * static_cast<double>(fan_in)));
  std::normal_distribution<double> dist(0.0, stddev);
  for (double& v : t.values()) v = dist(rng);
  return t;
}

Conv2d::Conv2d(std::size_t in, std::size_t out, std::size_t kh, std::size_t kw,
               Conv2dOptions o, Rng& rng, double slope, bool with_bias)
    : opts(o) {
  const std::size_t cg = in / o.groups;
  weight = Var(kaiming_normal({out, cg, kh, kw}, cg * kh * kw, slope, rng), true);
  if (with_bias) bias = Var(Tensor({out}), true);
}

void Conv2d::collect(ParamSet& set, const std::string& prefix) const {
  set.add(prefix + ".weight", weight);
  set.add(prefix + ".bias", bias);
}

ConvTranspose2d::ConvTranspose2d(std::size_t in, std::size_t out, std::size_t k, std::size_t s,
                                 std::size_t p, Rng& rng, double slope)
    : stride(s), pad(p) {
  // Each output pixel sees roughly in*k*k/stride^2 inputs.
  const std::size_t fan_in = std::max<std::size_t>(1, in * k * k / (s * s));
  weight = Var(kaiming_normal({in, out, k, k}, fan_in, slope, rng), true);
  bias = Var(Tensor({out}), true);
}

void ConvTranspose2d::collect(ParamSet& set, const std::string& prefix) const {
  set.add(prefix + ".weight", weight);
  set.add(prefix + ".bias", bias);
}

Conv1d::Conv1d(std::size_t in, std::size_t out, std::size_t k, std::size_t s, std::size_t p,
               Rng& rng, double slope)
    : stride(s), pad(p) {
  weight = Var(kaiming_normal({out, in, k}, in * k, slope, rng), true);
  bias = Var(Tensor({out}), true);
}

void Conv1d::collect(ParamSet& set, const std::string& prefix) const {
  set.add(prefix + ".weight", weight);
  set.add(prefix + ".bias", bias);
}

Linear::Linear(std::size_t in, std::size_t out, Rng& rng, double slope) {
  weight = Var(kaiming_normal({out, in}, in, slope, rng), true);
  bias = Var(Tensor({out}), true);
}

void Linear::collect(ParamSet& set, const std::string& prefix) const {
  set.add(prefix + ".weight", weight);
  set.add(prefix + ".bias", bias);
}

BatchNorm::BatchNorm(std::size_t channels)
    : gamma(Tensor({channels}, 1.0), true),
      beta(Tensor({channels}), true),
      running_mean(Tensor({channels}), false),
      running_var(Tensor({channels}, 1.0), false) {}

void BatchNorm::collect(ParamSet& set, const std::string& prefix) const {
  set.add(prefix + ".gamma", gamma);
  set.add(prefix + ".beta", beta);
  set.add(prefix + ".running_mean", running_mean, false);
  set.add(prefix + ".running_var", running_var, false);
}

}  // namespace duvio::nn
