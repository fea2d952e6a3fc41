#pragma once

// Minimal reverse-mode automatic differentiation over float64 tensors.
// A Var is a handle to a graph node; ops record their parents and a backward
// closure while gradient recording is enabled (see NoGradGuard).

#include <functional>
#include <memory>
#include <vector>

#include "duvio/core/tensor.hpp"

namespace duvio::nn {

struct Node;
using NodePtr = std::shared_ptr<Node>;
using BackwardFn = std::function<void(Node&)>;

struct Node {
  Tensor value;
  Tensor grad;
  std::vector<NodePtr> parents;
  BackwardFn backward;
  bool requires_grad = false;

  // Gradient buffer, zero-initialised on first access.
  Tensor& grad_buffer();
};

class Var {
 public:
  Var() = default;
  explicit Var(Tensor value, bool requires_grad = false);
  explicit Var(NodePtr node) : node_(std::move(node)) {}

  bool defined() const { return static_cast<bool>(node_); }
  const Tensor& value() const { return node_->value; }
  // In-place access for leaves (optimizer updates, running statistics).
  Tensor& mutable_value() { return node_->value; }
  const Tensor& grad() const { return node_->grad; }
  bool has_grad() const { return !node_->grad.empty(); }
  const Shape& shape() const { return node_->value.shape(); }
  std::size_t dim(std::size_t axis) const { return node_->value.dim(axis); }
  bool requires_grad() const { return node_ && node_->requires_grad; }
  double item() const;

  void zero_grad();
  // Seeds d(self)/d(self) = 1; self must hold a single element.
  void backward() const;
  void backward(const Tensor& seed) const;

  // Same value, cut from the graph.
  Var detach() const;

  const NodePtr& node() const { return node_; }

 private:
  NodePtr node_;
};

bool grad_enabled();

class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

// Wraps an op result. The closure receives the result node; it reads
// `self.grad` and accumulates into `self.parents[i]->grad_buffer()` for
// parents that require grad. Parents are dropped when nothing needs a grad.
Var make_op(Tensor value, std::vector<Var> parents, BackwardFn backward);

}  // namespace duvio::nn
