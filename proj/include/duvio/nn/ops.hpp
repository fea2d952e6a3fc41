#pragma once

#include <cstddef>
#include <vector>

#include "duvio/nn/autograd.hpp"

namespace duvio::nn {

struct Conv2dOptions {
  std::size_t stride_h = 1;
  std::size_t stride_w = 1;
  std::size_t pad_h = 0;
  std::size_t pad_w = 0;
  std::size_t groups = 1;

  static Conv2dOptions square(std::size_t stride, std::size_t pad, std::size_t groups = 1) {
    return {stride, stride, pad, pad, groups};
  }
};

// x [N,C,H,W], w [O,C/groups,kh,kw], b [O] or undefined.
Var conv2d(const Var& x, const Var& w, const Var& b, const Conv2dOptions& opts);
// x [N,C,H,W], w [C,O,kh,kw]; output spatial (H-1)*stride - 2*pad + k + output_padding.
Var conv_transpose2d(const Var& x, const Var& w, const Var& b, std::size_t stride,
                     std::size_t pad, std::size_t output_padding);
// x [N,C,L], w [O,C,k].
Var conv1d(const Var& x, const Var& w, const Var& b, std::size_t stride, std::size_t pad);
// x [N,I], w [O,I], b [O] or undefined.
Var linear(const Var& x, const Var& w, const Var& b);
// a [B,M,K], b [B,K,N].
Var bmm(const Var& a, const Var& b);

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double s);

Var leaky_relu(const Var& a, double slope);
Var relu(const Var& a);
Var sigmoid(const Var& a);
Var tanh(const Var& a);
Var softmax_last(const Var& a);

Var reshape(const Var& a, Shape shape);
// [N, ...] -> [N, prod(...)]
Var flatten(const Var& a);
Var concat(const std::vector<Var>& parts, std::size_t axis);
Var narrow(const Var& a, std::size_t axis, std::size_t start, std::size_t length);
// out[i] = a[index[i]]; the backward pass scatter-adds.
Var gather(const Var& a, std::vector<std::size_t> index, Shape out_shape);
Var permute(const Var& a, const std::vector<std::size_t>& axes);

// x [N,C,...]; statistics per channel over all other axes.
Var batch_norm(const Var& x, const Var& gamma, const Var& beta, Var& running_mean,
               Var& running_var, bool training, double momentum, double eps);
Var global_avg_pool(const Var& x);
Var resize_bilinear(const Var& x, std::size_t out_h, std::size_t out_w);

Var sum(const Var& a);
Var mean(const Var& a);
Var l1_loss(const Var& prediction, const Var& target);
Var mse_loss(const Var& prediction, const Var& target);
// Mean binary cross-entropy of sigmoid(logits) against a constant label.
Var bce_with_logits(const Var& logits, double label);

}  // namespace duvio::nn
