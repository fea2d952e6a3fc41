#pragma once

#include <cstddef>
#include <span>

namespace duvio::kernels {

// Shape of a grouped 2-D cross-correlation. Tensors are NCHW; weights are
// [out_channels, in_channels / groups, kernel_h, kernel_w].
struct Conv2dGeometry {
  std::size_t batch = 1;
  std::size_t in_channels = 1;
  std::size_t in_h = 1;
  std::size_t in_w = 1;
  std::size_t out_channels = 1;
  std::size_t kernel_h = 1;
  std::size_t kernel_w = 1;
  std::size_t stride_h = 1;
  std::size_t stride_w = 1;
  std::size_t pad_h = 0;
  std::size_t pad_w = 0;
  std::size_t groups = 1;

  std::size_t out_h() const { return (in_h + 2 * pad_h - kernel_h) / stride_h + 1; }
  std::size_t out_w() const { return (in_w + 2 * pad_w - kernel_w) / stride_w + 1; }
  std::size_t in_size() const { return batch * in_channels * in_h * in_w; }
  std::size_t out_size() const { return batch * out_channels * out_h() * out_w(); }
  std::size_t weight_size() const {
    return out_channels * (in_channels / groups) * kernel_h * kernel_w;
  }
  // Throws ShapeError on inconsistent dimensions.
  void validate() const;
};

// im2col + GEMM, parallel over the batch with OpenMP. Results do not depend on
// the thread count: every reduction runs in a fixed order on one thread.
void conv2d_forward(const Conv2dGeometry& g, std::span<const double> input,
                    std::span<const double> weight, std::span<const double> bias,
                    std::span<double> output);

// Overwrites grad_input.
void conv2d_backward_input(const Conv2dGeometry& g, std::span<const double> grad_output,
                           std::span<const double> weight, std::span<double> grad_input);

// Overwrites grad_weight and (when non-empty) grad_bias.
void conv2d_backward_weight(const Conv2dGeometry& g, std::span<const double> input,
                            std::span<const double> grad_output, std::span<double> grad_weight,
                            std::span<double> grad_bias);

}  // namespace duvio::kernels
