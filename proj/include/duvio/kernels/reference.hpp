#pragma once

// Serial, loop-for-loop reference versions of the kernels. They exist for the
// equivalence tests and the benchmark target; production code calls the
// optimized versions in conv.hpp / gemm.hpp.

#include <cstddef>
#include <span>

#include "duvio/kernels/conv.hpp"

namespace duvio::kernels::reference {

void gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n, std::size_t k, double alpha,
          std::span<const double> a, std::span<const double> b, double beta, std::span<double> c);

void conv2d_forward(const Conv2dGeometry& g, std::span<const double> input,
                    std::span<const double> weight, std::span<const double> bias,
                    std::span<double> output);

void conv2d_backward_input(const Conv2dGeometry& g, std::span<const double> grad_output,
                           std::span<const double> weight, std::span<double> grad_input);

void conv2d_backward_weight(const Conv2dGeometry& g, std::span<const double> input,
                            std::span<const double> grad_output, std::span<double> grad_weight,
                            std::span<double> grad_bias);

}  // namespace duvio::kernels::reference
