#pragma once

#include <cstddef>
#include <span>

namespace duvio::kernels {

// C[m,n] = alpha * op(A) * op(B) + beta * C, all row-major.
// op(A) is [m,k]; A is stored [k,m] when trans_a is set. Same for B.
void gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n, std::size_t k, double alpha,
          std::span<const double> a, std::span<const double> b, double beta, std::span<double> c);

}  // namespace duvio::kernels
