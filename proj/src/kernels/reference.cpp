#include "duvio/kernels/reference.hpp"

#include <algorithm>

namespace duvio::kernels::reference {

void gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n, std::size_t k, double alpha,
          std::span<const double> a, std::span<const double> b, double beta, std::span<double> c) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t p = 0; p < k; ++p) {
        const double av = trans_a ? a[p * m + i] : a[i * k + p];
        const double bv = trans_b ? b[j * k + p] : b[p * n + j];
        acc += av * bv;
      }
      c[i * n + j] = alpha * acc + (beta == 0.0 ? 0.0 : beta * c[i * n + j]);
    }
  }
}

namespace {

// Input coordinate read by output (oy, ox) through kernel tap (ki, kj), or -1.
inline std::ptrdiff_t tap(std::size_t o, std::size_t k, std::size_t stride, std::size_t pad,
                          std::size_t extent) {
  const auto i = static_cast<std::ptrdiff_t>(o * stride + k) - static_cast<std::ptrdiff_t>(pad);
  return (i < 0 || i >= static_cast<std::ptrdiff_t>(extent)) ? -1 : i;
}

}  // namespace

void conv2d_forward(const Conv2dGeometry& g, std::span<const double> input,
                    std::span<const double> weight, std::span<const double> bias,
                    std::span<double> output) {
  g.validate();
  const std::size_t cg = g.in_channels / g.groups, og = g.out_channels / g.groups;
  const std::size_t oh = g.out_h(), ow = g.out_w();
  for (std::size_t n = 0; n < g.batch; ++n) {
    for (std::size_t o = 0; o < g.out_channels; ++o) {
      const std::size_t grp = o / og;
      for (std::size_t oy = 0; oy < oh; ++oy) {
        for (std::size_t ox = 0; ox < ow; ++ox) {
          double acc = bias.empty() ? 0.0 : bias[o];
          for (std::size_t c = 0; c < cg; ++c) {
            const std::size_t ic = grp * cg + c;
            for (std::size_t ki = 0; ki < g.kernel_h; ++ki) {
              const auto iy = tap(oy, ki, g.stride_h, g.pad_h, g.in_h);
              if (iy < 0) continue;
              for (std::size_t kj = 0; kj < g.kernel_w; ++kj) {
                const auto ix = tap(ox, kj, g.stride_w, g.pad_w, g.in_w);
                if (ix < 0) continue;
                acc += weight[((o * cg + c) * g.kernel_h + ki) * g.kernel_w + kj] *
                       input[((n * g.in_channels + ic) * g.in_h + static_cast<std::size_t>(iy)) *
                                 g.in_w +
                             static_cast<std::size_t>(ix)];
              }
            }
          }
          output[((n * g.out_channels + o) * oh + oy) * ow + ox] = acc;
        }
      }
    }
  }
}

void conv2d_backward_input(const Conv2dGeometry& g, std::span<const double> grad_output,
                           std::span<const double> weight, std::span<double> grad_input) {
  g.validate();
  std::fill(grad_input.begin(), grad_input.end(), 0.0);
  const std::size_t cg = g.in_channels / g.groups, og = g.out_channels / g.groups;
  const std::size_t oh = g.out_h(), ow = g.out_w();
  for (std::size_t n = 0; n < g.batch; ++n) {
    for (std::size_t o = 0; o < g.out_channels; ++o) {
      const std::size_t grp = o / og;
      for (std::size_t oy = 0; oy < oh; ++oy) {
        for (std::size_t ox = 0; ox < ow; ++ox) {
          const double dy = grad_output[((n * g.out_channels + o) * oh + oy) * ow + ox];
          for (std::size_t c = 0; c < cg; ++c) {
            const std::size_t ic = grp * cg + c;
            for (std::size_t ki = 0; ki < g.kernel_h; ++ki) {
              const auto iy = tap(oy, ki, g.stride_h, g.pad_h, g.in_h);
              if (iy < 0) continue;
              for (std::size_t kj = 0; kj < g.kernel_w; ++kj) {
                const auto ix = tap(ox, kj, g.stride_w, g.pad_w, g.in_w);
                if (ix < 0) continue;
                grad_input[((n * g.in_channels + ic) * g.in_h + static_cast<std::size_t>(iy)) *
                               g.in_w +
                           static_cast<std::size_t>(ix)] +=
                    dy * weight[((o * cg + c) * g.kernel_h + ki) * g.kernel_w + kj];
              }
            }
          }
        }
      }
    }
  }
}

void conv2d_backward_weight(const Conv2dGeometry& g, std::span<const double> input,
                            std::span<const double> grad_output, std::span<double> grad_weight,
                            std::span<double> grad_bias) {
  g.validate();
  std::fill(grad_weight.begin(), grad_weight.end(), 0.0);
  std::fill(grad_bias.begin(), grad_bias.end(), 0.0);
  const std::size_t cg = g.in_channels / g.groups, og = g.out_channels / g.groups;
  const std::size_t oh = g.out_h(), ow = g.out_w();
  for (std::size_t n = 0; n < g.batch; ++n) {
    for (std::size_t o = 0; o < g.out_channels; ++o) {
      const std::size_t grp = o / og;
      for (std::size_t oy = 0; oy < oh; ++oy) {
        for (std::size_t ox = 0; ox < ow; ++ox) {
          const double dy = grad_output[((n * g.out_channels + o) * oh + oy) * ow + ox];
          if (!grad_bias.empty()) grad_bias[o] += dy;
          for (std::size_t c = 0; c < cg; ++c) {
            const std::size_t ic = grp * cg + c;
            for (std::size_t ki = 0; ki < g.kernel_h; ++ki) {
              const auto iy = tap(oy, ki, g.stride_h, g.pad_h, g.in_h);
              if (iy < 0) continue;
              for (std::size_t kj = 0; kj < g.kernel_w; ++kj) {
                const auto ix = tap(ox, kj, g.stride_w, g.pad_w, g.in_w);
                if (ix < 0) continue;
                grad_weight[((o * cg + c) * g.kernel_h + ki) * g.kernel_w + kj] +=
                    dy * input[((n * g.in_channels + ic) * g.in_h + static_cast<std::size_t>(iy)) *
                                   g.in_w +
                               static_cast<std::size_t>(ix)];
              }
            }
          }
        }
      }
    }
  }
}

}  // namespace duvio::kernels::reference
