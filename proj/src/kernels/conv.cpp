#include "duvio/kernels/conv.hpp"

#include <algorithm>
#include <cstddef>
#include <vector>

#include <fmt/format.h>

#include "duvio/core/error.hpp"
#include "duvio/kernels/gemm.hpp"

namespace duvio::kernels {

void Conv2dGeometry::validate() const {
  if (groups == 0 || in_channels % groups != 0 || out_channels % groups != 0) {
    throw ShapeError(fmt::format("conv2d: channels {}->{} not divisible by groups {}",
                                 in_channels, out_channels, groups));
  }
  if (stride_h == 0 || stride_w == 0) throw ShapeError("conv2d: zero stride");
  if (in_h + 2 * pad_h < kernel_h || in_w + 2 * pad_w < kernel_w) {
    throw ShapeError(fmt::format("conv2d: kernel {}x{} larger than padded input {}x{}", kernel_h,
                                 kernel_w, in_h + 2 * pad_h, in_w + 2 * pad_w));
  }
}

namespace {

// Unfold channels [c0, c0+cg) of one sample into rows of `cols`, each row
// holding out_h*out_w entries, consecutive rows `ld` apart.
void im2col(const Conv2dGeometry& g, const double* sample, std::size_t c0, std::size_t cg,
            double* cols, std::size_t ld) {
  const std::size_t oh = g.out_h(), ow = g.out_w();
  std::size_t row = 0;
  for (std::size_t c = c0; c < c0 + cg; ++c) {
    const double* plane = sample + c * g.in_h * g.in_w;
    for (std::size_t ki = 0; ki < g.kernel_h; ++ki) {
      for (std::size_t kj = 0; kj < g.kernel_w; ++kj, ++row) {
        double* dst = cols + row * ld;
        for (std::size_t oy = 0; oy < oh; ++oy) {
          const auto iy = static_cast<std::ptrdiff_t>(oy * g.stride_h + ki) -
                          static_cast<std::ptrdiff_t>(g.pad_h);
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h)) {
            std::fill(dst + oy * ow, dst + (oy + 1) * ow, 0.0);
            continue;
          }
          const double* src_row = plane + static_cast<std::size_t>(iy) * g.in_w;
          for (std::size_t ox = 0; ox < ow; ++ox) {
            const auto ix = static_cast<std::ptrdiff_t>(ox * g.stride_w + kj) -
                            static_cast<std::ptrdiff_t>(g.pad_w);
            dst[oy * ow + ox] = (ix < 0 || ix >= static_cast<std::ptrdiff_t>(g.in_w))
                                    ? 0.0
                                    : src_row[static_cast<std::size_t>(ix)];
          }
        }
      }
    }
  }
}

// Adjoint of im2col: scatter-add rows of `cols` back into the sample.
void col2im(const Conv2dGeometry& g, const double* cols, std::size_t c0, std::size_t cg,
            double* sample) {
  const std::size_t oh = g.out_h(), ow = g.out_w();
  std::size_t row = 0;
  for (std::size_t c = c0; c < c0 + cg; ++c) {
    double* plane = sample + c * g.in_h * g.in_w;
    for (std::size_t ki = 0; ki < g.kernel_h; ++ki) {
      for (std::size_t kj = 0; kj < g.kernel_w; ++kj, ++row) {
        const double* src = cols + row * oh * ow;
        for (std::size_t oy = 0; oy < oh; ++oy) {
          const auto iy = static_cast<std::ptrdiff_t>(oy * g.stride_h + ki) -
                          static_cast<std::ptrdiff_t>(g.pad_h);
          if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(g.in_h)) continue;
          double* dst_row = plane + static_cast<std::size_t>(iy) * g.in_w;
          for (std::size_t ox = 0; ox < ow; ++ox) {
            const auto ix = static_cast<std::ptrdiff_t>(ox * g.stride_w + kj) -
                            static_cast<std::ptrdiff_t>(g.pad_w);
            if (ix >= 0 && ix < static_cast<std::ptrdiff_t>(g.in_w)) {
              dst_row[static_cast<std::size_t>(ix)] += src[oy * ow + ox];
            }
          }
        }
      }
    }
  }
}

}  // namespace

void conv2d_forward(const Conv2dGeometry& g, std::span<const double> input,
                    std::span<const double> weight, std::span<const double> bias,
                    std::span<double> output) {
  g.validate();
  const std::size_t cg = g.in_channels / g.groups;
  const std::size_t og = g.out_channels / g.groups;
  const std::size_t patch = cg * g.kernel_h * g.kernel_w;
  const std::size_t spatial = g.out_h() * g.out_w();
  const auto batch = static_cast<std::ptrdiff_t>(g.batch);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ni = 0; ni < batch; ++ni) {
    const auto n = static_cast<std::size_t>(ni);
    std::vector<double> cols(patch * spatial);
    const double* sample = input.data() + n * g.in_channels * g.in_h * g.in_w;
    for (std::size_t grp = 0; grp < g.groups; ++grp) {
      im2col(g, sample, grp * cg, cg, cols.data(), spatial);
      std::span<double> out(output.data() + (n * g.out_channels + grp * og) * spatial,
                            og * spatial);
      gemm(false, false, og, spatial, patch, 1.0, weight.subspan(grp * og * patch, og * patch),
           cols, 0.0, out);
      if (!bias.empty()) {
        for (std::size_t o = 0; o < og; ++o) {
          const double b = bias[grp * og + o];
          for (std::size_t s = 0; s < spatial; ++s) out[o * spatial + s] += b;
        }
      }
    }
  }
}

void conv2d_backward_input(const Conv2dGeometry& g, std::span<const double> grad_output,
                           std::span<const double> weight, std::span<double> grad_input) {
  g.validate();
  const std::size_t cg = g.in_channels / g.groups;
  const std::size_t og = g.out_channels / g.groups;
  const std::size_t patch = cg * g.kernel_h * g.kernel_w;
  const std::size_t spatial = g.out_h() * g.out_w();
  const std::size_t sample_size = g.in_channels * g.in_h * g.in_w;
  const auto batch = static_cast<std::ptrdiff_t>(g.batch);

#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ni = 0; ni < batch; ++ni) {
    const auto n = static_cast<std::size_t>(ni);
    std::vector<double> cols(patch * spatial);
    double* sample = grad_input.data() + n * sample_size;
    std::fill(sample, sample + sample_size, 0.0);
    for (std::size_t grp = 0; grp < g.groups; ++grp) {
      std::span<const double> dy(grad_output.data() + (n * g.out_channels + grp * og) * spatial,
                                 og * spatial);
      gemm(true, false, patch, spatial, og, 1.0, weight.subspan(grp * og * patch, og * patch), dy,
           0.0, cols);
      col2im(g, cols.data(), grp * cg, cg, sample);
    }
  }
}

void conv2d_backward_weight(const Conv2dGeometry& g, std::span<const double> input,
                            std::span<const double> grad_output, std::span<double> grad_weight,
                            std::span<double> grad_bias) {
  g.validate();
  const std::size_t cg = g.in_channels / g.groups;
  const std::size_t og = g.out_channels / g.groups;
  const std::size_t patch = cg * g.kernel_h * g.kernel_w;
  const std::size_t spatial = g.out_h() * g.out_w();
  const std::size_t wide = g.batch * spatial;
  const auto batch = static_cast<std::ptrdiff_t>(g.batch);

  std::vector<double> cols(patch * wide);
  std::vector<double> dy(og * wide);
  for (std::size_t grp = 0; grp < g.groups; ++grp) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ni = 0; ni < batch; ++ni) {
      const auto n = static_cast<std::size_t>(ni);
      im2col(g, input.data() + n * g.in_channels * g.in_h * g.in_w, grp * cg, cg,
             cols.data() + n * spatial, wide);
      for (std::size_t o = 0; o < og; ++o) {
        const double* src = grad_output.data() + (n * g.out_channels + grp * og + o) * spatial;
        std::copy(src, src + spatial, dy.data() + o * wide + n * spatial);
      }
    }
    gemm(false, true, og, patch, wide, 1.0, dy, cols, 0.0,
         grad_weight.subspan(grp * og * patch, og * patch));
    if (!grad_bias.empty()) {
      for (std::size_t o = 0; o < og; ++o) {
        double acc = 0.0;
        for (std::size_t i = 0; i < wide; ++i) acc += dy[o * wide + i];
        grad_bias[grp * og + o] = acc;
      }
    }
  }
}

}  // namespace duvio::kernels
