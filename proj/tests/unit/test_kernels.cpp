// Optimized (im2col + GEMM, OpenMP) kernels against the serial reference loops.

#include <gtest/gtest.h>

#include <random>

#include "duvio/core/error.hpp"
#include "duvio/kernels/conv.hpp"
#include "duvio/kernels/gemm.hpp"
#include "duvio/kernels/reference.hpp"

using namespace duvio::kernels;

namespace {

std::vector<double> randn(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

void expect_close(const std::vector<double>& a, const std::vector<double>& b, double tol = 1e-10) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    ASSERT_NEAR(a[i], b[i], tol * (1.0 + std::abs(b[i]))) << "index " << i;
}

}  // namespace

TEST(Gemm, MatchesReferenceForAllTransposes) {
  std::mt19937_64 rng(1);
  for (bool ta : {false, true})
    for (bool tb : {false, true}) {
      const std::size_t m = 7, n = 5, k = 9;
      const auto a = randn(m * k, rng), b = randn(k * n, rng);
      auto c1 = randn(m * n, rng);
      auto c2 = c1;
      gemm(ta, tb, m, n, k, 0.7, a, b, 0.3, c1);
      reference::gemm(ta, tb, m, n, k, 0.7, a, b, 0.3, c2);
      expect_close(c1, c2);
    }
}

class ConvEquivalence : public ::testing::TestWithParam<Conv2dGeometry> {};

TEST_P(ConvEquivalence, ForwardAndBackwardMatchReference) {
  const Conv2dGeometry g = GetParam();
  std::mt19937_64 rng(7);
  const auto x = randn(g.in_size(), rng), w = randn(g.weight_size(), rng), b = randn(g.out_channels, rng);
  const auto gy = randn(g.out_size(), rng);

  std::vector<double> y1(g.out_size()), y2(g.out_size());
  conv2d_forward(g, x, w, b, y1);
  reference::conv2d_forward(g, x, w, b, y2);
  expect_close(y1, y2);

  std::vector<double> gx1(g.in_size()), gx2(g.in_size());
  conv2d_backward_input(g, gy, w, gx1);
  reference::conv2d_backward_input(g, gy, w, gx2);
  expect_close(gx1, gx2);

  std::vector<double> gw1(g.weight_size()), gw2(g.weight_size()), gb1(g.out_channels), gb2(g.out_channels);
  conv2d_backward_weight(g, x, gy, gw1, gb1);
  reference::conv2d_backward_weight(g, x, gy, gw2, gb2);
  expect_close(gw1, gw2);
  expect_close(gb1, gb2);
}

INSTANTIATE_TEST_SUITE_P(
    Geometries, ConvEquivalence,
    ::testing::Values(
        // batch, in_c, h, w, out_c, kh, kw, sh, sw, ph, pw, groups
        Conv2dGeometry{1, 1, 8, 8, 2, 3, 3, 1, 1, 1, 1, 1},
        Conv2dGeometry{3, 2, 9, 7, 4, 3, 3, 2, 2, 1, 1, 1},
        Conv2dGeometry{2, 4, 8, 16, 4, 4, 4, 2, 2, 1, 1, 1},
        Conv2dGeometry{2, 4, 6, 6, 4, 3, 3, 1, 1, 1, 1, 4},   // depthwise
        Conv2dGeometry{2, 4, 6, 5, 6, 1, 3, 1, 1, 0, 1, 2},   // grouped, 1-D style kernel
        Conv2dGeometry{1, 2, 16, 32, 3, 7, 7, 2, 2, 3, 3, 1}));

TEST(ConvGeometry, RejectsInvalid) {
  Conv2dGeometry g{1, 3, 8, 8, 4, 3, 3, 1, 1, 1, 1, 2};  // 3 channels not divisible by 2 groups
  EXPECT_THROW(g.validate(), duvio::ShapeError);
  Conv2dGeometry big{1, 1, 2, 2, 1, 5, 5, 1, 1, 0, 0, 1};  // kernel larger than padded input
  EXPECT_THROW(big.validate(), duvio::ShapeError);
}
