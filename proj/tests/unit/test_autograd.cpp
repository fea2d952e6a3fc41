// Per-op gradient checks against central differences.

#include <gtest/gtest.h>

#include "duvio/nn/layers.hpp"
#include "duvio/nn/ops.hpp"
#include "duvio/nn/optim.hpp"
#include "testing.hpp"

using namespace duvio;
using namespace duvio::nn;
using duvio::test_util::grad_check;
using duvio::test_util::random_tensor;

namespace {

Var param(Shape s, std::mt19937_64& rng, double scale = 1.0) {
  return Var(random_tensor(std::move(s), rng, scale), true);
}

// Weighted sum keeps every output element's gradient distinct.
Var probe(const Var& y, std::uint64_t seed = 99) {
  std::mt19937_64 rng(seed);
  return sum(mul(y, Var(random_tensor(y.shape(), rng))));
}

void expect_grads(const std::function<Var()>& f, std::vector<Var> params, double tol = 1e-6) {
  const auto stats = grad_check(f, std::move(params), 40, tol);
  EXPECT_EQ(stats.passed, stats.checked) << "worst rel err " << stats.worst;
}

}  // namespace

TEST(Autograd, Conv2dStridedPadded) {
  std::mt19937_64 rng(1);
  Var x = param({2, 3, 7, 6}, rng), w = param({4, 3, 3, 3}, rng), b = param({4}, rng);
  expect_grads([&] { return probe(conv2d(x, w, b, Conv2dOptions::square(2, 1))); }, {x, w, b});
}

TEST(Autograd, Conv2dGrouped) {
  std::mt19937_64 rng(2);
  Var x = param({1, 4, 5, 5}, rng), w = param({4, 1, 3, 3}, rng), b = param({4}, rng);
  expect_grads([&] { return probe(conv2d(x, w, b, Conv2dOptions::square(1, 1, 4))); }, {x, w, b});
}

TEST(Autograd, ConvTranspose2d) {
  std::mt19937_64 rng(3);
  Var x = param({2, 3, 4, 3}, rng), w = param({3, 2, 4, 4}, rng), b = param({2}, rng);
  Var y = conv_transpose2d(x, w, b, 2, 1, 0);
  EXPECT_EQ(y.shape(), (Shape{2, 2, 8, 6}));
  expect_grads([&] { return probe(conv_transpose2d(x, w, b, 2, 1, 0)); }, {x, w, b});
}

TEST(Autograd, Conv1d) {
  std::mt19937_64 rng(4);
  Var x = param({2, 6, 11}, rng), w = param({5, 6, 3}, rng), b = param({5}, rng);
  expect_grads([&] { return probe(conv1d(x, w, b, 1, 1)); }, {x, w, b});
}

TEST(Autograd, LinearAndBmm) {
  std::mt19937_64 rng(5);
  Var x = param({3, 4}, rng), w = param({2, 4}, rng), b = param({2}, rng);
  expect_grads([&] { return probe(linear(x, w, b)); }, {x, w, b});
  Var a = param({2, 3, 4}, rng), c = param({2, 4, 5}, rng);
  expect_grads([&] { return probe(bmm(a, c)); }, {a, c});
}

TEST(Autograd, Elementwise) {
  std::mt19937_64 rng(6);
  Var a = param({3, 5}, rng), b = param({3, 5}, rng);
  expect_grads([&] { return probe(add(mul(a, b), sub(a, scale(b, 0.3)))); }, {a, b});
  expect_grads([&] { return probe(sigmoid(a)); }, {a});
  expect_grads([&] { return probe(tanh(a)); }, {a});
  expect_grads([&] { return probe(softmax_last(a)); }, {a});
}

TEST(Autograd, LeakyReluAwayFromKink) {
  Tensor t({6}, std::vector<double>{-2.0, -0.5, -0.1, 0.1, 0.7, 3.0});
  Var a(t, true);
  expect_grads([&] { return probe(leaky_relu(a, 0.1)); }, {a});
  expect_grads([&] { return probe(relu(a)); }, {a});
}

TEST(Autograd, ShapeOps) {
  std::mt19937_64 rng(7);
  Var a = param({2, 3, 4}, rng), b = param({2, 2, 4}, rng);
  expect_grads([&] { return probe(concat({a, b}, 1)); }, {a, b});
  expect_grads([&] { return probe(narrow(a, 2, 1, 2)); }, {a});
  expect_grads([&] { return probe(permute(a, {2, 0, 1})); }, {a});
  expect_grads([&] { return probe(reshape(a, {6, 4})); }, {a});
  expect_grads([&] { return probe(gather(a, {0, 5, 5, 23}, {2, 2})); }, {a});
}

TEST(Autograd, PoolingResizeAndNorm) {
  std::mt19937_64 rng(8);
  Var x = param({2, 3, 4, 6}, rng);
  expect_grads([&] { return probe(global_avg_pool(x)); }, {x});
  expect_grads([&] { return probe(resize_bilinear(x, 7, 5)); }, {x});
  Var gamma = param({3}, rng), beta = param({3}, rng);
  Var rm(Tensor({3}), false), rv(Tensor({3}, 1.0), false);
  expect_grads([&] { return probe(batch_norm(x, gamma, beta, rm, rv, true, 0.1, 1e-5)); }, {x, gamma, beta},
               1e-5);
}

TEST(Autograd, Losses) {
  std::mt19937_64 rng(9);
  Var p = param({2, 5}, rng), t(random_tensor({2, 5}, rng), false);
  expect_grads([&] { return mse_loss(p, t); }, {p});
  expect_grads([&] { return l1_loss(p, t); }, {p});
  expect_grads([&] { return add(bce_with_logits(p, 1.0), bce_with_logits(p, 0.0)); }, {p});
  expect_grads([&] { return mean(mul(p, p)); }, {p});
}

TEST(Autograd, SharedSubgraphAccumulates) {
  Var a(Tensor({1}, 3.0), true);
  Var y = mul(a, a);  // a used twice
  sum(add(y, a)).backward();
  EXPECT_DOUBLE_EQ(a.grad()[0], 7.0);
}

TEST(Autograd, NoGradGuardSkipsGraph) {
  Var a(Tensor({2}, 1.0), true);
  {
    NoGradGuard g;
    Var y = scale(a, 2.0);
    EXPECT_FALSE(y.requires_grad());
  }
  EXPECT_TRUE(grad_enabled());
}

TEST(Adam, MinimizesQuadratic) {
  Var w(Tensor({2}, std::vector<double>{3.0, -2.0}), true);
  Adam opt({w}, {.lr = 0.1});
  for (int i = 0; i < 500; ++i) {
    opt.zero_grad();
    sum(mul(w, w)).backward();
    opt.step();
  }
  EXPECT_NEAR(w.value()[0], 0.0, 1e-3);
  EXPECT_NEAR(w.value()[1], 0.0, 1e-3);
}
