#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "duvio/core/error.hpp"
#include "duvio/dehaze/discriminator.hpp"
#include "duvio/dehaze/generator.hpp"
#include "duvio/dehaze/metrics.hpp"
#include "duvio/dehaze/train.hpp"
#include "duvio/dehaze/weights.hpp"
#include "duvio/nn/ops.hpp"
#include "testing.hpp"

using namespace duvio;

namespace {

Image noise_image(std::size_t w, std::size_t h, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image img(w, h);
  for (auto& v : img.pixels()) v = u(rng);
  return img;
}

GeneratorConfig small_gen(Backbone b = Backbone::dense) {
  GeneratorConfig g;
  g.backbone = b;
  g.base_channels = 8;
  g.depth = 2;
  g.width = 16;
  g.height = 8;
  return g;
}

DiscriminatorConfig small_disc() {
  DiscriminatorConfig d;
  d.base_channels = 8;
  return d;
}

}  // namespace

TEST(Metrics, IdenticalImages) {
  const Image a = noise_image(20, 12, 1);
  const auto r = image_metrics(a, a);
  EXPECT_EQ(r.mse, 0.0);
  EXPECT_EQ(r.rmse, 0.0);
  EXPECT_EQ(r.ssim, 1.0);
  EXPECT_TRUE(std::isinf(r.psnr) && r.psnr > 0);
}

TEST(Metrics, TableOneRmseConsistency) {
  EXPECT_NEAR(std::sqrt(158.47), 12.588, 1e-3);
  EXPECT_NEAR(std::sqrt(203.29), 14.258, 1e-3);
}

TEST(Metrics, ConstantOffsetClosedForm) {
  const Image a(16, 16, 0.4);
  Image b(16, 16, 0.4 + 10.0 / 255.0);
  const auto r = image_metrics(a, b);
  EXPECT_NEAR(r.mse, 100.0, 1e-9);
  EXPECT_NEAR(r.rmse, 10.0, 1e-9);
  EXPECT_NEAR(r.psnr, 10.0 * std::log10(255.0 * 255.0 / 100.0), 1e-9);
}

TEST(Metrics, SsimSymmetricAndBounded) {
  const Image a = noise_image(24, 16, 2), b = noise_image(24, 16, 3);
  EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-12);
  EXPECT_LE(ssim(a, b), 1.0);
  EXPECT_GE(ssim(a, b), -1.0);
  EXPECT_LT(ssim(a, b), 0.2);
}

TEST(Metrics, ShapeMismatch) {
  EXPECT_THROW(image_metrics(Image(4, 4), Image(4, 5)), ShapeError);
}

class GeneratorBackbones : public ::testing::TestWithParam<Backbone> {};

TEST_P(GeneratorBackbones, OutputShapeMatchesInput) {
  const Generator g(small_gen(GetParam()));
  const Image out = g.generate(noise_image(16, 8, 4));
  EXPECT_EQ(out.width(), 16u);
  EXPECT_EQ(out.height(), 8u);
  for (double v : out.pixels()) EXPECT_TRUE(v >= 0.0 && v <= 1.0);
}

TEST_P(GeneratorBackbones, GradientsMatchFiniteDifferences) {
  Generator g(small_gen(GetParam()));
  std::mt19937_64 rng(8);
  nn::Var x(duvio::test_util::random_tensor({1, 1, 8, 16}, rng, 0.2), false);
  nn::Var target(duvio::test_util::random_tensor({1, 1, 8, 16}, rng, 0.2), false);
  const auto stats = duvio::test_util::grad_check([&] { return nn::mse_loss(g.forward(x), target); },
                                                g.params().trainable(), 3, 1e-4);
  EXPECT_GE(stats.pass_rate(), 0.95) << "worst " << stats.worst;
}

INSTANTIATE_TEST_SUITE_P(All, GeneratorBackbones,
                         ::testing::Values(Backbone::dense, Backbone::resnet, Backbone::vit,
                                           Backbone::mobile, Backbone::vgg));

TEST(Generator, ShapeMismatchNamesSizes) {
  const Generator g(small_gen());
  try {
    g.generate(Image(10, 10));
    FAIL();
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("16x8"), std::string::npos);
  }
}

TEST(Generator, InvalidConfigRejected) {
  GeneratorConfig g = small_gen();
  g.width = 15;
  EXPECT_THROW(Generator{g}, ConfigError);
  EXPECT_THROW(parse_backbone("inception"), ConfigError);
}

TEST(Discriminator, ProbabilityAndDeterminism) {
  Discriminator d(small_disc(), 16, 8);
  const Image img = noise_image(16, 8, 5);
  const double p = d.discriminate(img);
  EXPECT_GT(p, 0.0);
  EXPECT_LT(p, 1.0);
  EXPECT_EQ(p, d.discriminate(img));
  EXPECT_THROW(d.discriminate(Image(8, 8)), ShapeError);
}

TEST(DehazeTrain, RejectsEmptyAndZeroEpochs) {
  DehazeTrainConfig t;
  EXPECT_THROW(train_dehazer({}, small_gen(), small_disc(), t), ValidationError);
  t.epochs = 0;
  std::vector<ImagePair> pairs{{noise_image(16, 8, 1), noise_image(16, 8, 2)}};
  EXPECT_THROW(train_dehazer(pairs, small_gen(), small_disc(), t), ConfigError);
}

TEST(DehazeTrain, ReproducibleLossCurve) {
  DehazeTrainConfig t;
  t.epochs = 3;
  t.batch = 2;
  t.data_fraction = 1.0;
  std::vector<ImagePair> pairs;
  for (int i = 0; i < 3; ++i) pairs.push_back({noise_image(16, 8, 10 + i), noise_image(16, 8, 20 + i)});
  const auto a = train_dehazer(pairs, small_gen(), small_disc(), t);
  const auto b = train_dehazer(pairs, small_gen(), small_disc(), t);
  ASSERT_EQ(a.log.size(), 3u);
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    EXPECT_EQ(a.log[i].generator_loss, b.log[i].generator_loss);
    EXPECT_EQ(a.log[i].discriminator_loss, b.log[i].discriminator_loss);
  }
}

TEST(DehazeWeights, SaveLoadRoundTrip) {
  DehazeModel m{Generator(small_gen(Backbone::mobile)), Discriminator(small_disc(), 16, 8)};
  const auto path = std::filesystem::temp_directory_path() / "duvio_test_dehazer.bin";
  save_dehazer(path, m);
  const DehazeModel back = load_dehazer(path);
  const Image img = noise_image(16, 8, 6);
  EXPECT_EQ(back.generator.generate(img), m.generator.generate(img));
  EXPECT_EQ(back.generator.config().backbone, Backbone::mobile);
}

TEST(DehazeWeights, CorruptFileIsLoadError) {
  const auto path = std::filesystem::temp_directory_path() / "duvio_test_bad.bin";
  {
    std::ofstream out(path);
    out << "not a weights file";
  }
  EXPECT_THROW(load_dehazer(path), LoadError);
  EXPECT_THROW(load_dehazer(path.string() + ".missing"), LoadError);
}
