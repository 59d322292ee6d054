#include "support.hpp"

#include <cstdlib>

namespace itodilate {
namespace {

using testing::scalar_matrix;
using testing::scalar_poisson_model;

TEST(PoissonCounts, ZeroTimeGivesZeroCounts) {
  const auto run = sample_poisson_counts(0.0, 1000, 1);
  for (auto c : run.counts) EXPECT_EQ(c, 0u);
}

TEST(PoissonCounts, MeanAndZeroProbability) {
  const double t = 1.5;
  const std::uint64_t n = 50000;
  const auto run = sample_poisson_counts(t, n, 2);
  double sum = 0.0;
  for (auto c : run.counts) sum += static_cast<double>(c);
  EXPECT_LE(std::abs(sum / static_cast<double>(n) - t), 5.0 * std::sqrt(t / static_cast<double>(n)));
  const auto zero = zero_count_probability(run);
  EXPECT_EQ(zero.exact, std::exp(-t));
  EXPECT_LE(std::abs(zero.estimate - zero.exact), 5.0 * zero.std_error);
}

TEST(PoissonCounts, LargeMeansAreSplit) {
  const double t = 95.0;
  const std::uint64_t n = 20000;
  const auto run = sample_poisson_counts(t, n, 3);
  double sum = 0.0;
  for (auto c : run.counts) sum += static_cast<double>(c);
  EXPECT_LE(std::abs(sum / static_cast<double>(n) - t), 5.0 * std::sqrt(t / static_cast<double>(n)));
}

TEST(PoissonCounts, PathCountsIncrease) {
  const auto run = sample_poisson_path({0.5, 1.0, 3.0}, 2000, 4);
  for (std::size_t p = 0; p < run.paths; ++p) {
    EXPECT_LE(run.count(p, 0), run.count(p, 1));
    EXPECT_LE(run.count(p, 1), run.count(p, 2));
  }
  EXPECT_THROW(sample_poisson_path({1.0, 0.5}, 10, 4), InputError);
  EXPECT_THROW(sample_poisson_path({1.0}, 0, 4), InputError);
  EXPECT_THROW(sample_poisson_path({}, 10, 4), InputError);
}

TEST(PoissonCounts, DeterministicAndThreadIndependent) {
  const auto a = sample_poisson_path({0.5, 2.0}, 10000, 5, 1);
  const auto b = sample_poisson_path({0.5, 2.0}, 10000, 5, 1);
  const auto c = sample_poisson_path({0.5, 2.0}, 10000, 5, 4);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.counts, c.counts);
  const auto d = sample_poisson_path({0.5, 2.0}, 10000, 6, 1);
  EXPECT_NE(a.counts, d.counts);
}

TEST(DefaultThreads, HonoursEnvironmentCap) {
  ::setenv("ITODILATE_THREADS", "1", 1);
  EXPECT_EQ(default_threads(), 1u);
  ::setenv("ITODILATE_THREADS", "junk", 1);
  EXPECT_GE(default_threads(), 1u);
  ::unsetenv("ITODILATE_THREADS");
  EXPECT_GE(default_threads(), 1u);
}

const Element kUnit = MatrixElement{Matrix::Identity(1, 1)};

TEST(MeanExponent, NormalizedModelHasUnitMean) {
  const auto est = mean_exponent_check(scalar_poisson_model(1.0, -1.0), kUnit, 1.0, 100000, 7);
  EXPECT_EQ(est.exact, Complex(1.0));
  EXPECT_LE(est.standardized_deviation(), 5.0);
}

TEST(MeanExponent, DecayingModel) {
  const auto est = mean_exponent_check(scalar_poisson_model(-0.5, 0.0), kUnit, 2.0, 100000, 8);
  EXPECT_NEAR(est.exact.real(), std::exp(-1.0), 1e-15);
  EXPECT_LE(est.standardized_deviation(), 5.0);
}

TEST(MeanExponent, ComplexAlpha) {
  const auto est = mean_exponent_check(scalar_poisson_model(Complex(0.2, 0.3), -0.1), kUnit, 1.0, 100000, 9);
  EXPECT_LE(est.standardized_deviation(), 5.0);
}

TEST(MeanExponent, DeterministicValueHasZeroDeviation) {
  // alpha = 0: every path gives e^{t lambda}.
  const auto est = mean_exponent_check(scalar_poisson_model(0.0, -0.3), kUnit, 1.0, 1000, 10);
  EXPECT_LE(est.std_error, 1e-15);
  EXPECT_EQ(est.standardized_deviation(), 0.0);
}

TEST(MeanExponent, RequiresScalarPoissonModel) {
  EXPECT_THROW(mean_exponent_check(testing::z2_model(-1.0), GroupElement{1}, 1.0, 10, 1), InputError);
  EXPECT_THROW(mean_exponent_check(scalar_poisson_model(1.0, -1.0), MatrixElement{scalar_matrix(0.5)}, 1.0, 10, 1),
               InputError);
}

TEST(Martingale, TrivialModel) {
  const auto r = martingale_check(scalar_poisson_model(0.0, 0.0), 0.5, 1.0, 10000, 11);
  EXPECT_TRUE(r.normalized);
  EXPECT_EQ(r.max_deviation, 0.0);
  EXPECT_TRUE(r.passed());
}

TEST(Martingale, NormalizedModelPasses) {
  const auto r = martingale_check(scalar_poisson_model(1.0, -1.0), 0.5, 1.0, 100000, 12);
  EXPECT_TRUE(r.normalized);
  EXPECT_FALSE(r.bins.empty());
  for (const auto& b : r.bins) EXPECT_GE(b.paths, kMinBinPaths);
  EXPECT_TRUE(r.passed()) << r.max_deviation;
}

TEST(Martingale, DriftFails) {
  const auto r = martingale_check(scalar_poisson_model(1.0, -0.8), 0.5, 1.0, 100000, 13);
  EXPECT_FALSE(r.normalized);
  EXPECT_NEAR(r.drift, 0.2, 1e-15);
  EXPECT_FALSE(r.passed());
}

TEST(Martingale, Validation) {
  const auto model = scalar_poisson_model(1.0, -1.0);
  EXPECT_THROW(martingale_check(model, 1.0, 1.0, 10, 1), InputError);
  EXPECT_THROW(martingale_check(model, 0.5, 1.0, 10, 1, 0), InputError);
  EXPECT_THROW(martingale_check(scalar_poisson_model(-2.0, 2.0), 0.5, 1.0, 10, 1), InputError);
}

GeneratorModel ball_poisson_model() {
  ScalarPoissonForm form;
  for (double y : {1.0, 0.5, 0.25, 0.0}) {
    form.elements.push_back(MatrixElement{scalar_matrix(y)});
    form.alpha.push_back(y);
    form.lambda.push_back(-1.0);
  }
  return GeneratorModel{matrix_ball(1), 0, std::move(form)};
}

TEST(PdInMean, BallModelSatisfiesHypotheses) {
  const auto model = ball_poisson_model();
  const std::vector<Element> sample{MatrixElement{scalar_matrix(1.0)}, MatrixElement{scalar_matrix(0.5)},
                                    MatrixElement{scalar_matrix(0.0)}};
  const auto r = pd_in_mean_check(model, sample, 1.0, 50000, 14);
  EXPECT_TRUE(r.one_plus_alpha.verdict);
  ASSERT_TRUE(r.kappa.has_value());
  EXPECT_EQ(*r.kappa, 1.0);
  EXPECT_TRUE(r.normalized);
  EXPECT_TRUE(r.hypotheses());
  EXPECT_TRUE(r.mean_kernel_psd());
}

TEST(PdInMean, UnnormalizedModel) {
  auto model = ball_poisson_model();
  for (auto& l : std::get<ScalarPoissonForm>(model.form).lambda) l = -0.5;
  const auto r = pd_in_mean_check(model, {MatrixElement{scalar_matrix(1.0)}, MatrixElement{scalar_matrix(0.5)}},
                                  1.0, 1000, 15);
  EXPECT_FALSE(r.normalized);
  EXPECT_FALSE(r.hypotheses());
  EXPECT_THROW(pd_in_mean_check(model, {}, 1.0, 10, 1), InputError);
}

}  // namespace
}  // namespace itodilate
