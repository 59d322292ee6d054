#include "support.hpp"

namespace itodilate {
namespace {

using testing::z2_model;
using testing::zero_map_model;

const Vector kEmpty = Vector::Zero(0);

TEST(LogMatrixElement, ZeroMapWithOneMode) {
  const auto model = zero_map_model(cyclic_group(2), 1);
  const auto f = CoherentFunction::constant(Vector::Ones(1));
  EXPECT_NEAR(std::abs(log_matrix_element(model, f, GroupElement{1}, f, 1.0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(log_matrix_element(model, f, GroupElement{1}, f, 2.5) - 2.5), 0.0, 1e-15);
}

TEST(LogMatrixElement, Z2ScalarGerm) {
  const auto model = z2_model(-1.0);
  const auto f = CoherentFunction::constant(kEmpty);
  EXPECT_NEAR(std::abs(log_matrix_element(model, f, GroupElement{1}, f, 2.0) + 2.0), 0.0, 1e-15);
  EXPECT_EQ(log_matrix_element(model, f, GroupElement{0}, f, 2.0), Complex{});
}

// Midpoint sum of the generator form on a grid finer than every breakpoint.
Complex quadrature(const GeneratorModel& model, const CoherentFunction& f, const Element& y,
                   const CoherentFunction& h, double t, double dt) {
  const Matrix lambda = germ_of(model, y);
  const auto steps = static_cast<long>(std::llround(t / dt));
  Complex total{};
  for (long i = 0; i < steps; ++i) {
    const double mid = (static_cast<double>(i) + 0.5) * dt;
    Vector left(1 + model.n_modes), right(1 + model.n_modes);
    left << 1.0, f.at(mid);
    right << 1.0, h.at(mid);
    total += dt * left.dot(lambda * right);
  }
  return total;
}

TEST(LogMatrixElement, MatchesQuadrature) {
  Rng rng(1);
  std::uniform_int_distribution<int> millis(1, 600);
  for (int i = 0; i < 6; ++i) {
    const Index n = 1 + i % 2;
    const auto model = random_dilated_model(quaternion_group(), 2, n, rng);
    auto draw = [&] {
      std::vector<std::pair<double, Vector>> segments;
      for (int k = 0; k < 2; ++k) segments.emplace_back(millis(rng) * 1e-3, random_vector(n, rng));
      return CoherentFunction(segments, random_vector(n, rng));
    };
    const auto f = draw(), h = draw();
    const Element y = GroupElement{static_cast<std::size_t>(i)};
    const double t = 1.3;
    const Complex exact = log_matrix_element(model, f, y, h, t);
    EXPECT_LE(std::abs(exact - quadrature(model, f, y, h, t, 1e-4)), 1e-9 * std::max(1.0, std::abs(exact)));
  }
}

TEST(LogMatrixElement, LinearBeyondLastBreakpoint) {
  Rng rng(2);
  const auto model = random_dilated_model(cyclic_group(3), 2, 2, rng);
  const CoherentFunction f({{0.3, random_vector(2, rng)}}, random_vector(2, rng));
  const CoherentFunction h({{0.2, random_vector(2, rng)}, {0.4, random_vector(2, rng)}}, random_vector(2, rng));
  const Element y = GroupElement{1};
  const Complex rate = germ_form(germ_of(model, y), f.tail(), h.tail());
  const Complex base = log_matrix_element(model, f, y, h, 1.0);
  for (double u : {0.1, 0.5, 2.0})
    EXPECT_LE(std::abs(log_matrix_element(model, f, y, h, 1.0 + u) - base - u * rate), 1e-12 * (1.0 + std::abs(base)));
}

TEST(LogMatrixElement, Validation) {
  const auto model = z2_model(-1.0);
  const auto f = CoherentFunction::constant(kEmpty);
  EXPECT_THROW(log_matrix_element(model, f, GroupElement{1}, f, 0.0), InputError);
  const auto wrong = CoherentFunction::constant(Vector::Ones(1));
  EXPECT_THROW(log_matrix_element(model, wrong, GroupElement{1}, f, 1.0), InputError);
  EXPECT_THROW(CoherentFunction({{-1.0, Vector::Ones(1)}}, Vector::Ones(1)), InputError);
  EXPECT_THROW(CoherentFunction({{1.0, Vector::Ones(2)}}, Vector::Ones(1)), InputError);
}

KernelSpec z2_pair_spec(double t) {
  KernelSpec spec;
  spec.t = t;
  spec.pairs = {{CoherentFunction::constant(kEmpty), GroupElement{0}},
                {CoherentFunction::constant(kEmpty), GroupElement{1}}};
  return spec;
}

TEST(ExponentKernel, Z2Fixtures) {
  const auto neg = exponent_kernel(z2_model(-1.0), z2_pair_spec(1.0));
  Matrix expected(2, 2);
  expected << 1, std::exp(-1.0), std::exp(-1.0), 1;
  EXPECT_LE((neg - expected).norm(), 1e-15);
  EXPECT_TRUE(kernel_pd_report(neg).verdict);

  const double t = 0.7;
  const auto pos = exponent_kernel(z2_model(1.0), z2_pair_spec(t));
  expected << 1, std::exp(t), std::exp(t), 1;
  EXPECT_LE((pos - expected).norm(), 1e-14);
  const auto r = kernel_pd_report(pos);
  EXPECT_FALSE(r.verdict);
  EXPECT_NEAR(r.min_eigenvalue, 1.0 - std::exp(t), 1e-13);
}

TEST(ExponentKernel, HermitianAndPositiveForDilatedModels) {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto s = i % 2 ? quaternion_group() : cyclic_group(static_cast<std::size_t>(2 + i % 4));
    const auto model = random_dilated_model(s, 1 + i % 3, i % 3, rng);
    const auto spec = random_kernel_spec(model, 1 + static_cast<std::size_t>(i % 6), i % 2 ? 0.1 : 1.0, rng);
    const Matrix m = exponent_kernel(model, spec);
    EXPECT_LE(max_abs_entry(m - m.adjoint()), 1e-10 * std::max(1.0, max_abs_entry(m)));
    const auto r = kernel_pd_report(m, 1e-8);
    EXPECT_TRUE(r.verdict) << "min eigenvalue " << r.min_eigenvalue;
  }
}

TEST(KernelPdReport, KnownMatrices) {
  EXPECT_TRUE(kernel_pd_report(Matrix::Identity(3, 3)).verdict);
  Matrix m(2, 2);
  m << 1, 2, 2, 1;
  EXPECT_FALSE(kernel_pd_report(m).verdict);
  m(0, 1) = 3.0;
  EXPECT_THROW(kernel_pd_report(m), InputError);
  EXPECT_THROW(kernel_pd_report(Matrix::Zero(2, 3)), InputError);
}

TEST(KernelSpec, Validation) {
  const auto model = z2_model(-1.0);
  KernelSpec spec = z2_pair_spec(1.0);
  spec.t = 0.0;
  EXPECT_THROW(exponent_kernel(model, spec), InputError);
  spec = z2_pair_spec(1.0);
  spec.pairs.clear();
  EXPECT_THROW(exponent_kernel(model, spec), InputError);
  spec = z2_pair_spec(1.0);
  spec.pairs[0].second = GroupElement{5};
  EXPECT_THROW(exponent_kernel(model, spec), InputError);
}

TEST(SmallT, Z2DeviationIsHalfT) {
  const auto model = z2_model(-1.0);
  const auto spec = z2_pair_spec(1.0);
  for (double t : {1e-3, 5e-4, 1e-4}) {
    // (e^{-t} - 1)/t + 1 = t/2 + O(t^2)
    EXPECT_NEAR(small_t_generator_check(model, spec, t), t / 2.0, t * t);
  }
  EXPECT_THROW(small_t_generator_check(model, spec, 0.01), InputError);
  EXPECT_THROW(small_t_generator_check(model, spec, 0.0), InputError);
}

TEST(SmallT, HalvingRoughlyHalvesDeviation) {
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    const auto model = random_dilated_model(quaternion_group(), 2, 1 + i % 2, rng);
    const auto spec = random_kernel_spec(model, 3, 1.0, rng);
    const double full = small_t_generator_check(model, spec, 1e-3);
    const double half = small_t_generator_check(model, spec, 5e-4);
    EXPECT_GT(full / half, 4.0 / 3.0);
    EXPECT_LT(full / half, 3.0);
  }
}

}  // namespace
}  // namespace itodilate
