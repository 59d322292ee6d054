#include "support.hpp"

namespace itodilate {
namespace {

using testing::scalar_matrix;
using testing::z2_model;
using testing::zero_map_model;

TEST(BuildDilation, Z2Fixture) {
  const auto model = z2_model(-1.0);
  const auto el = model.semigroup.all_elements();
  const auto dd = build_dilation(model, el);
  ASSERT_EQ(dd.k_dim, 1);
  Matrix gram(2, 2);
  gram << 0, 0, 0, 2;
  EXPECT_LE((dd.gram - gram).norm(), 1e-12);
  const std::size_t s = dd.index_of(model.semigroup, GroupElement{1});
  EXPECT_NEAR(std::abs(dd.k[s](0)), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(std::abs(dd.j[s](0, 0) + 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(dd.l[s] + 1.0), 0.0, 1e-12);
  EXPECT_EQ(dd.d, 0.0);
  EXPECT_LE(dd.residuals.max(), 1e-12);
}

TEST(BuildDilation, UnitNormalization) {
  Rng rng(1);
  const auto model = random_dilated_model(quaternion_group(), 3, 2, rng);
  const auto dd = build_dilation(model, model.semigroup.all_elements());
  const std::size_t u = dd.index_of(model.semigroup, model.semigroup.unit());
  EXPECT_EQ(dd.j[u], Matrix::Identity(dd.k_dim, dd.k_dim));
  EXPECT_EQ(dd.k[u], Vector::Zero(dd.k_dim));
  EXPECT_EQ(dd.l[u], Complex{});
}

TEST(BuildDilation, ZeroMap) {
  const auto model = zero_map_model(cyclic_group(3), 0);
  const auto dd = build_dilation(model, model.semigroup.all_elements());
  EXPECT_EQ(dd.k_dim, 0);
  for (const auto& l : dd.l) EXPECT_EQ(l, Complex{});
  EXPECT_EQ(dd.residuals.max(), 0.0);
}

TEST(BuildDilation, ZeroMapWithModesNeedsModeSpace) {
  const auto model = zero_map_model(cyclic_group(3), 2);
  const auto el = model.semigroup.all_elements();
  const auto dd = build_dilation(model, el);
  EXPECT_EQ(dd.k_dim, 2);
  EXPECT_LE(dd.residuals.max(), 1e-12);
  EXPECT_LE(reconstruction_residual(assemble_pseudo_hilbert(dd, model), model, el), 1e-12);
}

TEST(BuildDilation, QuaternionRoundTripMatchesSource) {
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const Index n = i % 3;
    const auto model = random_dilated_model(quaternion_group(), 1 + i % 3, n, rng);
    const auto& source = std::get<DilatedForm>(model.form).data;
    const auto el = model.semigroup.all_elements();
    const auto dd = build_dilation(model, el);

    for (std::size_t y = 0; y < el.size(); ++y)
      EXPECT_NEAR(std::abs(dd.l[dd.index_of(model.semigroup, el[y])] - source.l[y]), 0.0, 1e-10);

    // The dissipation Gram is the Gram matrix of the source features.
    const Matrix features = dilation_features(model);
    const Matrix source_gram = features.adjoint() * features;
    EXPECT_LE((dissipator_block_matrix(model, el) - source_gram).norm(), 1e-10 * std::max(1.0, source_gram.norm()));
    Eigen::SelfAdjointEigenSolver<Matrix> eig(source_gram);
    const RealVector expected = eig.eigenvalues().reverse();
    ASSERT_EQ(expected.size(), dd.gram_spectrum.size());
    EXPECT_LE((expected - dd.gram_spectrum).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE(dd.k_dim, source.k_dim);
  }
}

TEST(BuildDilation, ResidualsOnRandomModels) {
  Rng rng(3);
  for (int i = 0; i < 30; ++i) {
    const auto s = i % 2 ? quaternion_group() : cyclic_group(static_cast<std::size_t>(2 + i % 5));
    const auto model = random_dilated_model(s, 1 + i % 3, i % 3, rng);
    const auto el = s.all_elements();
    const auto dd = build_dilation(model, el);
    EXPECT_LE(dd.residuals.representation, 1e-8);
    EXPECT_LE(dd.residuals.cocycle, 1e-8);
    EXPECT_LE(dd.residuals.coboundary, 1e-8);
    EXPECT_LE(dd.residuals.modes, 1e-8);
    const auto ph = assemble_pseudo_hilbert(dd, model);
    EXPECT_LE(ph.flat_residual, 1e-8);
    EXPECT_LE(reconstruction_residual(ph, model, el), 1e-9);
    for (std::size_t y = 0; y < el.size(); ++y) {
      const std::size_t ys = dd.index_of(s, s.star(el[y]));
      EXPECT_LE((ph.jmath[ys] - pseudo_adjoint(ph.jmath[y], dd.k_dim, dd.d)).norm(), 1e-8);
    }
  }
}

TEST(BuildDilation, RejectsNonCpdModels) {
  const auto model = z2_model(1.0);
  EXPECT_THROW(build_dilation(model, model.semigroup.all_elements()), ConstructionError);
  EXPECT_FALSE(cpd_check(model, model.semigroup.all_elements()).verdict);
}

TEST(BuildDilation, ClosesSamples) {
  Rng rng(4);
  const auto model = random_dilated_model(quaternion_group(), 2, 1, rng);
  const auto dd = build_dilation(model, {GroupElement{2}});
  EXPECT_EQ(dd.elements.size(), 4u);
  DilationOptions tight;
  tight.closure_cap = 3;
  EXPECT_THROW(build_dilation(model, {GroupElement{2}}, tight), InputError);
  EXPECT_THROW(build_dilation(model, {}), InputError);
}

TEST(PseudoHilbert, Z2Assembly) {
  const auto model = z2_model(-1.0);
  const auto el = model.semigroup.all_elements();
  const auto dd = build_dilation(model, el);
  const auto ph = assemble_pseudo_hilbert(dd, model);
  ASSERT_EQ(ph.e_dim, 3);
  Matrix g(3, 3);
  g << 0, 0, 1, 0, 1, 0, 1, 0, 0;
  EXPECT_EQ(ph.metric, g);

  const std::size_t s = dd.index_of(model.semigroup, GroupElement{1});
  // k(s) is fixed up to a unimodular phase c.
  const Complex c = dd.k[s](0) / std::sqrt(2.0);
  const double r2 = std::sqrt(2.0);
  Matrix expected(3, 3);
  expected << 1, std::conj(c) * r2, -1, 0, -1, c * r2, 0, 0, 1;
  EXPECT_LE((ph.jmath[s] - expected).norm(), 1e-12);
  EXPECT_LE((pseudo_adjoint(ph.jmath[s], 1, 0.0) * ph.jmath[s] - Matrix::Identity(3, 3)).norm(), 1e-12);
  EXPECT_EQ(ph.jmath[dd.index_of(model.semigroup, GroupElement{0})], Matrix::Identity(3, 3));

  Matrix l(3, 1);
  l << 0, 0, 1;
  EXPECT_EQ(ph.mode_operator, l);
  EXPECT_LE(reconstruction_residual(ph, model, el), 1e-12);
}

TEST(PseudoHilbert, MetricInverse) {
  for (double d : {0.0, -0.7, 2.5}) {
    const Matrix g = pseudo_metric(2, d);
    EXPECT_LE((g * pseudo_metric_inverse(2, d) - Matrix::Identity(4, 4)).norm(), 1e-15);
  }
}

TEST(PseudoHilbert, RejectsOutsideElements) {
  const auto model = z2_model(-1.0);
  const auto dd = build_dilation(model, model.semigroup.all_elements());
  const auto ph = assemble_pseudo_hilbert(dd, model);
  const auto z4 = testing::cyclic_scalar_model({0.0, -1.0, -2.0, -1.0});
  EXPECT_THROW(reconstruction_residual(ph, z4, {GroupElement{3}}), InputError);
}

TEST(BirthDecomposition, ScalarModel) {
  const auto model = birth_model(testing::scalar_birth_spec());
  const auto sample = model.semigroup.sample_elements(6, 5);
  const auto split = birth_decomposition(model, sample);
  EXPECT_EQ(split.kappa, scalar_matrix(1.0));
  for (std::size_t i = 0; i < sample.size(); ++i)
    EXPECT_LE((split.phi[i] - std::get<MatrixElement>(sample[i]).value).norm(), 1e-15);
  EXPECT_EQ(split.phi_zero_residual, 0.0);
  EXPECT_TRUE(split.phi_pd.verdict);
}

TEST(BirthDecomposition, RandomBirthModels) {
  Rng rng(6);
  for (int i = 0; i < 10; ++i) {
    const auto spec = random_birth_spec(1 + i % 3, 1 + i % 2, i % 3, rng, i % 2 == 0);
    const auto model = birth_model(spec);
    const auto sample = model.semigroup.sample_elements(8, 100 + static_cast<std::uint64_t>(i));
    const auto split = birth_decomposition(model, sample);
    EXPECT_LE(split.phi_zero_residual, 1e-14);
    EXPECT_TRUE(split.phi_pd.verdict);
    EXPECT_LE(birth_coboundary_residual(spec, sample), 1e-10);
  }
}

TEST(BirthDecomposition, NeedsZeroElement) {
  const auto model = z2_model(-1.0);
  EXPECT_THROW(birth_decomposition(model, model.semigroup.all_elements()), InputError);
}

}  // namespace
}  // namespace itodilate
