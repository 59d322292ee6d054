#include "support.hpp"

#include <algorithm>

namespace itodilate {
namespace {

using testing::z2_model;
using testing::zero_map_model;

TEST(CpdCheck, Z2NegativeIsCpd) {
  const auto model = z2_model(-1.0);
  const auto r = cpd_check(model, model.semigroup.all_elements());
  ASSERT_EQ(r.compressed.rows(), 1);
  EXPECT_NEAR(std::abs(r.compressed(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_TRUE(r.verdict);
  EXPECT_NEAR(r.min_eigenvalue, 1.0, 1e-15);
}

TEST(CpdCheck, Z2PositiveFailsWithWitness) {
  const auto model = z2_model(1.0);
  const auto r = cpd_check(model, model.semigroup.all_elements());
  EXPECT_NEAR(std::abs(r.compressed(0, 0) + 1.0), 0.0, 1e-15);
  EXPECT_FALSE(r.verdict);
  ASSERT_EQ(r.witness.size(), 2);
  const Complex phase = r.witness(0) / std::abs(r.witness(0));
  EXPECT_NEAR(std::abs(r.witness(0) / phase - 1.0 / std::sqrt(2.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(r.witness(1) / phase + 1.0 / std::sqrt(2.0)), 0.0, 1e-14);
}

TEST(CpdCheck, WitnessReproducesMinimum) {
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    const auto base = random_dilated_model(cyclic_group(4), 2, 1, rng);
    const auto el = base.semigroup.all_elements();
    auto table = tabulate(base, el);
    auto& alpha = std::get<TableForm>(table.form).alpha;
    for (std::size_t k = 1; k < alpha.size(); ++k) alpha[k].scalar += 0.5 * static_cast<double>(k);
    const auto r = cpd_check(table, el);
    EXPECT_NEAR(rayleigh_quotient(germ_block_matrix(table, el), r.witness), r.min_eigenvalue, 1e-8);
    const auto d = dissipator_pd_check(table, el);
    EXPECT_NEAR(rayleigh_quotient(dissipator_block_matrix(table, el), d.witness), d.min_eigenvalue, 1e-8);
  }
}

TEST(CpdCheck, ZeroMapIsCpd) {
  for (Index n : {0, 1, 2}) {
    const auto model = zero_map_model(quaternion_group(), n);
    const auto r = cpd_check(model, model.semigroup.all_elements());
    EXPECT_TRUE(r.verdict);
    EXPECT_GE(r.min_eigenvalue, -1e-14);
  }
}

TEST(CpdCheck, RejectsEmptySampleAndBadTolerance) {
  const auto model = z2_model(-1.0);
  EXPECT_THROW(cpd_check(model, {}), InputError);
  EXPECT_THROW(cpd_check(model, model.semigroup.all_elements(), 0.0), InputError);
  EXPECT_THROW(dissipator_pd_check(model, {}), InputError);
}

TEST(DissipatorPdCheck, Z2Fixtures) {
  const auto neg = z2_model(-1.0);
  const auto el = neg.semigroup.all_elements();
  Matrix expected(2, 2);
  expected << 0, 0, 0, 2;
  EXPECT_EQ(dissipator_block_matrix(neg, el), expected);
  EXPECT_TRUE(dissipator_pd_check(neg, el).verdict);

  const auto pos = z2_model(1.0);
  EXPECT_NEAR(std::abs(dissipator_block_matrix(pos, el)(1, 1) + 2.0), 0.0, 1e-15);
  EXPECT_FALSE(dissipator_pd_check(pos, el).verdict);
}

TEST(DissipatorPdCheck, ZeroMapBlocks) {
  const auto model = zero_map_model(cyclic_group(3), 1);
  const auto el = model.semigroup.all_elements();
  const Matrix m = dissipator_block_matrix(model, el);
  for (Index i = 0; i < 3; ++i)
    for (Index k = 0; k < 3; ++k) {
      Matrix block = Matrix::Zero(2, 2);
      block(1, 1) = 1.0;
      EXPECT_EQ(m.block(2 * i, 2 * k, 2, 2), block);
    }
  EXPECT_TRUE(dissipator_pd_check(model, el).verdict);
}

TEST(ScalarSumZeroBasis, OrthonormalAndConstrained) {
  for (Index blocks : {1, 2, 5}) {
    for (Index n : {0, 2}) {
      const Matrix b = scalar_sum_zero_basis(blocks, n);
      const Index dim = blocks * (1 + n);
      ASSERT_EQ(b.rows(), dim);
      ASSERT_EQ(b.cols(), dim - 1);
      EXPECT_LE((b.adjoint() * b - Matrix::Identity(dim - 1, dim - 1)).norm(), 1e-13);
      for (Index c = 0; c < b.cols(); ++c) {
        Complex sum{};
        for (Index i = 0; i < blocks; ++i) sum += b(i * (1 + n), c);
        EXPECT_NEAR(std::abs(sum), 0.0, 1e-13);
      }
    }
  }
}

TEST(PsdReport, KnownMatrices) {
  const auto id = psd_report(Matrix::Identity(3, 3), 1e-9);
  EXPECT_TRUE(id.verdict);
  EXPECT_NEAR(id.min_eigenvalue, 1.0, 1e-15);
  Matrix m(2, 2);
  m << 1, 2, 2, 1;
  const auto r = psd_report(m, 1e-9);
  EXPECT_FALSE(r.verdict);
  EXPECT_NEAR(r.min_eigenvalue, -1.0, 1e-14);
  EXPECT_EQ(r.scale, 2.0);
}

// A random flat-symmetric table on Z_m: alpha(y*) = alpha(y)^flat.
GeneratorModel random_symmetric_table(std::size_t m, Index n, Rng& rng) {
  const auto s = cyclic_group(m);
  std::vector<ItoQuadruple> alpha(m);
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t inv = s.group().inverse[a];
    if (inv < a) {
      alpha[a] = ito_flat(alpha[inv]);
      continue;
    }
    alpha[a] = random_quadruple(n, rng);
    if (inv == a) alpha[a] = ito_flat(alpha[a]) + alpha[a];
  }
  TableForm t{s.all_elements(), alpha};
  return GeneratorModel{s, n, t};
}

TEST(CpdDissipatorEquivalence, VerdictsAgreeOnRandomTables) {
  Rng rng(2);
  int agree = 0, total = 0;
  for (int i = 0; i < 300; ++i) {
    const auto model = random_symmetric_table(2 + static_cast<std::size_t>(i % 4), i % 3, rng);
    const auto el = model.semigroup.all_elements();
    ASSERT_LE(flat_symmetry_residual(model, el), 1e-12);
    const auto a = cpd_check(model, el);
    const auto b = dissipator_pd_check(model, el);
    const double margin = 1e-6 * std::max(1.0, a.scale);
    if (std::abs(a.min_eigenvalue) < margin || std::abs(b.min_eigenvalue) < margin) continue;
    ++total;
    agree += a.verdict == b.verdict;
  }
  EXPECT_GT(total, 200);
  EXPECT_EQ(agree, total);
}

TEST(CpdDissipatorEquivalence, DilatedModelsPassAndPerturbationsFail) {
  Rng rng(3);
  for (int i = 0; i < 40; ++i) {
    const auto s = i % 2 ? quaternion_group() : cyclic_group(static_cast<std::size_t>(2 + i % 4));
    const auto model = random_dilated_model(s, 1 + i % 3, i % 3, rng);
    const auto el = s.all_elements();
    const auto a = cpd_check(model, el);
    const auto b = dissipator_pd_check(model, el);
    EXPECT_TRUE(a.verdict);
    EXPECT_TRUE(b.verdict);
    EXPECT_GE(a.min_eigenvalue, -1e-9 * std::max(a.scale, 1.0));

    // Subtract c * chi(y) from the scalar entry, chi a non-trivial character.
    const auto& chi = s.group().characters[1];
    auto table = tabulate(model, el);
    for (std::size_t k = 0; k < el.size(); ++k)
      std::get<TableForm>(table.form).alpha[k].scalar -= 5.0 * a.scale * chi[k];
    EXPECT_FALSE(cpd_check(table, el).verdict);
    EXPECT_FALSE(dissipator_pd_check(table, el).verdict);
  }
}

TEST(CpdCheck, PermutationInvariance) {
  Rng rng(4);
  for (int i = 0; i < 10; ++i) {
    const auto model = random_dilated_model(quaternion_group(), 2, 1, rng);
    auto table = tabulate(model, model.semigroup.all_elements());
    std::get<TableForm>(table.form).alpha[3].scalar -= 2.0;
    std::get<TableForm>(table.form).alpha[2].scalar -= 2.0;
    auto el = table.semigroup.all_elements();
    const auto a = cpd_check(table, el), b = dissipator_pd_check(table, el);
    std::shuffle(el.begin(), el.end(), rng);
    const auto pa = cpd_check(table, el), pb = dissipator_pd_check(table, el);
    EXPECT_NEAR(a.min_eigenvalue, pa.min_eigenvalue, 1e-10);
    EXPECT_NEAR(b.min_eigenvalue, pb.min_eigenvalue, 1e-10);
    EXPECT_EQ(a.verdict, pa.verdict);
    EXPECT_EQ(b.verdict, pb.verdict);
  }
}

}  // namespace
}  // namespace itodilate
