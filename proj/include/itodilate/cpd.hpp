#pragma once

// Positive and conditionally positive definiteness tests on finite samples.

#include "itodilate/germ.hpp"

#include <Eigen/Eigenvalues>

#include <vector>

namespace itodilate {

struct CpdReport {
  bool verdict = true;
  double min_eigenvalue = 0.0;
  /// Largest |entry| of the tested (uncompressed) matrix.
  double scale = 0.0;
  double tolerance = kDefaultTolerance;
  /// |M - M'| (Frobenius) of the tested matrix.
  double asymmetry = 0.0;
  /// Unit vector in the coordinates of the tested matrix attaining min_eigenvalue.
  Vector witness;
  /// Constrained-subspace matrix whose spectrum decides the verdict.
  Matrix compressed;
  std::vector<Element> sample;
};

/// Minimal eigenvalue of the hermitian part of `m` compressed to the
/// orthonormal columns of `basis`.
inline CpdReport psd_report(const Matrix& m, const Matrix& basis, double tol) {
  require(tol > 0.0, "tolerance must be positive");
  require(m.rows() == m.cols(), "PSD test needs a square matrix");
  require(basis.rows() == m.rows(), "constraint basis has wrong dimension");
  CpdReport report;
  report.tolerance = tol;
  report.scale = max_abs_entry(m);
  report.asymmetry = (m - m.adjoint()).norm();
  report.compressed = basis.adjoint() * hermitian_part(m) * basis;
  report.compressed = hermitian_part(report.compressed);
  if (report.compressed.rows() == 0) {
    report.min_eigenvalue = 0.0;
    report.witness = Vector::Zero(m.rows());
    report.verdict = true;
    return report;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(report.compressed);
  report.min_eigenvalue = eig.eigenvalues()(0);
  report.witness = basis * eig.eigenvectors().col(0);
  report.verdict = report.min_eigenvalue >= -tol * std::max(report.scale, 1.0);
  return report;
}

inline CpdReport psd_report(const Matrix& m, double tol) {
  return psd_report(m, Matrix::Identity(m.rows(), m.cols()), tol);
}

/// Rayleigh quotient of the hermitian part of m at w.
inline double rayleigh_quotient(const Matrix& m, const Vector& w) {
  const double denom = w.squaredNorm();
  if (denom == 0.0) return 0.0;
  return (w.adjoint() * hermitian_part(m) * w)(0, 0).real() / denom;
}

/// Block matrix with (i, k) block lambda(y_i* y_k); block size 1 + n.
inline Matrix germ_block_matrix(const GeneratorModel& model, const std::vector<Element>& elements) {
  const Index b = 1 + model.n_modes;
  const Index total = b * static_cast<Index>(elements.size());
  Matrix out(total, total);
  const auto& s = model.semigroup;
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (std::size_t k = 0; k < elements.size(); ++k)
      out.block(static_cast<Index>(i) * b, static_cast<Index>(k) * b, b, b) =
          germ_of(model, s.star_compose(elements[i], elements[k]));
  return out;
}

/// Block matrix with (i, k) block Delta(y_i, y_k).
inline Matrix dissipator_block_matrix(const GeneratorModel& model,
                                      const std::vector<Element>& elements) {
  const Index b = 1 + model.n_modes;
  const Index total = b * static_cast<Index>(elements.size());
  Matrix out(total, total);
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (std::size_t k = 0; k < elements.size(); ++k)
      out.block(static_cast<Index>(i) * b, static_cast<Index>(k) * b, b, b) =
          dissipator_of(model, elements[i], elements[k]);
  return out;
}

/// Orthonormal basis of {zeta : sum_j zeta_j^scalar = 0} in block
/// coordinates (N blocks of size 1 + n). Scalar part: orthonormalized
/// differences (delta_j - delta_{j+1}) / sqrt 2; mode components are free.
inline Matrix scalar_sum_zero_basis(Index blocks, Index n_modes) {
  const Index b = 1 + n_modes;
  const Index scalar_dim = blocks > 0 ? blocks - 1 : 0;
  Matrix diffs = Matrix::Zero(blocks, scalar_dim);
  for (Index j = 0; j < scalar_dim; ++j) {
    diffs(j, j) = 1.0 / std::sqrt(2.0);
    diffs(j + 1, j) = -1.0 / std::sqrt(2.0);
  }
  Matrix scalar_basis(blocks, scalar_dim);
  if (scalar_dim > 0) {
    Eigen::HouseholderQR<Matrix> qr(diffs);
    scalar_basis = qr.householderQ() * Matrix::Identity(blocks, scalar_dim);
  }
  Matrix basis = Matrix::Zero(blocks * b, scalar_dim + blocks * n_modes);
  for (Index j = 0; j < blocks; ++j) {
    for (Index c = 0; c < scalar_dim; ++c) basis(j * b, c) = scalar_basis(j, c);
    for (Index m = 0; m < n_modes; ++m) basis(j * b + 1 + m, scalar_dim + j * n_modes + m) = 1.0;
  }
  return basis;
}

/// CPD of the germ with respect to e on the given elements.
inline CpdReport cpd_check(const GeneratorModel& model, const std::vector<Element>& elements,
                           double tol = kDefaultTolerance) {
  require(!elements.empty(), "cpd_check: empty sample");
  const Matrix lambda = germ_block_matrix(model, elements);
  CpdReport report = psd_report(
      lambda, scalar_sum_zero_basis(static_cast<Index>(elements.size()), model.n_modes), tol);
  report.sample = elements;
  return report;
}

/// Positive definiteness of the dissipation form on the given elements.
inline CpdReport dissipator_pd_check(const GeneratorModel& model,
                                     const std::vector<Element>& elements,
                                     double tol = kDefaultTolerance) {
  require(!elements.empty(), "dissipator_pd_check: empty sample");
  CpdReport report = psd_report(dissipator_block_matrix(model, elements), tol);
  report.sample = elements;
  return report;
}

}  // namespace itodilate
