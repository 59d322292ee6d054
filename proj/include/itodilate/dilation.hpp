#pragma once

// Constructive dilation of a conditionally positive definite germ:
// factorize the dissipation Gram over a star-closed sample, read off the
// cocycle k, the representation j and the mode operator L, then assemble
// the pseudo-Hilbert representation on C (+) K (+) C.

#include "itodilate/cpd.hpp"
#include "itodilate/dilation_data.hpp"
#include "itodilate/germ.hpp"

#include <Eigen/Eigenvalues>

#include <vector>

namespace itodilate {

struct DilationOptions {
  /// Eigenvalues below rank_tol * (largest eigenvalue) are treated as zero.
  double rank_tol = 1e-10;
  /// Allowed negativity of the Gram, relative to max(|entry|, 1).
  double psd_tol = kDefaultTolerance;
  /// Largest acceptable residual of the constructed (j, k, l, L).
  double residual_limit = 1e-6;
  std::size_t closure_cap = 512;
};

inline DilationResiduals dilation_residuals(const DilationData& dd, const GeneratorModel& model) {
  const auto& s = model.semigroup;
  const auto& el = dd.elements;
  DilationResiduals r;
  for (std::size_t xi = 0; xi < el.size(); ++xi) {
    const std::size_t xs = dd.index_of(s, s.star(el[xi]));
    for (std::size_t zi = 0; zi < el.size(); ++zi) {
      const std::size_t xz = dd.index_of(s, s.star_compose(el[xi], el[zi]));
      r.representation =
          std::max(r.representation, (dd.j[xz] - dd.j[xi].adjoint() * dd.j[zi]).norm());
      r.cocycle =
          std::max(r.cocycle, (dd.k[xz] - dd.j[xi].adjoint() * dd.k[zi] - dd.k[xs]).norm());
      const Complex kk = dd.k_dim > 0 ? dd.k[xi].dot(dd.k[zi]) : Complex{};
      r.coboundary = std::max(r.coboundary, std::abs(dd.l[xz] - dd.l[zi] - dd.l[xs] - kk));
    }
    const Matrix lambda_star = germ_of(model, s.star(el[xi]));
    const Matrix lambda = germ_of(model, el[xi]);
    for (Index n = 0; n < dd.n_modes; ++n) {
      const Complex pred = (dd.k[xi].adjoint() * dd.mode_circ.col(n))(0, 0) + dd.mode_minus(n);
      r.modes = std::max(r.modes, std::abs(lambda_star(0, 1 + n) - pred));
    }
    if (dd.n_modes > 0) {
      const Matrix exch = dd.mode_circ.adjoint() * dd.j[xi] * dd.mode_circ;
      r.modes = std::max(r.modes, (lambda.bottomRightCorner(dd.n_modes, dd.n_modes) - exch).norm());
    }
  }
  return r;
}

inline DilationData build_dilation(const GeneratorModel& model, const std::vector<Element>& sample,
                                   const DilationOptions& options = {}) {
  const auto& s = model.semigroup;
  require(!sample.empty(), "build_dilation: empty sample");
  DilationData dd;
  dd.elements = s.close(sample, options.closure_cap);
  dd.n_modes = model.n_modes;
  const Index n = model.n_modes;
  const Index b = 1 + n;
  const auto count = static_cast<Index>(dd.elements.size());
  const std::size_t unit_idx = *s.find(dd.elements, s.unit());
  dd.d = unit_scalar(model);

  const Matrix gram = hermitian_part(dissipator_block_matrix(model, dd.elements));
  dd.gram = Matrix(count, count);
  for (Index i = 0; i < count; ++i)
    for (Index k = 0; k < count; ++k) dd.gram(i, k) = gram(i * b, k * b);

  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  const RealVector& mu = eig.eigenvalues();  // ascending
  dd.gram_spectrum = mu.reverse();
  const double scale = std::max(max_abs_entry(gram), 1.0);
  if (mu(0) < -options.psd_tol * scale) {
    throw ConstructionError("dissipation Gram is not positive semidefinite (min eigenvalue " +
                            std::to_string(mu(0)) + "): the germ is not CPD on this sample");
  }
  const double top = mu(mu.size() - 1);
  std::vector<Index> kept;
  for (Index i = mu.size() - 1; i >= 0; --i) {
    if (top > 0.0 && mu(i) > options.rank_tol * top) kept.push_back(i);
  }
  dd.k_dim = static_cast<Index>(kept.size());
  const Index kd = dd.k_dim;

  // Feature vectors: column c of `phi` is the image of basis vector c, so
  // gram = phi' phi. With U the kept eigenvectors, phi = diag(sqrt mu) U'.
  Matrix u_kept(gram.rows(), kd);
  RealVector root(kd);
  for (Index i = 0; i < kd; ++i) {
    u_kept.col(i) = eig.eigenvectors().col(kept[static_cast<std::size_t>(i)]);
    root(i) = std::sqrt(mu(kept[static_cast<std::size_t>(i)]));
  }
  const Matrix phi = root.asDiagonal() * u_kept.adjoint();
  // Right inverse of phi: phi * right_inverse = I.
  const Matrix right_inverse = u_kept * root.cwiseInverse().asDiagonal();

  dd.k.resize(dd.elements.size());
  for (Index i = 0; i < count; ++i) dd.k[i] = phi.col(i * b);
  dd.k[unit_idx] = Vector::Zero(kd);

  dd.mode_circ = Matrix(kd, n);
  for (Index m = 0; m < n; ++m) dd.mode_circ.col(m) = phi.col(static_cast<Index>(unit_idx) * b + 1 + m);

  // j(x)' phi = R_x, where R_x maps (z, scalar) to k(x*z) - k(x*) and
  // (z, m) to the feature of (x*z, m).
  dd.j.resize(dd.elements.size());
  for (Index x = 0; x < count; ++x) {
    const std::size_t xs = dd.index_of(s, s.star(dd.elements[x]));
    Matrix rhs(kd, gram.rows());
    for (Index z = 0; z < count; ++z) {
      const std::size_t xz = dd.index_of(s, s.star_compose(dd.elements[x], dd.elements[z]));
      rhs.col(z * b) = dd.k[xz] - dd.k[xs];
      for (Index m = 0; m < n; ++m) rhs.col(z * b + 1 + m) = phi.col(static_cast<Index>(xz) * b + 1 + m);
    }
    dd.j[x] = (rhs * right_inverse).adjoint();
  }
  dd.j[unit_idx] = Matrix::Identity(kd, kd);

  dd.l.resize(dd.elements.size());
  for (Index i = 0; i < count; ++i) dd.l[i] = germ_of(model, dd.elements[i])(0, 0) - dd.d;
  dd.l[unit_idx] = 0.0;

  // L_n^- by least squares over lambda_n(y*) = k(y)' L_n^o + L_n^-.
  dd.mode_minus = RowVector::Zero(n);
  for (Index m = 0; m < n; ++m) {
    Complex acc{};
    for (Index i = 0; i < count; ++i) {
      const Matrix lambda_star = germ_of(model, s.star(dd.elements[i]));
      acc += lambda_star(0, 1 + m) - (dd.k[i].adjoint() * dd.mode_circ.col(m))(0, 0);
    }
    dd.mode_minus(m) = acc / static_cast<double>(count);
  }

  dd.residuals = dilation_residuals(dd, model);
  if (dd.residuals.max() > options.residual_limit) {
    throw ConstructionError("dilation residuals exceed " + std::to_string(options.residual_limit) +
                            " (max " + std::to_string(dd.residuals.max()) + ")");
  }
  return dd;
}

struct PseudoHilbert {
  Index e_dim = 2;
  double d = 0.0;
  Matrix metric;  // G
  std::vector<Element> elements;
  std::vector<Matrix> jmath;
  Matrix mode_operator;  // L
  /// max |jmath(x*z) - jmath(x)^flat jmath(z)| and |jmath(1) - I|.
  double flat_residual = 0.0;
};

inline PseudoHilbert assemble_pseudo_hilbert(const DilationData& dd, const GeneratorModel& model,
                                             double residual_limit = 1e-6) {
  validate(dd);
  require(dd.residuals.max() <= residual_limit,
          "assemble_pseudo_hilbert: dilation residuals out of bounds");
  const auto& s = model.semigroup;
  PseudoHilbert ph;
  ph.e_dim = dd.k_dim + 2;
  ph.d = dd.d;
  ph.metric = pseudo_metric(dd.k_dim, dd.d);
  ph.elements = dd.elements;
  for (std::size_t i = 0; i < dd.elements.size(); ++i) ph.jmath.push_back(assemble_jmath(dd, s, i));
  ph.mode_operator = assemble_mode_operator(dd);
  const Matrix identity = Matrix::Identity(ph.e_dim, ph.e_dim);
  ph.flat_residual = (ph.jmath[dd.index_of(s, s.unit())] - identity).norm();
  for (std::size_t x = 0; x < dd.elements.size(); ++x)
    for (std::size_t z = 0; z < dd.elements.size(); ++z) {
      const std::size_t xz = dd.index_of(s, s.star_compose(dd.elements[x], dd.elements[z]));
      const Matrix rhs = pseudo_adjoint(ph.jmath[x], dd.k_dim, dd.d) * ph.jmath[z];
      ph.flat_residual = std::max(ph.flat_residual, (ph.jmath[xz] - rhs).norm());
    }
  return ph;
}

/// max_y |L' G jmath(y) L - lambda(y)|.
inline double reconstruction_residual(const PseudoHilbert& ph, const GeneratorModel& model,
                                      const std::vector<Element>& sample) {
  const auto& s = model.semigroup;
  const Matrix lflat = ph.mode_operator.adjoint() * ph.metric;
  double worst = 0.0;
  for (const auto& y : sample) {
    auto idx = s.find(ph.elements, y);
    if (!idx) throw InputError("reconstruction_residual: element outside the dilation table");
    const Matrix rebuilt = lflat * ph.jmath[*idx] * ph.mode_operator;
    worst = std::max(worst, (rebuilt - germ_of(model, y)).norm());
  }
  return worst;
}

struct BirthDecomposition {
  /// kappa = -lambda(0), full (1+n)x(1+n).
  Matrix kappa;
  std::vector<Element> elements;
  std::vector<Matrix> phi;  // phi(y) = lambda(y) + kappa
  double phi_zero_residual = 0.0;
  CpdReport phi_pd;
};

/// Splits lambda = phi - kappa with phi(0) = 0 and tests that phi is a PD
/// map on `sample`.
inline BirthDecomposition birth_decomposition(const GeneratorModel& model,
                                              const std::vector<Element>& sample,
                                              double tol = kDefaultTolerance) {
  const auto& s = model.semigroup;
  const auto zero = s.zero();
  if (!zero) throw InputError("birth_decomposition: the semigroup has no zero element");
  BirthDecomposition out;
  out.kappa = -germ_of(model, *zero);
  out.elements = sample;
  for (const auto& y : sample) out.phi.push_back(germ_of(model, y) + out.kappa);
  out.phi_zero_residual = (germ_of(model, *zero) + out.kappa).norm();
  const Index b = 1 + model.n_modes;
  const auto count = static_cast<Index>(sample.size());
  Matrix big(b * count, b * count);
  for (Index i = 0; i < count; ++i)
    for (Index k = 0; k < count; ++k)
      big.block(i * b, k * b, b, b) =
          germ_of(model, s.star_compose(sample[i], sample[k])) + out.kappa;
  out.phi_pd = psd_report(big, tol);
  out.phi_pd.sample = sample;
  return out;
}

}  // namespace itodilate
