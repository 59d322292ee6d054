#pragma once

// Data of a pseudo-Hilbert dilation (K, j, k, l, d) together with the mode
// operator L, and the block assembly on E = C (+) K (+) C with rows and
// columns ordered (-, o, +).

#include "itodilate/semigroup.hpp"

#include <vector>

namespace itodilate {

struct DilationResiduals {
  double representation = 0.0;  // |j(x*z) - j(x)' j(z)|
  double cocycle = 0.0;         // |k(x*z) - j(x)' k(z) - k(x*)|
  double coboundary = 0.0;      // |l(x*z) - l(z) - l(x*) - k(x)' k(z)|
  double modes = 0.0;           // |lambda_n(y*) - k(y)' L_n^o - L_n^-| and exchange block

  double max() const { return std::max({representation, cocycle, coboundary, modes}); }
};

struct DilationData {
  Index k_dim = 0;
  Index n_modes = 0;
  double d = 0.0;
  /// Tables over a star-closed element list; j[i], k[i], l[i] belong to elements[i].
  std::vector<Element> elements;
  std::vector<Matrix> j;
  std::vector<Vector> k;
  std::vector<Complex> l;
  /// Columns L_n^o (k_dim x n_modes).
  Matrix mode_circ;
  /// Entries L_n^-.
  RowVector mode_minus;
  DilationResiduals residuals;
  /// Scalar Gram l(x*z) - l(x*) - l(z) over `elements`.
  Matrix gram;
  /// Eigenvalues of the full Gram that was factorized, descending.
  RealVector gram_spectrum;

  std::size_t index_of(const StarSemigroup& s, const Element& y) const {
    auto idx = s.find(elements, y);
    if (!idx) throw InputError("element is outside the dilation's element table");
    return *idx;
  }
};

inline void validate(const DilationData& dd) {
  const auto n = dd.elements.size();
  require(dd.j.size() == n && dd.k.size() == n && dd.l.size() == n,
          "dilation tables must match the element list");
  for (std::size_t i = 0; i < n; ++i) {
    require(dd.j[i].rows() == dd.k_dim && dd.j[i].cols() == dd.k_dim, "j has wrong dimension");
    require(dd.k[i].size() == dd.k_dim, "k has wrong dimension");
  }
  require(dd.mode_circ.rows() == dd.k_dim && dd.mode_circ.cols() == dd.n_modes,
          "L_o has wrong shape");
  require(dd.mode_minus.size() == dd.n_modes, "L_- has wrong size");
}

/// G = [[0,0,1],[0,I,0],[1,0,d]].
inline Matrix pseudo_metric(Index k_dim, double d) {
  const Index e = k_dim + 2;
  Matrix g = Matrix::Zero(e, e);
  g(0, e - 1) = 1.0;
  g(e - 1, 0) = 1.0;
  g(e - 1, e - 1) = d;
  g.block(1, 1, k_dim, k_dim).setIdentity();
  return g;
}

/// G^{-1} = [[-d,0,1],[0,I,0],[1,0,0]].
inline Matrix pseudo_metric_inverse(Index k_dim, double d) {
  const Index e = k_dim + 2;
  Matrix g = Matrix::Zero(e, e);
  g(0, e - 1) = 1.0;
  g(e - 1, 0) = 1.0;
  g(0, 0) = -d;
  g.block(1, 1, k_dim, k_dim).setIdentity();
  return g;
}

/// A^flat = G^{-1} A' G.
inline Matrix pseudo_adjoint(const Matrix& a, Index k_dim, double d) {
  return pseudo_metric_inverse(k_dim, d) * a.adjoint() * pseudo_metric(k_dim, d);
}

/// [[1, k*(y), l(y)], [0, j(y), k(y)], [0, 0, 1]] with k*(y) = k(y*)'.
inline Matrix assemble_jmath(const DilationData& dd, const StarSemigroup& s, std::size_t idx) {
  const Index kd = dd.k_dim;
  const std::size_t star_idx = dd.index_of(s, s.star(dd.elements[idx]));
  Matrix m = Matrix::Zero(kd + 2, kd + 2);
  m(0, 0) = 1.0;
  m(kd + 1, kd + 1) = 1.0;
  m.block(0, 1, 1, kd) = dd.k[star_idx].adjoint();
  m(0, kd + 1) = dd.l[idx];
  m.block(1, 1, kd, kd) = dd.j[idx];
  m.block(1, kd + 1, kd, 1) = dd.k[idx];
  return m;
}

/// L : C (+) C^n -> E. Column 0 is (0, 0, 1); column n is (L_n^-, L_n^o, 0).
inline Matrix assemble_mode_operator(const DilationData& dd) {
  const Index kd = dd.k_dim, n = dd.n_modes;
  Matrix l = Matrix::Zero(kd + 2, 1 + n);
  l(kd + 1, 0) = 1.0;
  l.block(0, 1, 1, n) = dd.mode_minus;
  l.block(1, 1, kd, n) = dd.mode_circ;
  return l;
}

/// L^flat j(y) L with L^flat = L' G.
inline Matrix dilated_germ(const DilationData& dd, const StarSemigroup& s, const Element& y) {
  const std::size_t idx = dd.index_of(s, y);
  const Matrix l = assemble_mode_operator(dd);
  return l.adjoint() * pseudo_metric(dd.k_dim, dd.d) * assemble_jmath(dd, s, idx) * l;
}

}  // namespace itodilate
