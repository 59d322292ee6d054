#pragma once

// Finite-mode Ito algebra of quadruples a = (a_.^., a_+^., a_.^-, a_+^-).
//
// Index convention for the extended (n+2)x(n+2) matrix form: rows and
// columns are ordered (-, 1..n, +). Upper index = row, lower index = column.
// The first column and the last row of an embedded quadruple vanish.

#include "itodilate/types.hpp"

namespace itodilate {

struct ItoQuadruple {
  Matrix exchange;         // a_.^.  (n x n)
  Vector creation;         // a_+^.  (n)
  RowVector annihilation;  // a_.^-  (n)
  Complex scalar{0.0, 0.0};  // a_+^-

  static ItoQuadruple zero(Index n) {
    return {Matrix::Zero(n, n), Vector::Zero(n), RowVector::Zero(n), Complex{}};
  }

  Index modes() const { return exchange.rows(); }

  bool consistent() const {
    const Index n = exchange.rows();
    return exchange.cols() == n && creation.size() == n && annihilation.size() == n;
  }

  bool finite() const {
    return exchange.allFinite() && creation.allFinite() && annihilation.allFinite() &&
           std::isfinite(scalar.real()) && std::isfinite(scalar.imag());
  }
};

inline void validate(const ItoQuadruple& a) {
  require(a.consistent(), "ito quadruple blocks disagree on the mode count");
  require(a.finite(), "ito quadruple has non-finite entries");
}

/// Product b*a = (b_.^mu a_nu^.). The scalar blocks of the factors never
/// contribute (dt*dt = 0).
inline ItoQuadruple ito_mul(const ItoQuadruple& b, const ItoQuadruple& a) {
  require(b.modes() == a.modes(), "ito_mul: mode-count mismatch");
  ItoQuadruple out;
  out.exchange = b.exchange * a.exchange;
  out.creation = b.exchange * a.creation;
  out.annihilation = b.annihilation * a.exchange;
  out.scalar = (b.annihilation * a.creation)(0, 0);
  return out;
}

/// Involution b_{-nu}^mu = conj(a_{-mu}^nu).
inline ItoQuadruple ito_flat(const ItoQuadruple& a) {
  ItoQuadruple out;
  out.exchange = a.exchange.adjoint();
  out.creation = a.annihilation.adjoint();
  out.annihilation = a.creation.adjoint();
  out.scalar = std::conj(a.scalar);
  return out;
}

inline Matrix embed_extended(const ItoQuadruple& a) {
  const Index n = a.modes();
  Matrix m = Matrix::Zero(n + 2, n + 2);
  m.block(0, 1, 1, n) = a.annihilation;
  m(0, n + 1) = a.scalar;
  m.block(1, 1, n, n) = a.exchange;
  m.block(1, n + 1, n, 1) = a.creation;
  return m;
}

/// Inverse of embed_extended. Throws if the first column or last row is
/// not identically zero.
inline ItoQuadruple from_extended(const Matrix& m) {
  require(m.rows() == m.cols() && m.rows() >= 2, "extended matrix must be square of size n+2");
  const Index n = m.rows() - 2;
  require(m.col(0).isZero(0.0) && m.row(n + 1).isZero(0.0),
          "extended matrix must have zero first column and zero last row");
  ItoQuadruple a;
  a.annihilation = m.block(0, 1, 1, n);
  a.scalar = m(0, n + 1);
  a.exchange = m.block(1, 1, n, n);
  a.creation = m.block(1, n + 1, n, 1);
  return a;
}

/// g_{mu nu} = delta^mu_{-nu}: couples - with +, identity on the modes.
inline RealMatrix minkowski_metric(Index n) {
  RealMatrix g = RealMatrix::Zero(n + 2, n + 2);
  g(0, n + 1) = 1.0;
  g(n + 1, 0) = 1.0;
  for (Index i = 1; i <= n; ++i) g(i, i) = 1.0;
  return g;
}

inline ItoQuadruple operator+(const ItoQuadruple& a, const ItoQuadruple& b) {
  require(a.modes() == b.modes(), "ito quadruple sum: mode-count mismatch");
  return {a.exchange + b.exchange, a.creation + b.creation, a.annihilation + b.annihilation,
          a.scalar + b.scalar};
}

inline ItoQuadruple operator-(const ItoQuadruple& a, const ItoQuadruple& b) {
  require(a.modes() == b.modes(), "ito quadruple difference: mode-count mismatch");
  return {a.exchange - b.exchange, a.creation - b.creation, a.annihilation - b.annihilation,
          a.scalar - b.scalar};
}

/// Frobenius norm of the extended embedding.
inline double norm(const ItoQuadruple& a) {
  return std::sqrt(a.exchange.squaredNorm() + a.creation.squaredNorm() +
                   a.annihilation.squaredNorm() + std::norm(a.scalar));
}

}  // namespace itodilate
