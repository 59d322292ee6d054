#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace itodilate {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Raised for malformed inputs: dimension mismatches, unknown elements,
/// unsupported model forms.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a mathematical construction cannot be completed, e.g. a
/// dilation of a germ that is not conditionally positive definite.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultTolerance = 1e-9;

inline Matrix hermitian_part(const Matrix& m) {
  return (m + m.adjoint()) / 2.0;
}

/// Largest absolute entry; 0 for empty matrices.
inline double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Operator (spectral) norm.
inline double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline bool all_finite(const Matrix& m) {
  return m.allFinite();
}

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InputError(message);
}

}  // namespace itodilate
