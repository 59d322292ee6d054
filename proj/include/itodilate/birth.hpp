#pragma once

// Tensor-power birth maps over the unit ball of B(C^d).
//
// With j(y) = (+)_k y^{(x)k}, the birth map has blocks
//   phi(y)       = sum_{k>=1} s^k' y^{(x)k} s^k
//   phi_n(y)     = sum_{k>=1} s^k' y^{(x)k} s_n^k      (row, scalar row)
//   phi^m(y)     = sum_{k>=1} s_m^k' y^{(x)k} s^k      (column, scalar col)
//   phi_n^m(y)   = sum_{k>=0} s_m^k' y^{(x)k} s_n^k
// and the germ is lambda = phi - [[kappa, kappa_.], [kappa_.', 0]].

#include "itodilate/types.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <vector>

namespace itodilate {

struct BirthSpec {
  Index base_dim = 1;
  Index k_max = 1;
  Index n_modes = 0;
  /// sigma[k-1] in (C^d)^{(x)k}, k = 1..k_max.
  std::vector<Vector> sigma;
  /// sigma_modes[n][k] in (C^d)^{(x)k}, k = 0..k_max.
  std::vector<std::vector<Vector>> sigma_modes;
  double kappa = 0.0;
  RowVector kappa_modes;

  /// sum_k |s^k|^2 = phi(1).
  double sigma_norm_squared() const {
    double total = 0.0;
    for (const auto& s : sigma) total += s.squaredNorm();
    return total;
  }
};

inline Index tensor_dim(Index base, Index power) {
  Index out = 1;
  for (Index i = 0; i < power; ++i) out *= base;
  return out;
}

inline void validate(const BirthSpec& spec) {
  require(spec.base_dim >= 1, "birth spec: base dimension must be positive");
  require(spec.k_max >= 1, "birth spec: k_max must be at least 1");
  require(spec.n_modes >= 0, "birth spec: negative mode count");
  require(static_cast<Index>(spec.sigma.size()) == spec.k_max,
          "birth spec: expected one sigma vector per tensor power");
  for (Index k = 1; k <= spec.k_max; ++k) {
    require(spec.sigma[k - 1].size() == tensor_dim(spec.base_dim, k),
            "birth spec: sigma^" + std::to_string(k) + " has wrong dimension");
  }
  require(static_cast<Index>(spec.sigma_modes.size()) == spec.n_modes,
          "birth spec: expected one sigma family per mode");
  for (const auto& family : spec.sigma_modes) {
    require(static_cast<Index>(family.size()) == spec.k_max + 1,
            "birth spec: mode sigma family must cover k = 0..k_max");
    for (Index k = 0; k <= spec.k_max; ++k) {
      require(family[k].size() == tensor_dim(spec.base_dim, k),
              "birth spec: mode sigma has wrong dimension");
    }
  }
  require(spec.kappa_modes.size() == spec.n_modes, "birth spec: kappa_modes has wrong size");
  require(std::isfinite(spec.kappa), "birth spec: kappa must be finite");
}

/// y^{(x)0}, ..., y^{(x)k_max} by explicit Kronecker products.
inline std::vector<Matrix> tensor_powers(const Matrix& y, Index k_max) {
  std::vector<Matrix> powers;
  powers.reserve(static_cast<std::size_t>(k_max + 1));
  powers.push_back(Matrix::Identity(1, 1));
  for (Index k = 1; k <= k_max; ++k) {
    powers.push_back(Eigen::kroneckerProduct(powers.back(), y).eval());
  }
  return powers;
}

inline Matrix birth_phi(const BirthSpec& spec, const Matrix& y) {
  validate(spec);
  require(y.rows() == spec.base_dim && y.cols() == spec.base_dim,
          "birth_phi: contraction has wrong dimension");
  require(operator_norm(y) <= 1.0 + 1e-12, "birth_phi: argument is not a contraction");
  const Index n = spec.n_modes;
  const auto powers = tensor_powers(y, spec.k_max);
  Matrix phi = Matrix::Zero(1 + n, 1 + n);
  for (Index k = 1; k <= spec.k_max; ++k) {
    const Vector ys = powers[k] * spec.sigma[k - 1];
    phi(0, 0) += spec.sigma[k - 1].dot(ys);
    for (Index m = 0; m < n; ++m) phi(1 + m, 0) += spec.sigma_modes[m][k].dot(ys);
    for (Index j = 0; j < n; ++j) {
      phi(0, 1 + j) += spec.sigma[k - 1].dot(powers[k] * spec.sigma_modes[j][k]);
    }
  }
  for (Index k = 0; k <= spec.k_max; ++k) {
    for (Index j = 0; j < n; ++j) {
      const Vector yj = powers[k] * spec.sigma_modes[j][k];
      for (Index m = 0; m < n; ++m) phi(1 + m, 1 + j) += spec.sigma_modes[m][k].dot(yj);
    }
  }
  return phi;
}

/// [[kappa, kappa_.], [kappa_.', 0]]
inline Matrix birth_kappa(const BirthSpec& spec) {
  const Index n = spec.n_modes;
  Matrix kappa = Matrix::Zero(1 + n, 1 + n);
  kappa(0, 0) = spec.kappa;
  kappa.block(0, 1, 1, n) = spec.kappa_modes;
  kappa.block(1, 0, n, 1) = spec.kappa_modes.adjoint();
  return kappa;
}

inline Matrix germ_from_birth(const BirthSpec& spec, const Matrix& y) {
  return birth_phi(spec, y) - birth_kappa(spec);
}

}  // namespace itodilate
