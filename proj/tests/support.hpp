#pragma once

#include "itodilate/itodilate.hpp"

#include <gtest/gtest.h>

namespace itodilate::testing {

inline ItoQuadruple scalar_quadruple(Complex scalar, Index n = 0) {
  ItoQuadruple a = ItoQuadruple::zero(n);
  a.scalar = scalar;
  return a;
}

/// Table model on Z_m with n = 0 and the given scalar alpha per group index.
inline GeneratorModel cyclic_scalar_model(const std::vector<Complex>& values) {
  TableForm t;
  for (std::size_t i = 0; i < values.size(); ++i) {
    t.elements.push_back(GroupElement{i});
    t.alpha.push_back(scalar_quadruple(values[i]));
  }
  return GeneratorModel{cyclic_group(values.size()), 0, std::move(t)};
}

/// Z2 with lambda(1) = 0 and lambda(s) = value.
inline GeneratorModel z2_model(double value) { return cyclic_scalar_model({0.0, value}); }

/// alpha = 0 on every element of a finite group.
inline GeneratorModel zero_map_model(const StarSemigroup& s, Index n) {
  TableForm t;
  for (const auto& e : s.all_elements()) {
    t.elements.push_back(e);
    t.alpha.push_back(ItoQuadruple::zero(n));
  }
  return GeneratorModel{s, n, std::move(t)};
}

/// lambda(y) = y - 1 on the unit disc.
inline BirthSpec scalar_birth_spec() {
  BirthSpec spec;
  spec.base_dim = 1;
  spec.k_max = 1;
  spec.n_modes = 0;
  spec.sigma = {Vector::Ones(1)};
  spec.kappa = 1.0;
  spec.kappa_modes = RowVector::Zero(0);
  return spec;
}

inline Matrix scalar_matrix(Complex c) {
  Matrix m(1, 1);
  m(0, 0) = c;
  return m;
}

inline GeneratorModel scalar_poisson_model(Complex alpha, Complex lambda) {
  ScalarPoissonForm form;
  form.elements = {MatrixElement{Matrix::Identity(1, 1)}};
  form.alpha = {alpha};
  form.lambda = {lambda};
  return GeneratorModel{matrix_ball(1), 0, std::move(form)};
}

inline double max_entry_gap(const Matrix& a, const Matrix& b) { return max_abs_entry(a - b); }

}  // namespace itodilate::testing
