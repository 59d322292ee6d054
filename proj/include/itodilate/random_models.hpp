#pragma once

// Seeded generators of random test objects: quadruples, dilated models over
// finite groups, birth specs and kernel specs.

#include "itodilate/coherent.hpp"
#include "itodilate/dilation_data.hpp"
#include "itodilate/germ.hpp"
#include "itodilate/pseudo_poisson.hpp"

#include <numbers>
#include <random>

namespace itodilate {

using Rng = std::mt19937_64;

inline Complex random_complex(Rng& rng, double sd = 1.0) {
  std::normal_distribution<double> normal(0.0, sd);
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

inline Matrix random_matrix(Index rows, Index cols, Rng& rng, double sd = 1.0) {
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) m(r, c) = random_complex(rng, sd);
  return m;
}

inline Vector random_vector(Index n, Rng& rng, double sd = 1.0) {
  return random_matrix(n, 1, rng, sd);
}

inline ItoQuadruple random_quadruple(Index n, Rng& rng) {
  return {random_matrix(n, n, rng), random_vector(n, rng), random_matrix(1, n, rng),
          random_complex(rng)};
}

/// Haar-ish unitary from the QR factorization of a Gaussian matrix.
inline Matrix random_unitary(Index n, Rng& rng) {
  if (n == 0) return Matrix(0, 0);
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, rng));
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// Unitary representation of a finite group (Z_m or Q8) of dimension k_dim,
/// as a direct sum of random irreducibles conjugated by a random unitary.
inline std::vector<Matrix> random_group_representation(const StarSemigroup& s, Index k_dim,
                                                        Rng& rng) {
  require(s.is_finite_group(), "random representation needs a finite group");
  const auto& g = s.group();
  const std::size_t order = g.order();
  std::vector<Matrix> rep(order, Matrix::Zero(k_dim, k_dim));
  Index filled = 0;
  while (filled < k_dim) {
    const bool quaternion = g.name == "Q8";
    std::uniform_int_distribution<std::size_t> pick(0, quaternion ? 4 : g.characters.size() - 1);
    const std::size_t choice = pick(rng);
    if (quaternion && choice == 4) {
      if (filled + 2 > k_dim) continue;
      const Complex i1{0.0, 1.0};
      Matrix qi(2, 2), qj(2, 2), qk(2, 2);
      qi << i1, 0.0, 0.0, -i1;
      qj << 0.0, 1.0, -1.0, 0.0;
      qk = qi * qj;
      const auto& units = quaternion_units();
      for (std::size_t a = 0; a < order; ++a) {
        const auto& u = units[a];
        rep[a].block(filled, filled, 2, 2) =
            double(u[0]) * Matrix::Identity(2, 2) + double(u[1]) * qi + double(u[2]) * qj +
            double(u[3]) * qk;
      }
      filled += 2;
    } else {
      for (std::size_t a = 0; a < order; ++a) rep[a](filled, filled) = g.characters[choice][a];
      filled += 1;
    }
  }
  const Matrix u = random_unitary(k_dim, rng);
  for (auto& m : rep) m = u * m * u.adjoint();
  return rep;
}

/// Dilated model over all elements of a finite group:
/// k(y) = j(y)s - s, l(y) = s'j(y)s - s's, random L and d <= 0.
inline GeneratorModel random_dilated_model(const StarSemigroup& s, Index k_dim, Index n_modes,
                                           Rng& rng) {
  DilationData dd;
  dd.k_dim = k_dim;
  dd.n_modes = n_modes;
  dd.elements = s.all_elements();
  const auto rep = random_group_representation(s, k_dim, rng);
  const Vector sigma = random_vector(k_dim, rng);
  std::uniform_real_distribution<double> unif(-1.0, 0.0);
  dd.d = unif(rng);
  for (const auto& e : dd.elements) {
    const Matrix& j = rep[std::get<GroupElement>(e).index];
    dd.j.push_back(j);
    dd.k.push_back(j * sigma - sigma);
    dd.l.push_back(k_dim > 0 ? sigma.dot(j * sigma) - sigma.squaredNorm() : Complex{});
  }
  dd.mode_circ = random_matrix(k_dim, n_modes, rng, 0.7);
  dd.mode_minus = random_matrix(1, n_modes, rng, 0.7);
  return GeneratorModel{s, n_modes, DilatedForm{std::move(dd)}};
}

/// Column (x, scalar) is k(x); column (x, n) is j(x) L_n^o.
inline Matrix dilation_features(const GeneratorModel& model) {
  const auto& dd = std::get<DilatedForm>(model.form).data;
  const Index b = 1 + dd.n_modes;
  Matrix out(dd.k_dim, b * static_cast<Index>(dd.elements.size()));
  for (std::size_t i = 0; i < dd.elements.size(); ++i) {
    const Index base = static_cast<Index>(i) * b;
    out.col(base) = dd.k[i];
    for (Index n = 0; n < dd.n_modes; ++n) out.col(base + 1 + n) = dd.j[i] * dd.mode_circ.col(n);
  }
  return out;
}

inline BirthSpec random_birth_spec(Index base_dim, Index k_max, Index n_modes, Rng& rng,
                                   bool martingale = true) {
  BirthSpec spec;
  spec.base_dim = base_dim;
  spec.k_max = k_max;
  spec.n_modes = n_modes;
  for (Index k = 1; k <= k_max; ++k) {
    const double sd = 0.6 / static_cast<double>(k);
    spec.sigma.push_back(random_vector(tensor_dim(base_dim, k), rng, sd));
  }
  for (Index n = 0; n < n_modes; ++n) {
    std::vector<Vector> family;
    for (Index k = 0; k <= k_max; ++k) {
      family.push_back(random_vector(tensor_dim(base_dim, k), rng, 0.6 / static_cast<double>(k + 1)));
    }
    spec.sigma_modes.push_back(std::move(family));
  }
  std::uniform_real_distribution<double> extra(0.0, 1.0);
  spec.kappa = spec.sigma_norm_squared() + (martingale ? 0.0 : extra(rng));
  spec.kappa_modes = random_matrix(1, n_modes, rng, 0.5);
  return spec;
}

/// Piecewise-constant function with up to `max_segments` segments; the first
/// segment lasts at least `min_first`.
inline CoherentFunction random_coherent_function(Index n, Rng& rng, int max_segments = 2,
                                                 double min_first = 0.05, double sd = 0.7) {
  std::uniform_int_distribution<int> seg_count(0, max_segments);
  std::uniform_real_distribution<double> duration(min_first, 1.0);
  std::vector<std::pair<double, Vector>> segments;
  const int count = seg_count(rng);
  for (int i = 0; i < count; ++i) segments.emplace_back(duration(rng), random_vector(n, rng, sd));
  return CoherentFunction(std::move(segments), random_vector(n, rng, sd));
}

inline KernelSpec random_kernel_spec(const GeneratorModel& model, std::size_t pairs, double t,
                                     Rng& rng) {
  KernelSpec spec;
  spec.t = t;
  const auto& s = model.semigroup;
  std::vector<Element> pool;
  if (s.is_finite_group()) {
    pool = s.all_elements();
  } else {
    pool = s.sample_elements(pairs + 1, rng());
  }
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  for (std::size_t i = 0; i < pairs; ++i) {
    spec.pairs.emplace_back(random_coherent_function(model.n_modes, rng), pool[pick(rng)]);
  }
  return spec;
}

/// A contraction with operator norm in (0, 1) drawn as in sample_elements.
inline Matrix random_contraction(Index d, Rng& rng) {
  const auto ball = matrix_ball(d);
  const auto el = ball.sample_elements(2, rng());
  return std::get<MatrixElement>(el[1]).value;
}

}  // namespace itodilate
