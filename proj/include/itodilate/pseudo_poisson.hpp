#pragma once

// Pseudo-Poisson generators over the unit ball of B(C^d): the explicit
// birth-cocycle solution on coherent vectors, martingale normalization and
// the unit-ball norm bounds.

#include "itodilate/birth.hpp"
#include "itodilate/germ.hpp"

#include <cstdint>
#include <vector>

namespace itodilate {

inline GeneratorModel birth_model(BirthSpec spec) {
  validate(spec);
  const Index n = spec.n_modes;
  return GeneratorModel{matrix_ball(spec.base_dim), n, BirthForm{std::move(spec)}};
}

/// Per-factor logarithms of the normalized coherent matrix element of
///   V_t' exp[A_.^+(t) phi^.] Gamma(phi_.^.)^{A_.^.(t)} exp[phi_. A_-^.(t)] V_t exp[t phi]
/// for constant f (bra) and h (ket) on [0, t].
struct SolutionFactors {
  Complex creation;         // bra eigenvalue of exp[A^+ phi^.]:  t f' phi^.
  Complex exchange;         // t (f' phi_.^. h - f' h)
  Complex tail;             // + t f' h from the normalization over [t, inf)
  Complex annihilation;     // ket eigenvalue of exp[phi_. A^-]:  t phi_. h
  Complex normalization;    // V_t' ... V_t: -t (kappa_. h + f' kappa_.' + kappa)
  Complex scalar;           // t phi

  Complex total() const {
    return creation + exchange + tail + annihilation + normalization + scalar;
  }
};

inline SolutionFactors solution_factors(const BirthSpec& spec, const Vector& f, const Vector& h,
                                        const Matrix& y, double t) {
  require(t > 0.0, "eval_solution_37: t must be positive");
  require(f.size() == spec.n_modes && h.size() == spec.n_modes,
          "eval_solution_37: coherent vectors have wrong dimension");
  const Matrix phi = birth_phi(spec, y);
  const Index n = spec.n_modes;
  const Vector phi_up = phi.block(1, 0, n, 1);        // phi^.
  const RowVector phi_down = phi.block(0, 1, 1, n);   // phi_.
  const Matrix phi_ex = phi.block(1, 1, n, n);        // phi_.^.
  SolutionFactors out;
  out.creation = t * f.dot(phi_up);
  out.exchange = t * (f.dot(phi_ex * h) - f.dot(h));
  out.tail = t * f.dot(h);
  out.annihilation = t * (phi_down * h)(0, 0);
  // V_t h = exp(-t kappa_. h - t kappa / 2) h; <f| V_t' = conj of V_t f.
  const Complex ket = -t * (spec.kappa_modes * h)(0, 0) - 0.5 * t * spec.kappa;
  const Complex bra = std::conj(-t * (spec.kappa_modes * f)(0, 0) - 0.5 * t * spec.kappa);
  out.normalization = ket + bra;
  out.scalar = t * phi(0, 0);
  return out;
}

/// log phi_t(f, y, h) for constant coherent functions.
inline Complex eval_solution_37(const BirthSpec& spec, const Vector& f, const Vector& h,
                                const Matrix& y, double t) {
  return solution_factors(spec, f, h, y, t).total();
}

enum class NormalizationMode { martingale, submartingale, violated };

inline const char* to_string(NormalizationMode m) {
  switch (m) {
    case NormalizationMode::martingale: return "martingale";
    case NormalizationMode::submartingale: return "submartingale";
    default: return "violated";
  }
}

struct NormalizationReport {
  double lhs = 0.0;  // sum_k |s^k|^2
  double rhs = 0.0;  // kappa
  NormalizationMode mode = NormalizationMode::violated;
};

inline NormalizationReport martingale_condition_check(const BirthSpec& spec) {
  NormalizationReport r;
  r.lhs = spec.sigma_norm_squared();
  r.rhs = spec.kappa;
  if (std::abs(r.lhs - r.rhs) <= 1e-12 * std::max(1.0, std::abs(r.rhs))) {
    r.mode = NormalizationMode::martingale;
  } else if (r.lhs <= r.rhs) {
    r.mode = NormalizationMode::submartingale;
  }
  return r;
}

struct NormBoundsReport {
  std::size_t samples = 0;
  double exchange_at_unit = 0.0;    // |lambda_.^.(1)|
  double exchange_sup = 0.0;        // sup |lambda_.^.(y)|
  double scalar_sup = 0.0;          // sup |lambda(y)|
  double annihilation_sup = 0.0;    // sup |lambda_.(y)|
  double creation_sup = 0.0;        // sup |lambda^.(y)|
  std::size_t violations = 0;

  bool passed() const { return violations == 0 && std::isfinite(scalar_sup); }
};

/// Samples contractions and checks |lambda_.^.(y)| <= |lambda_.^.(1)| + 1e-9.
inline NormBoundsReport norm_bounds_check(const BirthSpec& spec, std::size_t sample_count,
                                          std::uint64_t seed) {
  require(sample_count >= 1, "norm_bounds_check: need at least one sample");
  validate(spec);
  const Index n = spec.n_modes;
  const auto ball = matrix_ball(spec.base_dim);
  NormBoundsReport r;
  const Matrix at_unit = germ_from_birth(spec, Matrix::Identity(spec.base_dim, spec.base_dim));
  r.exchange_at_unit = operator_norm(at_unit.bottomRightCorner(n, n));
  // the first sample is the unit itself; draw one extra so that
  // sample_count random contractions are tested
  const auto elements = ball.sample_elements(sample_count + 1, seed);
  for (std::size_t i = 1; i < elements.size(); ++i) {
    const Matrix lambda = germ_from_birth(spec, std::get<MatrixElement>(elements[i]).value);
    const double ex = operator_norm(lambda.bottomRightCorner(n, n));
    r.exchange_sup = std::max(r.exchange_sup, ex);
    r.scalar_sup = std::max(r.scalar_sup, std::abs(lambda(0, 0)));
    r.annihilation_sup = std::max(r.annihilation_sup, lambda.block(0, 1, 1, n).norm());
    r.creation_sup = std::max(r.creation_sup, lambda.block(1, 0, n, 1).norm());
    if (ex > r.exchange_at_unit + 1e-9) ++r.violations;
    ++r.samples;
  }
  return r;
}

/// The cocycle vector s = (+)_k s^k for j(y) = (+)_{k>=1} y^{(x)k}.
inline Vector birth_cocycle_vector(const BirthSpec& spec) {
  Index total = 0;
  for (const auto& s : spec.sigma) total += s.size();
  Vector out(total);
  Index offset = 0;
  for (const auto& s : spec.sigma) {
    out.segment(offset, s.size()) = s;
    offset += s.size();
  }
  return out;
}

/// max_y |l(y) - (s' j(y) s - s' s)| with l(y) = lambda(y) - lambda(1).
inline double birth_coboundary_residual(const BirthSpec& spec, const std::vector<Element>& sample) {
  const Vector s = birth_cocycle_vector(spec);
  const Complex d = germ_from_birth(spec, Matrix::Identity(spec.base_dim, spec.base_dim))(0, 0);
  double worst = 0.0;
  for (const auto& e : sample) {
    const Matrix& y = std::get<MatrixElement>(e).value;
    const auto powers = tensor_powers(y, spec.k_max);
    Vector js(s.size());
    Index offset = 0;
    for (Index k = 1; k <= spec.k_max; ++k) {
      const Index len = spec.sigma[k - 1].size();
      js.segment(offset, len) = powers[k] * s.segment(offset, len);
      offset += len;
    }
    const Complex predicted = s.dot(js) - s.squaredNorm();
    const Complex l = germ_from_birth(spec, y)(0, 0) - d;
    worst = std::max(worst, std::abs(l - predicted));
  }
  return worst;
}

}  // namespace itodilate
