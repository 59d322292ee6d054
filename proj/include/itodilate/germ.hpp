#pragma once

// Generator models: structure maps alpha : B -> Ito algebra, the germ
// matrix lambda = p + alpha in block form [[lambda, lambda_.], [lambda^., lambda_.^.]],
// and the stochastic dissipator.

#include "itodilate/birth.hpp"
#include "itodilate/dilation_data.hpp"
#include "itodilate/ito_algebra.hpp"
#include "itodilate/semigroup.hpp"

#include <string>
#include <variant>
#include <vector>

namespace itodilate {

/// alpha(y) given per element.
struct TableForm {
  std::vector<Element> elements;
  std::vector<ItoQuadruple> alpha;
};

/// lambda(y) = L^flat j(y) L.
struct DilatedForm {
  DilationData data;
};

/// lambda(y) = phi(y) - kappa over a matrix ball.
struct BirthForm {
  BirthSpec spec;
};

/// Classical Poisson exponent (1 + alpha(y))^{p(t)} exp(t lambda(y)).
struct ScalarPoissonForm {
  std::vector<Element> elements;
  std::vector<Complex> alpha;
  std::vector<Complex> lambda;
};

struct GeneratorModel {
  StarSemigroup semigroup;
  Index n_modes = 0;
  std::variant<TableForm, DilatedForm, BirthForm, ScalarPoissonForm> form;

  std::string form_name() const {
    switch (form.index()) {
      case 0: return "table";
      case 1: return "dilated";
      case 2: return "birth";
      default: return "scalar_poisson";
    }
  }
};

inline Matrix quadruple_to_germ(const ItoQuadruple& a) {
  const Index n = a.modes();
  Matrix g(1 + n, 1 + n);
  g(0, 0) = a.scalar;
  g.block(0, 1, 1, n) = a.annihilation;
  g.block(1, 0, n, 1) = a.creation;
  g.block(1, 1, n, n) = a.exchange + Matrix::Identity(n, n);
  return g;
}

inline ItoQuadruple germ_to_quadruple(const Matrix& g) {
  require(g.rows() == g.cols() && g.rows() >= 1, "germ matrix must be square and non-empty");
  const Index n = g.rows() - 1;
  ItoQuadruple a;
  a.scalar = g(0, 0);
  a.annihilation = g.block(0, 1, 1, n);
  a.creation = g.block(1, 0, n, 1);
  a.exchange = g.block(1, 1, n, n) - Matrix::Identity(n, n);
  return a;
}

/// e = [[1, 0], [0, 0]]
inline Matrix scalar_projector(Index n) {
  Matrix e = Matrix::Zero(1 + n, 1 + n);
  e(0, 0) = 1.0;
  return e;
}

inline void validate(const GeneratorModel& model) {
  require(model.n_modes >= 0, "model: negative mode count");
  const auto& s = model.semigroup;
  if (const auto* t = std::get_if<TableForm>(&model.form)) {
    require(t->elements.size() == t->alpha.size(), "table model: element/alpha count mismatch");
    for (std::size_t i = 0; i < t->elements.size(); ++i) {
      s.validate(t->elements[i]);
      validate(t->alpha[i]);
      require(t->alpha[i].modes() == model.n_modes, "table model: quadruple has wrong mode count");
    }
  } else if (const auto* dl = std::get_if<DilatedForm>(&model.form)) {
    validate(dl->data);
    require(dl->data.n_modes == model.n_modes, "dilated model: mode count mismatch");
    for (const auto& e : dl->data.elements) s.validate(e);
  } else if (const auto* b = std::get_if<BirthForm>(&model.form)) {
    validate(b->spec);
    require(s.is_matrix_ball() && s.ball().dim == b->spec.base_dim,
            "birth model: semigroup must be the matrix ball of the base dimension");
    require(b->spec.n_modes == model.n_modes, "birth model: mode count mismatch");
  } else {
    const auto& p = std::get<ScalarPoissonForm>(model.form);
    require(model.n_modes == 0, "scalar Poisson model must have n_modes = 0");
    require(p.elements.size() == p.alpha.size() && p.elements.size() == p.lambda.size(),
            "scalar Poisson model: table sizes differ");
    for (const auto& e : p.elements) s.validate(e);
  }
}

inline Matrix germ_of(const GeneratorModel& model, const Element& y) {
  const auto& s = model.semigroup;
  s.validate(y);
  if (const auto* t = std::get_if<TableForm>(&model.form)) {
    auto idx = s.find(t->elements, y);
    if (!idx) throw InputError("table model is not defined at the requested element");
    return quadruple_to_germ(t->alpha[*idx]);
  }
  if (const auto* dl = std::get_if<DilatedForm>(&model.form)) {
    return dilated_germ(dl->data, s, y);
  }
  if (const auto* b = std::get_if<BirthForm>(&model.form)) {
    return germ_from_birth(b->spec, std::get<MatrixElement>(y).value);
  }
  throw InputError("scalar Poisson models have no germ matrix; use the Poisson Monte-Carlo checks");
}

inline ItoQuadruple alpha_of(const GeneratorModel& model, const Element& y) {
  return germ_to_quadruple(germ_of(model, y));
}

/// d = lambda(1) scalar entry.
inline double unit_scalar(const GeneratorModel& model) {
  return germ_of(model, model.semigroup.unit())(0, 0).real();
}

/// Delta(x, z) = lambda(x*z) - e lambda(z) - lambda(x*) e + e lambda(1) e.
inline Matrix dissipator_of(const GeneratorModel& model, const Element& x, const Element& z) {
  const auto& s = model.semigroup;
  const Matrix e = scalar_projector(model.n_modes);
  return germ_of(model, s.star_compose(x, z)) - e * germ_of(model, z) -
         germ_of(model, s.star(x)) * e + e * germ_of(model, s.unit()) * e;
}

/// Delta from the explicit component formulas (mode, annihilation and
/// scalar entries); used as an independent route against dissipator_of.
inline Matrix dissipator_components(const GeneratorModel& model, const Element& x,
                                    const Element& z) {
  const auto& s = model.semigroup;
  const Index n = model.n_modes;
  const ItoQuadruple a_xz = alpha_of(model, s.star_compose(x, z));
  const ItoQuadruple a_z = alpha_of(model, z);
  const ItoQuadruple a_xs = alpha_of(model, s.star(x));
  const ItoQuadruple a_zx = alpha_of(model, s.star_compose(z, x));
  const double d = unit_scalar(model);
  Matrix out(1 + n, 1 + n);
  out.block(1, 1, n, n) = a_xz.exchange + Matrix::Identity(n, n);
  out.block(0, 1, 1, n) = a_xz.annihilation - a_z.annihilation;
  // Delta_+^n(x, z) = Delta_n^-(z, x)'
  const ItoQuadruple a_x = alpha_of(model, x);
  out.block(1, 0, n, 1) = (a_zx.annihilation - a_x.annihilation).adjoint();
  out(0, 0) = a_xz.scalar - a_z.scalar - a_xs.scalar + d;
  return out;
}

/// max_y |alpha(y*) - alpha(y)^flat|.
inline double flat_symmetry_residual(const GeneratorModel& model,
                                     const std::vector<Element>& sample) {
  const auto& s = model.semigroup;
  double worst = 0.0;
  for (const auto& y : sample) {
    const ItoQuadruple lhs = alpha_of(model, s.star(y));
    const ItoQuadruple rhs = ito_flat(alpha_of(model, y));
    worst = std::max(worst, norm(lhs - rhs));
  }
  return worst;
}

/// Non-fatal diagnostics about a model.
inline std::vector<std::string> model_warnings(const GeneratorModel& model) {
  std::vector<std::string> out;
  if (std::holds_alternative<ScalarPoissonForm>(model.form)) return out;
  const Complex d = germ_of(model, model.semigroup.unit())(0, 0);
  if (d.real() > 0.0) {
    out.push_back("d = lambda(1) = " + std::to_string(d.real()) +
                  " > 0: the unit exponent grows in the mean");
  }
  if (std::abs(d.imag()) > 1e-12) {
    out.push_back("lambda(1) has a non-zero imaginary part " + std::to_string(d.imag()));
  }
  return out;
}

/// Table model holding alpha on `elements`.
inline GeneratorModel tabulate(const GeneratorModel& model, const std::vector<Element>& elements) {
  TableForm table;
  for (const auto& y : elements) {
    table.elements.push_back(y);
    table.alpha.push_back(alpha_of(model, y));
  }
  return GeneratorModel{model.semigroup, model.n_modes, std::move(table)};
}

}  // namespace itodilate
