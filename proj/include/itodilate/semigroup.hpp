#pragma once

// Star-semigroups B with unit 1 and involution y -> y*, (x* z)* = z* x.
//
// Three kinds are supported:
//   FiniteGroup  - Cayley table with y* = y^{-1}
//   MatrixBall   - d x d complex contractions, y* = adjoint
//   UnitalAlgebra- 1 (+) b over a finite-dimensional *-algebra b given by
//                  structure constants; (1+a)(1+c) = 1 + (a + c + ac)

#include "itodilate/types.hpp"

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace itodilate {

struct GroupElement {
  std::size_t index = 0;
};

struct MatrixElement {
  Matrix value;
};

/// Represents 1 (+) b; `coeffs` are the coordinates of b.
struct UnitalElement {
  Vector coeffs;
};

using Element = std::variant<GroupElement, MatrixElement, UnitalElement>;

struct FiniteGroup {
  std::string name;
  std::vector<std::vector<std::size_t>> cayley;  // cayley[a][b] = index of a*b
  std::vector<std::size_t> inverse;
  std::size_t unit = 0;
  /// One-dimensional characters, characters[r][g]; may be empty.
  std::vector<std::vector<Complex>> characters;

  std::size_t order() const { return cayley.size(); }
};

struct MatrixBall {
  Index dim = 1;
};

struct UnitalAlgebra {
  Index dim = 0;
  /// products[i * dim + j] = coordinates of e_i e_j.
  std::vector<Vector> products;
  /// star(e_i) = sum_j star_map(j, i) e_j, extended antilinearly. Absent when
  /// the algebra is not closed under adjoints.
  std::optional<Matrix> star_map;
};

class StarSemigroup {
 public:
  using Kind = std::variant<FiniteGroup, MatrixBall, UnitalAlgebra>;

  StarSemigroup() : kind_(MatrixBall{1}) {}
  explicit StarSemigroup(Kind kind) : kind_(std::move(kind)) { check_kind(); }

  const Kind& kind() const { return kind_; }
  bool is_finite_group() const { return std::holds_alternative<FiniteGroup>(kind_); }
  bool is_matrix_ball() const { return std::holds_alternative<MatrixBall>(kind_); }
  bool is_unital_algebra() const { return std::holds_alternative<UnitalAlgebra>(kind_); }
  const FiniteGroup& group() const { return std::get<FiniteGroup>(kind_); }
  const MatrixBall& ball() const { return std::get<MatrixBall>(kind_); }
  const UnitalAlgebra& algebra() const { return std::get<UnitalAlgebra>(kind_); }

  std::string description() const {
    if (is_finite_group()) return group().name;
    if (is_matrix_ball()) return "MatrixBall(" + std::to_string(ball().dim) + ")";
    return "UnitalAlgebra(" + std::to_string(algebra().dim) + ")";
  }

  Element unit() const {
    if (is_finite_group()) return GroupElement{group().unit};
    if (is_matrix_ball()) return MatrixElement{Matrix::Identity(ball().dim, ball().dim)};
    return UnitalElement{Vector::Zero(algebra().dim)};
  }

  /// The zero contraction; only the matrix ball has one.
  std::optional<Element> zero() const {
    if (!is_matrix_ball()) return std::nullopt;
    return MatrixElement{Matrix::Zero(ball().dim, ball().dim)};
  }

  /// Throws InputError unless x is an element of this semigroup.
  void validate(const Element& x) const {
    if (is_finite_group()) {
      const auto* g = std::get_if<GroupElement>(&x);
      require(g != nullptr, "element does not belong to " + description());
      require(g->index < group().order(), "group element index out of range");
    } else if (is_matrix_ball()) {
      const auto* m = std::get_if<MatrixElement>(&x);
      require(m != nullptr, "element does not belong to " + description());
      require(m->value.rows() == ball().dim && m->value.cols() == ball().dim,
              "matrix element has wrong dimension");
      require(m->value.allFinite(), "matrix element has non-finite entries");
      require(operator_norm(m->value) <= 1.0 + 1e-12, "matrix element has operator norm > 1");
    } else {
      const auto* u = std::get_if<UnitalElement>(&x);
      require(u != nullptr, "element does not belong to " + description());
      require(u->coeffs.size() == algebra().dim, "algebra element has wrong dimension");
    }
  }

  Element compose(const Element& x, const Element& z) const {
    validate(x);
    validate(z);
    if (is_finite_group()) {
      return GroupElement{group().cayley[std::get<GroupElement>(x).index]
                                        [std::get<GroupElement>(z).index]};
    }
    if (is_matrix_ball()) {
      return MatrixElement{std::get<MatrixElement>(x).value * std::get<MatrixElement>(z).value};
    }
    const Vector& a = std::get<UnitalElement>(x).coeffs;
    const Vector& c = std::get<UnitalElement>(z).coeffs;
    return UnitalElement{a + c + algebra_product(a, c)};
  }

  Element star(const Element& x) const {
    validate(x);
    if (is_finite_group()) {
      return GroupElement{group().inverse[std::get<GroupElement>(x).index]};
    }
    if (is_matrix_ball()) return MatrixElement{std::get<MatrixElement>(x).value.adjoint()};
    const auto& alg = algebra();
    if (!alg.star_map) throw InputError("unital algebra has no involution");
    return UnitalElement{*alg.star_map * std::get<UnitalElement>(x).coeffs.conjugate()};
  }

  /// x* z
  Element star_compose(const Element& x, const Element& z) const {
    return compose(star(x), z);
  }

  bool same(const Element& x, const Element& z, double tol = 1e-12) const {
    if (x.index() != z.index()) return false;
    if (const auto* g = std::get_if<GroupElement>(&x)) {
      return g->index == std::get<GroupElement>(z).index;
    }
    if (const auto* m = std::get_if<MatrixElement>(&x)) {
      const Matrix& other = std::get<MatrixElement>(z).value;
      if (other.rows() != m->value.rows() || other.cols() != m->value.cols()) return false;
      return (m->value - other).norm() <= tol * std::max(1.0, m->value.norm());
    }
    const Vector& a = std::get<UnitalElement>(x).coeffs;
    const Vector& c = std::get<UnitalElement>(z).coeffs;
    if (a.size() != c.size()) return false;
    return (a - c).norm() <= tol * std::max(1.0, a.norm());
  }

  /// Position of x in `elements`, if present.
  std::optional<std::size_t> find(const std::vector<Element>& elements, const Element& x) const {
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (same(elements[i], x)) return i;
    }
    return std::nullopt;
  }

  /// Deterministic sample starting with the unit. Finite groups are
  /// enumerated (at most `order` elements).
  std::vector<Element> sample_elements(std::size_t count, std::uint64_t seed) const {
    require(count >= 1, "sample_elements: count must be at least 1");
    std::vector<Element> out;
    out.push_back(unit());
    if (is_finite_group()) {
      const auto& g = group();
      for (std::size_t i = 0; i < g.order() && out.size() < count; ++i) {
        if (i != g.unit) out.push_back(GroupElement{i});
      }
      return out;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
    std::uniform_real_distribution<double> stretch(1.0, 2.0);
    while (out.size() < count) {
      if (is_matrix_ball()) {
        const Index d = ball().dim;
        Matrix m(d, d);
        for (Index c = 0; c < d; ++c)
          for (Index r = 0; r < d; ++r) m(r, c) = Complex(normal(rng), normal(rng));
        const double nrm = operator_norm(m);
        if (nrm == 0.0) continue;
        out.push_back(MatrixElement{m / (nrm * stretch(rng))});
      } else {
        const Index d = algebra().dim;
        Vector v(d);
        for (Index i = 0; i < d; ++i) v(i) = Complex(normal(rng), normal(rng));
        out.push_back(UnitalElement{v});
      }
    }
    return out;
  }

  /// All elements of a finite group, unit first.
  std::vector<Element> all_elements() const {
    require(is_finite_group(), "all_elements requires a finite group");
    return sample_elements(group().order(), 0);
  }

  /// Closes `elements` under star and composition (adding the unit). Throws
  /// InputError when more than `cap` elements would be needed.
  std::vector<Element> close(std::vector<Element> elements, std::size_t cap = 512) const {
    for (const auto& e : elements) validate(e);
    if (!find(elements, unit())) elements.insert(elements.begin(), unit());
    auto add = [&](Element e) {
      if (find(elements, e)) return false;
      if (elements.size() >= cap) {
        throw InputError("sample closure exceeds the cap of " + std::to_string(cap) +
                         " elements");
      }
      elements.push_back(std::move(e));
      return true;
    };
    bool grown = true;
    while (grown) {
      grown = false;
      const std::size_t n = elements.size();
      for (std::size_t i = 0; i < n; ++i) grown |= add(star(elements[i]));
      const std::size_t m = elements.size();
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < m; ++k) grown |= add(compose(elements[i], elements[k]));
    }
    return elements;
  }

 private:
  Vector algebra_product(const Vector& a, const Vector& c) const {
    const auto& alg = algebra();
    Vector out = Vector::Zero(alg.dim);
    for (Index i = 0; i < alg.dim; ++i) {
      if (a(i) == Complex{}) continue;
      for (Index j = 0; j < alg.dim; ++j) {
        if (c(j) == Complex{}) continue;
        out += a(i) * c(j) * alg.products[static_cast<std::size_t>(i * alg.dim + j)];
      }
    }
    return out;
  }

  void check_kind() const {
    if (is_finite_group()) {
      const auto& g = group();
      require(g.order() >= 1, "finite group must be non-empty");
      require(g.inverse.size() == g.order(), "finite group inverse table has wrong size");
      require(g.unit < g.order(), "finite group unit out of range");
      for (const auto& row : g.cayley) {
        require(row.size() == g.order(), "Cayley table must be square");
        for (auto v : row) require(v < g.order(), "Cayley table entry out of range");
      }
      for (auto v : g.inverse) require(v < g.order(), "inverse table entry out of range");
      for (const auto& ch : g.characters)
        require(ch.size() == g.order(), "character table row has wrong size");
    } else if (is_matrix_ball()) {
      require(ball().dim >= 1, "matrix ball dimension must be positive");
    } else {
      const auto& alg = algebra();
      require(alg.dim >= 0, "algebra dimension must be non-negative");
      require(alg.products.size() == static_cast<std::size_t>(alg.dim * alg.dim),
              "structure constants have wrong size");
      for (const auto& p : alg.products)
        require(p.size() == alg.dim, "structure constant vector has wrong size");
      if (alg.star_map) {
        require(alg.star_map->rows() == alg.dim && alg.star_map->cols() == alg.dim,
                "star map has wrong size");
      }
    }
  }

  Kind kind_;
};

// ---------------------------------------------------------------------------
// Shipped instances

inline StarSemigroup cyclic_group(std::size_t m) {
  require(m >= 1, "cyclic group order must be positive");
  FiniteGroup g;
  g.name = "Z" + std::to_string(m);
  g.cayley.assign(m, std::vector<std::size_t>(m));
  g.inverse.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) g.cayley[a][b] = (a + b) % m;
    g.inverse[a] = (m - a) % m;
  }
  g.unit = 0;
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<Complex> ch(m);
    for (std::size_t a = 0; a < m; ++a) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((r * a) % m) /
                           static_cast<double>(m);
      ch[a] = std::polar(1.0, angle);
    }
    g.characters.push_back(std::move(ch));
  }
  return StarSemigroup(std::move(g));
}

/// Quaternion units as (w, x, y, z), in the order 1, -1, i, -i, j, -j, k, -k.
inline const std::array<std::array<int, 4>, 8>& quaternion_units() {
  static const std::array<std::array<int, 4>, 8> units{{{1, 0, 0, 0},
                                                        {-1, 0, 0, 0},
                                                        {0, 1, 0, 0},
                                                        {0, -1, 0, 0},
                                                        {0, 0, 1, 0},
                                                        {0, 0, -1, 0},
                                                        {0, 0, 0, 1},
                                                        {0, 0, 0, -1}}};
  return units;
}

inline StarSemigroup quaternion_group() {
  const auto& q = quaternion_units();
  auto hamilton = [](const std::array<int, 4>& a, const std::array<int, 4>& b) {
    return std::array<int, 4>{a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
                              a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
                              a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
                              a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
  };
  auto index_of = [&](const std::array<int, 4>& v) {
    for (std::size_t i = 0; i < q.size(); ++i)
      if (q[i] == v) return i;
    throw std::logic_error("quaternion product left the group");
  };
  FiniteGroup g;
  g.name = "Q8";
  g.cayley.assign(8, std::vector<std::size_t>(8));
  g.inverse.resize(8);
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t b = 0; b < 8; ++b) g.cayley[a][b] = index_of(hamilton(q[a], q[b]));
    const auto& u = q[a];
    g.inverse[a] = index_of({u[0], -u[1], -u[2], -u[3]});
  }
  g.unit = 0;
  // chi(i) = si, chi(j) = sj, chi(k) = si*sj, chi(-1) = 1.
  for (int si : {1, -1}) {
    for (int sj : {1, -1}) {
      std::vector<Complex> ch(8);
      for (std::size_t a = 0; a < 8; ++a) {
        const auto& u = q[a];
        int value = 1;
        if (u[1] != 0) value = si;
        if (u[2] != 0) value = sj;
        if (u[3] != 0) value = si * sj;
        ch[a] = static_cast<double>(value);
      }
      g.characters.push_back(std::move(ch));
    }
  }
  return StarSemigroup(std::move(g));
}

inline StarSemigroup matrix_ball(Index d) { return StarSemigroup(MatrixBall{d}); }

/// Unital semigroup over the algebra spanned by the given d x d matrices.
/// Structure constants are obtained by least squares; the involution is
/// provided when the span is closed under adjoints.
inline StarSemigroup unital_matrix_algebra(const std::vector<Matrix>& basis) {
  require(!basis.empty(), "algebra basis must be non-empty");
  const Index dim = static_cast<Index>(basis.size());
  const Index rows = basis.front().rows(), cols = basis.front().cols();
  Matrix coords(rows * cols, dim);
  for (Index i = 0; i < dim; ++i) {
    require(basis[i].rows() == rows && basis[i].cols() == cols, "basis matrices differ in shape");
    coords.col(i) = basis[i].reshaped();
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> solver(coords);
  require(solver.rank() == dim, "algebra basis is linearly dependent");
  auto coordinates = [&](const Matrix& m) -> std::optional<Vector> {
    Vector v = solver.solve(Matrix(m.reshaped()));
    if ((coords * v - m.reshaped()).norm() > 1e-10 * std::max(1.0, m.norm())) return std::nullopt;
    return v;
  };
  UnitalAlgebra alg;
  alg.dim = dim;
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) {
      auto v = coordinates(basis[i] * basis[j]);
      require(v.has_value(), "algebra basis is not closed under multiplication");
      alg.products.push_back(*v);
    }
  Matrix star(dim, dim);
  bool closed = true;
  for (Index i = 0; i < dim && closed; ++i) {
    auto v = coordinates(basis[i].adjoint());
    if (!v) {
      closed = false;
    } else {
      star.col(i) = *v;
    }
  }
  if (closed) alg.star_map = star;
  return StarSemigroup(std::move(alg));
}

/// Strictly upper-triangular d x d matrices (no involution).
inline StarSemigroup strictly_upper_algebra(Index d) {
  std::vector<Matrix> basis;
  for (Index r = 0; r < d; ++r)
    for (Index c = r + 1; c < d; ++c) {
      Matrix e = Matrix::Zero(d, d);
      e(r, c) = 1.0;
      basis.push_back(e);
    }
  return unital_matrix_algebra(basis);
}

/// Full matrix algebra M_d with matrix-unit basis.
inline StarSemigroup full_matrix_algebra(Index d) {
  std::vector<Matrix> basis;
  for (Index r = 0; r < d; ++r)
    for (Index c = 0; c < d; ++c) {
      Matrix e = Matrix::Zero(d, d);
      e(r, c) = 1.0;
      basis.push_back(e);
    }
  return unital_matrix_algebra(basis);
}

}  // namespace itodilate
