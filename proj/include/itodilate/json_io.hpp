#pragma once

// JSON encoding. Complex numbers are [re, im] pairs (a bare number is read
// as a real value); matrices are row-major nested arrays.

#include "itodilate/coherent.hpp"
#include "itodilate/cpd.hpp"
#include "itodilate/dilation.hpp"
#include "itodilate/germ.hpp"
#include "itodilate/pseudo_poisson.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace itodilate::io {

using Json = nlohmann::json;

inline Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

inline Complex complex_from(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  require(j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(),
          "expected a complex number as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json vector_json(const Eigen::Ref<const Vector>& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline Json row_json(const RowVector& v) { return vector_json(v.transpose()); }

inline Json real_vector_json(const RealVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Matrix matrix_from(const Json& j, Index rows = -1, Index cols = -1) {
  require(j.is_array(), "expected a matrix as nested arrays");
  const auto r = static_cast<Index>(j.size());
  const Index c = r > 0 ? static_cast<Index>(j[0].size()) : (cols >= 0 ? cols : 0);
  Matrix m(r, c);
  for (Index i = 0; i < r; ++i) {
    require(j[i].is_array() && static_cast<Index>(j[i].size()) == c, "ragged matrix rows");
    for (Index k = 0; k < c; ++k) m(i, k) = complex_from(j[i][k]);
  }
  if (rows >= 0) require(m.rows() == rows, "matrix has wrong number of rows");
  if (cols >= 0 && r > 0) require(m.cols() == cols, "matrix has wrong number of columns");
  if (r == 0 && rows >= 0 && cols >= 0) m.resize(rows, cols);
  return m;
}

inline Vector vector_from(const Json& j, Index size = -1) {
  require(j.is_array(), "expected a vector as an array");
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v(i) = complex_from(j[i]);
  if (size >= 0) require(v.size() == size, "vector has wrong length");
  return v;
}

// ---------------------------------------------------------------------------
// Quadruples

inline Json to_json(const ItoQuadruple& a) {
  return Json{{"n", a.modes()},
              {"exchange", to_json(a.exchange)},
              {"creation", vector_json(a.creation)},
              {"annihilation", row_json(a.annihilation)},
              {"scalar", to_json(a.scalar)}};
}

inline ItoQuadruple quadruple_from(const Json& j) {
  require(j.is_object(), "quadruple must be an object");
  const auto n = j.at("n").get<Index>();
  require(n >= 0, "quadruple: negative mode count");
  ItoQuadruple a;
  a.exchange = matrix_from(j.at("exchange"), n, n);
  a.creation = vector_from(j.at("creation"), n);
  a.annihilation = vector_from(j.at("annihilation"), n).transpose();
  a.scalar = complex_from(j.at("scalar"));
  validate(a);
  return a;
}

// ---------------------------------------------------------------------------
// Semigroups and elements

inline Json to_json(const StarSemigroup& s) {
  if (s.is_finite_group()) {
    const auto& g = s.group();
    Json chars = Json::array();
    for (const auto& ch : g.characters) {
      Json row = Json::array();
      for (auto c : ch) row.push_back(to_json(c));
      chars.push_back(std::move(row));
    }
    return Json{{"kind", "finite_group"}, {"name", g.name},  {"cayley", g.cayley},
                {"inverse", g.inverse},   {"unit", g.unit},  {"characters", chars}};
  }
  if (s.is_matrix_ball()) return Json{{"kind", "matrix_ball"}, {"dim", s.ball().dim}};
  const auto& alg = s.algebra();
  Json products = Json::array();
  for (Index i = 0; i < alg.dim; ++i) {
    Json row = Json::array();
    for (Index k = 0; k < alg.dim; ++k)
      row.push_back(vector_json(alg.products[static_cast<std::size_t>(i * alg.dim + k)]));
    products.push_back(std::move(row));
  }
  Json out{{"kind", "unital_algebra"}, {"dim", alg.dim}, {"products", products}};
  out["star"] = alg.star_map ? to_json(*alg.star_map) : Json(nullptr);
  return out;
}

inline StarSemigroup semigroup_from(const Json& j) {
  require(j.is_object(), "semigroup must be an object");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "cyclic") return cyclic_group(j.at("order").get<std::size_t>());
  if (kind == "quaternion") return quaternion_group();
  if (kind == "matrix_ball") return matrix_ball(j.at("dim").get<Index>());
  if (kind == "finite_group") {
    FiniteGroup g;
    g.name = j.value("name", std::string("group"));
    g.cayley = j.at("cayley").get<std::vector<std::vector<std::size_t>>>();
    g.inverse = j.at("inverse").get<std::vector<std::size_t>>();
    g.unit = j.value("unit", std::size_t{0});
    if (j.contains("characters")) {
      for (const auto& row : j.at("characters")) {
        std::vector<Complex> ch;
        for (const auto& c : row) ch.push_back(complex_from(c));
        g.characters.push_back(std::move(ch));
      }
    }
    return StarSemigroup(std::move(g));
  }
  if (kind == "unital_algebra") {
    UnitalAlgebra alg;
    alg.dim = j.at("dim").get<Index>();
    const auto& products = j.at("products");
    require(static_cast<Index>(products.size()) == alg.dim, "structure constants have wrong size");
    for (const auto& row : products) {
      require(static_cast<Index>(row.size()) == alg.dim, "structure constants have wrong size");
      for (const auto& v : row) alg.products.push_back(vector_from(v, alg.dim));
    }
    if (j.contains("star") && !j.at("star").is_null())
      alg.star_map = matrix_from(j.at("star"), alg.dim, alg.dim);
    return StarSemigroup(std::move(alg));
  }
  throw InputError("unknown semigroup kind '" + kind + "'");
}

inline Json to_json(const Element& e) {
  if (const auto* g = std::get_if<GroupElement>(&e)) return Json(g->index);
  if (const auto* m = std::get_if<MatrixElement>(&e)) return to_json(m->value);
  return vector_json(std::get<UnitalElement>(e).coeffs);
}

inline Element element_from(const StarSemigroup& s, const Json& j) {
  Element e;
  if (s.is_finite_group()) {
    require(j.is_number_integer() && j.get<long long>() >= 0, "group element must be an index");
    e = GroupElement{j.get<std::size_t>()};
  } else if (s.is_matrix_ball()) {
    e = MatrixElement{matrix_from(j, s.ball().dim, s.ball().dim)};
  } else {
    e = UnitalElement{vector_from(j, s.algebra().dim)};
  }
  s.validate(e);
  return e;
}

inline Json to_json(const std::vector<Element>& elements) {
  Json out = Json::array();
  for (const auto& e : elements) out.push_back(to_json(e));
  return out;
}

inline std::vector<Element> elements_from(const StarSemigroup& s, const Json& j) {
  const Json& list = j.is_object() ? j.at("elements") : j;
  require(list.is_array(), "expected an array of elements");
  std::vector<Element> out;
  for (const auto& e : list) out.push_back(element_from(s, e));
  return out;
}

// ---------------------------------------------------------------------------
// Birth specs: tensors as flat arrays with shape metadata.

inline Json tensor_json(const Vector& v, Index base, Index power) {
  return Json{{"shape", std::vector<Index>(static_cast<std::size_t>(power), base)},
              {"data", vector_json(v)}};
}

inline Vector tensor_from(const Json& j, Index base, Index power) {
  const auto shape = j.at("shape").get<std::vector<Index>>();
  require(static_cast<Index>(shape.size()) == power, "tensor has wrong order");
  for (auto s : shape) require(s == base, "tensor shape does not match the base dimension");
  return vector_from(j.at("data"), tensor_dim(base, power));
}

inline Json to_json(const BirthSpec& spec) {
  Json sigma = Json::array();
  for (Index k = 1; k <= spec.k_max; ++k) sigma.push_back(tensor_json(spec.sigma[k - 1], spec.base_dim, k));
  Json modes = Json::array();
  for (const auto& family : spec.sigma_modes) {
    Json f = Json::array();
    for (Index k = 0; k <= spec.k_max; ++k) f.push_back(tensor_json(family[k], spec.base_dim, k));
    modes.push_back(std::move(f));
  }
  return Json{{"base_dim", spec.base_dim}, {"k_max", spec.k_max},   {"n_modes", spec.n_modes},
              {"sigma", sigma},            {"sigma_modes", modes}, {"kappa", spec.kappa},
              {"kappa_modes", row_json(spec.kappa_modes)}};
}

inline BirthSpec birth_spec_from(const Json& j) {
  BirthSpec spec;
  spec.base_dim = j.at("base_dim").get<Index>();
  spec.k_max = j.at("k_max").get<Index>();
  spec.n_modes = j.value("n_modes", Index{0});
  require(spec.base_dim >= 1 && spec.k_max >= 1 && spec.n_modes >= 0, "birth spec: bad dimensions");
  const auto& sigma = j.at("sigma");
  require(static_cast<Index>(sigma.size()) == spec.k_max, "birth spec: need k_max sigma tensors");
  for (Index k = 1; k <= spec.k_max; ++k) spec.sigma.push_back(tensor_from(sigma[k - 1], spec.base_dim, k));
  if (j.contains("sigma_modes")) {
    for (const auto& family : j.at("sigma_modes")) {
      require(static_cast<Index>(family.size()) == spec.k_max + 1,
              "birth spec: mode family must cover k = 0..k_max");
      std::vector<Vector> f;
      for (Index k = 0; k <= spec.k_max; ++k) f.push_back(tensor_from(family[k], spec.base_dim, k));
      spec.sigma_modes.push_back(std::move(f));
    }
  }
  spec.kappa = j.at("kappa").get<double>();
  spec.kappa_modes = j.contains("kappa_modes") ? RowVector(vector_from(j.at("kappa_modes"), spec.n_modes).transpose())
                                               : RowVector::Zero(spec.n_modes);
  validate(spec);
  return spec;
}

// ---------------------------------------------------------------------------
// Dilation data

inline Json to_json(const DilationData& dd) {
  Json j = Json::array(), k = Json::array(), l = Json::array();
  for (std::size_t i = 0; i < dd.elements.size(); ++i) {
    j.push_back(to_json(dd.j[i]));
    k.push_back(vector_json(dd.k[i]));
    l.push_back(to_json(dd.l[i]));
  }
  return Json{{"k_dim", dd.k_dim},
              {"n_modes", dd.n_modes},
              {"d", dd.d},
              {"elements", to_json(dd.elements)},
              {"j", j},
              {"k", k},
              {"l", l},
              {"L_circ", to_json(dd.mode_circ)},
              {"L_minus", row_json(dd.mode_minus)},
              {"residuals",
               {{"representation", dd.residuals.representation},
                {"cocycle", dd.residuals.cocycle},
                {"coboundary", dd.residuals.coboundary},
                {"modes", dd.residuals.modes}}},
              {"gram", to_json(dd.gram)},
              {"gram_spectrum", real_vector_json(dd.gram_spectrum)}};
}

inline DilationData dilation_data_from(const StarSemigroup& s, const Json& j, Index n_modes) {
  DilationData dd;
  dd.k_dim = j.at("k_dim").get<Index>();
  dd.n_modes = n_modes;
  dd.d = j.at("d").get<double>();
  dd.elements = elements_from(s, j.at("elements"));
  for (const auto& m : j.at("j")) dd.j.push_back(matrix_from(m, dd.k_dim, dd.k_dim));
  for (const auto& v : j.at("k")) dd.k.push_back(vector_from(v, dd.k_dim));
  for (const auto& c : j.at("l")) dd.l.push_back(complex_from(c));
  dd.mode_circ = j.contains("L_circ") ? matrix_from(j.at("L_circ"), dd.k_dim, n_modes)
                                      : Matrix::Zero(dd.k_dim, n_modes);
  if (dd.mode_circ.rows() != dd.k_dim || dd.mode_circ.cols() != n_modes) dd.mode_circ.resize(dd.k_dim, n_modes);
  dd.mode_minus = j.contains("L_minus") ? RowVector(vector_from(j.at("L_minus"), n_modes).transpose())
                                        : RowVector::Zero(n_modes);
  validate(dd);
  return dd;
}

inline Json to_json(const PseudoHilbert& ph) {
  Json jm = Json::array();
  for (const auto& m : ph.jmath) jm.push_back(to_json(m));
  return Json{{"e_dim", ph.e_dim},       {"d", ph.d},
              {"G", to_json(ph.metric)}, {"elements", to_json(ph.elements)},
              {"jmath", jm},             {"L", to_json(ph.mode_operator)},
              {"flat_residual", ph.flat_residual}};
}

// ---------------------------------------------------------------------------
// Models

inline Json to_json(const GeneratorModel& model) {
  Json form;
  if (const auto* t = std::get_if<TableForm>(&model.form)) {
    Json entries = Json::array();
    for (std::size_t i = 0; i < t->elements.size(); ++i)
      entries.push_back({{"element", to_json(t->elements[i])}, {"alpha", to_json(t->alpha[i])}});
    form = {{"type", "table"}, {"entries", entries}};
  } else if (const auto* dl = std::get_if<DilatedForm>(&model.form)) {
    form = to_json(dl->data);
    form["type"] = "dilated";
  } else if (const auto* b = std::get_if<BirthForm>(&model.form)) {
    form = {{"type", "birth"}, {"spec", to_json(b->spec)}};
  } else {
    const auto& p = std::get<ScalarPoissonForm>(model.form);
    Json entries = Json::array();
    for (std::size_t i = 0; i < p.elements.size(); ++i)
      entries.push_back({{"element", to_json(p.elements[i])},
                         {"alpha", to_json(p.alpha[i])},
                         {"lambda", to_json(p.lambda[i])}});
    form = {{"type", "scalar_poisson"}, {"entries", entries}};
  }
  return Json{{"semigroup", to_json(model.semigroup)}, {"n_modes", model.n_modes}, {"form", form}};
}

inline GeneratorModel model_from(const Json& j) {
  require(j.is_object(), "model must be a JSON object");
  GeneratorModel model;
  model.semigroup = semigroup_from(j.at("semigroup"));
  model.n_modes = j.value("n_modes", Index{0});
  const auto& form = j.at("form");
  const auto type = form.at("type").get<std::string>();
  const auto& s = model.semigroup;
  if (type == "table") {
    TableForm t;
    for (const auto& entry : form.at("entries")) {
      t.elements.push_back(element_from(s, entry.at("element")));
      t.alpha.push_back(quadruple_from(entry.at("alpha")));
    }
    model.form = std::move(t);
  } else if (type == "dilated") {
    model.form = DilatedForm{dilation_data_from(s, form, model.n_modes)};
  } else if (type == "birth") {
    BirthSpec spec = birth_spec_from(form.at("spec"));
    model.n_modes = spec.n_modes;
    model.form = BirthForm{std::move(spec)};
  } else if (type == "scalar_poisson") {
    ScalarPoissonForm p;
    for (const auto& entry : form.at("entries")) {
      p.elements.push_back(element_from(s, entry.at("element")));
      p.alpha.push_back(complex_from(entry.at("alpha")));
      p.lambda.push_back(complex_from(entry.at("lambda")));
    }
    model.form = std::move(p);
  } else {
    throw InputError("unknown model form '" + type + "'");
  }
  validate(model);
  return model;
}

// ---------------------------------------------------------------------------
// Kernel specs

inline Json to_json(const CoherentFunction& f) {
  Json segs = Json::array();
  for (const auto& [duration, value] : f.segments()) segs.push_back(Json::array({duration, vector_json(value)}));
  return Json{{"segments", segs}, {"tail", vector_json(f.tail())}};
}

inline CoherentFunction coherent_from(const Json& j, Index n) {
  std::vector<std::pair<double, Vector>> segs;
  if (j.contains("segments")) {
    for (const auto& seg : j.at("segments")) {
      require(seg.is_array() && seg.size() == 2, "segment must be [duration, values]");
      segs.emplace_back(seg[0].get<double>(), vector_from(seg[1], n));
    }
  }
  const Vector tail = j.contains("tail") ? vector_from(j.at("tail"), n) : Vector::Zero(n);
  return CoherentFunction(std::move(segs), tail);
}

inline Json to_json(const KernelSpec& spec) {
  Json pairs = Json::array();
  for (const auto& [f, y] : spec.pairs) pairs.push_back({{"f", to_json(f)}, {"y", to_json(y)}});
  return Json{{"t", spec.t}, {"pairs", pairs}};
}

inline KernelSpec kernel_spec_from(const GeneratorModel& model, const Json& j) {
  KernelSpec spec;
  spec.t = j.value("t", 1.0);
  for (const auto& p : j.at("pairs")) {
    spec.pairs.emplace_back(coherent_from(p.at("f"), model.n_modes),
                            element_from(model.semigroup, p.at("y")));
  }
  validate(model, spec);
  return spec;
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const CpdReport& r) {
  return Json{{"verdict", r.verdict},
              {"min_eigenvalue", r.min_eigenvalue},
              {"scale", r.scale},
              {"tolerance", r.tolerance},
              {"asymmetry", r.asymmetry},
              {"witness", vector_json(r.witness)},
              {"compressed", to_json(r.compressed)},
              {"sample", to_json(r.sample)}};
}

inline Json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("malformed JSON in '" + path + "': " + e.what());
  }
}

}  // namespace itodilate::io
