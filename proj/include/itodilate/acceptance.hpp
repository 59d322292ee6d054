#pragma once

// The acceptance suite: nine property checks with fixed tolerances, each
// returning a verdict and a JSON payload of its numerical results.

#include "itodilate/coherent.hpp"
#include "itodilate/cpd.hpp"
#include "itodilate/dilation.hpp"
#include "itodilate/json_io.hpp"
#include "itodilate/poisson_mc.hpp"
#include "itodilate/pseudo_poisson.hpp"
#include "itodilate/random_models.hpp"

#include <chrono>
#include <functional>
#include <string>
#include <vector>

namespace itodilate::acceptance {

using io::Json;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  Json payload;
  double seconds = 0.0;
};

inline constexpr std::uint64_t kDefaultSeed = 20240611;

namespace detail {

inline double relative_gap(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(1.0, std::max(a.norm(), b.norm()));
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

inline Index pick(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

inline GeneratorModel model_z2(double s_value) {
  TableForm t;
  t.elements = {GroupElement{0}, GroupElement{1}};
  ItoQuadruple unit = ItoQuadruple::zero(0), s = ItoQuadruple::zero(0);
  s.scalar = s_value;
  t.alpha = {unit, s};
  return GeneratorModel{cyclic_group(2), 0, std::move(t)};
}

/// Random dilated models over Z_m (m = 2..5) and Q8 with K_dim <= 3, n <= 2.
inline std::vector<GeneratorModel> dilated_models(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::vector<GeneratorModel> out;
  for (std::size_t i = 0; i < count; ++i) {
    const StarSemigroup s =
        i % 3 == 2 ? quaternion_group() : cyclic_group(static_cast<std::size_t>(pick(rng, 2, 5)));
    const Index k_dim = pick(rng, 1, 3);
    const Index n = pick(rng, 0, 2);
    out.push_back(random_dilated_model(s, k_dim, n, rng));
  }
  return out;
}

/// Index of a non-trivial one-dimensional character.
inline std::size_t nontrivial_character(const FiniteGroup& g) {
  for (std::size_t c = 0; c < g.characters.size(); ++c)
    for (auto v : g.characters[c])
      if (std::abs(v - 1.0) > 1e-12) return c;
  throw ConstructionError("group has no non-trivial character");
}

/// lambda(y) - eps * chi(y) e, tabulated on `elements`.
inline GeneratorModel subtract_character(const GeneratorModel& model,
                                         const std::vector<Element>& elements,
                                         const std::vector<Complex>& chi, double eps) {
  GeneratorModel out = tabulate(model, elements);
  auto& table = std::get<TableForm>(out.form);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    table.alpha[i].scalar -= eps * chi[std::get<GroupElement>(elements[i]).index];
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline CriterionResult criterion_ito_laws(std::uint64_t seed) {
  CriterionResult r{1, "Ito algebra laws"};
  Rng rng(seed);
  const int draws = 1000;
  double assoc = 0.0, anti = 0.0, functor = 0.0, functor_flat = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Index n = i % 5;
    const auto a = random_quadruple(n, rng), b = random_quadruple(n, rng), c = random_quadruple(n, rng);
    const Matrix lhs = embed_extended(ito_mul(ito_mul(c, b), a));
    const Matrix rhs = embed_extended(ito_mul(c, ito_mul(b, a)));
    assoc = std::max(assoc, detail::relative_gap(lhs, rhs));
    anti = std::max(anti, detail::relative_gap(embed_extended(ito_flat(ito_mul(b, a))),
                                               embed_extended(ito_mul(ito_flat(a), ito_flat(b)))));
    functor = std::max(functor, detail::relative_gap(embed_extended(ito_mul(b, a)),
                                                     embed_extended(b) * embed_extended(a)));
    const Matrix g = minkowski_metric(n).cast<Complex>();
    functor_flat = std::max(functor_flat, detail::relative_gap(embed_extended(ito_flat(a)),
                                                               g * embed_extended(a).adjoint() * g));
  }
  bool metric_involution = true;
  for (Index n = 0; n <= 4; ++n) {
    const RealMatrix g = minkowski_metric(n);
    metric_involution &= (g * g == RealMatrix::Identity(n + 2, n + 2));
  }
  const double tol = 1e-12;
  r.passed = assoc <= tol && anti <= tol && functor <= tol && functor_flat <= tol && metric_involution;
  r.payload = Json{{"draws", draws},
                   {"associativity", assoc},
                   {"flat_anti_homomorphism", anti},
                   {"embed_product", functor},
                   {"embed_flat", functor_flat},
                   {"metric_squared_identity", metric_involution}};
  r.detail = "max rel assoc " + detail::fmt(assoc) + ", flat " + detail::fmt(anti) + ", embed " +
             detail::fmt(std::max(functor, functor_flat)) + ", g^2 = I " +
             (metric_involution ? "exact" : "FAILED");
  return r;
}

inline CriterionResult criterion_z2_example(std::uint64_t /*seed*/) {
  CriterionResult r{2, "Z2 worked example"};
  const auto model = detail::model_z2(-1.0);
  const auto elements = model.semigroup.all_elements();
  const auto cpd = cpd_check(model, elements);
  const Matrix diss = dissipator_block_matrix(model, elements);
  const auto dd = build_dilation(model, elements);
  const auto ph = assemble_pseudo_hilbert(dd, model);
  const double recon = reconstruction_residual(ph, model, elements);

  const double tol = 1e-12;
  Matrix diss_expected(2, 2);
  diss_expected << 0.0, 0.0, 0.0, 2.0;
  const std::size_t s_idx = dd.index_of(model.semigroup, GroupElement{1});
  bool ok = cpd.verdict && cpd.compressed.rows() == 1 && std::abs(cpd.compressed(0, 0) - 1.0) <= tol;
  ok &= (diss - diss_expected).norm() <= tol;
  ok &= dd.k_dim == 1 && (dd.gram - diss_expected).norm() <= tol;
  ok &= dd.k_dim == 1 && std::abs(dd.j[s_idx](0, 0) + 1.0) <= tol;
  ok &= std::abs(dd.l[s_idx] + 1.0) <= tol;
  const Matrix js = ph.jmath[s_idx];
  const double flat_unit =
      (pseudo_adjoint(js, dd.k_dim, dd.d) * js - Matrix::Identity(ph.e_dim, ph.e_dim)).norm();
  ok &= flat_unit <= tol && recon <= tol;
  r.passed = ok;
  r.payload = Json{{"compressed", io::to_json(cpd.compressed)},
                   {"dissipator", io::to_json(diss)},
                   {"k_dim", dd.k_dim},
                   {"gram", io::to_json(dd.gram)},
                   {"j_s", dd.k_dim == 1 ? io::to_json(dd.j[s_idx](0, 0)) : Json(nullptr)},
                   {"l_s", io::to_json(dd.l[s_idx])},
                   {"flat_identity_residual", flat_unit},
                   {"reconstruction_residual", recon}};
  r.detail = "compressed " + detail::fmt(cpd.compressed(0, 0).real()) + ", K_dim " +
             std::to_string(dd.k_dim) + ", reconstruction " + detail::fmt(recon);
  return r;
}

inline CriterionResult criterion_cpd_equivalence(std::uint64_t seed) {
  CriterionResult r{3, "CPD / dissipator equivalence and dilation"};
  const auto models = detail::dilated_models(seed, 100);
  const double tol = kDefaultTolerance;
  int failures = 0;
  double worst_min_ratio = std::numeric_limits<double>::infinity();
  double worst_recon = 0.0;
  Json per_model = Json::array();
  for (const auto& model : models) {
    const auto elements = model.semigroup.all_elements();
    const auto cpd = cpd_check(model, elements, tol);
    const auto diss = dissipator_pd_check(model, elements, tol);
    double recon = std::numeric_limits<double>::infinity();
    try {
      const auto dd = build_dilation(model, elements);
      recon = reconstruction_residual(assemble_pseudo_hilbert(dd, model), model, elements);
    } catch (const std::exception&) {
    }
    worst_recon = std::max(worst_recon, recon);
    worst_min_ratio = std::min({worst_min_ratio, cpd.min_eigenvalue / std::max(cpd.scale, 1.0),
                                diss.min_eigenvalue / std::max(diss.scale, 1.0)});

    // Rank-one negative perturbation along the conjugate of a non-trivial
    // character, scaled so the Rayleigh quotient lands at -10 tol scale.
    const auto& g = model.semigroup.group();
    const auto& chi = g.characters[detail::nontrivial_character(g)];
    const Index b = 1 + model.n_modes;
    const auto count = static_cast<Index>(elements.size());
    Vector v = Vector::Zero(b * count);
    for (Index i = 0; i < count; ++i)
      v(i * b) = std::conj(chi[std::get<GroupElement>(elements[static_cast<std::size_t>(i)]).index]);
    const double rho = rayleigh_quotient(germ_block_matrix(model, elements), v);
    const double eps = (rho + 10.0 * tol * std::max(cpd.scale, 1.0)) / static_cast<double>(count);
    const auto perturbed = detail::subtract_character(model, elements, chi, eps);
    const auto cpd_p = cpd_check(perturbed, elements, tol);
    const auto diss_p = dissipator_pd_check(perturbed, elements, tol);

    const bool ok = cpd.verdict && diss.verdict && recon <= 1e-9 && !cpd_p.verdict && !diss_p.verdict;
    if (!ok) ++failures;
    per_model.push_back(Json{{"group", g.name},
                             {"k_dim", std::get<DilatedForm>(model.form).data.k_dim},
                             {"n_modes", model.n_modes},
                             {"cpd_min", cpd.min_eigenvalue},
                             {"dissipator_min", diss.min_eigenvalue},
                             {"reconstruction", recon},
                             {"epsilon", eps},
                             {"perturbed_cpd_min", cpd_p.min_eigenvalue},
                             {"perturbed_dissipator_min", diss_p.min_eigenvalue},
                             {"passed", ok}});
  }
  r.passed = failures == 0;
  r.payload = Json{{"models", models.size()}, {"failures", failures}, {"results", per_model}};
  r.detail = std::to_string(models.size()) + " models, " + std::to_string(failures) +
             " failures, min eig/scale " + detail::fmt(worst_min_ratio) + ", max reconstruction " +
             detail::fmt(worst_recon);
  return r;
}

inline CriterionResult criterion_kernels(std::uint64_t seed) {
  CriterionResult r{4, "Exponent kernels"};
  BirthSpec scalar;
  scalar.base_dim = 1;
  scalar.k_max = 1;
  scalar.n_modes = 0;
  scalar.sigma = {Vector::Ones(1)};
  scalar.kappa = 1.0;
  scalar.kappa_modes = RowVector::Zero(0);
  const auto model = birth_model(scalar);
  KernelSpec spec;
  spec.t = 1.0;
  spec.pairs.emplace_back(CoherentFunction(Vector::Zero(0)), MatrixElement{Matrix::Zero(1, 1)});
  spec.pairs.emplace_back(CoherentFunction(Vector::Zero(0)), MatrixElement{Matrix::Identity(1, 1)});
  const Matrix m = exponent_kernel(model, spec);
  Matrix expected(2, 2);
  const double e1 = std::exp(-1.0);
  expected << e1, e1, e1, 1.0;
  const double fixture_gap = max_abs_entry(m - expected);
  const auto fixture_pd = kernel_pd_report(m, 1e-8);
  bool ok = fixture_gap <= 1e-12 && fixture_pd.verdict;

  const auto models = detail::dilated_models(seed, 100);
  Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
  int failures = 0;
  double worst = std::numeric_limits<double>::infinity();
  Json mins = Json::array();
  for (const auto& dm : models) {
    for (double t : {0.1, 1.0}) {
      const auto pairs = static_cast<std::size_t>(detail::pick(rng, 1, 6));
      const auto ks = random_kernel_spec(dm, pairs, t, rng);
      const auto rep = kernel_pd_report(exponent_kernel(dm, ks), 1e-8);
      worst = std::min(worst, rep.min_eigenvalue / std::max(rep.scale, 1.0));
      mins.push_back(rep.min_eigenvalue);
      if (!rep.verdict) ++failures;
    }
  }
  ok &= failures == 0;
  r.passed = ok;
  r.payload = Json{{"fixture", io::to_json(m)},
                   {"fixture_gap", fixture_gap},
                   {"fixture_min_eigenvalue", fixture_pd.min_eigenvalue},
                   {"kernels", mins.size()},
                   {"failures", failures},
                   {"min_eigenvalues", mins}};
  r.detail = "fixture gap " + detail::fmt(fixture_gap) + ", " + std::to_string(mins.size()) +
             " random kernels, " + std::to_string(failures) + " failures, min eig/scale " +
             detail::fmt(worst);
  return r;
}

inline CriterionResult criterion_small_t(std::uint64_t seed) {
  CriterionResult r{5, "Small-time limit"};
  Rng rng(seed);
  const int cases = 24;
  const double t = 1e-3;
  int failures = 0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  Json ratios = Json::array();
  for (int c = 0; c < cases; ++c) {
    GeneratorModel model;
    if (c % 2 == 0) {
      const StarSemigroup s = c % 4 == 0 ? quaternion_group() : cyclic_group(3);
      model = random_dilated_model(s, detail::pick(rng, 1, 3), detail::pick(rng, 1, 2), rng);
    } else {
      model = birth_model(random_birth_spec(detail::pick(rng, 1, 2), detail::pick(rng, 1, 2),
                                            detail::pick(rng, 1, 2), rng));
    }
    const auto spec = random_kernel_spec(model, 3, t, rng);
    const double full = small_t_generator_check(model, spec, t);
    const double half = small_t_generator_check(model, spec, t / 2.0);
    const double ratio = half > 0.0 ? full / half : std::numeric_limits<double>::infinity();
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    ratios.push_back(Json{{"deviation_t", full}, {"deviation_half_t", half}, {"ratio", ratio}});
    if (!(ratio >= 2.0 / 1.5 && ratio <= 2.0 * 1.5)) ++failures;
  }
  r.passed = failures == 0;
  r.payload = Json{{"cases", cases}, {"t", t}, {"failures", failures}, {"results", ratios}};
  r.detail = std::to_string(cases) + " cases, ratio range [" + detail::fmt(lo) + ", " +
             detail::fmt(hi) + "]";
  return r;
}

inline CriterionResult criterion_poisson(std::uint64_t seed) {
  CriterionResult r{6, "Poisson example"};
  const auto start = std::chrono::steady_clock::now();
  ScalarPoissonForm form;
  form.elements = {MatrixElement{Matrix::Identity(1, 1)}};
  form.alpha = {1.0};
  form.lambda = {-1.0};
  const GeneratorModel model{matrix_ball(1), 0, form};
  const std::uint64_t paths = 100000;
  const unsigned threads = default_threads();
  const auto mean = mean_exponent_check(model, model.semigroup.unit(), 1.0, paths, seed, threads);
  const auto mart = martingale_check(model, 1.0, 2.0, paths, seed + 1, 8, threads);
  const auto zero = zero_count_probability(sample_poisson_counts(1.0, paths, seed + 2, threads));
  const double runtime =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double mean_dev = mean.standardized_deviation();
  const double zero_dev = std::abs(zero.estimate - zero.exact) / zero.std_error;
  r.passed = mean_dev <= 5.0 && mart.passed(5.0) && zero_dev <= 5.0 && runtime < 10.0;
  r.payload = Json{{"paths", paths},
                   {"mean", io::to_json(mean.estimate)},
                   {"mean_std_error", mean.std_error},
                   {"mean_deviation_sigma", mean_dev},
                   {"martingale_max_deviation_sigma", mart.max_deviation},
                   {"martingale_bins", mart.bins.size()},
                   {"zero_probability", zero.estimate},
                   {"zero_probability_deviation_sigma", zero_dev}};
  r.detail = "mean " + detail::fmt(mean_dev) + " sigma, martingale max " +
             detail::fmt(mart.max_deviation) + " sigma, P(p=0) " + detail::fmt(zero_dev) +
             " sigma, " + detail::fmt(runtime) + " s";
  return r;
}

inline CriterionResult criterion_solution_oracle(std::uint64_t seed) {
  CriterionResult r{7, "Coherent solution cross-oracle"};
  Rng rng(seed);
  const int draws = 240;
  double worst = 0.0, vacuum = 0.0;
  for (int i = 0; i < draws; ++i) {
    const Index d = detail::pick(rng, 1, 3), k_max = detail::pick(rng, 1, 3), n = detail::pick(rng, 0, 2);
    const auto spec = random_birth_spec(d, k_max, n, rng, true);
    const auto model = birth_model(spec);
    const Matrix y = random_contraction(d, rng);
    const Vector f = random_vector(n, rng, 0.7), h = random_vector(n, rng, 0.7);
    const double t = std::uniform_real_distribution<double>(0.05, 2.0)(rng);
    const Complex closed = eval_solution_37(spec, f, h, y, t);
    const Complex ode = log_matrix_element(model, CoherentFunction(f), MatrixElement{y},
                                           CoherentFunction(h), t);
    worst = std::max(worst, std::abs(closed - ode) / std::max(1.0, std::abs(ode)));
    const Vector zero = Vector::Zero(n);
    vacuum = std::max(vacuum, std::abs(eval_solution_37(spec, zero, zero, Matrix::Identity(d, d), t)));
  }
  r.passed = worst <= 1e-12 && vacuum <= 1e-12;
  r.payload = Json{{"draws", draws}, {"max_relative_gap", worst}, {"max_vacuum_log", vacuum}};
  r.detail = std::to_string(draws) + " draws, max rel gap " + detail::fmt(worst) +
             ", max |vacuum log| " + detail::fmt(vacuum);
  return r;
}

inline CriterionResult criterion_norm_bounds(std::uint64_t seed) {
  CriterionResult r{8, "Exchange norm bounds"};
  Rng rng(seed);
  const int specs = 10;
  std::size_t violations = 0, samples = 0;
  Json per_spec = Json::array();
  for (int i = 0; i < specs; ++i) {
    const auto spec = random_birth_spec(detail::pick(rng, 1, 3), detail::pick(rng, 1, 3),
                                        detail::pick(rng, 1, 2), rng, i % 2 == 0);
    const auto rep = norm_bounds_check(spec, 200, rng());
    violations += rep.violations;
    samples += rep.samples;
    per_spec.push_back(Json{{"exchange_at_unit", rep.exchange_at_unit},
                            {"exchange_sup", rep.exchange_sup},
                            {"violations", rep.violations}});
  }
  r.passed = violations == 0 && samples == static_cast<std::size_t>(specs) * 200;
  r.payload = Json{{"specs", specs}, {"samples", samples}, {"violations", violations}, {"results", per_spec}};
  r.detail = std::to_string(specs) + " specs x 200 contractions, " + std::to_string(violations) +
             " violations";
  return r;
}

using CriterionFn = std::function<CriterionResult(std::uint64_t)>;

inline const std::vector<CriterionFn>& numbered_criteria() {
  static const std::vector<CriterionFn> fns{
      criterion_ito_laws,  criterion_z2_example,      criterion_cpd_equivalence,
      criterion_kernels,   criterion_small_t,         criterion_poisson,
      criterion_solution_oracle, criterion_norm_bounds};
  return fns;
}

inline CriterionResult run_timed(const CriterionFn& fn, std::uint64_t seed, int id) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = fn(seed);
  } catch (const std::exception& e) {
    r.id = id;
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
    r.payload = Json{{"error", e.what()}};
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

/// Reruns every criterion with the same seed and compares serialized payloads.
inline CriterionResult criterion_determinism(std::uint64_t seed, const std::vector<CriterionResult>& first) {
  CriterionResult r{9, "Determinism"};
  const auto& fns = numbered_criteria();
  std::vector<int> mismatched;
  for (std::size_t i = 0; i < fns.size(); ++i) {
    const auto again = run_timed(fns[i], seed, static_cast<int>(i + 1));
    if (i >= first.size() || again.payload.dump() != first[i].payload.dump()) {
      mismatched.push_back(static_cast<int>(i + 1));
    }
  }
  r.passed = mismatched.empty();
  r.payload = Json{{"rerun", fns.size()}, {"mismatched", mismatched}};
  r.detail = std::to_string(fns.size()) + " components rerun, " + std::to_string(mismatched.size()) +
             " mismatched";
  return r;
}

inline std::vector<CriterionResult> run_all(std::uint64_t seed = kDefaultSeed) {
  std::vector<CriterionResult> out;
  const auto& fns = numbered_criteria();
  for (std::size_t i = 0; i < fns.size(); ++i) out.push_back(run_timed(fns[i], seed, static_cast<int>(i + 1)));
  const auto start = std::chrono::steady_clock::now();
  out.push_back(criterion_determinism(seed, out));
  out.back().seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline std::string summary_line(const CriterionResult& r) {
  return std::string(r.passed ? "PASS" : "FAIL") + "  [" + std::to_string(r.id) + "] " + r.name +
         ": " + r.detail;
}

}  // namespace itodilate::acceptance
