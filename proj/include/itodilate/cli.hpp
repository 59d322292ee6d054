#pragma once

// Batch front end: one command per run, one JSON report on the output
// stream, log lines on the error stream.

#include "itodilate/acceptance.hpp"
#include "itodilate/json_io.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace itodilate::cli {

using io::Json;

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kPass = 0, kCheckFailed = 1, kUsageError = 2 };

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"check-cpd",  "dissipator-pd", "dilate",
                                              "reconstruct", "kernel",       "small-t",
                                              "poisson-mc", "martingale",   "birth-verify",
                                              "selftest"};
  return names;
}

struct Options {
  std::string command;
  std::string model_path;
  std::string sample_path;
  std::string out_path;
  std::optional<double> tol;
  std::optional<double> t;
  std::optional<double> s;
  std::optional<double> rank_tol;
  std::uint64_t paths = 100000;
  std::uint64_t seed = acceptance::kDefaultSeed;
  std::uint64_t bins = 8;
  bool paths_given = false;
};

struct Outcome {
  bool passed = true;
  Json report;
  std::string summary;
};

namespace detail {

inline GeneratorModel load_model(const Options& o) {
  if (o.model_path.empty()) throw InputError("--model is required for '" + o.command + "'");
  try {
    return io::model_from(io::read_file(o.model_path));
  } catch (const Json::exception& e) {
    throw InputError("malformed model file '" + o.model_path + "': " + e.what());
  }
}

inline std::vector<Element> default_sample(const GeneratorModel& model, std::uint64_t seed) {
  if (const auto* t = std::get_if<TableForm>(&model.form)) return t->elements;
  if (const auto* d = std::get_if<DilatedForm>(&model.form)) return d->data.elements;
  if (const auto* p = std::get_if<ScalarPoissonForm>(&model.form)) return p->elements;
  if (model.semigroup.is_finite_group()) return model.semigroup.all_elements();
  return model.semigroup.sample_elements(8, seed);
}

inline std::vector<Element> load_sample(const Options& o, const GeneratorModel& model) {
  if (o.sample_path.empty()) return default_sample(model, o.seed);
  try {
    auto elements = io::elements_from(model.semigroup, io::read_file(o.sample_path));
    if (elements.empty()) throw InputError("sample file lists no elements");
    return elements;
  } catch (const Json::exception& e) {
    throw InputError("malformed sample file '" + o.sample_path + "': " + e.what());
  }
}

inline KernelSpec load_kernel_spec(const Options& o, const GeneratorModel& model) {
  if (o.sample_path.empty()) throw InputError("--sample must name a kernel spec for '" + o.command + "'");
  try {
    return io::kernel_spec_from(model, io::read_file(o.sample_path));
  } catch (const Json::exception& e) {
    throw InputError("malformed kernel spec '" + o.sample_path + "': " + e.what());
  }
}

inline double positive(std::optional<double> v, double fallback, const char* flag) {
  const double x = v.value_or(fallback);
  if (!(x > 0.0) || !std::isfinite(x)) throw InputError(std::string(flag) + " must be positive");
  return x;
}

inline Outcome run_cpd(const Options& o, bool dissipator) {
  const auto model = load_model(o);
  const auto sample = load_sample(o, model);
  const double tol = positive(o.tol, kDefaultTolerance, "--tol");
  const auto rep = dissipator ? dissipator_pd_check(model, sample, tol) : cpd_check(model, sample, tol);
  Json report = io::to_json(rep);
  Json warnings = Json::array();
  for (const auto& w : model_warnings(model)) warnings.push_back(w);
  report["warnings"] = warnings;
  return {rep.verdict, report, std::string(rep.verdict ? "positive" : "not positive") +
                                   ", min eigenvalue " + acceptance::detail::fmt(rep.min_eigenvalue)};
}

inline DilationOptions dilation_options(const Options& o) {
  DilationOptions opt;
  opt.rank_tol = positive(o.rank_tol, opt.rank_tol, "--rank-tol");
  opt.psd_tol = positive(o.tol, opt.psd_tol, "--tol");
  return opt;
}

inline Outcome run_dilate(const Options& o) {
  const auto model = load_model(o);
  const auto sample = load_sample(o, model);
  try {
    const auto dd = build_dilation(model, sample, dilation_options(o));
    return {true, io::to_json(dd),
            "K_dim " + std::to_string(dd.k_dim) + ", max residual " +
                acceptance::detail::fmt(dd.residuals.max())};
  } catch (const ConstructionError& e) {
    return {false, Json{{"error", e.what()}}, e.what()};
  }
}

inline Outcome run_reconstruct(const Options& o) {
  const auto model = load_model(o);
  const auto sample = load_sample(o, model);
  const double tol = positive(o.tol, kDefaultTolerance, "--tol");
  try {
    const auto dd = build_dilation(model, sample, dilation_options(o));
    const auto ph = assemble_pseudo_hilbert(dd, model);
    const double residual = reconstruction_residual(ph, model, dd.elements);
    double scale = 1.0;
    for (const auto& y : dd.elements) scale = std::max(scale, max_abs_entry(germ_of(model, y)));
    const bool ok = residual <= tol * scale && ph.flat_residual <= tol * scale;
    return {ok,
            Json{{"pseudo_hilbert", io::to_json(ph)},
                 {"reconstruction_residual", residual},
                 {"flat_residual", ph.flat_residual},
                 {"threshold", tol * scale}},
            "reconstruction residual " + acceptance::detail::fmt(residual)};
  } catch (const ConstructionError& e) {
    return {false, Json{{"error", e.what()}}, e.what()};
  }
}

inline Outcome run_kernel(const Options& o) {
  const auto model = load_model(o);
  auto spec = load_kernel_spec(o, model);
  if (o.t) spec.t = positive(o.t, 1.0, "--t");
  const double tol = positive(o.tol, kDefaultTolerance, "--tol");
  const Matrix m = exponent_kernel(model, spec);
  const auto rep = kernel_pd_report(m, tol);
  Json report = io::to_json(rep);
  report["t"] = spec.t;
  report["kernel"] = io::to_json(m);
  return {rep.verdict, report, "kernel min eigenvalue " + acceptance::detail::fmt(rep.min_eigenvalue)};
}

inline Outcome run_small_t(const Options& o) {
  const auto model = load_model(o);
  const auto spec = load_kernel_spec(o, model);
  const double t = positive(o.t, 1e-3, "--t");
  const double full = small_t_generator_check(model, spec, t);
  const double half = small_t_generator_check(model, spec, t / 2.0);
  const double ratio = half > 0.0 ? full / half : std::numeric_limits<double>::infinity();
  const bool ok = ratio >= 2.0 / 1.5 && ratio <= 3.0;
  return {ok,
          Json{{"t", t}, {"deviation_t", full}, {"deviation_half_t", half}, {"ratio", ratio}},
          "deviation ratio " + acceptance::detail::fmt(ratio)};
}

inline Outcome run_poisson(const Options& o) {
  const auto model = load_model(o);
  if (!std::holds_alternative<ScalarPoissonForm>(model.form))
    throw InputError("poisson-mc needs a scalar_poisson model");
  const auto sample = load_sample(o, model);
  const double t = positive(o.t, 1.0, "--t");
  const double tol = positive(o.tol, kDefaultTolerance, "--tol");
  const unsigned threads = default_threads();
  const auto run = sample_poisson_counts(t, o.paths, o.seed, threads);
  bool ok = true;
  Json means = Json::array();
  for (const auto& y : sample) {
    const auto est = exponent_mean(poisson_values(model, y), run, t);
    const double dev = est.standardized_deviation();
    ok &= dev <= 5.0;
    means.push_back(Json{{"element", io::to_json(y)},
                         {"estimate", io::to_json(est.estimate)},
                         {"exact", io::to_json(est.exact)},
                         {"std_error", est.std_error},
                         {"deviation_sigma", dev}});
  }
  const auto zero = zero_count_probability(run);
  const double zero_dev = std::abs(zero.estimate - zero.exact) / zero.std_error;
  ok &= zero_dev <= 5.0;
  Json report{{"t", t},
              {"paths", o.paths},
              {"means", means},
              {"zero_probability",
               {{"estimate", zero.estimate}, {"exact", zero.exact}, {"std_error", zero.std_error},
                {"deviation_sigma", zero_dev}}}};
  if (sample.size() > 1) {
    const auto pd = pd_in_mean_check(model, sample, t, o.paths, o.seed, tol, threads);
    report["pd_in_mean"] = Json{{"one_plus_alpha_pd", pd.one_plus_alpha.verdict},
                                {"kappa", pd.kappa ? Json(*pd.kappa) : Json(nullptr)},
                                {"normalized", pd.normalized},
                                {"mean_kernel_min_eigenvalue", pd.mean_kernel.min_eigenvalue},
                                {"max_std_error", pd.max_std_error},
                                {"hypotheses", pd.hypotheses()},
                                {"mean_kernel_psd", pd.mean_kernel_psd()}};
    if (pd.hypotheses()) ok &= pd.mean_kernel_psd();
  }
  return {ok, report, std::string(ok ? "estimates consistent" : "estimates inconsistent") +
                          " with exact values at 5 sigma"};
}

inline Outcome run_martingale(const Options& o) {
  const auto model = load_model(o);
  if (!std::holds_alternative<ScalarPoissonForm>(model.form))
    throw InputError("martingale needs a scalar_poisson model");
  const double t = positive(o.t, 1.0, "--t");
  const double s = positive(o.s, 2.0 * t, "--s");
  const auto rep = martingale_check(model, t, s, o.paths, o.seed, o.bins, default_threads());
  Json bins = Json::array();
  for (const auto& b : rep.bins)
    bins.push_back(Json{{"k", b.count_value},
                        {"paths", b.paths},
                        {"conditional_mean", b.conditional_mean},
                        {"expected", b.expected},
                        {"std_error", b.std_error},
                        {"deviation_sigma", b.deviation}});
  Json report{{"t", rep.t},
              {"s", rep.s},
              {"drift", rep.drift},
              {"normalized", rep.normalized},
              {"bins", bins},
              {"skipped_bins", rep.skipped_bins},
              {"overflow_paths", rep.overflow_paths},
              {"unconditional",
               {{"estimate", io::to_json(rep.unconditional.estimate)},
                {"std_error", rep.unconditional.std_error}}},
              {"max_deviation_sigma", rep.max_deviation}};
  return {rep.passed(5.0), report,
          "max deviation " + acceptance::detail::fmt(rep.max_deviation) + " sigma"};
}

inline Outcome run_birth(const Options& o) {
  const auto model = load_model(o);
  const auto* form = std::get_if<BirthForm>(&model.form);
  if (!form) throw InputError("birth-verify needs a birth model");
  const auto& spec = form->spec;
  const double tol = positive(o.tol, kDefaultTolerance, "--tol");
  const std::size_t count = o.paths_given ? static_cast<std::size_t>(o.paths) : 200;
  if (count == 0) throw InputError("--paths must be positive");

  const auto norm = martingale_condition_check(spec);
  const auto bounds = norm_bounds_check(spec, count, o.seed);
  const auto sample = load_sample(o, model);
  const double coboundary = birth_coboundary_residual(spec, sample);
  const auto split = birth_decomposition(model, sample, tol);

  // The closed-form coherent element against the generator integral.
  Rng rng(o.seed);
  const double t = positive(o.t, 1.0, "--t");
  double oracle = 0.0;
  for (const auto& y : sample) {
    const Vector f = random_vector(spec.n_modes, rng, 0.7), h = random_vector(spec.n_modes, rng, 0.7);
    const Complex closed = eval_solution_37(spec, f, h, std::get<MatrixElement>(y).value, t);
    const Complex ode = log_matrix_element(model, CoherentFunction(f), y, CoherentFunction(h), t);
    oracle = std::max(oracle, std::abs(closed - ode) / std::max(1.0, std::abs(ode)));
  }
  const Vector zero = Vector::Zero(spec.n_modes);
  const Complex vacuum =
      eval_solution_37(spec, zero, zero, Matrix::Identity(spec.base_dim, spec.base_dim), t);

  const bool ok = norm.mode != NormalizationMode::violated && bounds.passed() && coboundary <= 1e-9 &&
                  split.phi_pd.verdict && oracle <= 1e-12;
  Json report{{"normalization", {{"lhs", norm.lhs}, {"rhs", norm.rhs}, {"mode", to_string(norm.mode)}}},
              {"norm_bounds",
               {{"samples", bounds.samples},
                {"exchange_at_unit", bounds.exchange_at_unit},
                {"exchange_sup", bounds.exchange_sup},
                {"scalar_sup", bounds.scalar_sup},
                {"annihilation_sup", bounds.annihilation_sup},
                {"creation_sup", bounds.creation_sup},
                {"violations", bounds.violations}}},
              {"coboundary_residual", coboundary},
              {"phi_pd", io::to_json(split.phi_pd)},
              {"phi_zero_residual", split.phi_zero_residual},
              {"solution_oracle_gap", oracle},
              {"vacuum_log", io::to_json(vacuum)}};
  return {ok, report, std::string("normalization ") + to_string(norm.mode) + ", " +
                          std::to_string(bounds.violations) + " norm-bound violations"};
}

inline Outcome run_selftest(const Options& o, std::ostream& err) {
  const auto results = acceptance::run_all(o.seed);
  Json list = Json::array();
  int failures = 0;
  for (const auto& r : results) {
    err << acceptance::summary_line(r) << "\n";
    if (!r.passed) ++failures;
    list.push_back(Json{{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail},
                        {"payload", r.payload}});
  }
  return {failures == 0, Json{{"criteria", list}, {"failures", failures}},
          std::to_string(results.size() - static_cast<std::size_t>(failures)) + "/" +
              std::to_string(results.size()) + " criteria passed"};
}

inline Outcome dispatch(const Options& o, std::ostream& err) {
  const auto& c = o.command;
  if (c == "check-cpd") return run_cpd(o, false);
  if (c == "dissipator-pd") return run_cpd(o, true);
  if (c == "dilate") return run_dilate(o);
  if (c == "reconstruct") return run_reconstruct(o);
  if (c == "kernel") return run_kernel(o);
  if (c == "small-t") return run_small_t(o);
  if (c == "poisson-mc") return run_poisson(o);
  if (c == "martingale") return run_martingale(o);
  if (c == "birth-verify") return run_birth(o);
  return run_selftest(o, err);
}

inline Json manifest(const Options& o, double seconds, const std::string& summary) {
  Json inputs = Json::object();
  if (!o.model_path.empty()) inputs["model"] = o.model_path;
  if (!o.sample_path.empty()) inputs["sample"] = o.sample_path;
  Json tolerances = Json::object();
  if (o.tol) tolerances["tol"] = *o.tol;
  if (o.rank_tol) tolerances["rank_tol"] = *o.rank_tol;
  return Json{{"command", o.command},         {"inputs", inputs},
              {"seed", o.seed},               {"tolerances", tolerances},
              {"tool_version", kVersion},     {"wall_clock_seconds", seconds},
              {"result_summary", summary}};
}

inline void emit(const Json& doc, const Options& o, std::ostream& out, std::ostream& err) {
  const std::string text = doc.dump(2);
  out << text << "\n";
  if (!o.out_path.empty()) {
    std::ofstream file(o.out_path);
    if (!file) {
      err << "itodilate: cannot write '" << o.out_path << "'\n";
      return;
    }
    file << text << "\n";
  }
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int execute(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  Options o;
  CLI::App app{"Ito algebra generator checks, dilations and stochastic exponent simulations",
               "itodilate"};
  app.add_option("command", o.command, "Command to run")
      ->required()
      ->check(CLI::IsMember(commands()));
  app.add_option("--model", o.model_path, "Generator model JSON");
  app.add_option("--sample", o.sample_path, "Sample elements or kernel spec JSON");
  app.add_option("--tol", o.tol, "Positivity tolerance");
  app.add_option("--t", o.t, "Time");
  app.add_option("--s", o.s, "Later time for martingale checks");
  auto* paths = app.add_option("--paths", o.paths, "Monte-Carlo paths (birth-verify: contractions)");
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--rank-tol", o.rank_tol, "Relative eigenvalue cut-off for dilations");
  app.add_option("--bins", o.bins, "Conditioning bins for martingale");
  app.add_option("--out", o.out_path, "Also write the report to this path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "itodilate: " << e.what() << "\n";
    detail::emit(Json{{"manifest", detail::manifest(o, 0.0, "usage error")}, {"error", e.what()}}, o,
                 out, err);
    return kUsageError;
  }
  o.paths_given = paths->count() > 0;

  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  err << "itodilate " << o.command << "\n";
  try {
    if (o.paths == 0) throw InputError("--paths must be positive");
    if (o.bins == 0) throw InputError("--bins must be positive");
    const Outcome result = detail::dispatch(o, err);
    err << "itodilate: " << result.summary << "\n";
    Json doc{{"manifest", detail::manifest(o, elapsed(), result.summary)},
             {"passed", result.passed},
             {"report", result.report}};
    detail::emit(doc, o, out, err);
    return result.passed ? kPass : kCheckFailed;
  } catch (const std::exception& e) {
    err << "itodilate: error: " << e.what() << "\n";
    detail::emit(Json{{"manifest", detail::manifest(o, elapsed(), "input error")}, {"error", e.what()}},
                 o, out, err);
    return kUsageError;
  }
}

}  // namespace itodilate::cli
