#pragma once

// Monte-Carlo checks of the classical Poisson exponent
//   phi_t(y) = (1 + alpha(y))^{p(t)} exp(t lambda(y))
// driven by a unit-rate Poisson process p(t).

#include "itodilate/cpd.hpp"
#include "itodilate/germ.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <random>
#include <thread>
#include <vector>

namespace itodilate {

/// Per-path generator; the stream depends only on (seed, path).
inline std::mt19937_64 path_stream(std::uint64_t seed, std::uint64_t path) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
  return std::mt19937_64(seq);
}

/// Uniform on (0, 1) from the top 53 bits; platform independent.
inline double unit_uniform(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Poisson(mean) by sequential inversion of the cdf. Means above 30 are
/// split into independent pieces of at most 30.
inline std::uint64_t poisson_inversion(double mean, std::mt19937_64& rng) {
  require(mean >= 0.0 && std::isfinite(mean), "Poisson mean must be finite and non-negative");
  if (mean == 0.0) return 0;
  const auto pieces = static_cast<std::uint64_t>(std::ceil(mean / 30.0));
  const double part = mean / static_cast<double>(pieces);
  std::uint64_t total = 0;
  for (std::uint64_t p = 0; p < pieces; ++p) {
    const double u = unit_uniform(rng);
    double prob = std::exp(-part);
    double cdf = prob;
    std::uint64_t k = 0;
    while (u > cdf && prob > 0.0) {
      ++k;
      prob *= part / static_cast<double>(k);
      cdf += prob;
    }
    total += k;
  }
  return total;
}

/// Hardware concurrency, capped by ITODILATE_THREADS when set to a positive integer.
inline unsigned default_threads() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ITODILATE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) threads = std::min(threads, static_cast<unsigned>(cap));
  }
  return threads;
}

/// Calls body(first, last) on disjoint chunks of [0, count). Results must be
/// written to per-index slots so that output is scheduling independent.
template <typename Body>
void parallel_chunks(std::size_t count, unsigned threads, Body&& body) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count / 1024, 1))));
  if (threads == 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> workers;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (unsigned w = 0; w < threads; ++w) {
    const std::size_t first = w * chunk;
    const std::size_t last = std::min(count, first + chunk);
    if (first >= last) break;
    workers.emplace_back([&body, first, last] { body(first, last); });
  }
  for (auto& w : workers) w.join();
}

struct PoissonRun {
  std::vector<double> times;  // increasing observation times
  std::uint64_t paths = 0;
  std::uint64_t seed = 0;
  /// counts[path * times.size() + i] = p(times[i]) on that path.
  std::vector<std::uint64_t> counts;

  std::uint64_t count(std::size_t path, std::size_t time_index = 0) const {
    return counts[path * times.size() + time_index];
  }
};

/// Unit-rate Poisson counts observed at increasing `times`, built from
/// independent increments of each path's own stream.
inline PoissonRun sample_poisson_path(const std::vector<double>& times, std::uint64_t paths,
                                      std::uint64_t seed, unsigned threads = 1) {
  require(paths >= 1, "number of paths must be at least 1");
  require(!times.empty(), "at least one observation time is required");
  for (std::size_t i = 0; i < times.size(); ++i) {
    require(times[i] >= 0.0, "observation times must be non-negative");
    if (i > 0) require(times[i] > times[i - 1], "observation times must increase");
  }
  PoissonRun run{times, paths, seed, std::vector<std::uint64_t>(paths * times.size())};
  parallel_chunks(paths, threads, [&](std::size_t first, std::size_t last) {
    for (std::size_t path = first; path < last; ++path) {
      auto rng = path_stream(seed, path);
      std::uint64_t total = 0;
      double previous = 0.0;
      for (std::size_t i = 0; i < times.size(); ++i) {
        total += poisson_inversion(times[i] - previous, rng);
        previous = times[i];
        run.counts[path * times.size() + i] = total;
      }
    }
  });
  return run;
}

inline PoissonRun sample_poisson_counts(double t, std::uint64_t paths, std::uint64_t seed,
                                        unsigned threads = 1) {
  return sample_poisson_path({t}, paths, seed, threads);
}

struct ScalarPoissonValues {
  Complex alpha;
  Complex lambda;
};

inline ScalarPoissonValues poisson_values(const GeneratorModel& model, const Element& y) {
  const auto* form = std::get_if<ScalarPoissonForm>(&model.form);
  if (form == nullptr) throw InputError("Poisson checks require a scalar_poisson model");
  auto idx = model.semigroup.find(form->elements, y);
  if (!idx) throw InputError("scalar Poisson model is not defined at the requested element");
  return {form->alpha[*idx], form->lambda[*idx]};
}

struct MeanEstimate {
  Complex estimate;
  Complex exact;
  double std_error = 0.0;

  /// |estimate - exact| / std_error; differences at rounding level count as zero.
  double standardized_deviation() const {
    const double diff = std::abs(estimate - exact);
    if (diff <= 1e-12 * std::max(1.0, std::abs(exact))) return 0.0;
    if (std_error == 0.0) return std::numeric_limits<double>::infinity();
    return diff / std_error;
  }
};

/// Mean and standard error of (1 + alpha)^p e^{t lambda} over a run.
inline MeanEstimate exponent_mean(const ScalarPoissonValues& v, const PoissonRun& run, double t,
                                  std::size_t time_index = 0) {
  const double n = static_cast<double>(run.paths);
  const Complex base = 1.0 + v.alpha;
  const Complex drift = std::exp(t * v.lambda);
  Complex sum{};
  std::vector<Complex> values(run.paths);
  for (std::uint64_t p = 0; p < run.paths; ++p) {
    values[p] = std::pow(base, static_cast<double>(run.count(p, time_index))) * drift;
    sum += values[p];
  }
  const Complex mean = sum / n;
  double sq = 0.0;
  for (const auto& x : values) sq += std::norm(x - mean);
  MeanEstimate out;
  out.estimate = mean;
  out.exact = std::exp(t * (v.alpha + v.lambda));
  out.std_error = run.paths > 1 ? std::sqrt(sq / (n - 1.0) / n) : 0.0;
  return out;
}

/// E (1 + alpha)^{p(t)} e^{t lambda} = e^{t (alpha + lambda)}, estimated.
inline MeanEstimate mean_exponent_check(const GeneratorModel& model, const Element& y, double t,
                                        std::uint64_t paths, std::uint64_t seed,
                                        unsigned threads = 1) {
  const auto v = poisson_values(model, y);
  return exponent_mean(v, sample_poisson_counts(t, paths, seed, threads), t);
}

struct ProbabilityEstimate {
  double estimate = 0.0;
  double exact = 0.0;
  double std_error = 0.0;
};

/// Empirical P(p(t) = 0) against e^{-t}.
inline ProbabilityEstimate zero_count_probability(const PoissonRun& run, std::size_t time_index = 0) {
  std::uint64_t zeros = 0;
  for (std::uint64_t p = 0; p < run.paths; ++p) zeros += run.count(p, time_index) == 0 ? 1 : 0;
  ProbabilityEstimate out;
  out.estimate = static_cast<double>(zeros) / static_cast<double>(run.paths);
  out.exact = std::exp(-run.times[time_index]);
  out.std_error = std::sqrt(out.exact * (1.0 - out.exact) / static_cast<double>(run.paths));
  return out;
}

struct MartingaleBin {
  std::uint64_t count_value = 0;  // k = p(t)
  std::uint64_t paths = 0;
  double conditional_mean = 0.0;
  double expected = 0.0;
  double std_error = 0.0;
  double deviation = 0.0;  // |mean - expected| / std_error
};

/// Bins with fewer paths are reported as skipped rather than tested.
inline constexpr std::uint64_t kMinBinPaths = 30;

struct MartingaleReport {
  double t = 0.0, s = 0.0;
  double drift = 0.0;  // alpha(1) + lambda(1)
  bool normalized = true;
  std::vector<MartingaleBin> bins;
  std::vector<std::uint64_t> skipped_bins;  // k values with fewer than kMinBinPaths paths
  std::uint64_t overflow_paths = 0;         // p(t) >= bins
  MeanEstimate unconditional;               // m_s against m_0 = 1
  double max_deviation = 0.0;

  bool passed(double sigmas = 5.0) const { return max_deviation <= sigmas; }
};

/// Checks E[m_s | p(t) = k] = (1 + alpha(1))^k e^{t lambda(1)} for k < bins,
/// and E m_s = 1, with m_s = (1 + alpha(1))^{p(s)} e^{s lambda(1)}. Bin
/// standard errors use the exact conditional variance.
inline MartingaleReport martingale_check(const GeneratorModel& model, double t, double s,
                                         std::uint64_t paths, std::uint64_t seed,
                                         std::uint64_t bins = 8, unsigned threads = 1) {
  require(s > t && t >= 0.0, "martingale_check: need 0 <= t < s");
  require(bins >= 1, "martingale_check: need at least one bin");
  const auto v = poisson_values(model, model.semigroup.unit());
  require(std::abs(v.alpha.imag()) < 1e-14 && std::abs(v.lambda.imag()) < 1e-14,
          "martingale_check: alpha(1) and lambda(1) must be real");
  const double a = v.alpha.real(), l = v.lambda.real();
  require(1.0 + a >= 0.0, "martingale_check: 1 + alpha(1) must be non-negative");
  MartingaleReport report;
  report.t = t;
  report.s = s;
  report.drift = a + l;
  report.normalized = std::abs(report.drift) <= 1e-12;

  const PoissonRun run = sample_poisson_path({t, s}, paths, seed, threads);
  std::vector<double> sum(bins, 0.0);
  std::vector<std::uint64_t> n(bins, 0);
  const double scale_s = std::exp(s * l);
  for (std::uint64_t p = 0; p < run.paths; ++p) {
    const auto k = run.count(p, 0);
    if (k >= bins) {
      ++report.overflow_paths;
      continue;
    }
    const double m = std::pow(1.0 + a, static_cast<double>(run.count(p, 1))) * scale_s;
    sum[k] += m;
    ++n[k];
  }
  // Given p(t) = k, m_s = (1 + a)^{k + N} e^{s l} with N ~ Poisson(s - t).
  const double gap = s - t;
  const double cond_var_factor =
      std::exp(gap * ((1.0 + a) * (1.0 + a) - 1.0)) - std::exp(2.0 * gap * a);
  for (std::uint64_t k = 0; k < bins; ++k) {
    if (n[k] < kMinBinPaths) {
      report.skipped_bins.push_back(k);
      continue;
    }
    MartingaleBin bin;
    bin.count_value = k;
    bin.paths = n[k];
    const double cnt = static_cast<double>(n[k]);
    bin.conditional_mean = sum[k] / cnt;
    const double weight = std::pow(1.0 + a, static_cast<double>(k)) * scale_s;
    bin.std_error = weight * std::sqrt(std::max(0.0, cond_var_factor) / cnt);
    bin.expected = std::pow(1.0 + a, static_cast<double>(k)) * std::exp(t * l);
    const double diff = std::abs(bin.conditional_mean - bin.expected);
    bin.deviation = bin.std_error > 0.0 ? diff / bin.std_error
                                        : (diff <= 1e-12 * std::max(1.0, bin.expected)
                                               ? 0.0
                                               : std::numeric_limits<double>::infinity());
    report.max_deviation = std::max(report.max_deviation, bin.deviation);
    report.bins.push_back(bin);
  }
  MeanEstimate un = exponent_mean(v, run, s, 1);
  un.exact = 1.0;  // m_0
  report.unconditional = un;
  report.max_deviation = std::max(report.max_deviation, un.standardized_deviation());
  return report;
}

struct PdInMeanReport {
  CpdReport one_plus_alpha;  // [(1 + alpha)(y_i* y_k)]
  std::optional<double> kappa;  // first kappa >= 0 with [kappa + lambda] PD
  CpdReport kappa_plus_lambda;
  bool normalized = false;  // alpha(1) + lambda(1) = 0
  CpdReport mean_kernel;    // empirical [mean phi_t(y_i* y_k)]
  double max_std_error = 0.0;
  bool hypotheses() const { return one_plus_alpha.verdict && kappa.has_value() && normalized; }
  bool mean_kernel_psd() const { return mean_kernel.min_eigenvalue >= -5.0 * max_std_error; }
};

/// Tests the PD-in-mean criterion on a finite sample: 1 + alpha PD,
/// kappa + lambda PD for some kappa >= 0 from a grid, alpha(1) + lambda(1) = 0,
/// and PSD of the Monte-Carlo mean kernel within 5 standard errors.
inline PdInMeanReport pd_in_mean_check(const GeneratorModel& model,
                                       const std::vector<Element>& elements, double t,
                                       std::uint64_t paths, std::uint64_t seed,
                                       double tol = kDefaultTolerance, unsigned threads = 1) {
  require(!elements.empty(), "pd_in_mean_check: empty sample");
  const auto& s = model.semigroup;
  const auto count = static_cast<Index>(elements.size());
  Matrix one_plus_alpha(count, count), lambda(count, count);
  std::vector<ScalarPoissonValues> vals;
  for (Index i = 0; i < count; ++i)
    for (Index k = 0; k < count; ++k) {
      const auto v = poisson_values(model, s.star_compose(elements[static_cast<std::size_t>(i)],
                                                           elements[static_cast<std::size_t>(k)]));
      one_plus_alpha(i, k) = 1.0 + v.alpha;
      lambda(i, k) = v.lambda;
      vals.push_back(v);
    }
  PdInMeanReport out;
  out.one_plus_alpha = psd_report(one_plus_alpha, tol);
  const auto unit = poisson_values(model, s.unit());
  out.normalized = std::abs(unit.alpha + unit.lambda) <= 1e-12;
  const double step = std::abs(unit.lambda);
  std::vector<double> grid{0.0};
  for (int m = 1; m <= 8 && step > 0.0; ++m) grid.push_back(m * step);
  for (double kappa : grid) {
    CpdReport r = psd_report(lambda + Matrix::Constant(count, count, kappa), tol);
    if (r.verdict) {
      out.kappa = kappa;
      out.kappa_plus_lambda = r;
      break;
    }
    out.kappa_plus_lambda = r;
  }
  const PoissonRun run = sample_poisson_counts(t, paths, seed, threads);
  Matrix mean(count, count);
  for (Index i = 0; i < count; ++i)
    for (Index k = 0; k < count; ++k) {
      const auto est = exponent_mean(vals[static_cast<std::size_t>(i * count + k)], run, t);
      mean(i, k) = est.estimate;
      out.max_std_error = std::max(out.max_std_error, est.std_error);
    }
  out.mean_kernel = psd_report(mean, tol);
  return out;
}

}  // namespace itodilate
