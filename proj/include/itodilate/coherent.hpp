#pragma once

// Coherent-vector matrix elements of the stochastic exponent.
//
// For piecewise-constant f, h the normalized matrix element satisfies
//   d/dt ln phi_t(f, y, h) = <(1, f(t)) | lambda(y) | (1, h(t))>,
// so ln phi_t is a finite sum over the common refinement of the segments.

#include "itodilate/cpd.hpp"
#include "itodilate/germ.hpp"

#include <utility>
#include <vector>

namespace itodilate {

/// Piecewise-constant map [0, inf) -> C^n: consecutive (duration, value)
/// segments followed by a constant tail.
class CoherentFunction {
 public:
  CoherentFunction() = default;

  explicit CoherentFunction(Vector tail) : tail_(std::move(tail)) {}

  CoherentFunction(std::vector<std::pair<double, Vector>> segments, Vector tail)
      : segments_(std::move(segments)), tail_(std::move(tail)) {
    for (const auto& [duration, value] : segments_) {
      require(duration > 0.0 && std::isfinite(duration), "segment durations must be positive");
      require(value.size() == tail_.size(), "segment values must share the tail's dimension");
    }
  }

  static CoherentFunction constant(const Vector& value) { return CoherentFunction(value); }

  Index dim() const { return tail_.size(); }
  const std::vector<std::pair<double, Vector>>& segments() const { return segments_; }
  const Vector& tail() const { return tail_; }

  const Vector& at(double s) const {
    double start = 0.0;
    for (const auto& [duration, value] : segments_) {
      if (s < start + duration) return value;
      start += duration;
    }
    return tail_;
  }

  /// Segment end points, in increasing order.
  std::vector<double> breakpoints() const {
    std::vector<double> out;
    double start = 0.0;
    for (const auto& seg : segments_) {
      start += seg.first;
      out.push_back(start);
    }
    return out;
  }

 private:
  std::vector<std::pair<double, Vector>> segments_;
  Vector tail_;
};

struct KernelSpec {
  double t = 1.0;
  std::vector<std::pair<CoherentFunction, Element>> pairs;
};

/// <(1, f) | lambda | (1, h)>
inline Complex germ_form(const Matrix& lambda, const Vector& f, const Vector& h) {
  const Index n = lambda.rows() - 1;
  Vector left(1 + n), right(1 + n);
  left << 1.0, f;
  right << 1.0, h;
  return left.dot(lambda * right);
}

inline Complex log_matrix_element(const GeneratorModel& model, const CoherentFunction& f,
                                  const Element& y, const CoherentFunction& h, double t) {
  require(t > 0.0, "log_matrix_element: t must be positive");
  require(f.dim() == model.n_modes && h.dim() == model.n_modes,
          "log_matrix_element: coherent function dimension differs from the mode count");
  const Matrix lambda = germ_of(model, y);
  std::vector<double> cuts = f.breakpoints();
  const auto hb = h.breakpoints();
  cuts.insert(cuts.end(), hb.begin(), hb.end());
  cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  Complex total{};
  double start = 0.0;
  for (double cut : cuts) {
    const double end = std::min(cut, t);
    if (end > start) {
      // value at the left end point is the constant value on [start, end)
      total += (end - start) * germ_form(lambda, f.at(start), h.at(start));
      start = end;
    }
    if (start >= t) break;
  }
  return total;
}

inline void validate(const GeneratorModel& model, const KernelSpec& spec) {
  require(spec.t > 0.0, "kernel spec: t must be positive");
  require(!spec.pairs.empty(), "kernel spec: no pairs");
  for (const auto& [f, y] : spec.pairs) {
    require(f.dim() == model.n_modes, "kernel spec: coherent function has wrong dimension");
    model.semigroup.validate(y);
  }
}

/// M_ik = exp(log_matrix_element(f_i, y_i* y_k, f_k, t)).
inline Matrix exponent_kernel(const GeneratorModel& model, const KernelSpec& spec) {
  validate(model, spec);
  const auto n = static_cast<Index>(spec.pairs.size());
  const auto& s = model.semigroup;
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < n; ++k) {
      const auto& [fi, yi] = spec.pairs[static_cast<std::size_t>(i)];
      const auto& [fk, yk] = spec.pairs[static_cast<std::size_t>(k)];
      m(i, k) = std::exp(log_matrix_element(model, fi, s.star_compose(yi, yk), fk, spec.t));
    }
  return m;
}

/// PSD verdict on (M + M')/2. Rejects matrices whose anti-hermitian part
/// exceeds 1e-8 relative to max(|entry|, 1).
inline CpdReport kernel_pd_report(const Matrix& m, double tol = kDefaultTolerance) {
  require(m.rows() == m.cols(), "kernel_pd_report: matrix must be square");
  const double skew = max_abs_entry(m - m.adjoint());
  require(skew <= 1e-8 * std::max(max_abs_entry(m), 1.0),
          "kernel_pd_report: matrix is not hermitian (skew " + std::to_string(skew) + ")");
  return psd_report(m, tol);
}

/// max_{i,k} |(phi_t - 1)/t - <zeta_{f_i}(0) | lambda(y_i* y_k) | zeta_{f_k}(0)>|.
inline double small_t_generator_check(const GeneratorModel& model, const KernelSpec& spec,
                                      double t_small) {
  require(t_small > 0.0 && t_small <= 1e-3, "small_t_generator_check: t must lie in (0, 1e-3]");
  validate(model, spec);
  const auto& s = model.semigroup;
  double worst = 0.0;
  for (const auto& [fi, yi] : spec.pairs)
    for (const auto& [fk, yk] : spec.pairs) {
      const Element y = s.star_compose(yi, yk);
      const Complex phi = std::exp(log_matrix_element(model, fi, y, fk, t_small));
      const Complex generator = germ_form(germ_of(model, y), fi.at(0.0), fk.at(0.0));
      worst = std::max(worst, std::abs((phi - 1.0) / t_small - generator));
    }
  return worst;
}

}  // namespace itodilate
