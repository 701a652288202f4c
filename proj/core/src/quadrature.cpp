#include "eikamp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "eikamp/special_functions.hpp"

namespace eikamp::quad {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw DomainError("quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
  if (!(truncation_decay_threshold > 0.0 && truncation_decay_threshold < 1.0)) {
    throw DomainError("truncation_decay_threshold must lie in (0, 1)");
  }
}

namespace detail {

std::vector<SegmentMap> build_segments(double lo, double hi, const IntegrationOptions& opts) {
  std::vector<double> points{lo};
  const bool infinite = std::isinf(hi);
  std::vector<double> bps;
  for (double b : opts.breakpoints) {
    if (std::isfinite(b) && b > lo && (infinite || b < hi)) bps.push_back(b);
  }
  std::sort(bps.begin(), bps.end());
  const double scale = std::max({1.0, std::fabs(lo), infinite ? 0.0 : std::fabs(hi)});
  for (double b : bps) {
    if (b - points.back() > 1e-14 * scale) points.push_back(b);
  }
  if (!infinite) {
    if (points.size() > 1 && hi - points.back() <= 1e-14 * scale) points.pop_back();
    points.push_back(hi);
  }

  auto kind_of = [](Endpoint left, Endpoint right) {
    using K = SegmentMap::Kind;
    if (left == Endpoint::singular && right == Endpoint::singular) return K::graded_both;
    if (left == Endpoint::singular) return K::graded_lo;
    if (right == Endpoint::singular) return K::graded_hi;
    return K::linear;
  };

  std::vector<SegmentMap> segments;
  const std::size_t n_finite = points.size() - 1;
  for (std::size_t i = 0; i < n_finite; ++i) {
    const Endpoint left = (i == 0) ? opts.lo : opts.breakpoint_kind;
    const Endpoint right = (i + 1 == points.size() - 1 && !infinite) ? opts.hi : opts.breakpoint_kind;
    segments.push_back({kind_of(left, right), points[i], points[i + 1]});
  }
  if (infinite) {
    const double start = points.back();
    const Endpoint left = (points.size() == 1) ? opts.lo : opts.breakpoint_kind;
    segments.push_back({kind_of(left, Endpoint::regular), start, start + 1.0});
    segments.push_back({SegmentMap::Kind::algebraic, start + 1.0, 0.0});
  }
  return segments;
}

double decay_cutoff(const std::function<double(double)>& envelope, double lo, double threshold) {
  const double reference = envelope(lo);
  if (!(reference > 0.0)) return lo + 1.0;
  const double target = threshold * reference;
  double step = std::max(1.0, std::fabs(lo));
  double inside = lo;
  double outside = lo + step;
  for (int i = 0; i < 400 && envelope(outside) > target; ++i) {
    inside = outside;
    step *= 2.0;
    outside = lo + step;
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (inside + outside);
    if (envelope(mid) > target) {
      inside = mid;
    } else {
      outside = mid;
    }
  }
  return outside;
}

void throw_non_convergence(double value_magnitude, double error, double tolerance,
                           int subdivisions) {
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "quadrature did not converge: error estimate %.3e exceeds tolerance %.3e "
                "after %d subdivisions",
                error, tolerance, subdivisions);
  throw NonConvergenceError(buf, value_magnitude, error);
}

}  // namespace detail

std::vector<double> neville_diagonal(std::span<const double> h, std::span<const double> values) {
  const std::size_t n = std::min(h.size(), values.size());
  std::vector<double> p(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n));
  std::vector<double> diagonal;
  if (n == 0) return diagonal;
  diagonal.push_back(p[0]);
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = n - 1; i >= k; --i) {
      p[i] = (h[i - k] * p[i] - h[i] * p[i - 1]) / (h[i - k] - h[i]);
      if (i == k) break;
    }
    diagonal.push_back(p[k]);
  }
  return diagonal;
}

IntegralResult<double> damped_bessel_product(std::span<const double> params, double p,
                                             const QuadratureConfig& cfg) {
  if (!(p > 0.0)) throw DomainError("damping p must be positive");
  double frequency_sum = 0.0;
  for (double a : params) frequency_sum += a;
  const double x_max = std::sqrt(-std::log(cfg.truncation_decay_threshold)) / p;
  const double half_period = std::numbers::pi / frequency_sum;

  IntegrationOptions opts;
  opts.initial_panels = std::max(1, static_cast<int>(std::ceil(x_max / half_period)));
  // Roundoff in the oscillating sum can sit above abs_tol; the caller folds
  // the estimate into its own error instead.
  opts.throw_on_failure = false;
  auto integrand = [&](double x) {
    double v = x * std::exp(-p * p * x * x);
    for (double a : params) v *= special::bessel_j0(a * x);
    return v;
  };
  return integrate_1d(integrand, {0.0, x_max}, cfg, opts);
}

namespace {

struct FrequencyScan {
  bool has_zero = false;
  /// Smallest |signed sum| that is not zero (infinity when none).
  double smallest_nonzero = std::numeric_limits<double>::infinity();
};

// Signed sums of the parameters with at least one sign flipped.  A vanishing
// one gives the damped integrals a non-oscillating tail; a small one gives
// them exp(-sigma^2 / 4p^2) terms that a p-power extrapolation cannot absorb.
FrequencyScan scan_frequencies(std::span<const double> params) {
  const std::size_t n = params.size();
  double total = 0.0;
  for (double a : params) total += a;
  FrequencyScan scan;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if (mask & 1u) continue;  // fix the sign of the first parameter
    double sigma = 0.0;
    for (std::size_t k = 0; k < n; ++k) sigma += ((mask >> k) & 1u) ? -params[k] : params[k];
    if (std::fabs(sigma) <= 1e-12 * total) {
      scan.has_zero = true;
    } else {
      scan.smallest_nonzero = std::min(scan.smallest_nonzero, std::fabs(sigma));
    }
  }
  return scan;
}

}  // namespace

IntegralResult<double> integrate_damped_bessel_product(std::span<const double> params,
                                                        const DampedProductOptions& opts) {
  if (params.size() < 2 || params.size() > 6) {
    throw DomainError("damped Bessel product needs between 2 and 6 parameters");
  }
  for (double a : params) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("Bessel product parameters must be positive");
  }
  std::vector<double> ps = opts.p_sequence;
  if (ps.size() < 3) throw DomainError("damped extrapolation needs at least 3 damping values");
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (!(ps[i] > 0.0) || (i > 0 && !(ps[i] < ps[i - 1]))) {
      throw DomainError("damping sequence must be positive and strictly decreasing");
    }
  }

  // Extrapolation variable: p^2 generically; p (even n) or sqrt(p) (odd n)
  // when a zero frequency produces odd or half-integer powers.
  const FrequencyScan scan = scan_frequencies(params);
  double exponent = 2.0;
  if (scan.has_zero) exponent = (params.size() % 2 == 0) ? 1.0 : 0.5;
  if (opts.scale_to_frequencies) {
    const double target = scan.smallest_nonzero / kFrequencyDampingRatio;
    const double scale = std::clamp(target / ps.front(), kMinDampingScale, 1.0);
    for (double& p : ps) p *= scale;
  }

  IntegralResult<double> out;
  std::vector<double> h;
  std::vector<double> values;
  double quadrature_error = 0.0;
  for (double p : ps) {
    const auto r = damped_bessel_product(params, p, opts.quadrature);
    h.push_back(std::pow(p, exponent));
    values.push_back(r.value);
    quadrature_error = std::max(quadrature_error, r.error_estimate);
    out.evaluations += r.evaluations;
  }

  // Divergence: the raw sequence keeps moving by non-shrinking steps.
  const std::size_t n = values.size();
  const double d_last = values[n - 1] - values[n - 2];
  const double d_prev = values[n - 2] - values[n - 3];
  const double noise = 100.0 * quadrature_error + 1e-12;
  if (std::fabs(d_last) > noise && std::fabs(d_prev) > noise && d_last * d_prev > 0.0 &&
      std::fabs(d_last) >= 0.85 * std::fabs(d_prev)) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "damped integrals diverge as p -> 0 (I = %.6g, %.6g, %.6g); the improper "
                  "integral does not exist",
                  values[n - 3], values[n - 2], values[n - 1]);
    throw ExtrapolationDivergenceError(buf);
  }

  const auto diagonal = neville_diagonal(h, values);
  out.value = diagonal.back();
  const double residual = std::fabs(diagonal[n - 1] - diagonal[n - 2]);
  // Neville weights for geometric nodes amplify noise by at most ~ this factor.
  out.error_estimate = residual + 8.0 * quadrature_error;
  return out;
}

}  // namespace eikamp::quad
