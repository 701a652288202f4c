#pragma once

// Adaptive Gauss-Kronrod integration over finite and semi-infinite ranges,
// nested 2D/3D iterated integration, and the damped-extrapolation
// integrator used as the reference for Bessel-product integrals.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "eikamp/errors.hpp"

namespace eikamp::quad {

/// Each nesting level hands its inner integrals this much tighter a tolerance.
inline constexpr double kNestingSafetyFactor = 10.0;

struct QuadratureConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 4000;
  /// Semi-infinite ranges with a decay envelope are cut where the envelope
  /// falls below this fraction of its value at the lower limit.
  double truncation_decay_threshold = 1e-16;

  /// Throws DomainError on non-positive tolerances or budget.
  void validate() const;

  /// Configuration for the next-inner level of an iterated integral.
  QuadratureConfig nested() const {
    QuadratureConfig inner = *this;
    inner.rel_tol /= kNestingSafetyFactor;
    inner.abs_tol /= kNestingSafetyFactor;
    return inner;
  }
};

template <class T>
struct IntegralResult {
  T value{};
  double error_estimate = 0.0;
  long evaluations = 0;
};

struct Interval {
  double lo;
  double hi;  // may be +infinity
};

/// Behaviour of the integrand at an endpoint or breakpoint.  Singular points
/// (x^{-1/2} or logarithmic) get a quadratic grading substitution so that no
/// node lands on them and the transformed integrand is bounded.
enum class Endpoint { regular, singular };

struct IntegrationOptions {
  Endpoint lo = Endpoint::regular;
  Endpoint hi = Endpoint::regular;
  std::vector<double> breakpoints;
  Endpoint breakpoint_kind = Endpoint::singular;
  /// Decreasing bound on |f| for semi-infinite ranges.  When present the
  /// range is truncated at the threshold crossing and one verification panel
  /// beyond it is added to the error; otherwise x = lo + u/(1-u) is used.
  std::function<double(double)> decay_envelope;
  /// Equal-width panels each segment starts with (oscillatory integrands).
  int initial_panels = 1;
  bool throw_on_failure = true;
};

/// Integration range and options for the inner level of an iterated integral.
struct InnerSpec {
  Interval range;
  IntegrationOptions options;
};

namespace detail {

inline double magnitude(double v) { return std::fabs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

/// Value carrying the integrated error of the levels nested inside it.
template <class T>
struct Tracked {
  T value{};
  double inner_error = 0.0;

  friend Tracked operator+(const Tracked& a, const Tracked& b) {
    return {a.value + b.value, a.inner_error + b.inner_error};
  }
  friend Tracked operator-(const Tracked& a, const Tracked& b) {
    return {a.value - b.value, a.inner_error - b.inner_error};
  }
  friend Tracked operator*(double s, const Tracked& a) {
    return {s * a.value, s * a.inner_error};
  }
  friend Tracked operator*(const Tracked& a, double s) { return s * a; }
  Tracked& operator+=(const Tracked& o) {
    value += o.value;
    inner_error += o.inner_error;
    return *this;
  }
};

template <class T>
double magnitude(const Tracked<T>& v) {
  return magnitude(v.value);
}

template <class T>
struct is_tracked : std::false_type {};
template <class T>
struct is_tracked<Tracked<T>> : std::true_type {};

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
inline constexpr double kKronrodNodes[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr double kKronrodWeights[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600197161734, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kGaussWeights[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

/// Map of u in [0, 1] onto one segment of the integration range.
struct SegmentMap {
  enum class Kind { linear, graded_lo, graded_hi, graded_both, algebraic } kind;
  double a;
  double b;  // unused for algebraic (maps onto [a, inf))

  // Returns x and writes dx/du.
  double operator()(double u, double& jacobian) const {
    const double w = b - a;
    switch (kind) {
      case Kind::linear:
        jacobian = w;
        return a + w * u;
      case Kind::graded_lo:
        jacobian = 2.0 * u * w;
        return a + w * u * u;
      case Kind::graded_hi: {
        const double v = 1.0 - u;
        jacobian = 2.0 * v * w;
        return b - w * v * v;
      }
      case Kind::graded_both:
        jacobian = 6.0 * u * (1.0 - u) * w;
        return a + w * u * u * (3.0 - 2.0 * u);
      case Kind::algebraic: {
        const double v = 1.0 - u;
        jacobian = 1.0 / (v * v);
        return a + u / v;
      }
    }
    jacobian = 0.0;
    return a;
  }
};

template <class V>
struct Panel {
  int segment;
  double u_lo;
  double u_hi;
  V value;
  double error;
};

/// One GK21 application on [u_lo, u_hi] of a mapped segment.
template <class V, class G>
Panel<V> evaluate_panel(G& g, const SegmentMap& map, int segment, double u_lo,
                        double u_hi) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double tiny = std::numeric_limits<double>::min();
  const double center = 0.5 * (u_lo + u_hi);
  const double half = 0.5 * (u_hi - u_lo);

  auto eval = [&](double u) -> V {
    double jac = 0.0;
    const double x = map(u, jac);
    if (jac == 0.0) return V{};
    return jac * g(x);
  };

  V f_left[10];
  V f_right[10];
  const V fc = eval(center);
  V res_gauss{};
  V res_kronrod = kKronrodWeights[10] * fc;
  double res_abs = kKronrodWeights[10] * magnitude(fc);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    f_left[j] = eval(center - dx);
    f_right[j] = eval(center + dx);
    const V pair = f_left[j] + f_right[j];
    res_kronrod += kKronrodWeights[j] * pair;
    res_abs += kKronrodWeights[j] * (magnitude(f_left[j]) + magnitude(f_right[j]));
    if (j % 2 == 1) res_gauss += kGaussWeights[j / 2] * pair;
  }
  const V mean = 0.5 * res_kronrod;
  double res_asc = kKronrodWeights[10] * magnitude(fc - mean);
  for (int j = 0; j < 10; ++j) {
    res_asc += kKronrodWeights[j] *
               (magnitude(f_left[j] - mean) + magnitude(f_right[j] - mean));
  }
  const double abs_half = std::fabs(half);
  res_abs *= abs_half;
  res_asc *= abs_half;
  double err = magnitude(res_kronrod - res_gauss) * abs_half;
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  if (res_abs > tiny / (50.0 * eps)) err = std::max(50.0 * eps * res_abs, err);
  return Panel<V>{segment, u_lo, u_hi, half * res_kronrod, err};
}

std::vector<SegmentMap> build_segments(double lo, double hi, const IntegrationOptions& opts);

/// Finds where a decreasing envelope drops below threshold * envelope(lo).
double decay_cutoff(const std::function<double(double)>& envelope, double lo,
                    double threshold);

[[noreturn]] void throw_non_convergence(double value_magnitude, double error,
                                        double tolerance, int subdivisions);

/// Globally adaptive bisection with a priority queue keyed on panel error.
template <class V, class G>
IntegralResult<V> adaptive(G& g, const std::vector<SegmentMap>& segments,
                           const QuadratureConfig& cfg, const IntegrationOptions& opts) {
  IntegralResult<V> out;
  if (segments.empty()) return out;

  std::vector<Panel<V>> panels;
  const int per_segment = std::max(1, opts.initial_panels);
  panels.reserve(segments.size() * per_segment + 64);
  for (int s = 0; s < static_cast<int>(segments.size()); ++s) {
    for (int k = 0; k < per_segment; ++k) {
      panels.push_back(evaluate_panel<V>(g, segments[s], s,
                                         static_cast<double>(k) / per_segment,
                                         static_cast<double>(k + 1) / per_segment));
    }
  }
  out.evaluations = 21L * static_cast<long>(panels.size());

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry> queue;
  V total{};
  double total_err = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    queue.emplace(panels[i].error, i);
    total += panels[i].value;
    total_err += panels[i].error;
  }

  int subdivisions = 0;
  auto tolerance = [&](const V& v) { return std::max(cfg.abs_tol, cfg.rel_tol * magnitude(v)); };
  while (total_err > tolerance(total) && subdivisions < cfg.max_subdivisions && !queue.empty()) {
    const std::size_t idx = queue.top().second;
    queue.pop();
    const Panel<V> worst = panels[idx];
    const double mid = 0.5 * (worst.u_lo + worst.u_hi);
    if (!(mid > worst.u_lo && mid < worst.u_hi) ||
        worst.u_hi - worst.u_lo < 64.0 * std::numeric_limits<double>::epsilon()) {
      continue;  // panel cannot be split further; keep its estimate
    }
    const Panel<V> left = evaluate_panel<V>(g, segments[worst.segment], worst.segment, worst.u_lo, mid);
    const Panel<V> right = evaluate_panel<V>(g, segments[worst.segment], worst.segment, mid, worst.u_hi);
    out.evaluations += 42;
    ++subdivisions;
    panels[idx] = left;
    panels.push_back(right);
    queue.emplace(left.error, idx);
    queue.emplace(right.error, panels.size() - 1);
    total = total - worst.value + left.value + right.value;
    total_err += left.error + right.error - worst.error;
    if (subdivisions % 256 == 0 || total_err <= tolerance(total)) {
      total = V{};
      total_err = 0.0;
      for (const auto& p : panels) {
        total += p.value;
        total_err += p.error;
      }
    }
  }
  total = V{};
  total_err = 0.0;
  for (const auto& p : panels) {
    total += p.value;
    total_err += p.error;
  }
  out.value = total;
  out.error_estimate = total_err;
  return out;
}

template <class V>
V collapse_value(const V& v) { return v; }
template <class T>
T collapse_value(const Tracked<T>& v) { return v.value; }

template <class V>
double inner_error_of(const V&) { return 0.0; }
template <class T>
double inner_error_of(const Tracked<T>& v) { return std::fabs(v.inner_error); }

}  // namespace detail

/// Adaptive integral of f over `range`.  f returns double or complex<double>.
///
/// Nodes never coincide with endpoints or breakpoints.  Throws
/// NonConvergenceError when the estimate stays above
/// max(abs_tol, rel_tol*|value|) after max_subdivisions bisections (unless
/// opts.throw_on_failure is false), and DomainError on an invalid range.
template <class F>
auto integrate_1d(F&& f, Interval range, const QuadratureConfig& cfg,
                  const IntegrationOptions& opts = {}) {
  using V = std::decay_t<std::invoke_result_t<F&, double>>;
  using T = decltype(detail::collapse_value(std::declval<V>()));
  cfg.validate();
  if (std::isnan(range.lo) || std::isnan(range.hi) || std::isinf(range.lo) || range.hi < range.lo) {
    throw DomainError("integrate_1d: invalid range [" + std::to_string(range.lo) + ", " +
                      std::to_string(range.hi) + "]");
  }
  IntegralResult<T> result;
  if (range.hi == range.lo) return result;

  double hi = range.hi;
  double tail_error = 0.0;
  V tail_value{};
  long tail_evals = 0;
  const bool semi_infinite = std::isinf(range.hi);
  IntegrationOptions local = opts;
  if (semi_infinite && opts.decay_envelope) {
    hi = detail::decay_cutoff(opts.decay_envelope, range.lo, cfg.truncation_decay_threshold);
    local.hi = Endpoint::regular;
    // Verification panel beyond the cut: its value is kept and its magnitude
    // is charged to the error budget.
    const detail::SegmentMap beyond{detail::SegmentMap::Kind::linear, hi, hi + (hi - range.lo)};
    const auto panel = detail::evaluate_panel<V>(f, beyond, 0, 0.0, 1.0);
    tail_value = panel.value;
    tail_error = detail::magnitude(panel.value) + panel.error;
    tail_evals = 21;
  }

  const auto segments = detail::build_segments(range.lo, hi, local);
  auto raw = detail::adaptive<V>(f, segments, cfg, local);
  raw.value += tail_value;
  result.value = detail::collapse_value(raw.value);
  result.error_estimate = raw.error_estimate + tail_error + detail::inner_error_of(raw.value);
  result.evaluations = raw.evaluations + tail_evals;

  const double tol = std::max(cfg.abs_tol, cfg.rel_tol * detail::magnitude(result.value));
  if (opts.throw_on_failure && !(result.error_estimate <= tol)) {
    // Nested levels carry their own slack: only the outer quadrature error
    // is required to meet the tolerance strictly.
    const double own = raw.error_estimate + tail_error;
    if (!(own <= tol) || !(result.error_estimate <= kNestingSafetyFactor * tol)) {
      detail::throw_non_convergence(detail::magnitude(result.value), result.error_estimate, tol,
                                    cfg.max_subdivisions);
    }
  }
  return result;
}

/// Iterated integral  int_outer dx int_{inner(x)} dy f(x, y).
///
/// `inner(x)` returns the InnerSpec (range and options) of the y integral.
/// Inner integrals run at the tolerance of QuadratureConfig::nested(); their
/// error estimates are integrated along x and added to the outer estimate.
template <class F, class Inner>
auto integrate_2d(F&& f, Interval outer, const IntegrationOptions& outer_opts, Inner&& inner,
                  const QuadratureConfig& cfg) {
  using T = std::decay_t<std::invoke_result_t<F&, double, double>>;
  const QuadratureConfig inner_cfg = cfg.nested();
  long evaluations = 0;
  auto g = [&](double x) -> detail::Tracked<T> {
    InnerSpec spec = inner(x);
    if (!(spec.range.hi > spec.range.lo)) return {};
    spec.options.throw_on_failure = false;
    auto r = integrate_1d([&](double y) { return f(x, y); }, spec.range, inner_cfg, spec.options);
    evaluations += r.evaluations;
    return {r.value, r.error_estimate};
  };
  auto r = integrate_1d(g, outer, cfg, outer_opts);
  r.evaluations = evaluations;
  return r;
}

/// Iterated integral  int_outer dx int_{middle(x)} dy int_{inner(x,y)} dz f(x, y, z),
/// with per-level tolerance budgeting as in integrate_2d.
template <class F, class Middle, class Inner>
auto integrate_3d(F&& f, Interval outer, const IntegrationOptions& outer_opts, Middle&& middle,
                  Inner&& inner, const QuadratureConfig& cfg) {
  using T = std::decay_t<std::invoke_result_t<F&, double, double, double>>;
  const QuadratureConfig middle_cfg = cfg.nested();
  const QuadratureConfig inner_cfg = middle_cfg.nested();
  long evaluations = 0;
  auto plane = [&](double x) -> detail::Tracked<T> {
    InnerSpec mid = middle(x);
    if (!(mid.range.hi > mid.range.lo)) return {};
    mid.options.throw_on_failure = false;
    auto line = [&](double y) -> detail::Tracked<T> {
      InnerSpec in = inner(x, y);
      if (!(in.range.hi > in.range.lo)) return {};
      in.options.throw_on_failure = false;
      auto r = integrate_1d([&](double z) { return f(x, y, z); }, in.range, inner_cfg, in.options);
      evaluations += r.evaluations;
      return {r.value, r.error_estimate};
    };
    auto r = integrate_1d(line, mid.range, middle_cfg, mid.options);
    return {r.value, r.error_estimate};
  };
  auto r = integrate_1d(plane, outer, cfg, outer_opts);
  r.evaluations = evaluations;
  return r;
}

/// Polynomial (Neville) extrapolation to h = 0 of samples (h_i, v_i).
/// Returns the diagonal of the tableau: element k uses the first k+1 samples.
std::vector<double> neville_diagonal(std::span<const double> h, std::span<const double> values);

/// The largest damping value is kept below (smallest nonzero signed sum) / this.
inline constexpr double kFrequencyDampingRatio = 10.0;
/// Lower limit of that rescaling, relative to the configured sequence.
inline constexpr double kMinDampingScale = 0.02;

struct DampedProductOptions {
  std::vector<double> p_sequence{0.2, 0.1, 0.05, 0.025};
  /// Shrink p_sequence (by at most kMinDampingScale) when a signed sum of the
  /// parameters is small but nonzero.
  bool scale_to_frequencies = true;
  /// Quadrature settings for each damped integral I(p).
  QuadratureConfig quadrature{1e-11, 1e-14, 200000, 1e-17};
};

/// Reference value of F_n(a) = int_0^inf x prod_k J0(a_k x) dx from the
/// Gaussian-damped integrals I(p) = int_0^inf x exp(-p^2 x^2) prod_k J0(a_k x) dx,
/// extrapolated to p -> 0.
///
/// I(p) - F_n is a series in p^2 unless some signed sum of the a_k vanishes,
/// in which case half-integer or integer powers of p appear; the extrapolation
/// variable is chosen accordingly.  Throws ExtrapolationDivergenceError when
/// the I(p) sequence keeps growing (divergent F_n, e.g. Delta_3^2 = 0) and
/// DomainError for fewer than 2 or more than 6 parameters.
IntegralResult<double> integrate_damped_bessel_product(std::span<const double> params,
                                                        const DampedProductOptions& opts = {});

/// I(p) for a single damping value.
IntegralResult<double> damped_bessel_product(std::span<const double> params, double p,
                                             const QuadratureConfig& cfg);

}  // namespace eikamp::quad
