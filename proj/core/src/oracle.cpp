#include "eikamp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "eikamp/errors.hpp"
#include "eikamp/special_functions.hpp"

namespace eikamp::oracle {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

struct PanelSum {
  Complex value{};
  double error = 0.0;
  long evaluations = 0;
};

class PanelIntegrator {
 public:
  PanelIntegrator(const GaussLegendre& rule, std::function<Complex(double)> f, double tol,
                  int max_depth)
      : rule_(rule), f_(std::move(f)), tol_(tol), max_depth_(max_depth) {}

  Complex fixed(double a, double b, long& evals) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    Complex sum{};
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
      sum += rule_.weights[i] * f_(mid + half * rule_.nodes[i]);
    }
    evals += static_cast<long>(rule_.nodes.size());
    return half * sum;
  }

  // Bisect until the whole-panel and two-half estimates agree.
  PanelSum run(double a, double b, Complex whole, int depth, double scale) const {
    PanelSum out;
    const double m = 0.5 * (a + b);
    const Complex left = fixed(a, m, out.evaluations);
    const Complex right = fixed(m, b, out.evaluations);
    const double diff = std::abs(left + right - whole);
    if (diff <= tol_ * scale || diff == 0.0) {
      out.value = left + right;
      out.error = diff;
      return out;
    }
    if (depth >= max_depth_) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "oscillatory oracle: panel [%.6g, %.6g] did not converge (diff %.3e)", a, b,
                    diff);
      throw NonConvergenceError(buf, std::abs(whole), diff);
    }
    const PanelSum l = run(a, m, left, depth + 1, scale);
    const PanelSum r = run(m, b, right, depth + 1, scale);
    out.value = l.value + r.value;
    out.error = l.error + r.error;
    out.evaluations += l.evaluations + r.evaluations;
    return out;
  }

 private:
  const GaussLegendre& rule_;
  std::function<Complex(double)> f_;
  double tol_;
  int max_depth_;
};

}  // namespace

GaussLegendre::GaussLegendre(int n) : nodes(n), weights(n) {
  if (n < 1) throw DomainError("Gauss-Legendre rule needs at least one node");
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

double impact_parameter_cutoff(const eikonal::BornModel& model, const OracleConfig& cfg) {
  auto chi_mag = [&](double b) { return std::abs(eikonal::eikonal_chi(model, b)); };
  double lo = 0.0;
  double hi = 0.5;
  while (chi_mag(hi) >= cfg.chi_cutoff) {
    lo = hi;
    hi *= 2.0;
    if (hi > cfg.b_limit) {
      throw NonConvergenceError("oscillatory oracle: |chi| stays above the cutoff up to b_limit",
                                chi_mag(cfg.b_limit), 0.0);
    }
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (chi_mag(mid) >= cfg.chi_cutoff) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

quad::IntegralResult<Complex> direct_eikonal_amplitude(const eikonal::BornModel& model,
                                                       const eikonal::Kinematics& kin,
                                                       const OracleConfig& cfg) {
  const double q = kin.q();
  const double b_max = impact_parameter_cutoff(model, cfg);
  const GaussLegendre rule(cfg.gauss_points);

  auto integrand = [&](double b) {
    const Complex chi = eikonal::eikonal_chi(model, b);
    // 1 - exp(i chi) without cancellation for small chi
    const Complex one_minus = -2.0 * kI * std::exp(0.5 * kI * chi) * std::sin(0.5 * chi);
    return b * special::bessel_j0(q * b) * one_minus;
  };

  std::vector<double> edges{0.0};
  for (int k = 1;; ++k) {
    const double zero = (k - 0.25) * kPi / q;
    if (zero >= b_max) break;
    edges.push_back(zero);
  }
  edges.push_back(b_max);

  const PanelIntegrator integrator(rule, integrand, cfg.rel_tol, cfg.max_bisection_depth);
  long evaluations = 0;
  std::vector<Complex> coarse(edges.size() - 1);
  Complex coarse_total{};
  double coarse_abs = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    coarse[i] = integrator.fixed(edges[i], edges[i + 1], evaluations);
    coarse_total += coarse[i];
    coarse_abs += std::abs(coarse[i]);
  }
  const double scale = std::max(std::abs(coarse_total), 1e-3 * coarse_abs);

  quad::IntegralResult<Complex> out;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const PanelSum p = integrator.run(edges[i], edges[i + 1], coarse[i], 0, scale);
    out.value += p.value;
    out.error_estimate += p.error;
    evaluations += p.evaluations;
  }
  // |1 - exp(i chi)| ~ |chi| past b_max; bound the dropped tail by int b |chi| db
  // over [b_max, 2 b_max].
  double tail = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double b = b_max * (1.5 + 0.5 * rule.nodes[i]);
    tail += rule.weights[i] * b * std::abs(eikonal::eikonal_chi(model, b));
  }
  evaluations += static_cast<long>(rule.nodes.size());
  out.error_estimate += 0.5 * b_max * tail;

  const Complex pref = 4.0 * kPi * kI * kin.s();
  out.value *= pref;
  out.error_estimate *= std::abs(pref);
  out.evaluations = evaluations;
  return out;
}

Complex gaussian_series_partial_sum(Complex coupling, double lambda,
                                    const eikonal::Kinematics& kin, int n_terms) {
  if (!(lambda > 0.0)) throw DomainError("gaussian series: Lambda must be positive");
  const Complex chi0 = coupling * lambda * lambda / (4.0 * kPi);
  const double lam2 = lambda * lambda;
  Complex c = 1.0;  // (-1)^{n+1} chi0^n / n! at n = 0 scaled so that n = 1 gives chi0
  Complex sum{};
  for (int n = 1; n <= n_terms; ++n) {
    c *= (n == 1 ? chi0 : -chi0 / static_cast<double>(n));
    sum += c / static_cast<double>(n) * std::exp(kin.t() / (2.0 * n * lam2));
  }
  return 4.0 * kPi * kI * kin.s() / lam2 * sum;
}

SeriesResult gaussian_series_amplitude(Complex coupling, double lambda,
                                       const eikonal::Kinematics& kin, const OracleConfig& cfg) {
  if (!(lambda > 0.0)) throw DomainError("gaussian series: Lambda must be positive");
  const Complex chi0 = coupling * lambda * lambda / (4.0 * kPi);
  const double lam2 = lambda * lambda;
  const Complex pref = 4.0 * kPi * kI * kin.s() / lam2;
  SeriesResult out;
  Complex c = 1.0;
  Complex sum{};
  for (int n = 1; n <= cfg.series_terms; ++n) {
    c *= (n == 1 ? chi0 : -chi0 / static_cast<double>(n));
    const Complex term = c / static_cast<double>(n) * std::exp(kin.t() / (2.0 * n * lam2));
    sum += term;
    out.terms = n;
    const Complex next_c = -c * chi0 / static_cast<double>(n + 1);
    const double next = std::abs(next_c) / (n + 1);
    out.truncation_error = std::abs(pref) * next;
    if (next < 1e-15 * std::abs(sum)) break;
  }
  out.value = pref * sum;
  return out;
}

quad::IntegralResult<double> reference_besselproduct(std::span<const double> params,
                                                     const OracleConfig& cfg) {
  if (params.size() < 3 || params.size() > 6) {
    throw DomainError("reference Bessel product needs between 3 and 6 parameters");
  }
  quad::DampedProductOptions opts;
  opts.p_sequence = cfg.p_damping;
  return quad::integrate_damped_bessel_product(params, opts);
}

}  // namespace eikamp::oracle
