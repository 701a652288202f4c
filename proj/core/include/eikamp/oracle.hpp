#pragma once

// Reference computations that share no integration code with the
// amplitude pipeline: the oscillatory impact-parameter integral, the exact
// eikonal series of the gaussian model, and damped Bessel-product values.

#include <complex>
#include <span>
#include <vector>

#include "eikamp/born_model.hpp"
#include "eikamp/eikonal.hpp"
#include "eikamp/quadrature.hpp"

namespace eikamp::oracle {

using eikonal::Complex;

struct OracleConfig {
  /// b_max is placed where |chi| first drops below this.
  double chi_cutoff = 1e-12;
  /// Give up when |chi| is still above chi_cutoff here.
  double b_limit = 1e4;
  /// Panels are bisected until two Gauss-Legendre levels agree to this
  /// fraction of the running amplitude magnitude.
  double rel_tol = 1e-11;
  int gauss_points = 20;
  int max_bisection_depth = 24;
  /// Damping values for Bessel-product references.
  std::vector<double> p_damping{0.2, 0.1, 0.05, 0.025};
  /// Upper bound on gaussian series terms.
  int series_terms = 400;
};

/// A = 4 pi i s int_0^b_max db b J0(b sqrt(-t)) [1 - exp(i chi(b))], with
/// panel boundaries at the asymptotic zeros (k - 1/4) pi / sqrt(-t) of J0.
/// Throws NonConvergenceError when a panel cannot reach the tolerance or
/// when |chi| does not fall below chi_cutoff before b_limit.
/// At large -t the integral is a small remainder of many cancelling panels
/// and the relative accuracy degrades; error_estimate tracks this.
quad::IntegralResult<Complex> direct_eikonal_amplitude(const eikonal::BornModel& model,
                                                       const eikonal::Kinematics& kin,
                                                       const OracleConfig& cfg = {});

/// Smallest b (to bisection accuracy) with |chi(b)| < cfg.chi_cutoff.
double impact_parameter_cutoff(const eikonal::BornModel& model, const OracleConfig& cfg = {});

struct SeriesResult {
  Complex value{};
  /// Magnitude of the first omitted term.
  double truncation_error = 0.0;
  int terms = 0;
};

/// (4 pi i s / Lambda^2) sum_n (-1)^{n+1} chi0^n / (n! n) exp(t / (2 n Lambda^2)),
/// chi0 = g Lambda^2 / (4 pi), summed until a term drops below 1e-15 of the
/// partial sum.
SeriesResult gaussian_series_amplitude(Complex coupling, double lambda,
                                       const eikonal::Kinematics& kin,
                                       const OracleConfig& cfg = {});

/// The first n_terms terms of the same series.
Complex gaussian_series_partial_sum(Complex coupling, double lambda,
                                    const eikonal::Kinematics& kin, int n_terms);

/// F_n(params) for n = 3..6 from damped-integral extrapolation.
quad::IntegralResult<double> reference_besselproduct(std::span<const double> params,
                                                     const OracleConfig& cfg = {});

/// Gauss-Legendre nodes and weights on [-1, 1] (Newton on P_n).
struct GaussLegendre {
  explicit GaussLegendre(int n);
  std::vector<double> nodes;
  std::vector<double> weights;
};

}  // namespace eikamp::oracle
