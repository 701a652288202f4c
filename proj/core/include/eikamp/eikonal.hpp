#pragma once

// Moderately small eikonal: the Fourier-Bessel transform of a Born model,
// the oscillation-free second- and third-order amplitude terms, and the
// differential cross section.
//
// Conventions: A(s, t) = 4 pi i s int db b J0(b q) [1 - exp(i chi)],
// q = sqrt(-t), and dsigma/dt = |A|^2 / (16 pi s^2).  Expanding exp(i chi)
// to third order gives A ~ (A1 - A3) + i A2 with
//
//   A1 = A_B(s, q)
//   A2 = 2 pi s int db b J0(bq) chi^2
//   A3 = (2 pi / 3) s int db b J0(bq) chi^3
//
// Internally momenta are scaled by q: x = q_perp / q.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string_view>
#include <vector>

#include "eikamp/born_model.hpp"
#include "eikamp/quadrature.hpp"

namespace eikamp::eikonal {

class Kinematics {
 public:
  /// Throws DomainError unless s > 0 and t < 0.
  Kinematics(double s, double t);

  double s() const noexcept { return s_; }
  double t() const noexcept { return t_; }
  /// sqrt(-t)
  double q() const noexcept { return q_; }

 private:
  double s_;
  double t_;
  double q_;
};

// ---- eikonal -------------------------------------------------------------

/// chi(s, b) = (1 / 4 pi s) int_0^inf dq q J0(qb) A_B(s, q).  Closed form for
/// the gaussian and exponential-pole models, quadrature for tables.
/// (With the reduced-amplitude convention chi does not depend on s.)
Complex eikonal_chi(const BornModel& model, double b, const quad::QuadratureConfig& cfg = {});

/// The quadrature route for every model kind; kept for cross-validation of
/// the closed forms.
quad::IntegralResult<Complex> eikonal_chi_quadrature(const BornModel& model, double b,
                                                      const quad::QuadratureConfig& cfg = {});

enum class RegimeStatus { ok, warning, violated };

std::string_view to_string(RegimeStatus s);

/// max|chi| below which no warning is raised.
inline constexpr double kChiWarningThreshold = 0.5;
/// max|chi| from which the computation is refused unless overridden.
inline constexpr double kChiErrorThreshold = 1.0;
/// max|chi| above which the computation is always refused.
inline constexpr double kChiHardLimit = 2.0;

struct EikonalProfile {
  double max_abs_chi = 0.0;
  /// Impact parameter beyond which |chi| < 1e-12 * max|chi|.
  double b_cutoff = 0.0;
  RegimeStatus status = RegimeStatus::ok;
};

EikonalProfile eikonal_profile(const BornModel& model, const quad::QuadratureConfig& cfg = {});

/// Throws RegimeError("moderately small regime violated ...") when
/// max|chi| > kChiHardLimit, or max|chi| >= kChiErrorThreshold without
/// override.
void enforce_regime(const EikonalProfile& profile, bool override_gate);

// ---- amplitude terms -----------------------------------------------------

/// A_B(s, sqrt(-t)); no quadrature.
Complex a1_term(const BornModel& model, const Kinematics& kin);

enum class X2Range { half, full };

/// int_1^inf dx1 int dx2 (x1^2 - x2^2) / sqrt((x1^2 - 1)(1 - x2^2))
///     a(q (x1 + x2) / 2) a(q (x1 - x2) / 2)
/// over x2 in [0, 1] (half) or [-1, 1] (full), with x1 = cosh u and
/// x2 = sin v.  The full range gives twice the half-range value.
quad::IntegralResult<Complex> a2_integral(const BornModel& model, const Kinematics& kin,
                                          const quad::QuadratureConfig& cfg, X2Range range);

/// A2 = (1 / 16 pi^2) (-t / s) s^2 * a2_integral(half).
quad::IntegralResult<Complex> a2_term(const BornModel& model, const Kinematics& kin,
                                      const quad::QuadratureConfig& cfg);

/// One block of the third-order integration region in (x1, x2, x3) with
/// x1 = x + x', x2 = |x - x'|, x3 = x''.
struct DomainBlock {
  quad::Interval x1;
  std::function<quad::Interval(double x1)> x2;
  std::function<quad::Interval(double x1, double x2)> x3;
};

/// The five blocks covering {x1 >= x2 >= 0, x3 >= 0, |x2| < x3 + 1,
/// |x3 - 1| < x1}:
///   [0,1] x [0,x1] x [1-x1, x1+1]
///   [1,2] x [0,1]  x [0, x1+1]
///   [1,2] x [1,x1] x [x2-1, x1+1]
///   [2,inf) x [0,1]  x [0, x1+1]
///   [2,inf) x [1,x1] x [x2-1, x1+1]
std::vector<DomainBlock> decompose_a3_domain();

struct BlockIntegrationOptions {
  /// Clip x1 to [0, x1_max].
  double x1_max = std::numeric_limits<double>::infinity();
  /// Non-increasing bound on the x1-slices of the integrand; used to
  /// truncate the semi-infinite blocks.
  std::function<double(double)> x1_envelope;
  /// Extra x3 breakpoints as a function of (x1, x2).
  std::function<std::vector<double>(double, double)> x3_breakpoints;
  /// Extra x2 breakpoints as a function of x1.
  std::function<std::vector<double>(double)> x2_breakpoints;
};

/// Sum over the five blocks of the iterated integral of f(x1, x2, x3).
template <class F>
auto integrate_a3_domain(F&& f, const quad::QuadratureConfig& cfg,
                         const BlockIntegrationOptions& opts = {}) {
  using T = std::decay_t<std::invoke_result_t<F&, double, double, double>>;
  quad::IntegralResult<T> total;
  for (const DomainBlock& block : decompose_a3_domain()) {
    quad::Interval x1 = block.x1;
    if (x1.lo >= opts.x1_max) continue;
    x1.hi = std::min(x1.hi, opts.x1_max);
    quad::IntegrationOptions outer;
    outer.breakpoint_kind = quad::Endpoint::singular;
    if (std::isinf(x1.hi)) outer.decay_envelope = opts.x1_envelope;
    auto middle = [&](double v1) {
      quad::InnerSpec spec{block.x2(v1), {}};
      if (opts.x2_breakpoints) spec.options.breakpoints = opts.x2_breakpoints(v1);
      return spec;
    };
    auto inner = [&](double v1, double v2) {
      quad::InnerSpec spec{block.x3(v1, v2), {}};
      if (opts.x3_breakpoints) spec.options.breakpoints = opts.x3_breakpoints(v1, v2);
      return spec;
    };
    const auto r = quad::integrate_3d(f, x1, outer, middle, inner, cfg);
    total.value += r.value;
    total.error_estimate += r.error_estimate;
    total.evaluations += r.evaluations;
  }
  return total;
}

/// Integrand weight of the third-order term in block variables:
/// x x' x'' dx dx' dx'' = x3 (x1^2 - x2^2) / 8 dx1 dx2 dx3.
double a3_measure(double x1, double x2, double x3);

/// a3_measure * [H(x1,x2,x3) + H(x1,-x2,x3)], H = a(q x) a(q x') a(q x3) G(x, x', x3).
struct A3Integrand {
  const BornModel* model;
  double q;
  Complex operator()(double x1, double x2, double x3) const;
};

/// x1 truncation envelope and the x2 / x3 breakpoints of A3Integrand.
BlockIntegrationOptions a3_block_options(const BornModel& model, const Kinematics& kin);

/// A3 = (1 / 96 pi^2) (-t/s)^2 s^3 sum_blocks int a3_measure * [H(x1,x2,x3) + H(x1,-x2,x3)],
/// H = a(q x) a(q x') a(q x'') G(x, x', x'').
quad::IntegralResult<Complex> a3_term(const BornModel& model, const Kinematics& kin,
                                      const quad::QuadratureConfig& cfg);

struct AmplitudeTerms {
  Complex a1{};
  Complex a2{};
  Complex a3{};
  double a2_error = 0.0;
  double a3_error = 0.0;
};

/// (a1 - a3) + i a2
Complex assemble_amplitude(const AmplitudeTerms& terms);

/// Cross-section formula variant.  real and pure_imaginary first check that
/// the terms belong to that class (relative tolerance kRealityTolerance) and
/// throw DomainError otherwise.
///   general         {|A1|^2 + 2 Im(A1 A2*) + |A2|^2 - 2 Re(A1 A3*)} / 16 pi s^2
///   real            {A1^2 + A2^2 - 2 A1 A3} / 16 pi s^2
///   pure_imaginary  {|A1|^2 - 2i A1 A2 + A2^2 + 2 A1 A3} / 16 pi s^2
/// In the pure-imaginary form A1 = i alpha1, A3 = i alpha3 and the leading
/// square is the squared modulus alpha1^2; the cross terms are literal
/// products and are real on that class.
double diff_cross_section(const AmplitudeTerms& terms, const Kinematics& kin, BornReality form);

inline constexpr double kRealityTolerance = 1e-10;

/// Throws DomainError unless the terms belong to `cls`.
void check_reality_class(const AmplitudeTerms& terms, BornReality cls);

struct AmplitudeOptions {
  quad::QuadratureConfig quadrature{1e-6, 1e-12, 4000, 1e-16};
  bool override_chi_gate = false;
};

struct AmplitudeReport {
  AmplitudeTerms terms;
  Complex amplitude{};
  double cross_section = 0.0;
  EikonalProfile profile;
};

/// Gate, three terms, assembly and dsigma/dt (general form) at one point.
AmplitudeReport compute_amplitude(const BornModel& model, const Kinematics& kin,
                                  const AmplitudeOptions& opts = {});

/// Same, reusing a profile computed once for the model.
AmplitudeReport compute_amplitude(const BornModel& model, const Kinematics& kin,
                                  const AmplitudeOptions& opts, const EikonalProfile& profile);

}  // namespace eikamp::eikonal
