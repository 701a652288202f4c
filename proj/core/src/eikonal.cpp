#include "eikamp/eikonal.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "eikamp/bessel_products.hpp"
#include "eikamp/errors.hpp"
#include "eikamp/special_functions.hpp"

namespace eikamp::eikonal {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

// |chi(b_cutoff)| / max|chi|
constexpr double kChiCutoffRatio = 1e-12;
constexpr int kProfileLinearSamples = 200;
constexpr int kProfileMaxSamples = 2000;

double envelope_cutoff(const BornModel& model, double threshold) {
  const DecayEnvelope& env = model.envelope();
  return quad::detail::decay_cutoff([&](double q) { return env(q); }, 0.0, threshold);
}

}  // namespace

Kinematics::Kinematics(double s, double t) : s_(s), t_(t), q_(std::sqrt(-t)) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("kinematics: s must be positive");
  if (!(t < 0.0) || !std::isfinite(t)) throw DomainError("kinematics: t must be negative");
}

quad::IntegralResult<Complex> eikonal_chi_quadrature(const BornModel& model, double b,
                                                      const quad::QuadratureConfig& cfg) {
  if (!(b >= 0.0) || !std::isfinite(b)) throw DomainError("eikonal: impact parameter must be >= 0");
  const DecayEnvelope& env = model.envelope();
  const double q_cut = envelope_cutoff(model, cfg.truncation_decay_threshold);

  quad::IntegrationOptions opts;
  opts.decay_envelope = [&](double q) { return (1.0 + q) * env(q); };
  opts.initial_panels = 1 + static_cast<int>(std::ceil(q_cut * b / kPi));
  if (model.kind() == BornKind::tabulated) opts.breakpoints = {env.onset};
  opts.breakpoint_kind = quad::Endpoint::regular;
  auto integrand = [&](double q) { return q * special::bessel_j0(q * b) * model.reduced(q); };
  auto r = quad::integrate_1d(integrand, {0.0, std::numeric_limits<double>::infinity()}, cfg, opts);
  r.value /= 4.0 * kPi;
  r.error_estimate /= 4.0 * kPi;
  return r;
}

Complex eikonal_chi(const BornModel& model, double b, const quad::QuadratureConfig& cfg) {
  if (!(b >= 0.0) || !std::isfinite(b)) throw DomainError("eikonal: impact parameter must be >= 0");
  switch (model.kind()) {
    case BornKind::gaussian: {
      const double lam = model.scale();
      return kI * model.chi0() * std::exp(-0.5 * lam * lam * b * b);
    }
    case BornKind::exponential_pole: {
      const double slope = model.scale();
      return kI * model.coupling() / (8.0 * kPi * slope) * std::exp(-b * b / (4.0 * slope));
    }
    case BornKind::tabulated:
      return eikonal_chi_quadrature(model, b, cfg).value;
  }
  return {};
}

std::string_view to_string(RegimeStatus s) {
  switch (s) {
    case RegimeStatus::ok:
      return "ok";
    case RegimeStatus::warning:
      return "warning";
    case RegimeStatus::violated:
      return "violated";
  }
  return "?";
}

EikonalProfile eikonal_profile(const BornModel& model, const quad::QuadratureConfig& cfg) {
  EikonalProfile p;
  const double log_ratio = -std::log(kChiCutoffRatio);
  switch (model.kind()) {
    case BornKind::gaussian:
      p.max_abs_chi = std::abs(eikonal_chi(model, 0.0));
      p.b_cutoff = std::sqrt(2.0 * log_ratio) / model.scale();
      break;
    case BornKind::exponential_pole:
      p.max_abs_chi = std::abs(eikonal_chi(model, 0.0));
      p.b_cutoff = std::sqrt(4.0 * model.scale() * log_ratio);
      break;
    case BornKind::tabulated: {
      // chi varies on the scale 1/q_cut; sample linearly, then geometrically.
      const double q_cut = envelope_cutoff(model, cfg.truncation_decay_threshold);
      double step = 0.25 / q_cut;
      double b = 0.0;
      double last_large = 0.0;
      for (int i = 0; i < kProfileMaxSamples; ++i) {
        const double mag = std::abs(eikonal_chi(model, b, cfg));
        p.max_abs_chi = std::max(p.max_abs_chi, mag);
        if (mag >= kChiCutoffRatio * p.max_abs_chi) last_large = b;
        if (i >= kProfileLinearSamples) {
          if (b > 4.0 * last_large && b > 0.0) break;
          step *= 1.05;
        }
        b += step;
      }
      p.b_cutoff = std::max(last_large, step);
      break;
    }
  }
  if (p.max_abs_chi < kChiWarningThreshold) {
    p.status = RegimeStatus::ok;
  } else if (p.max_abs_chi < kChiErrorThreshold) {
    p.status = RegimeStatus::warning;
  } else {
    p.status = RegimeStatus::violated;
  }
  return p;
}

void enforce_regime(const EikonalProfile& profile, bool override_gate) {
  char buf[200];
  if (profile.max_abs_chi > kChiHardLimit) {
    std::snprintf(buf, sizeof buf,
                  "moderately small regime violated: max|chi| = %.4g exceeds the hard limit %.1f",
                  profile.max_abs_chi, kChiHardLimit);
    throw RegimeError(buf);
  }
  if (profile.max_abs_chi >= kChiErrorThreshold && !override_gate) {
    std::snprintf(buf, sizeof buf,
                  "moderately small regime violated: max|chi| = %.4g >= %.1f (override to proceed)",
                  profile.max_abs_chi, kChiErrorThreshold);
    throw RegimeError(buf);
  }
}

Complex a1_term(const BornModel& model, const Kinematics& kin) {
  return model.amplitude(kin.s(), kin.q());
}

quad::IntegralResult<Complex> a2_integral(const BornModel& model, const Kinematics& kin,
                                          const quad::QuadratureConfig& cfg, X2Range range) {
  const double q = kin.q();
  const DecayEnvelope& env = model.envelope();
  const double env0 = env(0.0);

  quad::IntegrationOptions outer;
  outer.decay_envelope = [&](double u) {
    const double c = std::cosh(u);
    return c * c * env(0.5 * q * c) * env0;
  };
  const double v_lo = (range == X2Range::half) ? 0.0 : -0.5 * kPi;
  auto inner = [&](double) { return quad::InnerSpec{{v_lo, 0.5 * kPi}, {}}; };
  auto integrand = [&](double u, double v) {
    const double x1 = std::cosh(u);
    const double x2 = std::sin(v);
    return (x1 * x1 - x2 * x2) * model.reduced(0.5 * q * (x1 + x2)) *
           model.reduced(0.5 * q * (x1 - x2));
  };
  return quad::integrate_2d(integrand, {0.0, std::numeric_limits<double>::infinity()}, outer,
                            inner, cfg);
}

quad::IntegralResult<Complex> a2_term(const BornModel& model, const Kinematics& kin,
                                      const quad::QuadratureConfig& cfg) {
  auto r = a2_integral(model, kin, cfg, X2Range::half);
  const double pref = -kin.t() * kin.s() / (16.0 * kPi * kPi);
  r.value *= pref;
  r.error_estimate *= pref;
  return r;
}

std::vector<DomainBlock> decompose_a3_domain() {
  using quad::Interval;
  constexpr double inf = std::numeric_limits<double>::infinity();
  auto zero_to_x1 = [](double x1) { return Interval{0.0, x1}; };
  auto zero_to_one = [](double) { return Interval{0.0, 1.0}; };
  auto one_to_x1 = [](double x1) { return Interval{1.0, x1}; };
  auto from_zero = [](double x1, double) { return Interval{0.0, x1 + 1.0}; };
  auto from_x2 = [](double x1, double x2) { return Interval{x2 - 1.0, x1 + 1.0}; };
  return {
      {{0.0, 1.0}, zero_to_x1, [](double x1, double) { return Interval{1.0 - x1, x1 + 1.0}; }},
      {{1.0, 2.0}, zero_to_one, from_zero},
      {{1.0, 2.0}, one_to_x1, from_x2},
      {{2.0, inf}, zero_to_one, from_zero},
      {{2.0, inf}, one_to_x1, from_x2},
  };
}

double a3_measure(double x1, double x2, double x3) {
  return x3 * (x1 - x2) * (x1 + x2) / 8.0;
}

Complex A3Integrand::operator()(double x1, double x2, double x3) const {
  const double x = 0.5 * (x1 + x2);
  const double xp = 0.5 * (x1 - x2);
  const double g = besselprod::detail::f4_unchecked(x, xp, x3, 1.0);
  if (g == 0.0) return {};
  // H is even in x2 (x <-> x' swaps two Born factors and G is symmetric), so
  // H(x1, x2, x3) + H(x1, -x2, x3) = 2 H(x1, x2, x3).
  return 2.0 * a3_measure(x1, x2, x3) * g * model->reduced(q * x) * model->reduced(q * xp) *
         model->reduced(q * x3);
}

BlockIntegrationOptions a3_block_options(const BornModel& model, const Kinematics& kin) {
  const double q = kin.q();
  const DecayEnvelope env = model.envelope();
  BlockIntegrationOptions opts;
  opts.x1_envelope = [env, q](double x1) {
    const double w = 1.0 + x1;
    return w * w * w * w * env(0.5 * q * x1);
  };
  // G(x, x', x3) is log-singular where its elliptic modulus reaches 1.
  opts.x3_breakpoints = [](double x1, double x2) {
    return std::vector<double>{x1 - 1.0, 1.0 - x2, 1.0 + x2};
  };
  opts.x2_breakpoints = [](double x1) { return std::vector<double>{2.0 - x1, x1 - 2.0}; };
  return opts;
}

quad::IntegralResult<Complex> a3_term(const BornModel& model, const Kinematics& kin,
                                      const quad::QuadratureConfig& cfg) {
  auto r = integrate_a3_domain(A3Integrand{&model, kin.q()}, cfg, a3_block_options(model, kin));
  const double pref = kin.t() * kin.t() * kin.s() / (96.0 * kPi * kPi);
  r.value *= pref;
  r.error_estimate *= pref;
  return r;
}

Complex assemble_amplitude(const AmplitudeTerms& terms) {
  return (terms.a1 - terms.a3) + kI * terms.a2;
}

void check_reality_class(const AmplitudeTerms& terms, BornReality cls) {
  auto fail = [](const char* what) {
    throw DomainError(std::string("reality class violation: ") + what);
  };
  auto small = [](double part, const Complex& z) {
    return std::fabs(part) <= kRealityTolerance * std::abs(z);
  };
  switch (cls) {
    case BornReality::general:
      return;
    case BornReality::real:
      if (!small(terms.a1.imag(), terms.a1)) fail("real class declared but Im A1 != 0");
      if (!small(terms.a2.imag(), terms.a2)) fail("real class declared but Im A2 != 0");
      if (!small(terms.a3.imag(), terms.a3)) fail("real class declared but Im A3 != 0");
      return;
    case BornReality::pure_imaginary:
      if (!small(terms.a1.real(), terms.a1)) fail("pure-imaginary class declared but Re A1 != 0");
      if (!small(terms.a2.imag(), terms.a2)) fail("pure-imaginary class declared but Im A2 != 0");
      if (!small(terms.a3.real(), terms.a3)) fail("pure-imaginary class declared but Re A3 != 0");
      return;
  }
}

double diff_cross_section(const AmplitudeTerms& terms, const Kinematics& kin, BornReality form) {
  check_reality_class(terms, form);
  const Complex a1 = terms.a1;
  const Complex a2 = terms.a2;
  const Complex a3 = terms.a3;
  double bracket = 0.0;
  switch (form) {
    case BornReality::general:
      bracket = std::norm(a1) + 2.0 * (a1 * std::conj(a2)).imag() + std::norm(a2) -
                2.0 * (a1 * std::conj(a3)).real();
      break;
    case BornReality::real:
      bracket = a1.real() * a1.real() + a2.real() * a2.real() - 2.0 * a1.real() * a3.real();
      break;
    case BornReality::pure_imaginary:
      bracket = (std::norm(a1) - 2.0 * kI * a1 * a2 + a2 * a2 + 2.0 * a1 * a3).real();
      break;
  }
  return bracket / (16.0 * kPi * kin.s() * kin.s());
}

AmplitudeReport compute_amplitude(const BornModel& model, const Kinematics& kin,
                                  const AmplitudeOptions& opts, const EikonalProfile& profile) {
  enforce_regime(profile, opts.override_chi_gate);
  AmplitudeReport rep;
  rep.profile = profile;
  rep.terms.a1 = a1_term(model, kin);
  const auto a2 = a2_term(model, kin, opts.quadrature);
  rep.terms.a2 = a2.value;
  rep.terms.a2_error = a2.error_estimate;
  const auto a3 = a3_term(model, kin, opts.quadrature);
  rep.terms.a3 = a3.value;
  rep.terms.a3_error = a3.error_estimate;
  rep.amplitude = assemble_amplitude(rep.terms);
  rep.cross_section = diff_cross_section(rep.terms, kin, BornReality::general);
  return rep;
}

AmplitudeReport compute_amplitude(const BornModel& model, const Kinematics& kin,
                                  const AmplitudeOptions& opts) {
  return compute_amplitude(model, kin, opts, eikonal_profile(model, opts.quadrature));
}

}  // namespace eikamp::eikonal
