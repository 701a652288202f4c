#include "eikamp/bessel_products.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "eikamp/errors.hpp"
#include "eikamp/special_functions.hpp"

namespace eikamp::besselprod {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSmallestComplement = 1e-300;
constexpr int kReductionSubdivisions = 20000;

void require_positive(double v, const char* where) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(where) + ": parameters must be positive and finite");
  }
}

void require_nonnegative(double v, const char* where) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(where) + ": parameters must be non-negative and finite");
  }
}

struct Sorted3 {
  double w, x, y;  // w >= x >= y
};

struct Sorted4 {
  double w, x, y, z;  // w >= x >= y >= z
};

Sorted3 sort3(double a, double b, double c) {
  std::array<double, 3> v{a, b, c};
  std::sort(v.begin(), v.end(), std::greater<>());
  return {v[0], v[1], v[2]};
}

Sorted4 sort4(double a, double b, double c, double d) {
  std::array<double, 4> v{a, b, c, d};
  std::sort(v.begin(), v.end(), std::greater<>());
  return {v[0], v[1], v[2], v[3]};
}

double delta3_sorted(const Sorted3& s) {
  const auto [w, x, y] = s;
  return ((x + y) - w) * ((w - x) + y) * ((w + x) - y) * ((w + x) + y) / 16.0;
}

double delta4_sorted(const Sorted4& s) {
  const auto [w, x, y, z] = s;
  const double yz = y + z;
  const double wx = w - x;
  const double sum = w + x;
  const double diff = y - z;
  return (yz - wx) * (yz + wx) * (sum - diff) * (sum + diff) / 16.0;
}

// Delta_4^2 - wxyz from its factorisation.
double minus_product_sorted(const Sorted4& s) {
  const auto [w, x, y, z] = s;
  return -(((w + x) + (y + z)) * ((w + x) - (y + z)) * ((w - x) + (y - z)) * ((w - x) - (y - z))) /
         16.0;
}

struct Case4 {
  BranchReport report;
  double minus = 0.0;  // Delta^2 - product
  bool super_side = true;
};

Case4 classify_sorted(const Sorted4& s) {
  const auto [w, x, y, z] = s;
  const double band = kBoundaryTolerance * (((w + x) + y) + z);
  Case4 c;
  c.report.delta_sq = delta4_sorted(s);
  c.report.product = w * x * y * z;
  const double support = ((x + y) + z) - w;
  if (support < -band) {
    c.report.branch = Branch::vanish;
    return c;
  }
  if (support <= band) {
    c.report.branch = Branch::boundary;
    c.report.boundary = BoundaryKind::zero_discriminant;
    return c;
  }
  const double f1 = (w + x) - (y + z);
  const double f2 = (w - x) + (y - z);
  const double f3 = (w - x) - (y - z);
  c.minus = minus_product_sorted(s);
  c.super_side = f3 < 0.0;
  if (std::min({f1, f2, std::fabs(f3)}) <= band) {
    c.report.branch = Branch::boundary;
    c.report.boundary = BoundaryKind::unit_modulus;
    return c;
  }
  c.report.branch = c.super_side ? Branch::super : Branch::sub;
  return c;
}

// Elliptic branch value; shared by the checked and unchecked entry points.
double elliptic_value(const Case4& c) {
  if (c.super_side) {
    const double delta_sq = c.report.delta_sq;
    const double kp = std::sqrt(std::clamp(c.minus / delta_sq, 0.0, 1.0));
    return special::elliptic_k_from_complement(std::max(kp, kSmallestComplement)) /
           (kPi * kPi * std::sqrt(delta_sq));
  }
  const double product = c.report.product;
  const double kp = std::sqrt(std::clamp(-c.minus / product, 0.0, 1.0));
  return special::elliptic_k_from_complement(std::max(kp, kSmallestComplement)) /
         (kPi * kPi * std::sqrt(product));
}

// F4 jumps from 1/(2 pi sqrt(abcd)) to 0 across Delta_4^2 = 0.  The
// oscillatory integral converges there to the mean of the one-sided limits.
double jump_midpoint(double product) {
  return 1.0 / (4.0 * kPi * std::sqrt(product));
}

// Shared code path of f4_eval and g_kernel.
double f4_checked(const Sorted4& s) {
  const Case4 c = classify_sorted(s);
  switch (c.report.branch) {
    case Branch::vanish:
      return 0.0;
    case Branch::boundary:
      if (c.report.boundary == BoundaryKind::zero_discriminant) {
        if (!(c.report.product > 0.0)) {
          throw BoundaryError("divergent: Delta^2 = 0 with a vanishing argument (three-Bessel boundary)");
        }
        return jump_midpoint(c.report.product);
      }
      throw BoundaryError(
          "F4 is not defined: Delta_4^2 = abcd (elliptic modulus 1, K diverges)");
    case Branch::super:
    case Branch::sub:
      return elliptic_value(c);
  }
  return 0.0;
}

// Positive values |sum_k (+-v_k)| over all sign patterns.
std::vector<double> signed_sums(std::initializer_list<double> values) {
  const std::vector<double> v(values);
  std::vector<double> out;
  const unsigned n = static_cast<unsigned>(v.size());
  for (unsigned mask = 0; mask < (1u << n); mask += 2) {
    double s = 0.0;
    for (unsigned k = 0; k < n; ++k) s += ((mask >> k) & 1u) ? -v[k] : v[k];
    s = std::fabs(s);
    if (s > 0.0) out.push_back(s);
  }
  return out;
}

// t on (m, M) = (|a-b|, a+b) parametrised as t = mid - rad cos(theta): the
// inverse-square-root edges of F3(a, b, t) cancel against dt.
struct PairMap {
  double m;
  double big;
  double mid;
  double rad;

  PairMap(double a, double b)
      : m(std::fabs(a - b)), big(a + b), mid(0.5 * (std::fabs(a - b) + a + b)), rad(std::min(a, b)) {}

  double t(double theta) const { return mid - rad * std::cos(theta); }

  // t F3(a, b, t) dt / dtheta
  double weight(double theta) const {
    const double tt = t(theta);
    return (2.0 / kPi) * tt / std::sqrt((tt + m) * (tt + big));
  }

  std::vector<double> angles(const std::vector<double>& ts) const {
    std::vector<double> out;
    for (double v : ts) {
      if (v > m && v < big) out.push_back(std::acos(std::clamp((mid - v) / rad, -1.0, 1.0)));
    }
    return out;
  }
};

// Inner integral of q F3(c,d,q) F3(e,t,q) over the overlap of the two
// supports, with q = centre - half cos(phi).
struct OverlapMap {
  double m1, big1, m2, big2;
  double lo, hi, centre, half;

  OverlapMap(double c, double d, double e, double t)
      : m1(std::fabs(c - d)), big1(c + d), m2(std::fabs(e - t)), big2(e + t) {
    lo = std::max(m1, m2);
    hi = std::min(big1, big2);
    centre = 0.5 * (lo + hi);
    half = 0.5 * (hi - lo);
  }

  bool empty() const { return !(hi > lo); }

  double integrand(double phi) const {
    const double sin_half = std::sin(0.5 * phi);
    const double cos_half = std::cos(0.5 * phi);
    const double above_lo = 2.0 * half * sin_half * sin_half;
    const double below_hi = 2.0 * half * cos_half * cos_half;
    const double q = centre - half * std::cos(phi);
    // Edge distances built from exact gaps so no factor loses precision.
    const double p1 = (above_lo + (lo - m1)) * (q + m1) * (below_hi + (big1 - hi)) * (big1 + q);
    const double p2 = (above_lo + (lo - m2)) * (q + m2) * (below_hi + (big2 - hi)) * (big2 + q);
    const double denom = std::sqrt(p1) * std::sqrt(p2);
    if (!(denom > 0.0)) return 0.0;
    return 4.0 / (kPi * kPi) * q * half * std::sin(phi) / denom;
  }
};

quad::QuadratureConfig reduction_config(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("tolerance must be positive");
  quad::QuadratureConfig cfg;
  cfg.rel_tol = tol;
  cfg.abs_tol = tol;
  cfg.max_subdivisions = kReductionSubdivisions;
  return cfg;
}

std::vector<double> f4_singular_points(double a, double b, double c) {
  std::vector<double> pts = f4_log_points(a, b, c);
  const quad::Interval sup = f4_support(a, b, c);
  if (sup.lo > 0.0) pts.push_back(sup.lo);
  pts.push_back(sup.hi);
  return pts;
}

}  // namespace

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::super:
      return "SUPER";
    case Branch::sub:
      return "SUB";
    case Branch::boundary:
      return "BOUNDARY";
    case Branch::vanish:
      return "VANISH";
  }
  return "?";
}

std::string_view to_string(BoundaryKind b) {
  switch (b) {
    case BoundaryKind::none:
      return "none";
    case BoundaryKind::unit_modulus:
      return "unit_modulus";
    case BoundaryKind::zero_discriminant:
      return "zero_discriminant";
  }
  return "?";
}

double delta3_sq(const TripleParams& p) {
  return delta3_sorted(sort3(p.a, p.b, p.c));
}

BranchReport f3_classify(const TripleParams& p) {
  require_positive(p.a, "f3_classify");
  require_positive(p.b, "f3_classify");
  require_positive(p.c, "f3_classify");
  const Sorted3 s = sort3(p.a, p.b, p.c);
  BranchReport r;
  r.delta_sq = delta3_sorted(s);
  r.product = 0.0;
  const double band = kBoundaryTolerance * ((s.w + s.x) + s.y);
  const double support = (s.x + s.y) - s.w;
  if (support < -band) {
    r.branch = Branch::vanish;
  } else if (support <= band) {
    r.branch = Branch::boundary;
    r.boundary = BoundaryKind::zero_discriminant;
  } else {
    r.branch = Branch::super;
  }
  return r;
}

double f3_eval(const TripleParams& p) {
  const BranchReport r = f3_classify(p);
  switch (r.branch) {
    case Branch::vanish:
      return 0.0;
    case Branch::boundary:
      throw BoundaryError("divergent: Delta_3^2 = 0");
    default:
      return 1.0 / (2.0 * kPi * std::sqrt(r.delta_sq));
  }
}

double delta4_sq(const QuadParams& p) {
  require_nonnegative(p.a, "delta4_sq");
  require_nonnegative(p.b, "delta4_sq");
  require_nonnegative(p.c, "delta4_sq");
  require_nonnegative(p.d, "delta4_sq");
  return delta4_sorted(sort4(p.a, p.b, p.c, p.d));
}

double delta4_sq_linear_factors(const QuadParams& p) {
  const auto [a, b, c, d] = p;
  return (a + b + c - d) * (a + b + d - c) * (a + c + d - b) * (b + c + d - a) / 16.0;
}

double delta4_sq_minus_product(const QuadParams& p) {
  return minus_product_sorted(sort4(p.a, p.b, p.c, p.d));
}

BranchReport f4_classify(const QuadParams& p) {
  require_positive(p.a, "f4_classify");
  require_positive(p.b, "f4_classify");
  require_positive(p.c, "f4_classify");
  require_positive(p.d, "f4_classify");
  return classify_sorted(sort4(p.a, p.b, p.c, p.d)).report;
}

double f4_eval(const QuadParams& p) {
  require_positive(p.a, "f4_eval");
  require_positive(p.b, "f4_eval");
  require_positive(p.c, "f4_eval");
  require_positive(p.d, "f4_eval");
  return f4_checked(sort4(p.a, p.b, p.c, p.d));
}

double g_kernel(double x, double xp, double xpp) {
  require_nonnegative(x, "g_kernel");
  require_nonnegative(xp, "g_kernel");
  require_nonnegative(xpp, "g_kernel");
  return f4_checked(sort4(x, xp, xpp, 1.0));
}

std::vector<double> f4_log_points(double a, double b, double c) {
  std::vector<double> out;
  for (double t : {a + b - c, a - b + c, b + c - a}) {
    if (t > 0.0) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

quad::Interval f4_support(double a, double b, double c) {
  const Sorted3 s = sort3(a, b, c);
  return {std::max(0.0, (s.w - s.x) - s.y), a + b + c};
}

namespace detail {

double f4_unchecked(double a, double b, double c, double d) {
  const Case4 cs = classify_sorted(sort4(a, b, c, d));
  switch (cs.report.branch) {
    case Branch::vanish:
      return 0.0;
    case Branch::boundary:
      if (cs.report.boundary == BoundaryKind::zero_discriminant) {
        return jump_midpoint(cs.report.product);
      }
      return elliptic_value(cs);
    default:
      return elliptic_value(cs);
  }
}

double f3_unchecked(double a, double b, double c) {
  const double d = delta3_sorted(sort3(a, b, c));
  if (d < 0.0) return 0.0;
  return 1.0 / (2.0 * kPi * std::sqrt(d));
}

}  // namespace detail

quad::IntegralResult<double> f5_eval(const std::array<double, 5>& params, double tol) {
  for (double v : params) require_positive(v, "f5_eval");
  const auto cfg = reduction_config(tol);
  const auto [a, b, c, d, e] = params;
  const PairMap pair(a, b);

  quad::IntegrationOptions opts;
  opts.breakpoints = pair.angles(f4_singular_points(c, d, e));
  auto integrand = [&](double theta) {
    return pair.weight(theta) * detail::f4_unchecked(c, d, e, pair.t(theta));
  };
  return quad::integrate_1d(integrand, {0.0, kPi}, cfg, opts);
}

quad::IntegralResult<double> f5_eval_symmetric(const std::array<double, 5>& params, double tol) {
  for (double v : params) require_positive(v, "f5_eval_symmetric");
  const auto cfg = reduction_config(tol);
  const auto [a, b, c, d, e] = params;
  const PairMap pair(a, b);

  quad::IntegrationOptions outer;
  outer.breakpoints = pair.angles(signed_sums({c, d, e}));
  auto inner = [&](double theta) {
    const OverlapMap ov(c, d, e, pair.t(theta));
    quad::InnerSpec spec{{0.0, ov.empty() ? 0.0 : kPi}, {}};
    return spec;
  };
  auto integrand = [&](double theta, double phi) {
    const OverlapMap ov(c, d, e, pair.t(theta));
    return pair.weight(theta) * ov.integrand(phi);
  };
  return quad::integrate_2d(integrand, {0.0, kPi}, outer, inner, cfg);
}

quad::IntegralResult<double> f6_eval(const std::array<double, 6>& params, double tol) {
  for (double v : params) require_positive(v, "f6_eval");
  const auto cfg = reduction_config(tol);
  const auto [a, b, c, d, e, f] = params;
  const quad::Interval left = f4_support(a, b, c);
  const quad::Interval right = f4_support(d, e, f);
  const quad::Interval range{std::max(left.lo, right.lo), std::min(left.hi, right.hi)};
  if (!(range.hi > range.lo)) {
    quad::IntegralResult<double> none;
    none.evaluations = 1;
    return none;
  }

  quad::IntegrationOptions opts;
  opts.lo = quad::Endpoint::singular;
  opts.hi = quad::Endpoint::singular;
  opts.breakpoints = f4_log_points(a, b, c);
  for (double t : f4_log_points(d, e, f)) opts.breakpoints.push_back(t);
  auto integrand = [&](double t) {
    return t * detail::f4_unchecked(a, b, c, t) * detail::f4_unchecked(d, e, f, t);
  };
  return quad::integrate_1d(integrand, range, cfg, opts);
}

quad::IntegralResult<double> f6_eval_chain(const std::array<double, 6>& params, double tol) {
  for (double v : params) require_positive(v, "f6_eval_chain");
  const auto cfg = reduction_config(tol);
  const auto [a, b, c, d, e, f] = params;
  const PairMap outer_pair(a, b);
  const PairMap middle_pair(c, d);

  quad::IntegrationOptions outer;
  outer.breakpoints = outer_pair.angles(signed_sums({c, d, e, f}));
  auto middle = [&](double theta) {
    quad::InnerSpec spec{{0.0, kPi}, {}};
    spec.options.breakpoints = middle_pair.angles(f4_singular_points(e, f, outer_pair.t(theta)));
    return spec;
  };
  auto inner = [&](double theta, double phi) {
    const OverlapMap ov(e, f, outer_pair.t(theta), middle_pair.t(phi));
    quad::InnerSpec spec{{0.0, ov.empty() ? 0.0 : kPi}, {}};
    return spec;
  };
  auto integrand = [&](double theta, double phi, double psi) {
    const double t = outer_pair.t(theta);
    const double q = middle_pair.t(phi);
    const OverlapMap ov(e, f, t, q);
    return outer_pair.weight(theta) * middle_pair.weight(phi) * ov.integrand(psi);
  };
  return quad::integrate_3d(integrand, {0.0, kPi}, outer, middle, inner, cfg);
}

double weber_integral(const WeberParams& w) {
  require_positive(w.a, "weber_integral");
  require_positive(w.b, "weber_integral");
  require_positive(w.p, "weber_integral");
  if (!(w.nu > -1.0)) throw DomainError("weber_integral: order must exceed -1");
  if (w.nu != 0.0) throw DomainError("weber_integral: only order nu = 0 is implemented");
  const double two_p2 = 2.0 * w.p * w.p;
  const double gap = w.a - w.b;
  return std::exp(-gap * gap / (2.0 * two_p2)) * special::bessel_i0_scaled(w.a * w.b / two_p2) /
         two_p2;
}

double smeared_delta_kernel(double x, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw DomainError("smeared_delta_kernel: eps must be positive");
  }
  if (!(std::fabs(x) < eps)) return 0.0;
  return 1.0 / (kPi * std::sqrt((eps - x) * (eps + x)));
}

}  // namespace eikamp::besselprod
