#pragma once

// Closed forms and one-dimensional reductions for
//
//     F_n(a_1, ..., a_n) = int_0^inf x prod_k J0(a_k x) dx,   n = 3..6,
//
// plus the G kernel of the third-order amplitude term, Weber's second
// exponential integral and the delta-like sequence that stands in for the
// distributional n = 2 case.
//
// F_n with n > 6 follows the same recursive scheme (split the product into
// pairs joined by F3 kernels, giving an (n-3)-dimensional algebraic
// integral) but is not provided.

#include <array>
#include <string_view>
#include <vector>

#include "eikamp/quadrature.hpp"

namespace eikamp::besselprod {

struct TripleParams {
  double a;
  double b;
  double c;
};

struct QuadParams {
  double a;
  double b;
  double c;
  double d;
};

/// Which line of the F3/F4 case table applies.
///   super    Delta^2 > threshold   (threshold = abcd for F4, 0 for F3)
///   sub      0 < Delta^2 < abcd
///   boundary Delta^2 = abcd or Delta^2 = 0, see BoundaryKind
///   vanish   Delta^2 < 0: one parameter exceeds the sum of the others
enum class Branch { super, sub, boundary, vanish };

enum class BoundaryKind {
  none,
  unit_modulus,       ///< Delta^2 = abcd: elliptic modulus 1, integral undefined
  zero_discriminant,  ///< Delta^2 = 0: finite for F4, divergent for F3
};

struct BranchReport {
  double delta_sq = 0.0;
  double product = 0.0;  ///< abcd, or B = x x' x'' for the G kernel; 0 for F3
  Branch branch = Branch::super;
  BoundaryKind boundary = BoundaryKind::none;
};

std::string_view to_string(Branch b);
std::string_view to_string(BoundaryKind b);

/// Relative width of the boundary band.  A case-table boundary is hit when
/// the linear factor that vanishes on it is within this fraction of the
/// parameter sum; such inputs raise BoundaryError instead of picking a side.
inline constexpr double kBoundaryTolerance = 1e-12;

/// Delta_3^2 = [c^2 - (a-b)^2][(a+b)^2 - c^2] / 16, evaluated on the sorted
/// arguments so that it is bitwise permutation invariant.
double delta3_sq(const TripleParams& p);

BranchReport f3_classify(const TripleParams& p);

/// 1/(2 pi Delta_3) when Delta_3^2 > 0, 0 when Delta_3^2 < 0.  Throws
/// BoundaryError when Delta_3^2 = 0 (divergent) and DomainError unless
/// a, b, c > 0.
double f3_eval(const TripleParams& p);

/// Delta_4^2 from [(c+d)^2 - (a-b)^2][(a+b)^2 - (c-d)^2] / 16 on sorted
/// arguments, each difference of squares taken as a product of a sum and a
/// difference.  Requires a, b, c, d >= 0.
double delta4_sq(const QuadParams& p);

/// Delta_4^2 from the four-factor product
/// (a+b+c-d)(a+b+d-c)(a+c+d-b)(b+c+d-a) / 16, in argument order.
double delta4_sq_linear_factors(const QuadParams& p);

/// Delta_4^2 - abcd = -(a+b+c+d)(a+b-c-d)(a-b+c-d)(a-b-c+d) / 16.
/// Its zeros are the unit-modulus surfaces of F4.
double delta4_sq_minus_product(const QuadParams& p);

/// Case-table classification of F4.  Total on a, b, c, d > 0.
BranchReport f4_classify(const QuadParams& p);

/// F4 from the generalised case table:
///   super:  K(sqrt(abcd)/Delta_4) / (pi^2 Delta_4)
///   sub:    K(Delta_4/sqrt(abcd)) / (pi^2 sqrt(abcd))
///   vanish: 0
///   Delta_4^2 = 0:  1 / (4 pi sqrt(abcd)), the mean of the one-sided limits
///                   1 / (2 pi sqrt(abcd)) (sub side) and 0 (vanish side)
/// Throws BoundaryError at Delta_4^2 = abcd and DomainError unless all > 0.
double f4_eval(const QuadParams& p);

/// G(x, x', x'') = F4(x, x', x'', 1), extended to zero arguments.
/// Throws BoundaryError where A^2 = B.
double g_kernel(double x, double xp, double xpp);

/// Values of the fourth argument t at which F4(a, b, c, t) has a logarithmic
/// singularity (Delta_4^2 = abct), ascending, positive only.
std::vector<double> f4_log_points(double a, double b, double c);

/// Interval of t on which F4(a, b, c, t) is non-zero: [lo, a+b+c].
quad::Interval f4_support(double a, double b, double c);

/// F5 = int dt t F3(a,b,t) F4(c,d,e,t).  `tol` bounds the error estimate.
quad::IntegralResult<double> f5_eval(const std::array<double, 5>& params, double tol);

/// F5 = int dt t F3(a,b,t) int dq q F3(c,d,q) F3(e,t,q): the nested-F3 form,
/// kept as an independent route to the same number.
quad::IntegralResult<double> f5_eval_symmetric(const std::array<double, 5>& params, double tol);

/// F6 = int dt t F4(a,b,c,t) F4(d,e,f,t).
quad::IntegralResult<double> f6_eval(const std::array<double, 6>& params, double tol);

/// F6 = int dt t F3(a,b,t) int dq q F3(c,d,q) int dp p F3(e,f,p) F3(t,q,p).
quad::IntegralResult<double> f6_eval_chain(const std::array<double, 6>& params, double tol);

struct WeberParams {
  double a;
  double b;
  double p;
  double nu = 0.0;
};

/// int_0^inf x exp(-p^2 x^2) J0(ax) J0(bx) dx
///   = exp(-(a^2+b^2)/4p^2) I0(ab/2p^2) / (2p^2),
/// evaluated as exp(-(a-b)^2/4p^2) * [exp(-z) I0(z)] / (2p^2) so that neither
/// factor overflows for small p.  Only order nu = 0 is supported.
double weber_integral(const WeberParams& w);

/// f_eps(x) = 1/(pi sqrt(eps^2 - x^2)) on |x| < eps, 0 elsewhere.  Unit mass.
double smeared_delta_kernel(double x, double eps);

namespace detail {
/// F4 without boundary errors or argument checks; arguments may be zero.
/// On a unit-modulus boundary it returns the (large, finite) value at the
/// smallest representable complementary modulus.  Used inside integrands,
/// where nodes never sit on the singular set.
double f4_unchecked(double a, double b, double c, double d);
/// F3 without checks; 0 outside the support, +inf on the boundary.
double f3_unchecked(double a, double b, double c);
}  // namespace detail

}  // namespace eikamp::besselprod
