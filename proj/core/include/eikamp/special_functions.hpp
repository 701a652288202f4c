#pragma once

// Scalar special functions used by the closed forms and the reference
// integrators: J0, I0 and the complete elliptic integral of the first kind.
//
// NOTE: elliptic_k() takes the *modulus* k, not the parameter m = k^2.  Boost,
// std::comp_ellint_1 and Abramowitz-Stegun use the modulus; scipy.special.ellipk
// and GSL's "m" variants use the parameter.  Everything in this library uses
// the modulus.

namespace eikamp::special {

/// Bessel function of the first kind of order zero.  Total on finite input.
double bessel_j0(double x);

/// Modified Bessel function I0.  Throws DomainError for |x| > kBesselI0MaxArgument.
double bessel_i0(double x);

/// exp(-|x|) * I0(x).  Finite for every finite x.
double bessel_i0_scaled(double x);

inline constexpr double kBesselI0MaxArgument = 700.0;

/// Modulus k of a complete elliptic integral, 0 <= k < 1.
class EllipticModulus {
 public:
  /// Throws DomainError unless 0 <= k < 1.
  explicit EllipticModulus(double k);

  double value() const noexcept { return k_; }

 private:
  double k_;
};

/// K(k) = int_0^{pi/2} dtheta / sqrt(1 - k^2 sin^2 theta).
double elliptic_k(EllipticModulus k);

/// K expressed through the complementary modulus k' = sqrt(1 - k^2), 0 < k' <= 1.
/// Use this when 1 - k^2 is available without cancellation.
double elliptic_k_from_complement(double complementary_modulus);

/// Below this value of k'^2 = 1 - k^2 the logarithmic expansion
/// K ~ ln(4/k') + (k'^2/4)(ln(4/k') - 1) replaces the AGM iteration.
inline constexpr double kEllipticLogCrossover = 1e-12;

}  // namespace eikamp::special
