#include "eikamp/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "eikamp/errors.hpp"

namespace eikamp::special {
namespace {

// Branch boundaries for J0.  The Maclaurin series loses about log10(I0(x))
// digits to cancellation, so it is summed in long double and only used up
// to 8.  Between 8 and 25 the Hankel expansion cannot reach 1e-13 (its
// smallest term is ~exp(-2x)), so that band uses Miller's backward
// recurrence normalised by J0 + 2 sum J_2k = 1.
constexpr double kJ0SeriesLimit = 8.0;
constexpr double kJ0AsymptoticLimit = 25.0;

constexpr double kI0AsymptoticLimit = 20.0;

double j0_series(double x) {
  const long double q = -0.25L * static_cast<long double>(x) * x;
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<long double>(m) * m);
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) + 1e-30L) break;
  }
  return static_cast<double>(sum);
}

double j0_miller(double x) {
  int n = static_cast<int>(x + 10.0 * std::cbrt(x) + 30.0);
  n += n % 2;
  const double two_over_x = 2.0 / x;
  double j_next = 0.0;     // J_{k+1}
  double j_current = 1e-30;  // J_k, k = n
  double norm = 0.0;       // 2 * sum of even-order terms seen so far
  for (int k = n; k > 0; --k) {
    const double j_prev = k * two_over_x * j_current - j_next;
    j_next = j_current;
    j_current = j_prev;  // now J_{k-1}
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j_current;
    if (std::fabs(j_current) > 1e250) {
      j_current *= 1e-250;
      j_next *= 1e-250;
      norm *= 1e-250;
    }
  }
  norm += j_current;
  return j_current / norm;
}

double j0_hankel(double x) {
  const double eight_x = 8.0 * x;
  double p = 1.0;
  double q = 0.0;
  double c = 1.0;
  double smallest = 1.0;
  for (int k = 1; k < 120; ++k) {
    const double odd = 2.0 * k - 1.0;
    c *= -(odd * odd) / (k * eight_x);
    const double mag = std::fabs(c);
    if (mag > smallest) break;  // asymptotic series started diverging
    smallest = mag;
    // k even contributes to P with sign (-1)^{k/2}; k odd to Q with
    // sign (-1)^{(k-1)/2}.
    if (k % 2 == 0) {
      p += (k % 4 == 0) ? c : -c;
    } else {
      q += ((k - 1) % 4 == 0) ? c : -c;
    }
    if (mag < 1e-18) break;
  }
  const double s = std::sin(x);
  const double co = std::cos(x);
  const double cos_chi = (co + s) * std::numbers::sqrt2 * 0.5;
  const double sin_chi = (s - co) * std::numbers::sqrt2 * 0.5;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * cos_chi - q * sin_chi);
}

double i0_series(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int m = 1; m < 500; ++m) {
    term *= q / (static_cast<double>(m) * m);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

// exp(-x) I0(x) for x >= kI0AsymptoticLimit.
double i0_scaled_asymptotic(double x) {
  const double eight_x = 8.0 * x;
  double c = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = c * (odd * odd) / (k * eight_x);
    if (next > c) break;
    c = next;
    sum += c;
    if (c < 1e-18 * sum) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace

double bessel_j0(double x) {
  const double ax = std::fabs(x);
  if (ax < kJ0SeriesLimit) return j0_series(ax);
  if (ax < kJ0AsymptoticLimit) return j0_miller(ax);
  return j0_hankel(ax);
}

double bessel_i0_scaled(double x) {
  const double ax = std::fabs(x);
  if (ax < kI0AsymptoticLimit) return std::exp(-ax) * i0_series(ax);
  return i0_scaled_asymptotic(ax);
}

double bessel_i0(double x) {
  const double ax = std::fabs(x);
  if (!(ax <= kBesselI0MaxArgument)) {
    throw DomainError("bessel_i0: |x| = " + std::to_string(ax) +
                      " exceeds the overflow guard");
  }
  if (ax < kI0AsymptoticLimit) return i0_series(ax);
  return std::exp(ax) * i0_scaled_asymptotic(ax);
}

EllipticModulus::EllipticModulus(double k) : k_(k) {
  if (!(k >= 0.0 && k < 1.0)) {
    throw DomainError("elliptic modulus must satisfy 0 <= k < 1, got " +
                      std::to_string(k));
  }
}

double elliptic_k_from_complement(double kp) {
  if (!(kp > 0.0 && kp <= 1.0)) {
    throw DomainError("complementary modulus must lie in (0, 1], got " +
                      std::to_string(kp));
  }
  const double kp2 = kp * kp;
  if (kp2 < kEllipticLogCrossover) {
    const double log_term = std::log(4.0 / kp);
    return log_term + 0.25 * kp2 * (log_term - 1.0);
  }
  double a = 1.0;
  double b = kp;
  for (int i = 0; i < 64 && std::fabs(a - b) > 4.0 * std::numeric_limits<double>::epsilon() * a; ++i) {
    const double mean = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = mean;
  }
  return std::numbers::pi / (a + b);
}

double elliptic_k(EllipticModulus modulus) {
  const double k = modulus.value();
  return elliptic_k_from_complement(std::sqrt((1.0 - k) * (1.0 + k)));
}

}  // namespace eikamp::special
