#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "eikamp/bessel_products.hpp"
#include "eikamp/errors.hpp"
#include "eikamp/oracle.hpp"
#include "test_oracles.hpp"

using namespace eikamp;
using besselprod::Branch;
using besselprod::BoundaryKind;
using besselprod::QuadParams;
using besselprod::TripleParams;

namespace {
constexpr double kPi = std::numbers::pi;

double oracle_value(std::vector<double> p) {
  return oracle::reference_besselproduct(p).value;
}

// Draws (a, b, c, d) in [0.5, 5]^4 until the requested branch comes up.
QuadParams draw_f4(testing::Sampler& rng, Branch want) {
  for (;;) {
    const QuadParams p{rng.uniform(0.5, 5.0), rng.uniform(0.5, 5.0), rng.uniform(0.5, 5.0),
                       rng.uniform(0.5, 5.0)};
    const auto r = besselprod::f4_classify(p);
    if (r.branch != want) continue;
    // stay away from the boundaries so the comparison measures the formula
    const double margin = std::fabs(r.delta_sq - r.product);
    if (margin < 0.05 * r.product || r.delta_sq < 0.05 * r.product) continue;
    return p;
  }
}
}  // namespace

TEST_CASE("F3 of the 3-4-5 triangle") {
  CHECK(besselprod::f3_eval({3, 4, 5}) == doctest::Approx(1.0 / (12.0 * kPi)).epsilon(1e-15));
  CHECK(besselprod::delta3_sq({3, 4, 5}) == doctest::Approx(36.0).epsilon(1e-15));
}

TEST_CASE("F3 is permutation invariant, homogeneous and vanishes outside the triangle") {
  testing::Sampler rng(11);
  for (int i = 0; i < 50; ++i) {
    const double a = rng.uniform(0.1, 10.0);
    const double b = rng.uniform(0.1, 10.0);
    const double c = rng.uniform(std::fabs(a - b) + 0.05, a + b - 0.05);
    const double v = besselprod::f3_eval({a, b, c});
    CHECK(besselprod::f3_eval({c, a, b}) == v);
    CHECK(besselprod::f3_eval({b, c, a}) == v);
    CHECK(v == doctest::Approx(testing::f3_heron(a, b, c)).epsilon(1e-10));
    const double lam = rng.uniform(0.2, 5.0);
    CHECK(besselprod::f3_eval({lam * a, lam * b, lam * c}) ==
          doctest::Approx(v / (lam * lam)).epsilon(1e-12));
  }
  CHECK(besselprod::f3_eval({1, 2, 4}) == 0.0);
  CHECK(besselprod::f3_classify({1, 2, 4}).branch == Branch::vanish);
  CHECK(besselprod::f3_classify({1, 2, 2.5}).branch == Branch::super);
}

TEST_CASE("F3 boundary and domain") {
  CHECK_THROWS_AS(besselprod::f3_eval({1, 1, 2}), BoundaryError);
  CHECK_THROWS_AS(besselprod::f3_eval({1, 2, 1 + 1e-14}), BoundaryError);
  CHECK_THROWS_AS(besselprod::f3_eval({0, 1, 1}), DomainError);
  CHECK_THROWS_AS(besselprod::f3_eval({-1, 1, 1}), DomainError);
  const auto r = besselprod::f3_classify({1, 1, 2});
  CHECK(r.branch == Branch::boundary);
  CHECK(r.boundary == BoundaryKind::zero_discriminant);
}

TEST_CASE("F3 against the damped oracle") {
  for (const TripleParams& p : {TripleParams{3, 4, 5}, TripleParams{1, 1, 1},
                                TripleParams{0.7, 2.2, 2.0}, TripleParams{5, 6, 10}}) {
    CHECK(besselprod::f3_eval(p) == doctest::Approx(oracle_value({p.a, p.b, p.c})).epsilon(1e-6));
  }
}

TEST_CASE("the three Delta_4^2 forms agree") {
  testing::Sampler rng(5);
  for (int i = 0; i < 200; ++i) {
    const QuadParams p{rng.uniform(0.1, 4.0), rng.uniform(0.1, 4.0), rng.uniform(0.1, 4.0),
                       rng.uniform(0.1, 4.0)};
    const double d = besselprod::delta4_sq(p);
    const double scale = std::pow(p.a + p.b + p.c + p.d, 4) / 16.0;
    CHECK(std::fabs(d - besselprod::delta4_sq_linear_factors(p)) < 1e-13 * scale);
    CHECK(std::fabs(d - p.a * p.b * p.c * p.d - besselprod::delta4_sq_minus_product(p)) <
          1e-13 * scale);
    CHECK(besselprod::delta4_sq({p.d, p.b, p.a, p.c}) == d);
  }
}

TEST_CASE("F4 classification") {
  CHECK(besselprod::f4_classify({1, 1, 1, 4}).branch == Branch::vanish);
  CHECK(besselprod::f4_classify({3, 4, 5, 1}).branch == Branch::super);
  CHECK(besselprod::f4_classify({1, 1, 1, 1.5}).branch == Branch::sub);
  const auto unit = besselprod::f4_classify({1, 1, 1, 1});
  CHECK(unit.branch == Branch::boundary);
  CHECK(unit.boundary == BoundaryKind::unit_modulus);
  const auto zero = besselprod::f4_classify({1, 1, 1, 3});
  CHECK(zero.branch == Branch::boundary);
  CHECK(zero.boundary == BoundaryKind::zero_discriminant);
}

TEST_CASE("F4 against the convolution of two F3 kernels") {
  testing::Sampler rng(2024);
  for (Branch b : {Branch::super, Branch::sub}) {
    for (int i = 0; i < 15; ++i) {
      const QuadParams p = draw_f4(rng, b);
      const double closed = besselprod::f4_eval(p);
      CHECK(closed ==
            doctest::Approx(testing::f4_by_convolution(p.a, p.b, p.c, p.d)).epsilon(1e-8));
    }
  }
}

TEST_CASE("F4 against the damped oracle") {
  testing::Sampler rng(99);
  for (Branch b : {Branch::super, Branch::sub}) {
    for (int i = 0; i < 4; ++i) {
      const QuadParams p = draw_f4(rng, b);
      const auto ref = oracle::reference_besselproduct(std::vector<double>{p.a, p.b, p.c, p.d});
      CHECK(std::fabs(besselprod::f4_eval(p) - ref.value) < 1e-6 * std::fabs(ref.value) + 1e-9);
    }
  }
}

TEST_CASE("F4 vanish branch") {
  for (const QuadParams& p : {QuadParams{1, 1, 1, 4}, QuadParams{0.5, 0.5, 0.5, 9},
                              QuadParams{10, 1, 2, 3}}) {
    CHECK(besselprod::f4_eval(p) == 0.0);
    CHECK(std::fabs(oracle_value({p.a, p.b, p.c, p.d})) < 1e-6);
  }
}

TEST_CASE("F4 at Delta_4^2 = 0 is the mean of the one-sided limits") {
  const double at = besselprod::f4_eval({1, 1, 1, 3});
  CHECK(at == doctest::Approx(1.0 / (4.0 * kPi * std::sqrt(3.0))).epsilon(1e-14));
  const double below = besselprod::f4_eval({1, 1, 1, 3 - 1e-6});
  const double above = besselprod::f4_eval({1, 1, 1, 3 + 1e-6});
  CHECK(above == 0.0);
  CHECK(below == doctest::Approx(1.0 / (2.0 * kPi * std::sqrt(3.0))).epsilon(1e-4));
  CHECK(at == doctest::Approx(0.5 * (below + above)).epsilon(1e-4));
  CHECK(oracle_value({1, 1, 1, 3}) == doctest::Approx(at).epsilon(1e-4));
  CHECK(oracle_value({1, 2, 3, 6}) ==
        doctest::Approx(besselprod::f4_eval({1, 2, 3, 6})).epsilon(1e-4));
}

TEST_CASE("F4 unit-modulus surface is rejected") {
  CHECK_THROWS_AS(besselprod::f4_eval({1, 1, 1, 1}), BoundaryError);
  CHECK_THROWS_AS(besselprod::f4_eval({2, 3, 4, 5}), BoundaryError);  // 2 + 5 = 3 + 4
  CHECK_THROWS_AS(besselprod::f4_eval({0, 3, 4, 5}), DomainError);
}

TEST_CASE("F4 tends to F3 as one argument goes to zero") {
  for (const TripleParams& p : {TripleParams{3, 4, 5}, TripleParams{1, 1, 1.2}}) {
    const double f3 = besselprod::f3_eval(p);
    double prev = 1.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const double f4 = besselprod::f4_eval({p.a, p.b, p.c, eps});
      const double dev = std::fabs(f4 / f3 - 1.0);
      CHECK(dev < prev);
      prev = dev;
    }
    CHECK(prev < 1e-6);
  }
}

TEST_CASE("F5 forms agree and match the oracle") {
  const std::array<double, 5> p{1.0, 1.2, 1.5, 0.8, 1.1};
  const auto a = besselprod::f5_eval(p, 1e-9);
  const auto b = besselprod::f5_eval_symmetric(p, 1e-9);
  CHECK(std::fabs(a.value - b.value) <= 2.0 * (a.error_estimate + b.error_estimate) + 1e-12);
  CHECK(a.value == doctest::Approx(oracle_value({p.begin(), p.end()})).epsilon(1e-5));
  std::array<double, 5> q = p;
  std::reverse(q.begin(), q.end());
  CHECK(besselprod::f5_eval(q, 1e-9).value == doctest::Approx(a.value).epsilon(1e-7));
  std::rotate(q.begin(), q.begin() + 2, q.end());
  CHECK(besselprod::f5_eval(q, 1e-9).value == doctest::Approx(a.value).epsilon(1e-7));
}

TEST_CASE("F5 and F6 vanish when one argument exceeds the sum of the others") {
  CHECK(besselprod::f5_eval({1, 1, 1, 1, 5}, 1e-9).value == 0.0);
  CHECK(besselprod::f5_eval({7, 1, 1, 1, 1}, 1e-9).value == 0.0);
  CHECK(besselprod::f6_eval({1, 1, 1, 1, 1, 6}, 1e-9).value == 0.0);
  CHECK(std::fabs(besselprod::f6_eval_chain({1, 1, 1, 1, 1, 6}, 1e-9).value) < 1e-12);
}

TEST_CASE("F6 forms agree") {
  const std::array<double, 6> p{1.0, 1.1, 0.9, 1.3, 0.7, 1.2};
  const auto a = besselprod::f6_eval(p, 1e-8);
  const auto b = besselprod::f6_eval_chain(p, 1e-8);
  CHECK(std::fabs(a.value - b.value) <= 2.0 * (a.error_estimate + b.error_estimate) + 1e-10);
  std::array<double, 6> q{p[3], p[0], p[5], p[1], p[4], p[2]};
  CHECK(besselprod::f6_eval(q, 1e-8).value == doctest::Approx(a.value).epsilon(1e-6));
}

TEST_CASE("Weber integral") {
  // a, b -> 0 reduces to int x exp(-p^2 x^2) dx = 1 / (2 p^2)
  CHECK(besselprod::weber_integral({1e-9, 1e-9, 0.7}) ==
        doctest::Approx(1.0 / (2.0 * 0.49)).epsilon(1e-15));
  // small p: no overflow, value concentrates at a = b
  const double v = besselprod::weber_integral({3.0, 3.0, 1e-3});
  CHECK(std::isfinite(v));
  CHECK(v > 0.0);
  CHECK(besselprod::weber_integral({3.0, 5.0, 1e-3}) == 0.0);
  CHECK_THROWS_AS(besselprod::weber_integral({1.0, 1.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("smeared delta kernel has unit mass") {
  for (double eps : {1.0, 0.1, 1e-3}) {
    // x = eps cos(theta), midpoint rule in theta
    const int n = 2000;
    double mass = 0.0;
    for (int k = 0; k < n; ++k) {
      const double th = (k + 0.5) * kPi / n;
      mass += besselprod::smeared_delta_kernel(eps * std::cos(th), eps) * eps * std::sin(th);
    }
    mass *= kPi / n;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(besselprod::smeared_delta_kernel(2.0 * eps, eps) == 0.0);
  }
}

TEST_CASE("G kernel and logarithmic points") {
  CHECK(besselprod::g_kernel(3, 4, 5) == besselprod::f4_eval({3, 4, 5, 1}));
  // one vanishing argument leaves F3
  CHECK(besselprod::g_kernel(0, 1.2, 1.5) == doctest::Approx(besselprod::f3_eval({1.2, 1.5, 1}))
                                                 .epsilon(1e-12));
  const auto pts = besselprod::f4_log_points(2, 3, 4);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0] == 1.0);
  CHECK(pts[1] == 3.0);
  CHECK(pts[2] == 5.0);
  for (double t : pts) {
    CHECK(besselprod::f4_classify({2, 3, 4, t}).boundary == BoundaryKind::unit_modulus);
  }
  const auto sup = besselprod::f4_support(1, 1, 5);
  CHECK(sup.lo == 3.0);
  CHECK(sup.hi == 7.0);
}
