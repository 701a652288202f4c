// Acceptance suite: one PASS/FAIL line per criterion.
//
//   eikamp_acceptance                 run all criteria
//   eikamp_acceptance --criterion N   run criterion N only

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "eikamp/bessel_products.hpp"
#include "eikamp/eikonal.hpp"
#include "eikamp/errors.hpp"
#include "eikamp/oracle.hpp"
#include "eikamp/special_functions.hpp"
#include "test_oracles.hpp"

using namespace eikamp;
using eikonal::Complex;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      pass = false;
      detail << what;
    }
  }
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

double oracle_value(const std::vector<double>& p) {
  return oracle::reference_besselproduct(p).value;
}

besselprod::TripleParams draw_triangle(testing::Sampler& rng) {
  for (;;) {
    const besselprod::TripleParams p{rng.uniform(0.5, 5.0), rng.uniform(0.5, 5.0),
                                     rng.uniform(0.5, 5.0)};
    if (besselprod::delta3_sq(p) > 0.0) return p;
  }
}

besselprod::QuadParams draw_f4(testing::Sampler& rng, besselprod::Branch want) {
  for (;;) {
    const besselprod::QuadParams p{rng.uniform(0.5, 5.0), rng.uniform(0.5, 5.0),
                                   rng.uniform(0.5, 5.0), rng.uniform(0.5, 5.0)};
    if (besselprod::f4_classify(p).branch == want) return p;
  }
}

// ---- 1 ---------------------------------------------------------------------

Outcome criterion1() {
  Outcome o;
  Stopwatch clock;
  testing::Sampler rng(101);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto p = draw_triangle(rng);
    worst = std::max(worst, rel(besselprod::f3_eval(p), oracle_value({p.a, p.b, p.c})));
  }
  const double secs = clock.seconds();
  o.require(worst <= 1e-5, "max relative deviation " + fmt(worst) + " > 1e-5");
  o.require(secs < 60.0, "runtime " + fmt(secs) + " s >= 60 s");
  o.detail << (o.pass ? "" : "; ") << "20 F3 points, max rel dev " << fmt(worst) << ", "
           << fmt(secs) << " s";
  return o;
}

// ---- 2 ---------------------------------------------------------------------

Outcome criterion2() {
  Outcome o;
  testing::Sampler rng(202);
  double worst_super = 0.0;
  double worst_sub = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto p = draw_f4(rng, besselprod::Branch::super);
    worst_super = std::max(worst_super, rel(besselprod::f4_eval(p), oracle_value({p.a, p.b, p.c, p.d})));
  }
  for (int i = 0; i < 20; ++i) {
    const auto p = draw_f4(rng, besselprod::Branch::sub);
    worst_sub = std::max(worst_sub, rel(besselprod::f4_eval(p), oracle_value({p.a, p.b, p.c, p.d})));
  }
  o.require(worst_super <= 1e-5, "SUPER max rel dev " + fmt(worst_super));
  o.require(worst_sub <= 1e-5, "SUB max rel dev " + fmt(worst_sub));

  double worst_vanish = 0.0;
  for (int i = 0; i < 10; ++i) {
    std::vector<double> p{rng.uniform(0.5, 5.0), rng.uniform(0.5, 5.0), rng.uniform(0.5, 5.0)};
    p.push_back(p[0] + p[1] + p[2] + rng.uniform(0.2, 3.0));
    std::rotate(p.begin(), p.begin() + i % 4, p.end());
    worst_vanish = std::max(worst_vanish, std::fabs(oracle_value(p)));
  }
  o.require(worst_vanish < 1e-6, "VANISH oracle value " + fmt(worst_vanish));

  const double target = 1.0 / (2.0 * kPi * std::sqrt(3.0));
  const double at_zero = oracle_value({1.0, 1.0, 1.0, 3.0});
  const double dev_zero = rel(at_zero, target);
  o.require(dev_zero <= 1e-4, "(1,1,1,3): oracle " + fmt(at_zero) + " vs 1/(2 pi sqrt 3) = " +
                                  fmt(target) + ", rel dev " + fmt(dev_zero) +
                                  " (oracle converges to the one-sided mean 1/(4 pi sqrt 3))");
  o.detail << (o.pass ? "" : "; ") << "SUPER " << fmt(worst_super) << ", SUB " << fmt(worst_sub)
           << ", VANISH max |oracle| " << fmt(worst_vanish);
  return o;
}

// ---- 3 ---------------------------------------------------------------------

Outcome criterion3() {
  Outcome o;
  testing::Sampler rng(303);
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto p = draw_triangle(rng);
    const double f3 = besselprod::f3_eval(p);
    worst = std::max(worst, std::fabs(besselprod::f4_eval({p.a, p.b, p.c, 1e-4}) - f3) / f3);
  }
  o.require(worst <= 1e-3, "max relative gap " + fmt(worst));
  o.detail << (o.pass ? "" : "; ") << "max |F4(a,b,c,1e-4) - F3| / F3 = " << fmt(worst);
  return o;
}

// ---- 4 ---------------------------------------------------------------------

Outcome criterion4() {
  Outcome o;
  testing::Sampler rng(404);
  constexpr double kTol = 1e-8;
  int form_fail = 0;
  int perm_fail = 0;
  double worst_ratio = 0.0;
  auto within = [&](const quad::IntegralResult<double>& x, const quad::IntegralResult<double>& y) {
    const double gap = std::fabs(x.value - y.value);
    const double allowed = 2.0 * (x.error_estimate + y.error_estimate);
    worst_ratio = std::max(worst_ratio, allowed > 0.0 ? gap / allowed : (gap > 0.0 ? 1e300 : 0.0));
    return gap <= allowed;
  };
  for (int i = 0; i < 10; ++i) {
    std::array<double, 5> p{};
    for (double& v : p) v = rng.uniform(0.5, 5.0);
    const auto a = besselprod::f5_eval(p, kTol);
    const auto b = besselprod::f5_eval_symmetric(p, kTol);
    if (!within(a, b)) ++form_fail;
    std::array<double, 5> q = p;
    std::rotate(q.begin(), q.begin() + 1 + i % 4, q.end());
    std::swap(q[0], q[1]);
    if (!within(a, besselprod::f5_eval(q, kTol))) ++perm_fail;
  }
  int f6_fail = 0;
  for (int i = 0; i < 5; ++i) {
    std::array<double, 6> p{};
    for (double& v : p) v = rng.uniform(0.5, 5.0);
    if (!within(besselprod::f6_eval(p, kTol), besselprod::f6_eval_chain(p, kTol))) ++f6_fail;
  }
  bool vanish_ok = true;
  for (int i = 0; i < 5; ++i) {
    std::array<double, 5> p5{};
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) sum += (p5[k] = rng.uniform(0.5, 3.0));
    p5[4] = sum + rng.uniform(0.1, 2.0);
    std::rotate(p5.begin(), p5.begin() + i, p5.end());
    vanish_ok = vanish_ok && besselprod::f5_eval(p5, kTol).value == 0.0;
    std::array<double, 6> p6{};
    sum = 0.0;
    for (int k = 0; k < 5; ++k) sum += (p6[k] = rng.uniform(0.5, 3.0));
    p6[5] = sum + rng.uniform(0.1, 2.0);
    std::rotate(p6.begin(), p6.begin() + i, p6.end());
    vanish_ok = vanish_ok && besselprod::f6_eval(p6, kTol).value == 0.0 &&
                std::fabs(besselprod::f6_eval_chain(p6, kTol).value) < 1e-10;
  }
  o.require(form_fail == 0, std::to_string(form_fail) + "/10 F5 form pairs outside 2x error");
  o.require(perm_fail == 0, std::to_string(perm_fail) + "/10 F5 permutations outside 2x error");
  o.require(f6_fail == 0, std::to_string(f6_fail) + "/5 F6 form pairs outside 2x error");
  o.require(vanish_ok, "vanishing rule violated");
  o.detail << (o.pass ? "" : "; ") << "largest gap / (2 x combined error) = " << fmt(worst_ratio);
  return o;
}

// ---- 5 ---------------------------------------------------------------------

Outcome criterion5() {
  Outcome o;
  Stopwatch clock;
  const quad::QuadratureConfig cfg{1e-6, 1e-12, 4000, 1e-16};
  const double lambda = 1.0;
  const double s = 1.0;
  double worst2 = 0.0;
  double worst3 = 0.0;
  for (double chi0 : {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    const auto m = eikonal::BornModel::gaussian(4.0 * kPi * chi0 / (lambda * lambda), lambda);
    for (double t : {-0.25, -1.0, -4.0}) {
      const eikonal::Kinematics k(s, t);
      const Complex a2_closed =
          -kPi * s * chi0 * chi0 / (lambda * lambda) * std::exp(t / (4.0 * lambda * lambda));
      const Complex a3_closed = -kI * 2.0 * kPi * s * chi0 * chi0 * chi0 /
                                (9.0 * lambda * lambda) * std::exp(t / (6.0 * lambda * lambda));
      const Complex a2 = eikonal::a2_term(m, k, cfg).value;
      const Complex a3 = eikonal::a3_term(m, k, cfg).value;
      worst2 = std::max(worst2, std::abs(a2 - a2_closed) / std::abs(a2_closed));
      worst3 = std::max(worst3, std::abs(a3 - a3_closed) / std::abs(a3_closed));
    }
  }
  const double secs = clock.seconds();
  o.require(worst2 <= 1e-6, "A2 max rel dev " + fmt(worst2));
  o.require(worst3 <= 1e-6, "A3 max rel dev " + fmt(worst3));
  o.require(secs < 600.0, "runtime " + fmt(secs) + " s >= 600 s");
  o.detail << (o.pass ? "" : "; ") << "18 points, A2 " << fmt(worst2) << ", A3 " << fmt(worst3)
           << ", " << fmt(secs) << " s";
  return o;
}

// ---- 6 ---------------------------------------------------------------------

Outcome criterion6() {
  Outcome o;
  for (double t : {-0.25, -1.0, -4.0}) {
    std::vector<double> scaled;
    std::ostringstream n4;
    for (double chi0 : {0.1, 0.2, 0.3}) {
      const Complex g = 4.0 * kPi * chi0;
      const auto m = eikonal::BornModel::gaussian(g, 1.0);
      const eikonal::Kinematics k(1.0, t);
      const Complex three = eikonal::compute_amplitude(m, k).amplitude;
      const Complex exact = oracle::gaussian_series_amplitude(g, 1.0, k).value;
      const double dev = std::abs(three - exact) / std::abs(exact);
      scaled.push_back(dev / std::pow(chi0, 4));
      const Complex first_omitted = oracle::gaussian_series_partial_sum(g, 1.0, k, 4) -
                                    oracle::gaussian_series_partial_sum(g, 1.0, k, 3);
      n4 << (n4.tellp() > 0 ? "/" : "") << fmt(std::abs(three - exact) / std::abs(first_omitted));
    }
    const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
    const double spread = *hi / *lo;
    o.require(spread <= 3.0, "t=" + fmt(t) + ": spread " + fmt(spread) + " > 3");
    o.detail << (o.detail.tellp() > 0 ? "; " : "") << "t=" << fmt(t) << " max/min of dev/chi0^4 "
             << fmt(spread) << " (dev / first omitted term " << n4.str() << ")";
  }
  return o;
}

// ---- 7 ---------------------------------------------------------------------

template <class T>
double rel_gap(T a, T b) {
  return std::abs(a - b) / std::abs(b);
}

Outcome criterion7() {
  Outcome o;
  const quad::QuadratureConfig cfg{1e-10, 1e-14, 4000, 1e-18};

  eikonal::BlockIntegrationOptions box;
  box.x1_max = 3.0;
  auto one = [](double, double, double) { return 1.0; };
  const double box_blocks = eikonal::integrate_a3_domain(one, cfg, box).value;
  const double box_oracle = testing::indicator_region_integral<double>(one, 3.0, false);
  const double box_dev = rel_gap(box_blocks, box_oracle);
  // region volume for x1 <= 3 is 2/3 + 34/3
  const double box_exact_dev = rel_gap(box_oracle, 12.0);

  eikonal::BlockIntegrationOptions decay;
  decay.x1_envelope = [](double x1) { return (1.0 + x1) * (1.0 + x1) * std::exp(-x1); };
  auto expo = [](double x1, double, double x3) { return std::exp(-x1 - x3); };
  const double exp_blocks = eikonal::integrate_a3_domain(expo, cfg, decay).value;
  const double exp_oracle = testing::indicator_region_integral<double>(expo, 45.0, false);
  const double exp_dev = rel_gap(exp_blocks, exp_oracle);
  const double exp_exact_dev = rel_gap(exp_oracle, 7.0 / (4.0 * std::numbers::e));

  const double chi0 = 0.3;
  const auto m = eikonal::BornModel::gaussian(4.0 * kPi * chi0, 1.0);
  const eikonal::Kinematics k(1.0, -1.0);
  const eikonal::A3Integrand h{&m, k.q()};
  const Complex g_blocks = eikonal::integrate_a3_domain(h, cfg, eikonal::a3_block_options(m, k)).value;
  const Complex g_oracle = testing::indicator_region_integral<Complex>(h, 20.0, true);
  const double g_dev = rel_gap(g_blocks, g_oracle);

  o.require(box_dev <= 1e-6, "box H rel dev " + fmt(box_dev));
  o.require(exp_dev <= 1e-6, "exponential H rel dev " + fmt(exp_dev));
  o.require(g_dev <= 1e-6, "gaussian-model H rel dev " + fmt(g_dev));
  o.require(box_exact_dev <= 1e-10 && exp_exact_dev <= 1e-10,
            "indicator oracle misses the exact box / exponential values");
  o.detail << (o.pass ? "" : "; ") << "box " << fmt(box_dev) << ", exponential " << fmt(exp_dev)
           << ", gaussian model " << fmt(g_dev);
  return o;
}

// ---- 8 ---------------------------------------------------------------------

Outcome criterion8() {
  Outcome o;
  const double chi0 = 0.3;
  const Complex g = 4.0 * kPi * chi0;
  const auto m = eikonal::BornModel::gaussian(g, 1.0);
  const eikonal::Kinematics k(1.0, -1.0);
  const auto direct = oracle::direct_eikonal_amplitude(m, k);
  const auto series = oracle::gaussian_series_amplitude(g, 1.0, k);
  const double dev = std::abs(direct.value - series.value) / std::abs(series.value);
  o.require(dev <= 1e-6, "rel dev " + fmt(dev));
  o.detail << (o.pass ? "" : "; ") << "direct vs series rel dev " << fmt(dev);
  return o;
}

// ---- 9 ---------------------------------------------------------------------

Outcome criterion9() {
  Outcome o;
  double worst_k = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double k = 0.99 * i / 19.0;
    worst_k = std::max(worst_k, rel(special::elliptic_k(special::EllipticModulus(k)),
                                    testing::elliptic_k_by_definition(k)));
  }
  const double k0 = special::elliptic_k(special::EllipticModulus(0.0));
  const double k0_gap = std::fabs(k0 - kPi / 2);
  double worst_mass = 0.0;
  for (double eps : {1.0, 0.1, 1e-3, 1e-6}) {
    // x = eps cos(theta)
    const int n = 4000;
    double mass = 0.0;
    for (int i = 0; i < n; ++i) {
      const double th = (i + 0.5) * kPi / n;
      mass += besselprod::smeared_delta_kernel(eps * std::cos(th), eps) * eps * std::sin(th);
    }
    worst_mass = std::max(worst_mass, std::fabs(mass * kPi / n - 1.0));
  }
  o.require(worst_k <= 1e-10, "K max rel dev " + fmt(worst_k));
  o.require(k0_gap <= std::numeric_limits<double>::epsilon(), "K(0) - pi/2 = " + fmt(k0_gap));
  o.require(worst_mass <= 1e-8, "smeared delta mass off by " + fmt(worst_mass));
  o.detail << (o.pass ? "" : "; ") << "K max rel dev " << fmt(worst_k) << ", |K(0) - pi/2| "
           << fmt(k0_gap) << ", mass error " << fmt(worst_mass);
  return o;
}

// ---- 10 --------------------------------------------------------------------

constexpr const char* kLimitationStatement =
    "The oscillatory oracle does not reproduce the extreme regime s >> -t >> m_N^2.";

Outcome criterion10() {
  Outcome o;
  std::ifstream readme(EIKAMP_README);
  std::stringstream text;
  text << readme.rdbuf();
  const bool documented = readme && text.str().find(kLimitationStatement) != std::string::npos;
  o.require(documented, std::string("README lacks the statement \"") + kLimitationStatement + "\"");

  // s >> -t >> m_N^2 with m_N ~ 0.94 GeV
  const double chi0 = 0.3;
  const Complex g = 4.0 * kPi * chi0;
  const auto m = eikonal::BornModel::gaussian(g, 1.0);
  const eikonal::Kinematics k(1e6, -400.0);
  const auto series = oracle::gaussian_series_amplitude(g, 1.0, k);
  bool certified = false;
  std::string what;
  try {
    const auto direct = oracle::direct_eikonal_amplitude(m, k);
    const double scale = std::abs(series.value);
    const double dev = std::abs(direct.value - series.value) / scale;
    const double claimed = direct.error_estimate / scale;
    certified = dev <= 1e-6 && claimed <= 1e-6;
    what = "s=1e6, t=-400: oracle rel dev " + fmt(dev) + ", own error estimate " + fmt(claimed);
  } catch (const NonConvergenceError& e) {
    what = std::string("s=1e6, t=-400: oracle gave up (") + e.what() + ")";
  }
  o.require(!certified, "oracle unexpectedly certifies the extreme regime: " + what);
  o.detail << (o.pass ? "" : "; ") << (documented ? "limitation documented; " : "") << what;
  return o;
}

const std::array<std::function<Outcome()>, 10> kCriteria{
    criterion1, criterion2, criterion3, criterion4, criterion5,
    criterion6, criterion7, criterion8, criterion9, criterion10};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "Run one criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  int failures = 0;
  for (int n = 1; n <= 10; ++n) {
    if (only != 0 && n != only) continue;
    Outcome r;
    try {
      r = kCriteria[n - 1]();
    } catch (const std::exception& e) {
      r.require(false, std::string("exception: ") + e.what());
    }
    std::cout << (r.pass ? "PASS" : "FAIL") << " criterion " << n << ": " << r.detail.str()
              << std::endl;
    if (!r.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
