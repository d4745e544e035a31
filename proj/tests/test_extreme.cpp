#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tomotest/extreme.hpp"
#include "tomotest/rng.hpp"
#include "tomotest/seqmodel.hpp"

using namespace tomotest;

namespace {

const ModelParams kNorm{1.0, 1.0, true};

// Reference I(A) by direct double loop with the published boundary slack.
double i_reference(double A, double p) {
  double cap = std::pow(1.0 / A, 0.5 / p) * (1.0 + 1e-12) + 1e-9;
  double acc = 0.0;
  for (long long m = 1; m <= static_cast<long long>(cap); ++m)
    for (long long n = 1; static_cast<double>(m * n) <= cap; ++n) {
      double s = static_cast<double>(m + n - 1);
      acc += s * s;
    }
  return acc;
}

}  // namespace

TEST_CASE("water-filling sums at a hand-checked multiplier") {
  JSums js = j_sums(0.2, kNorm);
  // Support {(0,0),(0,1),(1,0)}: gaps 0.8 and 0.2, sigma^4 of 1 and 4.
  CHECK(js.support_size == 3);
  CHECK(js.j1 == doctest::Approx(2.4).epsilon(1e-14));
  CHECK(js.j2 == doctest::Approx(1.44).epsilon(1e-14));
  CHECK(js.j0 == doctest::Approx(0.96).epsilon(1e-14));

  JSums empty = j_sums(1.0, kNorm);
  CHECK(empty.empty_support());
  CHECK(empty.j0 == 0.0);
  CHECK(empty.j1 == 0.0);
  CHECK(empty.j2 == 0.0);
}

TEST_CASE("the three sums satisfy J0 = J1 - J2 identically") {
  for (double p : {0.5, 1.0, 2.0})
    for (double A : {0.41, 0.13, 0.031, 0.0057, 3.3e-4}) {
      ModelParams params{p, 1.0, true};
      JSums js = j_sums(A, params);
      CHECK(std::abs(js.j1 - js.j2 - js.j0) <= 1e-12 * js.j1);
    }
}

TEST_CASE("the inclusive fourth-moment count matches a direct scan") {
  CHECK(i_of_a(0.01, kNorm) == 957.0);
  CHECK(i_of_a(1.0, kNorm) == 1.0);
  for (double A : {0.2, 0.01, 0.003})
    CHECK(i_of_a(A, kNorm) == doctest::Approx(i_reference(A, 1.0)).epsilon(1e-14));
  ModelParams odd{0.77, 1.0, true};
  CHECK(i_of_a(0.01, odd) == doctest::Approx(i_reference(0.01, 0.77)).epsilon(1e-14));
}

TEST_CASE("the fourth-moment count approaches its closed form") {
  double ratio = i_of_a(1e-6, kNorm) / ((2.0 * apery_constant() / 3.0) * std::pow(1e-6, -1.5));
  CHECK(ratio >= 0.95);
  CHECK(ratio <= 1.05);
}

TEST_CASE("water-filling sums approach their closed forms") {
  const double B = apery_constant();
  const double A = 1e-6;
  const double scale = std::pow(A, -1.5);
  JSums js = j_sums(A, kNorm);
  CHECK(js.j1 / (4.0 * B / 15.0 * scale) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(js.j2 / (4.0 * B / 35.0 * scale) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(js.j0 / (16.0 * B / 105.0 * scale) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("the constraint map g increases strictly up to its plateau") {
  // once the support shrinks to the single index (0,0), g sits at its
  // supremum 1 and stays there; below that it must be strictly increasing
  for (double p : {0.5, 1.0, 2.0}) {
    ModelParams params{p, 1.0, true};
    double prev = -1.0;
    for (int i = 0; i <= 40; ++i) {
      double A = std::pow(10.0, -6.0 + i * (std::log10(0.2) + 6.0) / 40.0);
      JSums js = j_sums(A, params);
      REQUIRE(js.j2 > 0.0);
      double g = A * js.j1 / js.j2;
      CHECK(g <= 1.0);
      if (prev < 1.0)
        CHECK(g > prev);
      else
        CHECK(g == 1.0);
      prev = g;
    }
  }
}

TEST_CASE("Apery-type constant with certified accuracy") {
  double B = apery_constant();
  CHECK(B > 1.2020);
  CHECK(B < 1.2021);
  CHECK(B == doctest::Approx(1.2020569031595943).epsilon(1e-12));
  // partial sums bound it from below
  CHECK(B > 1.0 + 1.0 / 8.0);
}

TEST_CASE("separation boundary radius") {
  CHECK(separation_rate(1e-3, 1.0) == doctest::Approx(0.01931).epsilon(5e-4));
  CHECK(separation_rate(0.01, 0.75) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK_THROWS_AS(separation_rate(1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(separation_rate(0.5, -1.0), std::domain_error);
}

TEST_CASE("adaptive boundary radius and its loglog factor") {
  for (double p : {0.5, 1.0, 2.0}) {
    double eps = std::exp(-std::exp(1.0));
    CHECK(adaptive_rate(eps, p) == doctest::Approx(separation_rate(eps, p)).epsilon(1e-12));
    double phi = 4.0 * p / (4.0 * p + 3.0);
    double expected = separation_rate(1e-3, p) *
                      std::pow(std::log(std::log(1e3)), 0.25 * phi);
    CHECK(adaptive_rate(1e-3, p) == doctest::Approx(expected).epsilon(1e-12));
  }
  // the rate exponent rises toward 1 with p, so the radius shrinks
  CHECK(adaptive_rate(1e-3, 0.5) > adaptive_rate(1e-3, 1.0));
  CHECK(adaptive_rate(1e-3, 1.0) > adaptive_rate(1e-3, 2.0));
  CHECK_THROWS_AS(adaptive_rate(0.5, 1.0), std::domain_error);
  CHECK_THROWS_AS(adaptive_rate(std::exp(-1.0), 1.0), std::domain_error);
}

TEST_CASE("solved multiplier sits at its leading-order location") {
  double r = 0.01;
  ExtremeSolution sol = solve_extreme(r, std::pow(r, 1.75), kNorm);
  double ratio = sol.A / (3.0 * r * r / 7.0);
  CHECK(ratio >= 0.9);
  CHECK(ratio <= 1.1);
}

TEST_CASE("solution satisfies both constraints at equality") {
  ExtremeSolution sol = solve_extreme(0.05, 0.01, kNorm);
  Membership member = membership_check(extreme_signal(sol), kNorm, 0.05);
  CHECK(member.inside);
  CHECK(std::abs(member.ellipsoid_sum - 1.0) <= 1e-10);
  CHECK(std::abs(member.distance_sum - 0.05 * 0.05) <= 1e-10 * 0.05 * 0.05);

  double sum_w2 = 0.0;
  for (const auto& [nu, w] : sol.weights.entries()) sum_w2 += w * w;
  CHECK(std::abs(sum_w2 - 0.5) <= 1e-12);
  CHECK(w0_check(sol) == doctest::Approx(sol.w0));
}

TEST_CASE("detectability matches an independent grid scan over the multiplier") {
  const double r = 0.05, eps = 0.01;
  ExtremeSolution sol = solve_extreme(r, eps, kNorm);
  // Scan A; at each A the distance constraint fixes the profile height, so
  // the candidate value is u(A)^2 = (r^2/J1)^2 J0 / (2 eps^4), feasible when
  // the ellipsoid sum r^2 J2 / (A J1) stays at or below one.
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 2000; ++i) {
    double A = sol.A * std::pow(10.0, -1.0 + 2.0 * i / 2000.0);
    JSums js = j_sums(A, kNorm);
    if (js.empty_support() || js.j2 <= 0.0) continue;
    double ellipsoid = r * r * js.j2 / (A * js.j1);
    if (ellipsoid > 1.0 + 1e-12) continue;
    double z0_sq = r * r / js.j1;
    double u = std::sqrt(z0_sq * z0_sq * js.j0 / (2.0 * std::pow(eps, 4.0)));
    best = std::min(best, u);
  }
  CHECK(sol.u_eps == doctest::Approx(best).epsilon(1e-3));
}

TEST_CASE("random feasible perturbations never beat the extreme profile") {
  const double r = 0.05, eps = 0.01;
  ExtremeSolution sol = solve_extreme(r, eps, kNorm);
  double opt = 0.0;
  for (const auto& [nu, e2] : sol.eta_sq.entries()) opt += e2 * e2;

  int feasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    // multiplicative jitter, then rescale to put the distance at equality
    SequenceVector candidate;
    double distance = 0.0;
    for (const auto& [nu, e2] : sol.eta_sq.entries()) {
      double bump = 1.0 + 0.3 * std::tanh(rng::gaussian(900 + trial, nu.j, nu.l));
      double value = e2 * bump;
      candidate.set(nu, value);
      double s2 = static_cast<double>(nu.degree() + 1);
      distance += s2 * value;
    }
    double scale = r * r / distance;
    double ellipsoid = 0.0, quartic = 0.0;
    for (const auto& [nu, value] : candidate.entries()) {
      double scaled = value * scale;
      double s2 = static_cast<double>(nu.degree() + 1);
      double a = ellipsoid_coeff(nu, kNorm);
      ellipsoid += a * a * s2 * scaled;
      quartic += scaled * scaled;
    }
    if (ellipsoid > 1.0) continue;
    ++feasible;
    CHECK(quartic >= opt * (1.0 - 1e-9));
  }
  CHECK(feasible >= 20);
}

TEST_CASE("physical and normalized solutions agree through the exact rescaling") {
  ModelParams physical{1.0, 2.0, false};
  const double r = 0.02, eps = 0.004;
  ExtremeSolution phys = solve_extreme(r, eps, physical);
  ExtremeSolution norm = solve_extreme(r / physical.L, eps, kNorm);
  const double kPi = 3.141592653589793238462643383279502884;
  double factor = kPi * kPi * physical.L * physical.L;
  CHECK(phys.u_eps == doctest::Approx(factor * norm.u_eps).epsilon(1e-10));
  CHECK(phys.support.size() == norm.support.size());
}

TEST_CASE("leading-order value is reached along shrinking radii") {
  struct Case {
    double p, r;
  };
  for (Case c : {Case{0.5, 0.02}, Case{1.0, 1e-3}, Case{2.0, 1e-4}}) {
    ModelParams params{c.p, 1.0, true};
    ExtremeSolution sol = solve_extreme(c.r, 1.0, params);
    double ratio = sol.u_eps / asymptotic_u(c.r, 1.0, params);
    CHECK(ratio == doctest::Approx(1.0).epsilon(0.1));
  }
}

TEST_CASE("closed-form value carries the exact unit factors") {
  ModelParams physical{1.0, 2.0, false};
  const double kPi = 3.141592653589793238462643383279502884;
  double lhs = asymptotic_u(0.02, 0.003, physical);
  double rhs = kPi * kPi * physical.L * physical.L *
               asymptotic_u(0.01, 0.003, ModelParams{1.0, 1.0, true});
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("degenerate support pins the largest weight at 1/sqrt(2)") {
  ExtremeSolution sol = solve_extreme(1.0, 0.1, kNorm);
  CHECK(sol.w0 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
  CHECK(sol.u_eps == doctest::Approx(1.0 / (std::sqrt(2.0) * 0.01)).epsilon(1e-6));
}

TEST_CASE("radii beyond the ellipsoid reach are refused") {
  CHECK_THROWS_AS(solve_extreme(1.5, 0.1, kNorm), InfeasibleRadius);
  ModelParams physical{1.0, 2.0, false};
  CHECK_THROWS_AS(solve_extreme(2.5, 0.1, physical), InfeasibleRadius);
  CHECK_THROWS_AS(solve_extreme(-0.1, 0.1, kNorm), std::domain_error);
  CHECK_THROWS_AS(solve_extreme(0.1, 0.0, kNorm), std::domain_error);
}
