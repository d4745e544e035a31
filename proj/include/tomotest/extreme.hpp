#pragma once
// Exact solution of the hardest-alternative problem: among signals on the
// smoothness ellipsoid at squared distance r^2 from zero, find the one the
// weighted chi-square family detects worst.  The solution is a water-filling
// profile eta~_nu^2 = z0^2 sigma_nu^2 (1 - A a_nu^2)+ whose multiplier A is
// pinned down by the distance constraint, together with the detectability
// value u_eps and the optimal statistic weights.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tomotest/lattice.hpp"
#include "tomotest/sequence.hpp"

namespace tomotest {

struct InfeasibleRadius : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SolverFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Water-filling sums at multiplier A over the strict support {A a_nu^2 < 1}:
//   J1 = sum sigma^4 (1 - A a^2)+
//   J2 = A sum a^2 sigma^4 (1 - A a^2)+
//   J0 = sum sigma^4 (1 - A a^2)+^2 = J1 - J2.
// An empty support is not an error; all sums are zero there.
struct JSums {
  double j0 = 0.0;
  double j1 = 0.0;
  double j2 = 0.0;
  long long support_size = 0;
  bool empty_support() const { return support_size == 0; }
};

JSums j_sums(double A, const ModelParams& params);

// I(A) = sum of sigma^4 over the inclusive set {A a_nu^2 <= 1}.
double i_of_a(double A, const ModelParams& params);

struct ExtremeSolution {
  double r = 0.0;
  double eps = 0.0;
  ModelParams params;

  double A = 0.0;      // water-filling multiplier
  double z0_sq = 0.0;  // profile height, r^2 / J1
  double u_eps = 0.0;  // detectability value sqrt((r/eps)^4 J0 / (2 J1^2))
  double j0 = 0.0, j1 = 0.0, j2 = 0.0;

  std::vector<Index> support;  // strict support, in Index order
  SequenceVector eta_sq;       // eta~^2 on the support
  SequenceVector weights;      // optimal statistic weights, sum of squares 1/2
  double w0 = 0.0;             // largest weight
};

// Solves the extreme problem.  Throws InfeasibleRadius when r^2 exceeds the
// ellipsoid's reach max_nu a_nu^{-2}, SolverFailure when the multiplier
// search cannot meet its residual target.
ExtremeSolution solve_extreme(double r, double eps, const ModelParams& params);

// Leading-order closed form for u_eps in the small-r regime.
double asymptotic_u(double r, double eps, const ModelParams& params);

// Detection boundary radius eps^{4p/(4p+3)}; defined for 0 < eps < 1.
double separation_rate(double eps, double p);

// Adaptive-family radius (eps (log log(1/eps))^{1/4})^{4p/(4p+3)}; requires
// eps < 1/e so the inner logarithm is positive.
double adaptive_rate(double eps, double p);

// sum over m >= 1 of m^{-3}, computed once to absolute error below 1e-12.
double apery_constant();

// Largest optimal weight of a solution.  A solution whose support carries a
// single distinct ellipsoid coefficient degenerates to w0 = 1/sqrt(2).
double w0_check(const ExtremeSolution& sol);

}  // namespace tomotest
