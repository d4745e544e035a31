#include "tomotest/extreme.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>
#include <utility>

#include "tomotest/detail/product_walk.hpp"

namespace tomotest {

using detail::for_each_product;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Support cut for multiplier A: A a^2 <= 1 iff (m n)^{2p} <= L_eff^2 / A.
double product_cap(double A, const ModelParams& params) {
  double l_eff = params.normalized ? 1.0 : params.L;
  return std::pow(l_eff * l_eff / A, 0.5 / params.p);
}

double sigma4_unit(const ModelParams& params) {
  return params.normalized ? 1.0 : 1.0 / (kPi * kPi * kPi * kPi);
}

void validate(const ModelParams& params) {
  if (!(params.p > 0.0)) throw std::domain_error("ModelParams: p must be positive");
  if (!(params.L > 0.0)) throw std::domain_error("ModelParams: L must be positive");
}

}  // namespace

JSums j_sums(double A, const ModelParams& params) {
  validate(params);
  if (!(A > 0.0)) throw std::domain_error("j_sums: multiplier must be positive");
  const double l_eff = params.normalized ? 1.0 : params.L;
  const double s4 = sigma4_unit(params);
  const double two_p = 2.0 * params.p;
  JSums out;
  double j2_raw = 0.0;
  for_each_product(product_cap(A, params), [&](long long m, long long n) {
    double a_sq = std::pow(static_cast<double>(m) * static_cast<double>(n), two_p) / (l_eff * l_eff);
    double gap = 1.0 - A * a_sq;
    if (gap <= 0.0) return;
    double s = static_cast<double>(m + n - 1);
    double sigma4 = s4 * s * s;
    out.j1 += sigma4 * gap;
    j2_raw += a_sq * sigma4 * gap;
    out.j0 += sigma4 * gap * gap;
    ++out.support_size;
  });
  out.j2 = A * j2_raw;
  assert(out.support_size == 0 || std::abs((out.j1 - out.j2) - out.j0) <= 1e-12 * out.j1);
  return out;
}

double i_of_a(double A, const ModelParams& params) {
  validate(params);
  if (!(A > 0.0)) throw std::domain_error("i_of_a: multiplier must be positive");
  const double s4 = sigma4_unit(params);
  double acc = 0.0;
  for_each_product(product_cap(A, params), [&](long long m, long long n) {
    double s = static_cast<double>(m + n - 1);
    acc += s4 * s * s;
  });
  return acc;
}

ExtremeSolution solve_extreme(double r, double eps, const ModelParams& params) {
  validate(params);
  if (!(r > 0.0)) throw std::domain_error("solve_extreme: r must be positive");
  if (!(eps > 0.0)) throw std::domain_error("solve_extreme: eps must be positive");

  const double a_min = ellipsoid_coeff(Index{0, 0}, params);
  const double r2_sup = 1.0 / (a_min * a_min);
  const double target = r * r;
  if (target > r2_sup * (1.0 + 1e-12))
    throw InfeasibleRadius("solve_extreme: r^2 = " + std::to_string(target) +
                           " exceeds the ellipsoid reach " + std::to_string(r2_sup));

  // g(A) = A J1 / J2 is strictly increasing with range (0, r2_sup); solve
  // g(A) = r^2 by bisection in log A around the leading-order location
  // A ~ 3 r^2 / (4p + 3).  Expanding the bracket geometrically keeps the
  // enumerated support from ballooning at small p.
  const double a_cap = (1.0 / (a_min * a_min)) * (1.0 - 1e-12);
  auto g = [&](double A) {
    JSums js = j_sums(A, params);
    return js.j2 > 0.0 ? A * js.j1 / js.j2 : r2_sup;
  };
  double lo = std::min(3.0 * target / (4.0 * params.p + 3.0), a_cap);
  double hi = lo;
  for (int k = 0; g(lo) >= target; ++k) {
    if (k > 200) throw SolverFailure("solve_extreme: no lower bracket for the multiplier");
    lo /= 8.0;
  }
  for (int k = 0; g(hi) < target && hi < a_cap; ++k) {
    if (k > 200) throw SolverFailure("solve_extreme: no upper bracket for the multiplier");
    hi = std::min(hi * 8.0, a_cap);
  }
  for (int it = 0; it < 200 && hi - lo > 4.0 * 2.220446049250313e-16 * hi; ++it) {
    double mid = std::sqrt(lo * hi);
    (g(mid) < target ? lo : hi) = mid;
  }

  ExtremeSolution sol;
  sol.r = r;
  sol.eps = eps;
  sol.params = params;
  sol.A = std::sqrt(lo * hi);
  JSums js = j_sums(sol.A, params);
  if (js.empty_support()) throw SolverFailure("solve_extreme: empty support at the solution");
  double residual = std::abs(sol.A * js.j1 / js.j2 - target) / target;
  if (residual > 1e-10)
    throw SolverFailure("solve_extreme: constraint residual " + std::to_string(residual));

  sol.j0 = js.j0;
  sol.j1 = js.j1;
  sol.j2 = js.j2;
  sol.z0_sq = target / js.j1;
  sol.u_eps = std::sqrt(std::pow(r / eps, 4.0) * js.j0 / (2.0 * js.j1 * js.j1));

  const double l_eff = params.normalized ? 1.0 : params.L;
  const double two_p = 2.0 * params.p;
  std::vector<std::pair<Index, double>> profile;
  for_each_product(product_cap(sol.A, params), [&](long long m, long long n) {
    double a_sq = std::pow(static_cast<double>(m) * static_cast<double>(n), two_p) / (l_eff * l_eff);
    double gap = 1.0 - sol.A * a_sq;
    if (gap <= 0.0) return;
    Index nu{static_cast<int>(m - 1), static_cast<int>(n - 1)};
    double sigma_sq = sigma(nu, params);
    sigma_sq *= sigma_sq;
    profile.emplace_back(nu, sol.z0_sq * sigma_sq * gap);
  });
  std::sort(profile.begin(), profile.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  double sum_eta4 = 0.0;
  for (const auto& [nu, eta2] : profile) sum_eta4 += eta2 * eta2;
  double norm = std::sqrt(2.0 * sum_eta4);
  sol.support.reserve(profile.size());
  for (const auto& [nu, eta2] : profile) {
    sol.support.push_back(nu);
    sol.eta_sq.set(nu, eta2);
    double w = eta2 / norm;
    sol.weights.set(nu, w);
    sol.w0 = std::max(sol.w0, w);
  }
  return sol;
}

double asymptotic_u(double r, double eps, const ModelParams& params) {
  validate(params);
  if (!(r > 0.0) || !(eps > 0.0))
    throw std::domain_error("asymptotic_u: r and eps must be positive");
  const double p = params.p;
  const double B = apery_constant();
  double u_sq = std::pow(r, 4.0 + 3.0 / p) / std::pow(eps, 4.0) * (2.0 * p + 3.0) / (2.0 * B) *
                std::pow(3.0 / (4.0 * p + 3.0), 1.0 + 3.0 / (2.0 * p));
  if (!params.normalized)
    u_sq *= std::pow(kPi, 4.0) * std::pow(params.L, -3.0 / p);
  return std::sqrt(u_sq);
}

double separation_rate(double eps, double p) {
  if (!(p > 0.0)) throw std::domain_error("separation_rate: p must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw std::domain_error("separation_rate: need 0 < eps < 1");
  return std::pow(eps, 4.0 * p / (4.0 * p + 3.0));
}

double adaptive_rate(double eps, double p) {
  if (!(p > 0.0)) throw std::domain_error("adaptive_rate: p must be positive");
  if (!(eps > 0.0 && eps < std::exp(-1.0)))
    throw std::domain_error("adaptive_rate: need 0 < eps < 1/e");
  double loglog = std::log(std::log(1.0 / eps));
  return std::pow(eps * std::pow(loglog, 0.25), 4.0 * p / (4.0 * p + 3.0));
}

double apery_constant() {
  static const double value = [] {
    // Direct sum to M plus the Euler-Maclaurin tail 1/(2M^2) - 1/(2M^3) +
    // 1/(4M^4) - ...; at M = 2e5 the truncation error is far below 1e-12.
    const long long M = 200000;
    long double s = 0.0L;
    for (long long m = M; m >= 1; --m) {
      long double md = static_cast<long double>(m);
      s += 1.0L / (md * md * md);
    }
    long double Md = static_cast<long double>(M);
    s += 1.0L / (2.0L * Md * Md) - 1.0L / (2.0L * Md * Md * Md) +
         1.0L / (4.0L * Md * Md * Md * Md);
    return static_cast<double>(s);
  }();
  return value;
}

double w0_check(const ExtremeSolution& sol) {
  double w0 = 0.0;
  for (const auto& [nu, w] : sol.weights.entries()) w0 = std::max(w0, w);
  return w0;
}

}  // namespace tomotest
