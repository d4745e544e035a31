#include "tomotest/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tomotest {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Enumerates all integer pairs (m, n) >= 1 with m * n <= cap and returns them
// as lattice indices (j, l) = (m - 1, n - 1).  The small slack keeps boundary
// rows in: cap is typically (c L)^{1/p} and products like 0.01 * 100 land one
// ulp above an integer, which must still count as "below".
std::vector<Index> enumerate_products(double cap) {
  if (!(cap >= 1.0)) return {};
  double slack = 1e-9 + 8.0 * cap * 2.220446049250313e-16;
  auto m_max = static_cast<long long>(std::floor(cap + slack));
  double estimate = static_cast<double>(m_max) * (std::log(static_cast<double>(m_max)) + 1.0);
  if (estimate > 4e7)
    throw std::length_error("index enumeration too large: row bound " + std::to_string(m_max));
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(estimate) + 16);
  for (long long m = 1; m <= m_max; ++m) {
    auto n_max = static_cast<long long>(std::floor(cap / static_cast<double>(m) + slack));
    for (long long n = 1; n <= n_max; ++n)
      out.push_back(Index{static_cast<int>(m - 1), static_cast<int>(n - 1)});
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

double singular_value(Index nu) {
  return kPi / std::sqrt(static_cast<double>(nu.degree() + 1));
}

double sigma(Index nu, const ModelParams& params) {
  double s = std::sqrt(static_cast<double>(nu.degree() + 1));
  return params.normalized ? s : s / kPi;
}

double ellipsoid_coeff(Index nu, const ModelParams& params) {
  double a = std::pow(static_cast<double>(nu.j + 1) * static_cast<double>(nu.l + 1), params.p);
  return params.normalized ? a : a / params.L;
}

double zernike_radial(int a, int b, double r) {
  if (b < 0 || b > a || ((a - b) % 2) != 0)
    throw std::domain_error("zernike_radial: need 0 <= b <= a with a - b even");
  const int k = (a - b) / 2;
  const double x = 2.0 * r * r - 1.0;
  // Jacobi P_k^{(0,b)}(x).  The generic recurrence degenerates at n = 1 when
  // b = 0, so P_1 is seeded explicitly.
  double poly = 1.0;
  if (k >= 1) {
    double prev = 1.0;
    double cur = 0.5 * (-b + (b + 2.0) * x);
    for (int n = 2; n <= k; ++n) {
      double an = 2.0 * n * (n + b) * (2.0 * n + b - 2.0);
      double bn = (2.0 * n + b - 1.0) *
                  ((2.0 * n + b) * (2.0 * n + b - 2.0) * x - static_cast<double>(b) * b);
      double cn = 2.0 * (n - 1.0) * (n + b - 1.0) * (2.0 * n + b);
      double next = (bn * cur - cn * prev) / an;
      prev = cur;
      cur = next;
    }
    poly = cur;
  }
  return std::pow(r, b) * poly;
}

double chebyshev_u(int m, double u) {
  if (m < 0) throw std::domain_error("chebyshev_u: negative order");
  if (std::abs(u) > 1.0) throw std::domain_error("chebyshev_u: argument outside [-1, 1]");
  double prev = 1.0;
  if (m == 0) return prev;
  double cur = 2.0 * u;
  for (int i = 2; i <= m; ++i) {
    double next = 2.0 * u * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double phi_basis(Index nu, double r, double theta) {
  double radial = zernike_radial(nu.degree(), std::abs(nu.j - nu.l), r);
  double scale = std::sqrt(static_cast<double>(nu.degree() + 1) / kPi);
  if (nu.j == nu.l) return scale * radial;
  double angle = static_cast<double>(std::abs(nu.j - nu.l)) * theta;
  double angular = (nu.j > nu.l) ? std::cos(angle) : std::sin(angle);
  return scale * radial * std::sqrt(2.0) * angular;
}

double psi_basis(Index nu, double u, double phi) {
  double radial = chebyshev_u(nu.degree(), u);
  double scale = std::sqrt(1.0 / kPi);
  if (nu.j == nu.l) return scale * radial;
  double angle = static_cast<double>(std::abs(nu.j - nu.l)) * phi;
  double angular = (nu.j > nu.l) ? std::cos(angle) : std::sin(angle);
  return scale * radial * std::sqrt(2.0) * angular;
}

std::vector<Index> indices_below(double c, const ModelParams& params) {
  if (!(c > 0.0)) throw std::domain_error("indices_below: threshold must be positive");
  if (!(params.p > 0.0)) throw std::domain_error("indices_below: p must be positive");
  double l_eff = params.normalized ? 1.0 : params.L;
  double cap = std::pow(c * l_eff, 1.0 / params.p);
  return enumerate_products(cap);
}

std::vector<Index> indices_strictly_below(double c, const ModelParams& params) {
  if (!(c > 0.0)) throw std::domain_error("indices_strictly_below: threshold must be positive");
  if (!(params.p > 0.0)) throw std::domain_error("indices_strictly_below: p must be positive");
  double l_eff = params.normalized ? 1.0 : params.L;
  double cap = std::pow(c * l_eff, 1.0 / params.p);
  // Products exactly at the boundary are excluded; "exactly" is judged with
  // the same slack the inclusive variant uses, so the two sets differ by the
  // boundary row and nothing else.
  double slack = 1e-9 + 8.0 * cap * 2.220446049250313e-16;
  double nearest = std::floor(cap + slack);
  double strict_cap = (std::abs(cap - nearest) <= slack) ? nearest - 1.0 : cap;
  return enumerate_products(strict_cap);
}

}  // namespace tomotest
