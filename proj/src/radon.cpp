#include "tomotest/radon.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tomotest/rng.hpp"

namespace tomotest {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

void validate(const QuadratureSpec& q) {
  if (q.n_radial < 8 || q.n_angular < 8 || q.n_line < 8)
    throw std::invalid_argument("QuadratureSpec: all node counts must be >= 8");
}

// Product grid on S.  The u-integral uses the substitution u = sin(psi) with
// Gauss-Legendre in psi on [0, pi/2]: smooth integrands become entire in psi
// and the sqrt(1 - u^2) endpoint behavior goes away, so accuracy is spectral.
// The angular direction is a uniform rectangle rule, which integrates the
// trigonometric polynomials appearing here exactly once n_angular exceeds
// twice the degree.
struct SGrid {
  Eigen::ArrayXd u;      // n_radial values in (0, 1)
  Eigen::ArrayXd w_du;   // weights for integration against du
  Eigen::ArrayXd w_mu0;  // weights for integration against mu0
  Eigen::ArrayXd phi;    // n_angular values in [0, 2pi)
  double w_phi = 0.0;    // uniform angular weight
};

SGrid make_sgrid(const QuadratureSpec& q) {
  SGrid grid;
  QuadratureRule rule = gauss_legendre(q.n_radial, 0.0, 0.5 * kPi);
  Eigen::ArrayXd cos_psi = rule.nodes.cos();
  grid.u = rule.nodes.sin();
  grid.w_du = rule.weights * cos_psi;
  grid.w_mu0 = grid.w_du * cos_psi * (2.0 / kPi);
  grid.phi.resize(q.n_angular);
  for (int i = 0; i < q.n_angular; ++i) grid.phi[i] = 2.0 * kPi * i / q.n_angular;
  grid.w_phi = 2.0 * kPi / q.n_angular;
  return grid;
}

}  // namespace

double radon_transform(const DiskFunction& f, double u, double phi,
                       const QuadratureSpec& q) {
  validate(q);
  if (!(std::abs(u) < 1.0))
    throw std::domain_error("radon_transform: chord offset must satisfy |u| < 1");
  const double s = std::sqrt(1.0 - u * u);
  const double cp = std::cos(phi), sp = std::sin(phi);
  QuadratureRule rule = gauss_legendre(q.n_line);
  // The chord endpoints scale with s, and the prefactor pi/(2s) cancels the
  // Jacobian of t = s * x, leaving a stable pi/2 times the unit-interval rule.
  double acc = 0.0;
  for (int i = 0; i < q.n_line; ++i) {
    double t = s * rule.nodes[i];
    double x = u * cp - t * sp;
    double y = u * sp + t * cp;
    double r = std::hypot(x, y);
    double theta = std::atan2(y, x);
    acc += rule.weights[i] * f(r, theta);
  }
  return 0.5 * kPi * acc;
}

double inner_product_S(const CylinderFunction& g1, const CylinderFunction& g2,
                       const QuadratureSpec& q) {
  validate(q);
  SGrid grid = make_sgrid(q);
  double acc = 0.0;
  for (int i = 0; i < q.n_radial; ++i) {
    double row = 0.0;
    for (int k = 0; k < q.n_angular; ++k)
      row += g1(grid.u[i], grid.phi[k]) * g2(grid.u[i], grid.phi[k]);
    acc += grid.w_mu0[i] * row;
  }
  return acc * grid.w_phi;
}

double inner_product_H(const DiskFunction& f1, const DiskFunction& f2,
                       const QuadratureSpec& q) {
  validate(q);
  QuadratureRule radial = gauss_legendre(q.n_radial, 0.0, 1.0);
  double acc = 0.0;
  for (int i = 0; i < q.n_radial; ++i) {
    double r = radial.nodes[i];
    double row = 0.0;
    for (int k = 0; k < q.n_angular; ++k) {
      double theta = 2.0 * kPi * k / q.n_angular;
      row += f1(r, theta) * f2(r, theta);
    }
    acc += radial.weights[i] * r * row;
  }
  return acc * (2.0 * kPi / q.n_angular);
}

double svd_residual(Index nu, const QuadratureSpec& q) {
  validate(q);
  double b = singular_value(nu);
  DiskFunction f = [nu](double r, double theta) { return phi_basis(nu, r, theta); };
  CylinderFunction defect = [&](double u, double phi) {
    return radon_transform(f, u, phi, q) - b * psi_basis(nu, u, phi);
  };
  double norm_sq = inner_product_S(defect, defect, q);
  return std::sqrt(std::max(norm_sq, 0.0)) / b;
}

namespace {

Eigen::MatrixXd gram_from_values(const Eigen::MatrixXd& values, const Eigen::VectorXd& weights) {
  return values.transpose() * weights.asDiagonal() * values;
}

}  // namespace

Eigen::MatrixXd gram_phi(int max_degree, const QuadratureSpec& q) {
  validate(q);
  std::vector<Index> indices;
  for (int d = 0; d <= max_degree; ++d)
    for (int j = 0; j <= d; ++j) indices.push_back(Index{j, d - j});
  QuadratureRule radial = gauss_legendre(q.n_radial, 0.0, 1.0);
  const auto n_pts = static_cast<Eigen::Index>(q.n_radial) * q.n_angular;
  Eigen::MatrixXd values(n_pts, static_cast<Eigen::Index>(indices.size()));
  Eigen::VectorXd weights(n_pts);
  for (int i = 0; i < q.n_radial; ++i)
    for (int k = 0; k < q.n_angular; ++k) {
      Eigen::Index row = static_cast<Eigen::Index>(i) * q.n_angular + k;
      double r = radial.nodes[i];
      double theta = 2.0 * kPi * k / q.n_angular;
      weights[row] = radial.weights[i] * r * (2.0 * kPi / q.n_angular);
      for (std::size_t c = 0; c < indices.size(); ++c)
        values(row, static_cast<Eigen::Index>(c)) = phi_basis(indices[c], r, theta);
    }
  return gram_from_values(values, weights);
}

Eigen::MatrixXd gram_psi(int max_degree, const QuadratureSpec& q) {
  validate(q);
  std::vector<Index> indices;
  for (int d = 0; d <= max_degree; ++d)
    for (int j = 0; j <= d; ++j) indices.push_back(Index{j, d - j});
  SGrid grid = make_sgrid(q);
  const auto n_pts = static_cast<Eigen::Index>(q.n_radial) * q.n_angular;
  Eigen::MatrixXd values(n_pts, static_cast<Eigen::Index>(indices.size()));
  Eigen::VectorXd weights(n_pts);
  for (int i = 0; i < q.n_radial; ++i)
    for (int k = 0; k < q.n_angular; ++k) {
      Eigen::Index row = static_cast<Eigen::Index>(i) * q.n_angular + k;
      weights[row] = grid.w_mu0[i] * grid.w_phi;
      for (std::size_t c = 0; c < indices.size(); ++c)
        values(row, static_cast<Eigen::Index>(c)) = psi_basis(indices[c], grid.u[i], grid.phi[k]);
    }
  return gram_from_values(values, weights);
}

double observe_functional(const DiskFunction& f, const CylinderFunction& g,
                          double eps, std::uint64_t seed,
                          const QuadratureSpec& q) {
  validate(q);
  if (!(eps >= 0.0)) throw std::domain_error("observe_functional: eps must be nonnegative");
  SGrid grid = make_sgrid(q);
  double mean = 0.0, g_norm_sq = 0.0;
  for (int i = 0; i < q.n_radial; ++i) {
    double row_mean = 0.0, row_norm = 0.0;
    for (int k = 0; k < q.n_angular; ++k) {
      double gv = g(grid.u[i], grid.phi[k]);
      row_mean += gv * radon_transform(f, grid.u[i], grid.phi[k], q);
      row_norm += gv * gv;
    }
    mean += grid.w_du[i] * row_mean;
    g_norm_sq += grid.w_du[i] * row_norm;
  }
  mean *= grid.w_phi;
  g_norm_sq *= grid.w_phi;
  return mean + eps * std::sqrt(std::max(g_norm_sq, 0.0)) * rng::gaussian(seed, 0, 0);
}

}  // namespace tomotest
