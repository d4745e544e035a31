#pragma once
// Quadrature oracle for the chord-averaging transform on the unit disk.
// For a function f on the disk and a chord at signed distance u from the
// center with normal direction phi,
//   (R f)(u, phi) = pi / (2 sqrt(1 - u^2)) * integral of f along the chord.
// The cylinder S = [0,1) x [0,2pi) carries the probability-like measure
// mu0 = (2 sqrt(1 - u^2) / pi) du dphi, under which R has the explicit
// singular system tested here.

#include <cstdint>
#include <functional>

#include <Eigen/Core>

#include "tomotest/lattice.hpp"
#include "tomotest/quadrature.hpp"

namespace tomotest {

// Polar evaluation on the unit disk: arguments are (r, theta).
using DiskFunction = std::function<double(double, double)>;
// Evaluation on the cylinder: arguments are (u, phi).
using CylinderFunction = std::function<double(double, double)>;

struct QuadratureSpec {
  int n_radial = 64;   // u-direction nodes
  int n_angular = 128; // phi-direction nodes
  int n_line = 64;     // nodes along each chord
};

// Chord average at one point of S.  Requires |u| < 1.
double radon_transform(const DiskFunction& f, double u, double phi,
                       const QuadratureSpec& q);

// Inner product on S under mu0.
double inner_product_S(const CylinderFunction& g1, const CylinderFunction& g2,
                       const QuadratureSpec& q);

// Inner product on the disk under Lebesgue measure (weight r dr dtheta).
double inner_product_H(const DiskFunction& f1, const DiskFunction& f2,
                       const QuadratureSpec& q);

// Relative L2(S, mu0) norm of R phi_nu - b_nu psi_nu, divided by b_nu.
double svd_residual(Index nu, const QuadratureSpec& q);

// Gram matrix of {phi_nu : j + l <= max_degree} on the disk, in Index order.
Eigen::MatrixXd gram_phi(int max_degree, const QuadratureSpec& q);

// Gram matrix of {psi_nu : j + l <= max_degree} on S under mu0.
Eigen::MatrixXd gram_psi(int max_degree, const QuadratureSpec& q);

// Noisy linear functional of the transform:
//   integral of g * (R f) du dphi + eps * N(0, integral of g^2 du dphi),
// with the Gaussian draw keyed by seed.  Note the plain du dphi weight.
double observe_functional(const DiskFunction& f, const CylinderFunction& g,
                          double eps, std::uint64_t seed,
                          const QuadratureSpec& q);

}  // namespace tomotest
