#pragma once
// Gauss-Legendre rules used by the disk and cylinder integrators.  Nodes are
// found by Newton iteration on the Legendre recurrence; for the sizes used
// here (n <= a few hundred) this is accurate to full double precision.

#include <Eigen/Core>

namespace tomotest {

struct QuadratureRule {
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;
};

// n-point rule on [-1, 1], exact for polynomials of degree 2n - 1.
QuadratureRule gauss_legendre(int n);

// Affine image of the rule on [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

}  // namespace tomotest
