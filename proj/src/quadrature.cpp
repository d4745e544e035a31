#include "tomotest/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace tomotest {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::domain_error("gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double pi = 3.141592653589793238462643383279502884;
  // Roots come in +/- pairs; solve the upper half and mirror.
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule = gauss_legendre(n);
  double half = 0.5 * (b - a);
  rule.nodes = a + half * (rule.nodes + 1.0);
  rule.weights *= half;
  return rule;
}

}  // namespace tomotest
