#pragma once
// Index lattice for the disk SVD: double indices nu = (j,l) in the quadrant,
// operator singular values, ellipsoid coefficients, and the Zernike/Chebyshev
// orthonormal bases on the disk and on the chord cylinder.

#include <vector>

namespace tomotest {

struct Index {
  int j = 0;
  int l = 0;
  int degree() const { return j + l; }
};

// Deterministic enumeration order: by degree j+l, then by j.  Every sum,
// listing, and serialization in the library follows this order.
inline bool operator<(Index a, Index b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  return a.j < b.j;
}
inline bool operator==(Index a, Index b) { return a.j == b.j && a.l == b.l; }
inline bool operator!=(Index a, Index b) { return !(a == b); }

struct ModelParams {
  double p = 1.0;           // smoothness exponent of the ellipsoid
  double L = 1.0;           // ellipsoid scale
  bool normalized = false;  // true drops the L^{-1} and pi^{-1} unit factors
};

// b_nu = pi (j+l+1)^{-1/2}, independent of the unit system.
double singular_value(Index nu);

// sigma_nu = (j+l+1)^{1/2} in normalized units, 1/b_nu in physical units.
double sigma(Index nu, const ModelParams& params);

// a_nu = (j+1)^p (l+1)^p in normalized units, with a further L^{-1} factor in
// physical units.
double ellipsoid_coeff(Index nu, const ModelParams& params);

// Zernike radial polynomial Z_a^b(r) = r^b P_k^{(0,b)}(2r^2 - 1), k = (a-b)/2,
// normalized so that Z_a^a(r) = r^a and int_0^1 Z_a^b(r)^2 r dr = 1/(2(a+1)).
// Requires 0 <= b <= a with a - b even.
double zernike_radial(int a, int b, double r);

// Chebyshev polynomial of the second kind, U_m(cos t) = sin((m+1)t)/sin t,
// by the stable three-term recurrence.
double chebyshev_u(int m, double u);

// Real orthonormal basis of L2 on the unit disk under Lebesgue measure:
//   pi^{-1/2} (j+l+1)^{1/2} Z_{j+l}^{|j-l|}(r) * angular factor,
// where the angular factor is sqrt2 cos((j-l)theta) for j > l, 1 for j = l,
// and sqrt2 sin((l-j)theta) for j < l.
double phi_basis(Index nu, double r, double theta);

// Matching orthonormal basis on the cylinder S = [0,1) x [0,2pi) under the
// measure (2 sqrt(1-u^2)/pi) du dphi, with radial factor pi^{-1/2} U_{j+l}(u).
double psi_basis(Index nu, double u, double phi);

// All nu with ellipsoid_coeff(nu) <= c, in the deterministic order.  The list
// is finite because the coefficients grow with the index.
std::vector<Index> indices_below(double c, const ModelParams& params);

// Strict variant (a_nu < c); the water-filling support is the strict set at
// c = A^{-1/2}.
std::vector<Index> indices_strictly_below(double c, const ModelParams& params);

}  // namespace tomotest
