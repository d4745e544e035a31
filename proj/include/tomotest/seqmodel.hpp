#pragma once
// Gaussian sequence model on the lattice: y_nu = eta_nu + eps xi_nu with
// independent standard Gaussian xi_nu, simulated only on an explicit finite
// support.  Also builds the two signal families the experiments drive
// through it: the extreme water-filling signal and the banded random priors
// used for lower-bound diagnostics.

#include <cstdint>
#include <vector>

#include "tomotest/extreme.hpp"
#include "tomotest/lattice.hpp"
#include "tomotest/sequence.hpp"

namespace tomotest {

// One draw of the model restricted to `support`.  Requires eps > 0 and the
// signal's support to be contained in `support`; coordinates outside it are
// not observed.  Noise is keyed by (seed, j, l), so the draw at an index does
// not depend on the order or size of the support.
SequenceVector sample_observation(const SequenceVector& signal,
                                  const std::vector<Index>& support, double eps,
                                  std::uint64_t seed);

// eta_nu = +sqrt(eta~^2_nu) on the solution's support.
SequenceVector extreme_signal(const ExtremeSolution& sol);

// Random sign prior concentrated on the lattice band lo < (j+1)(l+1) <= hi:
// v_nu = z xi_nu sigma_nu with Rademacher signs xi keyed by `seed`.
struct PriorSpec {
  int k = 0;               // band label, carried through diagnostics
  long long band_lo = 0;   // exclusive lower product bound
  long long band_hi = 0;   // inclusive upper product bound
  double z = 0.0;          // amplitude
  std::uint64_t seed = 0;
};

// Chooses z so that sum over the band of z^2 sigma_nu^4 equals 2 r^2, the
// calibration that puts the prior's mean energy at distance r sqrt(2) scale.
// Throws std::domain_error when the band is empty.
PriorSpec make_prior_spec(int k, long long band_lo, long long band_hi, double r,
                          const ModelParams& params, std::uint64_t seed);

SequenceVector prior_signal(const PriorSpec& spec, const ModelParams& params);

// Alternative-class membership: sum a^2 sigma^2 eta^2 <= 1 (ellipsoid) and
// sum sigma^2 eta^2 >= r^2 (distance).  Both sums depend on eta only through
// eta^2, so membership is invariant under sign flips.
struct Membership {
  bool inside = false;
  double ellipsoid_sum = 0.0;  // sum a^2 sigma^2 eta^2, must be <= 1
  double distance_sum = 0.0;   // sum sigma^2 eta^2, must be >= r^2
};

// Tolerance 1e-9 relative on both constraints, covering solver residuals.
Membership membership_check(const SequenceVector& eta, const ModelParams& params,
                            double r);

}  // namespace tomotest
