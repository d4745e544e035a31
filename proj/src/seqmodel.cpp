#include "tomotest/seqmodel.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "tomotest/detail/product_walk.hpp"
#include "tomotest/rng.hpp"

namespace tomotest {

SequenceVector sample_observation(const SequenceVector& signal,
                                  const std::vector<Index>& support, double eps,
                                  std::uint64_t seed) {
  if (!(eps > 0.0)) throw std::domain_error("sample_observation: eps must be positive");
  std::set<Index> observed(support.begin(), support.end());
  for (const auto& [nu, value] : signal.entries())
    if (value != 0.0 && observed.count(nu) == 0)
      throw std::invalid_argument("sample_observation: signal index (" + std::to_string(nu.j) +
                                  ", " + std::to_string(nu.l) + ") outside the observed support");
  SequenceVector y;
  for (Index nu : observed) y.set(nu, signal.at(nu) + eps * rng::gaussian(seed, nu.j, nu.l));
  return y;
}

SequenceVector extreme_signal(const ExtremeSolution& sol) {
  SequenceVector eta;
  for (const auto& [nu, eta2] : sol.eta_sq.entries())
    eta.set(nu, std::sqrt(std::max(eta2, 0.0)));
  return eta;
}

PriorSpec make_prior_spec(int k, long long band_lo, long long band_hi, double r,
                          const ModelParams& params, std::uint64_t seed) {
  if (!(r > 0.0)) throw std::domain_error("make_prior_spec: r must be positive");
  if (band_hi <= band_lo) throw std::domain_error("make_prior_spec: empty band bounds");
  double sigma4_sum = 0.0;
  detail::for_each_product_band(band_lo, band_hi, [&](long long m, long long n) {
    double s2 = sigma(Index{static_cast<int>(m - 1), static_cast<int>(n - 1)}, params);
    s2 *= s2;
    sigma4_sum += s2 * s2;
  });
  if (sigma4_sum <= 0.0) throw std::domain_error("make_prior_spec: band has no lattice points");
  PriorSpec spec;
  spec.k = k;
  spec.band_lo = band_lo;
  spec.band_hi = band_hi;
  spec.z = std::sqrt(2.0 * r * r / sigma4_sum);
  spec.seed = seed;
  return spec;
}

SequenceVector prior_signal(const PriorSpec& spec, const ModelParams& params) {
  SequenceVector v;
  detail::for_each_product_band(spec.band_lo, spec.band_hi, [&](long long m, long long n) {
    Index nu{static_cast<int>(m - 1), static_cast<int>(n - 1)};
    v.set(nu, spec.z * rng::sign(spec.seed, nu.j, nu.l) * sigma(nu, params));
  });
  return v;
}

Membership membership_check(const SequenceVector& eta, const ModelParams& params,
                            double r) {
  if (!(r > 0.0)) throw std::domain_error("membership_check: r must be positive");
  Membership out;
  for (const auto& [nu, value] : eta.entries()) {
    double s2 = sigma(nu, params);
    s2 *= s2;
    double a = ellipsoid_coeff(nu, params);
    double energy = s2 * value * value;
    out.ellipsoid_sum += a * a * energy;
    out.distance_sum += energy;
  }
  out.inside = out.ellipsoid_sum <= 1.0 + 1e-9 &&
               out.distance_sum >= r * r * (1.0 - 1e-9);
  return out;
}

}  // namespace tomotest
