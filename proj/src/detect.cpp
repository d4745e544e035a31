#include "tomotest/detect.hpp"

#include <cmath>

#include "json.hpp"
#include "tomotest/extreme.hpp"

namespace tomotest {

double chi2_statistic(const SequenceVector& y, const SequenceVector& weights,
                      double eps) {
  if (!(eps > 0.0)) throw std::domain_error("chi2_statistic: eps must be positive");
  double t = 0.0;
  for (const auto& [nu, w] : weights.entries()) {
    if (w == 0.0) continue;
    if (!y.contains(nu))
      throw std::invalid_argument("chi2_statistic: observation missing at (" +
                                  std::to_string(nu.j) + ", " + std::to_string(nu.l) + ")");
    double z = y.at(nu) / eps;
    t += w * (z * z - 1.0);
  }
  return t;
}

TestVerdict chi2_test(const SequenceVector& y, const SequenceVector& weights,
                      double eps, double threshold) {
  TestVerdict v;
  v.statistic = chi2_statistic(y, weights, eps);
  v.threshold = threshold;
  v.reject = v.statistic > threshold;
  return v;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double np_threshold(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::domain_error("np_threshold: alpha must lie in (0, 1)");
  // Bisection on the CDF; 200 halvings of [-14, 14] reach full precision.
  double lo = -14.0, hi = 14.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < 1.0 - alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double total_error_threshold(double u) { return 0.5 * u; }

double predicted_beta(double alpha, double u) {
  return normal_cdf(np_threshold(alpha) - u);
}

double predicted_gamma(double u) { return 2.0 * normal_cdf(-0.5 * u); }

AdaptiveGrid build_adaptive_grid(double p_min, double p_max, double eps,
                                 double d_scale) {
  if (!(p_min > 0.0) || !(p_max >= p_min))
    throw std::domain_error("build_adaptive_grid: need 0 < p_min <= p_max");
  if (!(d_scale > 0.0)) throw std::domain_error("build_adaptive_grid: d_scale must be positive");
  if (!(eps > 0.0 && eps < std::exp(-1.0)))
    throw std::domain_error("build_adaptive_grid: need 0 < eps < 1/e");

  AdaptiveGrid grid;
  grid.eps = eps;
  grid.d_scale = d_scale;
  double log_inv = std::log(1.0 / eps);
  grid.K = static_cast<int>(std::ceil(log_inv * std::log(log_inv)));
  grid.h_eps = 2.0 * std::sqrt(std::log(static_cast<double>(grid.K)));

  // Arithmetic progression in the rate exponent phi(p) = 4/(4p + 3), from
  // phi(p_max) up to phi(p_min); p_k recovers as 1/phi - 3/4.
  const double lo = 4.0 / (4.0 * p_max + 3.0);
  const double hi = 4.0 / (4.0 * p_min + 3.0);
  const ModelParams normalized{1.0, 1.0, true};
  grid.bands.reserve(grid.K + 1);
  for (int k = 0; k <= grid.K; ++k) {
    double phi = (k == 0) ? lo : (k == grid.K) ? hi : lo + (hi - lo) * k / grid.K;
    AdaptiveBand band;
    band.p = 1.0 / phi - 0.75;
    band.rate = d_scale * adaptive_rate(eps, band.p);
    band.cutoff = 2.0 / band.rate;
    ModelParams band_params = normalized;
    band_params.p = band.p;
    band.indices = indices_below(band.cutoff, band_params);
    if (band.indices.empty())
      throw GridDegenerate("build_adaptive_grid: empty index set at band " + std::to_string(k));
    band.weights.resize(static_cast<Eigen::Index>(band.indices.size()));
    double sigma4_sum = 0.0;
    for (std::size_t i = 0; i < band.indices.size(); ++i) {
      double s2 = static_cast<double>(band.indices[i].degree() + 1);
      band.weights[static_cast<Eigen::Index>(i)] = s2;
      sigma4_sum += s2 * s2;
    }
    band.weights /= std::sqrt(2.0 * sigma4_sum);
    grid.bands.push_back(std::move(band));
  }
  return grid;
}

Eigen::ArrayXd adaptive_statistics(const SequenceVector& y, const AdaptiveGrid& grid) {
  if (!(grid.eps > 0.0)) throw std::domain_error("adaptive_statistics: grid carries no eps");
  Eigen::ArrayXd t(static_cast<Eigen::Index>(grid.bands.size()));
  for (std::size_t k = 0; k < grid.bands.size(); ++k) {
    const AdaptiveBand& band = grid.bands[k];
    double acc = 0.0;
    for (std::size_t i = 0; i < band.indices.size(); ++i) {
      Index nu = band.indices[i];
      if (!y.contains(nu))
        throw std::invalid_argument("adaptive_statistics: observation missing at (" +
                                    std::to_string(nu.j) + ", " + std::to_string(nu.l) + ")");
      double z = y.at(nu) / grid.eps;
      acc += band.weights[static_cast<Eigen::Index>(i)] * (z * z - 1.0);
    }
    t[static_cast<Eigen::Index>(k)] = acc;
  }
  return t;
}

TestVerdict adaptive_test(const SequenceVector& y, const AdaptiveGrid& grid) {
  TestVerdict v;
  v.threshold = grid.h_eps;
  v.statistic = adaptive_statistics(y, grid).maxCoeff();
  v.reject = v.statistic > v.threshold;
  return v;
}

std::string grid_summary(const AdaptiveGrid& grid) {
  nlohmann::json out;
  out["eps"] = grid.eps;
  out["d_scale"] = grid.d_scale;
  out["steps"] = grid.K;
  out["threshold"] = grid.h_eps;
  out["bands"] = nlohmann::json::array();
  for (std::size_t k = 0; k < grid.bands.size(); ++k) {
    const AdaptiveBand& band = grid.bands[k];
    out["bands"].push_back({{"k", k},
                            {"p", band.p},
                            {"rate", band.rate},
                            {"cutoff", band.cutoff},
                            {"indices", band.indices.size()}});
  }
  return out.dump(2);
}

}  // namespace tomotest
