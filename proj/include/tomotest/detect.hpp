#pragma once
// Weighted chi-square detection.  The single test centers and normalizes the
// squared observations, t = sum w_nu ((y_nu/eps)^2 - 1), which is standard
// Gaussian under the null to leading order once no single weight dominates.
// The adaptive family runs one such test per smoothness band over a grid
// calibrated so its union keeps near-minimax power without knowing p.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tomotest/lattice.hpp"
#include "tomotest/sequence.hpp"

namespace tomotest {

struct GridDegenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TestVerdict {
  double statistic = 0.0;
  double threshold = 0.0;
  bool reject = false;  // strict: statistic > threshold
};

// t = sum over weighted indices of w_nu ((y_nu / eps)^2 - 1).  Every index
// carrying a nonzero weight must be present in y.
double chi2_statistic(const SequenceVector& y, const SequenceVector& weights,
                      double eps);

TestVerdict chi2_test(const SequenceVector& y, const SequenceVector& weights,
                      double eps, double threshold);

// Standard normal CDF and its inverse.
double normal_cdf(double x);
// H with P(N(0,1) > H) = alpha; requires 0 < alpha < 1.
double np_threshold(double alpha);

// Threshold u/2 equalizes the two error terms of the total error.
double total_error_threshold(double u);

// Gaussian limit predictions: type II error of the level-alpha test at
// detectability u, and minimal total error 2 Phi(-u/2).
double predicted_beta(double alpha, double u);
double predicted_gamma(double u);

struct AdaptiveBand {
  double p = 0.0;       // smoothness this band targets
  double rate = 0.0;    // scaled boundary radius r_eps(p)
  double cutoff = 0.0;  // coefficient cutoff c = 2 / rate
  std::vector<Index> indices;  // {a_nu <= c} in normalized units
  Eigen::ArrayXd weights;      // sigma^2 / sqrt(2 sum sigma^4), aligned
};

struct AdaptiveGrid {
  double eps = 0.0;
  double d_scale = 1.0;
  int K = 0;            // progression steps; bands are k = 0..K
  double h_eps = 0.0;   // rejection threshold 2 sqrt(log K)
  std::vector<AdaptiveBand> bands;
};

// Grid over [p_min, p_max]: K = ceil(log(1/eps) loglog(1/eps)) steps, with
// the rate exponents 4p/(4p+3) placed on an arithmetic progression between
// the endpoint values (endpoints exact).  p_min = p_max is allowed and
// yields K+1 copies of one band.  Throws GridDegenerate when a band's index
// set comes out empty, std::domain_error on parameter violations.
AdaptiveGrid build_adaptive_grid(double p_min, double p_max, double eps,
                                 double d_scale = 1.0);

// Band statistics t_k, in band order.
Eigen::ArrayXd adaptive_statistics(const SequenceVector& y, const AdaptiveGrid& grid);

// Rejects when max_k t_k > h_eps (strict).
TestVerdict adaptive_test(const SequenceVector& y, const AdaptiveGrid& grid);

// JSON description of the grid: eps, K, threshold, and per band the target
// p, rate, cutoff, and index count.
std::string grid_summary(const AdaptiveGrid& grid);

}  // namespace tomotest
