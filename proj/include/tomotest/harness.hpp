#pragma once
// Monte Carlo experiment harness: error-rate estimation for the chi-square
// and adaptive tests, the sharp-asymptotics and rate-sweep studies, adaptive
// power with its scale calibration, the prior-based indistinguishability
// diagnostic, and the deterministic verification tables.  Every experiment
// is a pure function of its spec, so runs reproduce bit for bit.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tomotest/detect.hpp"
#include "tomotest/extreme.hpp"
#include "tomotest/lattice.hpp"
#include "tomotest/radon.hpp"
#include "tomotest/sequence.hpp"
#include "tomotest/table.hpp"

namespace tomotest {

struct ExperimentSpec {
  ModelParams params;
  double eps = 1e-3;
  double r = 0.01;
  double alpha = 0.05;
  int n_trials = 1000;  // at least 100 for any error-rate estimate
  std::uint64_t master_seed = 12345;
  std::string mode = "sharp-asymptotics";
};

struct ErrorEstimate {
  double rate = 0.0;
  double std_err = 0.0;  // sqrt(rate (1 - rate) / n_trials)
  int n_trials = 0;
};

using RejectRule = std::function<bool(const SequenceVector&)>;

// Null rejection rate of an arbitrary rule over the given support.
ErrorEstimate estimate_alpha(const RejectRule& reject,
                             const std::vector<Index>& support,
                             const ExperimentSpec& spec);

// Acceptance rate at a fixed signal, which must belong to the alternative
// class of the spec (ellipsoid and distance constraints); refuses otherwise.
ErrorEstimate estimate_beta_at(const RejectRule& reject,
                               const SequenceVector& signal,
                               const std::vector<Index>& support,
                               const ExperimentSpec& spec);

// eps making the solved detectability u_eps equal u_target at radius r; uses
// the exact eps^{-2} scaling of u.
double eps_for_target_u(double r, const ModelParams& params, double u_target);

// Solves the extreme problem at (r, eps) and measures empirical error rates
// of the optimal test at the Neyman-Pearson threshold for spec.alpha and at
// the total-error threshold u/2, against their Gaussian-limit predictions.
// Warns on stderr when w0 > 0.2, where the Gaussian limit is unreliable.
Table sharp_asymptotics_experiment(const ExperimentSpec& spec);

// Total error along r = c * separation_rate(eps, p) for each c; provenance
// records the fitted log-log slope of u against c.
Table rate_sweep(const ExperimentSpec& spec, const std::vector<double>& c_values);

// Adaptive test over [p_min, p_max]: null rejection rate, then type II rate
// at the extreme signal of each true smoothness in p_true, all in normalized
// units at radius d_scale * adaptive_rate(eps, p).
Table adaptive_power_experiment(const ExperimentSpec& spec, double p_min,
                                double p_max, double d_scale,
                                const std::vector<double>& p_true);

// Smallest scale D from 1 by factors of 5/4 such that for every true p the
// best matched band mean response reaches margin * h_eps.
double calibrate_d_scale(double eps, double p_min, double p_max,
                         const std::vector<double>& p_true, double margin = 2.0);

struct LowerBoundResult {
  double bound = 0.0;  // small value certifies indistinguishability
  int bands = 0;
  Table table;  // per-band diagnostics
};

// Chi-square divergence diagnostic for the banded-prior mixture at radius
// radius_scale times the adaptive boundary; a band whose exponent overflows
// reports an infinite contribution.
LowerBoundResult lower_bound_diagnostic(double eps, double p_min, double p_max,
                                        double radius_scale);

// Water-filling sums against their leading-order closed forms on a grid of
// (p, A), in normalized units.
Table asymptotics_table(const std::vector<double>& p_values,
                        const std::vector<double>& a_values);

struct SvdVerifyResult {
  Table table;  // one row per index: j, l, degree, singular value, residual
  double gram_phi_dev = 0.0;  // max deviation from identity
  double gram_psi_dev = 0.0;
};

SvdVerifyResult svd_verify(int max_degree, const QuadratureSpec& q);

// Null-distribution calibration of the optimal statistic at the spec's
// solved weights: mean, variance, and the exponential moment E exp(h t)
// against its Gaussian-limit and exact finite-sample values.
Table null_calibration(const ExperimentSpec& spec);

// Least-squares slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

// Flat "key=value" configuration file: one pair per line, '#' comments and
// blank lines ignored, whitespace around key and value trimmed.
std::vector<std::pair<std::string, std::string>> read_flat_config(
    const std::string& path);

}  // namespace tomotest
