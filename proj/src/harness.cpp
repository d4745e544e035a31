#include "tomotest/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tomotest/detail/product_walk.hpp"
#include "tomotest/rng.hpp"
#include "tomotest/seqmodel.hpp"

namespace tomotest {

namespace {

// Distinct sub-streams of the master seed, so the null and alternative runs
// of one experiment never share noise.
constexpr std::uint64_t kNullStream = 0x6e756c6cull;
constexpr std::uint64_t kAltStream = 0x616c7431ull;

void require_trials(const ExperimentSpec& spec) {
  if (spec.n_trials < 100)
    throw std::invalid_argument("ExperimentSpec: error estimates need n_trials >= 100");
}

ErrorEstimate make_estimate(long long hits, int n_trials) {
  ErrorEstimate est;
  est.n_trials = n_trials;
  est.rate = static_cast<double>(hits) / n_trials;
  est.std_err = std::sqrt(est.rate * (1.0 - est.rate) / n_trials);
  return est;
}

// Support flattened to arrays: Monte Carlo runs draw z = y/eps directly.
struct FlatProblem {
  std::vector<Index> support;
  Eigen::ArrayXd mean_over_eps;  // signal/eps aligned with support
};

FlatProblem flatten(const std::vector<Index>& support, const SequenceVector& signal,
                    double eps) {
  FlatProblem fp;
  fp.support = support;
  std::sort(fp.support.begin(), fp.support.end());
  fp.support.erase(std::unique(fp.support.begin(), fp.support.end()), fp.support.end());
  fp.mean_over_eps = signal.values_on(fp.support) / eps;
  return fp;
}

// Draws z_nu = mean_nu + xi_nu for trial t of a stream and evaluates the
// census function; used by every Monte Carlo loop below.
template <class Census>
void run_trials(const FlatProblem& fp, int n_trials, std::uint64_t stream,
                Census&& census) {
  const auto n = static_cast<Eigen::Index>(fp.support.size());
  Eigen::ArrayXd z(n);
  for (int t = 0; t < n_trials; ++t) {
    std::uint64_t key = rng::fold(stream, static_cast<std::uint64_t>(t));
    for (Eigen::Index i = 0; i < n; ++i)
      z[i] = fp.mean_over_eps[i] +
             rng::gaussian(key, fp.support[static_cast<std::size_t>(i)].j,
                           fp.support[static_cast<std::size_t>(i)].l);
    census(z);
  }
}

SequenceVector to_sequence(const std::vector<Index>& support, const Eigen::ArrayXd& z,
                           double eps) {
  SequenceVector y;
  for (std::size_t i = 0; i < support.size(); ++i)
    y.set(support[i], eps * z[static_cast<Eigen::Index>(i)]);
  return y;
}

double band_mean_response(const AdaptiveGrid& grid, const ExtremeSolution& sol) {
  // Mean of the matched band statistic under the signal: for band k,
  // E t_k = eps^{-2} sum over C_k of w_{nu,k} eta~_nu^2.
  double best = 0.0;
  for (const AdaptiveBand& band : grid.bands) {
    double h = 0.0;
    for (std::size_t i = 0; i < band.indices.size(); ++i)
      h += band.weights[static_cast<Eigen::Index>(i)] * sol.eta_sq.at(band.indices[i]);
    best = std::max(best, h / (grid.eps * grid.eps));
  }
  return best;
}

std::string describe(const ExperimentSpec& spec) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%s p=%.17g L=%.17g norm=%d eps=%.17g r=%.17g alpha=%.17g n=%d",
                spec.mode.c_str(), spec.params.p, spec.params.L, spec.params.normalized ? 1 : 0,
                spec.eps, spec.r, spec.alpha, spec.n_trials);
  return buf;
}

void push_param_provenance(Table& table, const ExperimentSpec& spec) {
  char buf[64];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    table.provenance.emplace_back(key, buf);
  };
  table.provenance.emplace_back("mode", spec.mode);
  put("p", spec.params.p);
  put("L", spec.params.L);
  table.provenance.emplace_back("normalized", spec.params.normalized ? "1" : "0");
  put("eps", spec.eps);
}

}  // namespace

ErrorEstimate estimate_alpha(const RejectRule& reject,
                             const std::vector<Index>& support,
                             const ExperimentSpec& spec) {
  require_trials(spec);
  FlatProblem fp = flatten(support, SequenceVector{}, spec.eps);
  long long hits = 0;
  run_trials(fp, spec.n_trials, rng::fold(spec.master_seed, kNullStream),
             [&](const Eigen::ArrayXd& z) { hits += reject(to_sequence(fp.support, z, spec.eps)); });
  return make_estimate(hits, spec.n_trials);
}

ErrorEstimate estimate_beta_at(const RejectRule& reject,
                               const SequenceVector& signal,
                               const std::vector<Index>& support,
                               const ExperimentSpec& spec) {
  require_trials(spec);
  Membership member = membership_check(signal, spec.params, spec.r);
  if (!member.inside) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "estimate_beta_at: signal outside the alternative (ellipsoid %.6g, distance %.6g"
                  " vs r^2 %.6g)",
                  member.ellipsoid_sum, member.distance_sum, spec.r * spec.r);
    throw std::invalid_argument(buf);
  }
  FlatProblem fp = flatten(support, signal, spec.eps);
  for (const auto& [nu, value] : signal.entries())
    if (value != 0.0 && !std::binary_search(fp.support.begin(), fp.support.end(), nu))
      throw std::invalid_argument("estimate_beta_at: signal support not observed");
  long long accepts = 0;
  run_trials(fp, spec.n_trials, rng::fold(spec.master_seed, kAltStream),
             [&](const Eigen::ArrayXd& z) {
               accepts += !reject(to_sequence(fp.support, z, spec.eps));
             });
  return make_estimate(accepts, spec.n_trials);
}

double eps_for_target_u(double r, const ModelParams& params, double u_target) {
  if (!(u_target > 0.0)) throw std::domain_error("eps_for_target_u: target must be positive");
  ExtremeSolution sol = solve_extreme(r, 1.0, params);
  // u scales exactly as eps^{-2} at fixed r.
  return std::sqrt(sol.u_eps / u_target);
}

Table sharp_asymptotics_experiment(const ExperimentSpec& spec) {
  require_trials(spec);
  ExtremeSolution sol = solve_extreme(spec.r, spec.eps, spec.params);
  if (sol.w0 > 0.2)
    std::fprintf(stderr,
                 "warning: dominant weight w0 = %.3f > 0.2, Gaussian limit unreliable at this "
                 "radius\n",
                 sol.w0);

  FlatProblem fp = flatten(sol.support, SequenceVector{}, spec.eps);
  Eigen::ArrayXd w = sol.weights.values_on(fp.support);
  const double h_np = np_threshold(spec.alpha);
  const double h_half = total_error_threshold(sol.u_eps);
  auto stat = [&](const Eigen::ArrayXd& z) { return ((z.square() - 1.0) * w).sum(); };

  long long null_np = 0, null_half = 0;
  run_trials(fp, spec.n_trials, rng::fold(spec.master_seed, kNullStream),
             [&](const Eigen::ArrayXd& z) {
               double t = stat(z);
               null_np += t > h_np;
               null_half += t > h_half;
             });
  FlatProblem fp_alt = fp;
  fp_alt.mean_over_eps = extreme_signal(sol).values_on(fp.support) / spec.eps;
  long long acc_np = 0, acc_half = 0;
  run_trials(fp_alt, spec.n_trials, rng::fold(spec.master_seed, kAltStream),
             [&](const Eigen::ArrayXd& z) {
               double t = stat(z);
               acc_np += !(t > h_np);
               acc_half += !(t > h_half);
             });

  ErrorEstimate a_np = make_estimate(null_np, spec.n_trials);
  ErrorEstimate b_np = make_estimate(acc_np, spec.n_trials);
  ErrorEstimate a_half = make_estimate(null_half, spec.n_trials);
  ErrorEstimate b_half = make_estimate(acc_half, spec.n_trials);

  Table table;
  table.columns = {"u_eps",         "w0",           "support",      "alpha_np",
                   "alpha_np_se",   "beta_np",      "beta_np_se",   "alpha_half",
                   "alpha_half_se", "beta_half",    "beta_half_se", "gamma",
                   "gamma_se",      "predicted_beta", "predicted_gamma"};
  table.rows = {{sol.u_eps, sol.w0, static_cast<double>(sol.support.size()), a_np.rate,
                 a_np.std_err, b_np.rate, b_np.std_err, a_half.rate, a_half.std_err, b_half.rate,
                 b_half.std_err, a_half.rate + b_half.rate,
                 std::hypot(a_half.std_err, b_half.std_err),
                 predicted_beta(spec.alpha, sol.u_eps), predicted_gamma(sol.u_eps)}};
  push_param_provenance(table, spec);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", spec.r);
  table.provenance.emplace_back("r", buf);
  stamp_provenance(table, describe(spec), spec.master_seed);
  return table;
}

Table rate_sweep(const ExperimentSpec& spec, const std::vector<double>& c_values) {
  require_trials(spec);
  if (c_values.empty()) throw std::invalid_argument("rate_sweep: need at least one scale");
  Table table;
  table.columns = {"c",     "r",        "u_eps", "w0",       "support",
                   "gamma", "gamma_se", "alpha_half", "beta_half", "predicted_gamma"};
  std::vector<double> log_c, log_u;
  const double rate = separation_rate(spec.eps, spec.params.p);
  for (std::size_t ci = 0; ci < c_values.size(); ++ci) {
    double c = c_values[ci];
    if (!(c > 0.0)) throw std::invalid_argument("rate_sweep: scales must be positive");
    ExperimentSpec local = spec;
    local.r = c * rate;
    local.master_seed = rng::fold(spec.master_seed, static_cast<std::uint64_t>(ci));
    ExtremeSolution sol = solve_extreme(local.r, local.eps, local.params);
    FlatProblem fp = flatten(sol.support, SequenceVector{}, local.eps);
    Eigen::ArrayXd w = sol.weights.values_on(fp.support);
    const double h_half = total_error_threshold(sol.u_eps);
    auto stat = [&](const Eigen::ArrayXd& z) { return ((z.square() - 1.0) * w).sum(); };
    long long null_hits = 0, accepts = 0;
    run_trials(fp, local.n_trials, rng::fold(local.master_seed, kNullStream),
               [&](const Eigen::ArrayXd& z) { null_hits += stat(z) > h_half; });
    FlatProblem fp_alt = fp;
    fp_alt.mean_over_eps = extreme_signal(sol).values_on(fp.support) / local.eps;
    run_trials(fp_alt, local.n_trials, rng::fold(local.master_seed, kAltStream),
               [&](const Eigen::ArrayXd& z) { accepts += !(stat(z) > h_half); });
    ErrorEstimate a = make_estimate(null_hits, local.n_trials);
    ErrorEstimate b = make_estimate(accepts, local.n_trials);
    table.rows.push_back({c, local.r, sol.u_eps, sol.w0, static_cast<double>(sol.support.size()),
                          a.rate + b.rate, std::hypot(a.std_err, b.std_err), a.rate, b.rate,
                          predicted_gamma(sol.u_eps)});
    log_c.push_back(std::log(c));
    log_u.push_back(std::log(sol.u_eps));
  }
  push_param_provenance(table, spec);
  char buf[32];
  if (c_values.size() >= 2) {
    std::snprintf(buf, sizeof(buf), "%.12g", fitted_slope(log_c, log_u));
    table.provenance.emplace_back("log_log_slope", buf);
    std::snprintf(buf, sizeof(buf), "%.12g", (4.0 * spec.params.p + 3.0) / (2.0 * spec.params.p));
    table.provenance.emplace_back("predicted_slope", buf);
  }
  stamp_provenance(table, describe(spec), spec.master_seed);
  return table;
}

Table adaptive_power_experiment(const ExperimentSpec& spec, double p_min,
                                double p_max, double d_scale,
                                const std::vector<double>& p_true) {
  require_trials(spec);
  for (double pt : p_true)
    if (!(pt >= p_min && pt <= p_max))
      throw std::invalid_argument("adaptive_power_experiment: p_true outside [p_min, p_max]");
  AdaptiveGrid grid = build_adaptive_grid(p_min, p_max, spec.eps, d_scale);

  // All adaptive machinery lives in normalized units.
  const ModelParams normalized{1.0, 1.0, true};

  std::set<Index> union_set;
  for (const AdaptiveBand& band : grid.bands)
    union_set.insert(band.indices.begin(), band.indices.end());

  // Positions of each band inside a flattened support.
  auto band_positions = [&](const std::vector<Index>& support) {
    std::map<Index, int> pos;
    for (std::size_t i = 0; i < support.size(); ++i) pos[support[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> out(grid.bands.size());
    for (std::size_t k = 0; k < grid.bands.size(); ++k) {
      out[k].reserve(grid.bands[k].indices.size());
      for (Index nu : grid.bands[k].indices) out[k].push_back(pos.at(nu));
    }
    return out;
  };
  auto max_band_stat = [&](const Eigen::ArrayXd& z, const std::vector<std::vector<int>>& pos) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < grid.bands.size(); ++k) {
      double t = 0.0;
      const AdaptiveBand& band = grid.bands[k];
      for (std::size_t i = 0; i < pos[k].size(); ++i) {
        double zi = z[pos[k][i]];
        t += band.weights[static_cast<Eigen::Index>(i)] * (zi * zi - 1.0);
      }
      best = std::max(best, t);
    }
    return best;
  };

  Table table;
  table.columns = {"is_null", "p_true", "r", "band_mean", "rate", "std_err"};

  {
    FlatProblem fp;
    fp.support.assign(union_set.begin(), union_set.end());
    fp.mean_over_eps = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(fp.support.size()));
    auto pos = band_positions(fp.support);
    long long hits = 0;
    run_trials(fp, spec.n_trials, rng::fold(spec.master_seed, kNullStream),
               [&](const Eigen::ArrayXd& z) { hits += max_band_stat(z, pos) > grid.h_eps; });
    ErrorEstimate a = make_estimate(hits, spec.n_trials);
    table.rows.push_back({1.0, 0.0, 0.0, 0.0, a.rate, a.std_err});
  }

  for (std::size_t ti = 0; ti < p_true.size(); ++ti) {
    double pt = p_true[ti];
    ModelParams signal_params = normalized;
    signal_params.p = pt;
    double r_true = d_scale * adaptive_rate(spec.eps, pt);
    ExtremeSolution sol = solve_extreme(r_true, spec.eps, signal_params);
    std::set<Index> full = union_set;
    full.insert(sol.support.begin(), sol.support.end());
    FlatProblem fp;
    fp.support.assign(full.begin(), full.end());
    fp.mean_over_eps = extreme_signal(sol).values_on(fp.support) / spec.eps;
    auto pos = band_positions(fp.support);
    long long accepts = 0;
    run_trials(fp, spec.n_trials,
               rng::fold(rng::fold(spec.master_seed, kAltStream), static_cast<std::uint64_t>(ti)),
               [&](const Eigen::ArrayXd& z) { accepts += !(max_band_stat(z, pos) > grid.h_eps); });
    ErrorEstimate b = make_estimate(accepts, spec.n_trials);
    table.rows.push_back({0.0, pt, r_true, band_mean_response(grid, sol), b.rate, b.std_err});
  }

  push_param_provenance(table, spec);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.12g", d_scale);
  table.provenance.emplace_back("d_scale", buf);
  std::snprintf(buf, sizeof(buf), "%d", grid.K);
  table.provenance.emplace_back("grid_steps", buf);
  std::snprintf(buf, sizeof(buf), "%.12g", grid.h_eps);
  table.provenance.emplace_back("threshold", buf);
  stamp_provenance(table, describe(spec), spec.master_seed);
  return table;
}

double calibrate_d_scale(double eps, double p_min, double p_max,
                         const std::vector<double>& p_true, double margin) {
  if (p_true.empty()) throw std::invalid_argument("calibrate_d_scale: need target smoothnesses");
  const ModelParams normalized{1.0, 1.0, true};
  for (double d = 1.0; d <= 64.0 * (1.0 + 1e-9); d *= 1.25) {
    AdaptiveGrid grid = build_adaptive_grid(p_min, p_max, eps, d);
    bool enough = true;
    for (double pt : p_true) {
      ModelParams signal_params = normalized;
      signal_params.p = pt;
      double r_true = d * adaptive_rate(eps, pt);
      if (r_true >= 1.0) {  // normalized ellipsoid reach
        enough = false;
        break;
      }
      ExtremeSolution sol = solve_extreme(r_true, eps, signal_params);
      if (band_mean_response(grid, sol) < margin * grid.h_eps) {
        enough = false;
        break;
      }
    }
    if (enough) return d;
  }
  throw SolverFailure("calibrate_d_scale: no scale up to 64 meets the margin");
}

LowerBoundResult lower_bound_diagnostic(double eps, double p_min, double p_max,
                                        double radius_scale) {
  if (!(p_min > 0.0) || !(p_max >= p_min))
    throw std::domain_error("lower_bound_diagnostic: need 0 < p_min <= p_max");
  if (!(eps > 0.0 && eps < std::exp(-1.0)))
    throw std::domain_error("lower_bound_diagnostic: need 0 < eps < 1/e");
  if (!(radius_scale > 0.0))
    throw std::domain_error("lower_bound_diagnostic: radius scale must be positive");

  const double B = apery_constant();
  const double log_inv = std::log(1.0 / eps);
  const double loglog = std::log(log_inv);
  const double lo = 4.0 / (4.0 * p_max + 3.0);
  const double hi = 4.0 / (4.0 * p_min + 3.0);
  // Band width in the exponent is log 2 / log(1/eps): adjacent cutoffs T_k
  // then differ by about a factor of 2.
  const double delta = std::log(2.0) / log_inv;
  const int K = std::max(1, static_cast<int>(std::ceil((hi - lo) / delta - 1e-12)));

  auto cutoff = [&](double p, double r) {
    return static_cast<long long>(std::ceil(std::pow(2.0 * r, -1.0 / p) - 1e-9));
  };
  auto band_radius = [&](double p) {
    // Sharp constant in front of the loglog term; the band construction is
    // honest only with it in place.
    double d = (2.0 * B / (2.0 * p + 3.0)) * std::pow((4.0 * p + 3.0) / 3.0,
                                                      (2.0 * p + 3.0) / (2.0 * p));
    double phi = 4.0 * p / (4.0 * p + 3.0);
    return radius_scale * std::pow(eps * std::pow(d * loglog, 0.25), phi);
  };

  LowerBoundResult result;
  result.table.columns = {"k", "p", "r", "t_lo", "t_hi", "points", "z_sq", "exponent", "term"};
  double p0 = 1.0 / lo - 0.75;
  long long t_prev = cutoff(p0, band_radius(p0));
  double total = 0.0;
  for (int k = 1; k <= K; ++k) {
    double phi = (k == K) ? hi : lo + (hi - lo) * k / K;
    double p = 1.0 / phi - 0.75;
    double r = band_radius(p);
    long long t_k = cutoff(p, r);
    double s4 = 0.0;
    long long points = 0;
    if (t_k > t_prev)
      detail::for_each_product_band(t_prev, t_k, [&](long long m, long long n) {
        double s = static_cast<double>(m + n - 1);
        s4 += s * s;
        ++points;
      });
    double z_sq = 0.0, exponent = 0.0, term = 0.0;
    if (points > 0) {
      z_sq = 2.0 * r * r / s4;
      const double inf = std::numeric_limits<double>::infinity();
      detail::for_each_product_band(t_prev, t_k, [&](long long m, long long n) {
        double x = z_sq * static_cast<double>(m + n - 1) / (2.0 * eps * eps);
        if (x > 350.0) {
          exponent = inf;
          return;
        }
        double sh = std::sinh(x);
        exponent += 2.0 * sh * sh;
      });
      term = exponent <= 700.0 ? std::expm1(exponent) : inf;
    }
    total += term;
    result.table.rows.push_back({static_cast<double>(k), p, r, static_cast<double>(t_prev),
                                 static_cast<double>(t_k), static_cast<double>(points), z_sq,
                                 exponent, term});
    t_prev = std::max(t_prev, t_k);
    ++result.bands;
  }
  result.bound = total / (static_cast<double>(K) * K);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", result.bound);
  result.table.provenance.emplace_back("bound", buf);
  std::snprintf(buf, sizeof(buf), "%.12g", radius_scale);
  result.table.provenance.emplace_back("radius_scale", buf);
  std::snprintf(buf, sizeof(buf), "%.12g", eps);
  result.table.provenance.emplace_back("eps", buf);
  return result;
}

Table asymptotics_table(const std::vector<double>& p_values,
                        const std::vector<double>& a_values) {
  if (p_values.empty() || a_values.empty())
    throw std::invalid_argument("asymptotics_table: empty grid");
  const double B = apery_constant();
  Table table;
  table.columns = {"p",  "A",        "I",  "I_ratio",  "J1", "J1_ratio",
                   "J2", "J2_ratio", "J0", "J0_ratio", "identity_gap"};
  for (double p : p_values)
    for (double A : a_values) {
      ModelParams params{p, 1.0, true};
      double scale = std::pow(A, -1.5 / p);
      double i_val = i_of_a(A, params);
      JSums js = j_sums(A, params);
      double i_pred = (2.0 * B / 3.0) * scale;
      double j1_pred = 4.0 * B * p / (3.0 * (2.0 * p + 3.0)) * scale;
      double j2_pred = 4.0 * B * p / ((4.0 * p + 3.0) * (2.0 * p + 3.0)) * scale;
      double j0_pred = 16.0 * B * p * p / (3.0 * (2.0 * p + 3.0) * (4.0 * p + 3.0)) * scale;
      table.rows.push_back({p, A, i_val, i_val / i_pred, js.j1, js.j1 / j1_pred, js.j2,
                            js.j2 / j2_pred, js.j0, js.j0 / j0_pred, js.j1 - js.j2 - js.j0});
    }
  return table;
}

SvdVerifyResult svd_verify(int max_degree, const QuadratureSpec& q) {
  if (max_degree < 0) throw std::domain_error("svd_verify: negative degree bound");
  SvdVerifyResult result;
  result.table.columns = {"j", "l", "degree", "singular_value", "residual"};
  for (int d = 0; d <= max_degree; ++d)
    for (int j = 0; j <= d; ++j) {
      Index nu{j, d - j};
      result.table.rows.push_back({static_cast<double>(nu.j), static_cast<double>(nu.l),
                                   static_cast<double>(d), singular_value(nu),
                                   svd_residual(nu, q)});
    }
  auto max_dev = [](const Eigen::MatrixXd& g) {
    Eigen::MatrixXd dev = g - Eigen::MatrixXd::Identity(g.rows(), g.cols());
    return dev.cwiseAbs().maxCoeff();
  };
  result.gram_phi_dev = max_dev(gram_phi(max_degree, q));
  result.gram_psi_dev = max_dev(gram_psi(max_degree, q));
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", result.gram_phi_dev);
  result.table.provenance.emplace_back("gram_phi_dev", buf);
  std::snprintf(buf, sizeof(buf), "%.12g", result.gram_psi_dev);
  result.table.provenance.emplace_back("gram_psi_dev", buf);
  return result;
}

Table null_calibration(const ExperimentSpec& spec) {
  require_trials(spec);
  ExtremeSolution sol = solve_extreme(spec.r, spec.eps, spec.params);
  FlatProblem fp = flatten(sol.support, SequenceVector{}, spec.eps);
  Eigen::ArrayXd w = sol.weights.values_on(fp.support);
  const double h = std::min(1.0, 0.05 / sol.w0);

  double sum_t = 0.0, sum_t2 = 0.0, sum_exp = 0.0;
  run_trials(fp, spec.n_trials, rng::fold(spec.master_seed, kNullStream),
             [&](const Eigen::ArrayXd& z) {
               double t = ((z.square() - 1.0) * w).sum();
               sum_t += t;
               sum_t2 += t * t;
               sum_exp += std::exp(h * t);
             });
  const int n = spec.n_trials;
  double mean = sum_t / n;
  double var = (sum_t2 / n - mean * mean) * n / (n - 1.0);
  // Exact null moment generating function: prod exp(-h w) / sqrt(1 - 2 h w).
  double exact = 1.0;
  for (Eigen::Index i = 0; i < w.size(); ++i)
    exact *= std::exp(-h * w[i]) / std::sqrt(1.0 - 2.0 * h * w[i]);

  Table table;
  table.columns = {"n_trials", "w0",         "h",          "mean",     "mean_se",
                   "variance", "exp_moment", "exp_gauss",  "exp_exact"};
  table.rows = {{static_cast<double>(n), sol.w0, h, mean, std::sqrt(var / n), var, sum_exp / n,
                 std::exp(0.5 * h * h), exact}};
  push_param_provenance(table, spec);
  stamp_provenance(table, describe(spec), spec.master_seed);
  return table;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fitted_slope: need two aligned samples");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("fitted_slope: degenerate abscissae");
  return sxy / sxx;
}

std::vector<std::pair<std::string, std::string>> read_flat_config(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_flat_config: cannot open " + path);
  auto trim = [](std::string s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("read_flat_config: expected key=value, got: " + line);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw std::runtime_error("read_flat_config: empty key in: " + line);
    out.emplace_back(key, value);
  }
  return out;
}

}  // namespace tomotest
