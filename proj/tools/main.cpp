// Command line front end: solves the extreme problem, runs the Monte Carlo
// experiments, and emits result tables as CSV or JSON.

#include <cstdio>
#include <exception>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tomotest/detect.hpp"
#include "tomotest/extreme.hpp"
#include "tomotest/harness.hpp"
#include "tomotest/seqmodel.hpp"
#include "tomotest/table.hpp"

namespace {

using namespace tomotest;

struct CommonOpts {
  double p = 1.0;
  double L = 1.0;
  double eps = 1e-3;
  double r = 0.01;
  double alpha = 0.05;
  int trials = 1000;
  unsigned long long seed = 12345;
  bool normalized = false;
  std::string out;
  std::string format = "csv";
  std::string config;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--p", o.p, "smoothness exponent")->capture_default_str();
  cmd->add_option("--L", o.L, "ellipsoid scale")->capture_default_str();
  cmd->add_option("--eps", o.eps, "noise level")->capture_default_str();
  cmd->add_option("--r", o.r, "alternative radius")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "test level")->capture_default_str();
  cmd->add_option("--trials", o.trials, "Monte Carlo trials")->capture_default_str();
  cmd->add_option("--seed", o.seed, "master seed")->capture_default_str();
  cmd->add_flag("--normalized", o.normalized, "drop the pi and L unit factors");
  cmd->add_option("--out", o.out, "output path (default stdout)");
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--config", o.config, "flat key=value defaults file");
}

ModelParams to_params(const CommonOpts& o) { return ModelParams{o.p, o.L, o.normalized}; }

ExperimentSpec to_spec(const CommonOpts& o, const std::string& mode) {
  ExperimentSpec spec;
  spec.params = to_params(o);
  spec.eps = o.eps;
  spec.r = o.r;
  spec.alpha = o.alpha;
  spec.n_trials = o.trials;
  spec.master_seed = o.seed;
  spec.mode = mode;
  return spec;
}

void write_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  file << text;
}

void emit(const Table& table, const CommonOpts& o) {
  write_text(o.format == "json" ? to_json(table) : to_csv(table), o.out);
}

// Defaults from --config are appended as trailing --key=value arguments, so
// anything given explicitly on the command line wins.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::vector<std::string> merged = args;
  for (const auto& [key, value] : read_flat_config(path)) {
    if (key == "config") throw std::runtime_error("config: nested config not allowed");
    std::string flag = "--" + key;
    bool present = false;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) present = true;
    if (present) continue;
    if (key == "normalized") {
      if (value == "1" || value == "true" || value == "yes" || value == "on")
        merged.push_back(flag);
      else if (value != "0" && value != "false" && value != "no" && value != "off")
        throw std::runtime_error("config: boolean value expected for " + key);
      continue;
    }
    merged.push_back(flag + "=" + value);
  }
  return merged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for minimax testing from noisy chord averages"};
  app.require_subcommand(1);
  CommonOpts o;
  app.add_option("--config", o.config, "flat key=value defaults file");

  auto* solve_cmd = app.add_subcommand("solve", "solve the extreme problem at (r, eps)");
  std::string signal_out, weights_out;
  add_common(solve_cmd, o);
  solve_cmd->add_option("--signal-out", signal_out, "write the extreme signal as CSV triples");
  solve_cmd->add_option("--weights-out", weights_out, "write the optimal weights as CSV triples");

  auto* asym_cmd = app.add_subcommand("asymptotics", "water-filling sums vs closed forms");
  std::vector<double> p_list{1.0};
  std::vector<double> a_list{1e-3, 1e-4, 1e-5, 1e-6};
  add_common(asym_cmd, o);
  asym_cmd->add_option("--p-list", p_list, "smoothness grid")->delimiter(',')->capture_default_str();
  asym_cmd->add_option("--A-list", a_list, "multiplier grid")->delimiter(',')->capture_default_str();

  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo error rates of the optimal test");
  std::string sim_mode = "sharp-asymptotics";
  double target_u = 0.0;
  add_common(sim_cmd, o);
  sim_cmd->add_option("--mode", sim_mode, "experiment mode")
      ->check(CLI::IsMember({"sharp-asymptotics", "null-calibration"}))
      ->capture_default_str();
  sim_cmd->add_option("--target-u", target_u, "re-derive eps so u_eps hits this value (0 = off)");

  auto* sweep_cmd = app.add_subcommand("rate-sweep", "total error along the separation boundary");
  std::vector<double> c_list{0.2, 0.5, 1.0, 2.0, 5.0};
  add_common(sweep_cmd, o);
  sweep_cmd->add_option("--c-list", c_list, "radius scales in units of the boundary")
      ->delimiter(',')
      ->capture_default_str();

  auto* adapt_cmd = app.add_subcommand("adaptive", "power of the adaptive band family");
  double p_min = 0.5, p_max = 2.0, d_scale = 0.0, margin = 2.0;
  std::vector<double> p_true{0.6, 1.0, 1.8};
  std::string grid_out;
  add_common(adapt_cmd, o);
  adapt_cmd->add_option("--p-min", p_min, "smoothness window lower edge")->capture_default_str();
  adapt_cmd->add_option("--p-max", p_max, "smoothness window upper edge")->capture_default_str();
  adapt_cmd->add_option("--d-scale", d_scale, "radius scale (0 = calibrate automatically)")
      ->capture_default_str();
  adapt_cmd->add_option("--margin", margin, "calibration margin in units of the threshold")
      ->capture_default_str();
  adapt_cmd->add_option("--p-true", p_true, "true smoothness values to attack")
      ->delimiter(',')
      ->capture_default_str();
  adapt_cmd->add_option("--grid-out", grid_out, "write the band grid summary as JSON");

  auto* lb_cmd = app.add_subcommand("lower-bound", "prior mixture indistinguishability diagnostic");
  double lb_p_min = 0.5, lb_p_max = 2.0, radius_scale = 0.3;
  add_common(lb_cmd, o);
  lb_cmd->add_option("--p-min", lb_p_min, "smoothness window lower edge")->capture_default_str();
  lb_cmd->add_option("--p-max", lb_p_max, "smoothness window upper edge")->capture_default_str();
  lb_cmd->add_option("--radius-scale", radius_scale, "radius in units of the adaptive boundary")
      ->capture_default_str();

  auto* svd_cmd = app.add_subcommand("svd-verify", "quadrature check of the singular system");
  int max_degree = 6;
  QuadratureSpec quad;
  add_common(svd_cmd, o);
  svd_cmd->add_option("--max-degree", max_degree, "largest j+l to verify")->capture_default_str();
  svd_cmd->add_option("--n-radial", quad.n_radial, "radial nodes")->capture_default_str();
  svd_cmd->add_option("--n-angular", quad.n_angular, "angular nodes")->capture_default_str();
  svd_cmd->add_option("--n-line", quad.n_line, "chord nodes")->capture_default_str();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(args);
    std::vector<const char*> ptrs{argv[0]};
    for (const std::string& a : args) ptrs.push_back(a.c_str());
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  try {
    if (*solve_cmd) {
      ExtremeSolution sol = solve_extreme(o.r, o.eps, to_params(o));
      Table table;
      table.columns = {"p",  "L",  "normalized", "r",  "eps",          "A",
                       "z0_sq", "u_eps", "w0", "support", "J0", "J1", "J2",
                       "asymptotic_u", "separation_rate"};
      table.rows = {{o.p, o.L, o.normalized ? 1.0 : 0.0, o.r, o.eps, sol.A, sol.z0_sq, sol.u_eps,
                     sol.w0, static_cast<double>(sol.support.size()), sol.j0, sol.j1, sol.j2,
                     asymptotic_u(o.r, o.eps, to_params(o)),
                     separation_rate(o.eps, o.p)}};
      stamp_provenance(table, "solve", o.seed);
      emit(table, o);
      if (!signal_out.empty()) write_text(extreme_signal(sol).to_csv(), signal_out);
      if (!weights_out.empty()) write_text(sol.weights.to_csv(), weights_out);
    } else if (*asym_cmd) {
      Table table = asymptotics_table(p_list, a_list);
      stamp_provenance(table, "asymptotics", o.seed);
      emit(table, o);
    } else if (*sim_cmd) {
      CommonOpts local = o;
      if (target_u > 0.0) local.eps = eps_for_target_u(local.r, to_params(local), target_u);
      ExperimentSpec spec = to_spec(local, sim_mode);
      emit(sim_mode == "null-calibration" ? null_calibration(spec)
                                          : sharp_asymptotics_experiment(spec),
           local);
    } else if (*sweep_cmd) {
      emit(rate_sweep(to_spec(o, "rate-sweep"), c_list), o);
    } else if (*adapt_cmd) {
      double d = d_scale > 0.0 ? d_scale
                               : calibrate_d_scale(o.eps, p_min, p_max, p_true, margin);
      if (!grid_out.empty())
        write_text(grid_summary(build_adaptive_grid(p_min, p_max, o.eps, d)), grid_out);
      emit(adaptive_power_experiment(to_spec(o, "adaptive-power"), p_min, p_max, d, p_true), o);
    } else if (*lb_cmd) {
      LowerBoundResult result = lower_bound_diagnostic(o.eps, lb_p_min, lb_p_max, radius_scale);
      emit(result.table, o);
    } else if (*svd_cmd) {
      SvdVerifyResult result = svd_verify(max_degree, quad);
      stamp_provenance(result.table, "svd-verify", o.seed);
      emit(result.table, o);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
