// kinanneal: gradient-free annealing experiments with kinetic and
// mean-field Langevin dynamics, plus the grid-based reference solver and
// invariant check suites.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kinanneal/checks.hpp"
#include "kinanneal/continuum.hpp"
#include "kinanneal/ensemble.hpp"
#include "kinanneal/errors.hpp"

namespace {

using json = nlohmann::json;
using namespace kinanneal;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Shared experiment flags. Values resolve as: command line > config file >
// built-in default (the Fig. 1 parameters).
struct ExperimentFlags {
  std::string method;
  std::string objective = "ackley";
  double epsilon = 1e-2;
  double dt = 0.0;
  double t0 = 2.0;
  std::string schedule = "constant";
  double t_final = 2.0;
  std::size_t runs = 50000;
  std::uint64_t seed = 0;
  std::vector<double> init_interval{-3.0, 3.0};
  std::vector<double> grid{-4.0, 4.0, 160.0};
  std::vector<double> ref_grid{-6.0, 6.0, 2400.0};
  std::vector<double> snapshots;
  double success_tol = 0.5;
  unsigned threads = 0;
  std::string selection = "normal";
  std::string out;
  std::string config_path;
};

void add_experiment_flags(CLI::App* cmd, ExperimentFlags& f, bool with_method) {
  if (with_method) {
    cmd->add_option("--method,-m", f.method, "Dynamic: ksa, msa or mfl")->required();
  }
  cmd->add_option("--objective", f.objective, "Objective: ackley, quadratic, doublewell")
      ->capture_default_str();
  cmd->add_option("--epsilon,-e", f.epsilon, "Scaling parameter (jump scale sqrt(2 eps T))")
      ->capture_default_str();
  cmd->add_option("--dt", f.dt, "Step width; 0 means dt = epsilon")->capture_default_str();
  cmd->add_option("--t0", f.t0, "Initial temperature T0")->capture_default_str();
  cmd->add_option("--schedule", f.schedule, "Cooling law: constant or log (T0/log(t+2))")
      ->capture_default_str();
  cmd->add_option("--t-final", f.t_final, "Final physical time")->capture_default_str();
  cmd->add_option("--runs,-n", f.runs, "Number of independent chains")->capture_default_str();
  cmd->add_option("--seed", f.seed, "Master seed (env KINANNEAL_SEED is the fallback)")
      ->capture_default_str();
  cmd->add_option("--init-interval", f.init_interval, "Uniform initial interval a b")
      ->expected(2)
      ->capture_default_str();
  cmd->add_option("--grid", f.grid, "Histogram grid: a b n")->expected(3)->capture_default_str();
  cmd->add_option("--ref-grid", f.ref_grid, "Gibbs/FP reference grid: a b n")
      ->expected(3)
      ->capture_default_str();
  cmd->add_option("--snapshots", f.snapshots,
                  "Diagnostic snapshot times (default: 10 evenly spaced)");
  cmd->add_option("--success-tol", f.success_tol, "Success tolerance |x - x*| <= tol")
      ->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker cap; 0 = hardware concurrency")
      ->capture_default_str();
  cmd->add_option("--selection", f.selection, "Selection density: normal or uniform")
      ->capture_default_str();
  cmd->add_option("--out,-o", f.out, "Output directory");
  cmd->add_option("--config", f.config_path, "JSON config file mirroring the flag names");
}

// config-file values fill every flag the command line left untouched
void merge_config_file(const CLI::App* cmd, ExperimentFlags& f) {
  if (f.config_path.empty()) return;
  std::ifstream in(f.config_path);
  if (!in) throw config_error("cannot read config file " + f.config_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error("config parse error in " + f.config_path + ": " + e.what());
  }
  auto untouched = [&](const std::string& flag) {
    const auto* opt = cmd->get_option_no_throw(flag);
    return opt != nullptr && opt->count() == 0;
  };
  auto take = [&](const std::string& flag, const char* key, auto& slot) {
    if (j.contains(key) && untouched(flag)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
  };
  take("--method", "method", f.method);
  take("--objective", "objective", f.objective);
  take("--epsilon", "epsilon", f.epsilon);
  take("--dt", "dt", f.dt);
  take("--t0", "t0", f.t0);
  take("--t-final", "t_final", f.t_final);
  take("--runs", "runs", f.runs);
  take("--seed", "seed", f.seed);
  take("--init-interval", "init_interval", f.init_interval);
  take("--grid", "grid", f.grid);
  take("--ref-grid", "ref_grid", f.ref_grid);
  take("--snapshots", "snapshots", f.snapshots);
  take("--success-tol", "success_tol", f.success_tol);
  take("--threads", "threads", f.threads);
  take("--selection", "selection", f.selection);
  take("--out", "out", f.out);
  if (j.contains("schedule") && untouched("--schedule")) {
    if (j["schedule"].is_string()) {
      f.schedule = j["schedule"].get<std::string>();
    } else {
      f.schedule = j["schedule"].at("kind").get<std::string>();
      if (j["schedule"].contains("t0") && untouched("--t0")) {
        f.t0 = j["schedule"]["t0"].get<double>();
      }
    }
  }
}

void apply_seed_env(const CLI::App* cmd, ExperimentFlags& f) {
  const auto* opt = cmd->get_option_no_throw("--seed");
  if (opt && opt->count() > 0) return;
  if (!f.config_path.empty()) return;  // config decided or kept the default
  if (const char* env = std::getenv("KINANNEAL_SEED")) {
    f.seed = std::strtoull(env, nullptr, 10);
  }
}

CoolingSchedule make_schedule(const std::string& kind, double t0) {
  if (kind == "constant") return CoolingSchedule::constant(t0);
  if (kind == "log" || kind == "logarithmic") return CoolingSchedule::logarithmic(t0);
  throw config_error("schedule: unknown kind \"" + kind + "\" (constant or log)");
}

ExperimentConfig to_experiment(const ExperimentFlags& f, const std::string& method) {
  ExperimentConfig cfg;
  cfg.chain.method = parse_method(method);
  cfg.chain.objective = make_objective(f.objective, 1);
  cfg.chain.eps = f.epsilon;
  cfg.chain.dt = f.dt;
  cfg.chain.t_final = f.t_final;
  cfg.chain.schedule = make_schedule(f.schedule, f.t0);
  cfg.chain.selection.kind = parse_selection(f.selection);
  cfg.chain.selection.dimension = 1;
  cfg.chain.seed = f.seed;
  cfg.chain.init_interval = {f.init_interval[0], f.init_interval[1]};
  cfg.runs = f.runs;
  cfg.histogram_grid = make_grid(f.grid[0], f.grid[1], static_cast<int>(f.grid[2]));
  cfg.reference_grid = make_grid(f.ref_grid[0], f.ref_grid[1], static_cast<int>(f.ref_grid[2]));
  cfg.success_tol = f.success_tol;
  cfg.threads = f.threads;
  if (f.snapshots.empty()) {
    for (int k = 0; k <= 10; ++k) cfg.snapshot_times.push_back(f.t_final * k / 10.0);
  } else {
    cfg.snapshot_times = f.snapshots;
  }
  return cfg;
}

std::filesystem::path default_out(const std::string& sub, const ExperimentFlags& f,
                                  const std::string& method) {
  if (!f.out.empty()) return f.out;
  std::string name = sub + "-" + (method.empty() ? f.objective : method + "-" + f.objective) +
                     "-eps" + fmt(f.epsilon) + "-seed" + std::to_string(f.seed);
  return std::filesystem::path("kinanneal-results") / name;
}

void ensure_writable(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream probe(dir / ".incomplete");
  if (!probe) throw config_error("output directory unwritable: " + dir.string());
}

int cmd_run(const CLI::App* cmd, ExperimentFlags& f) {
  merge_config_file(cmd, f);
  apply_seed_env(cmd, f);
  const ExperimentConfig cfg = to_experiment(f, f.method);
  cfg.validate();
  const auto dir = default_out("run", f, f.method);
  ensure_writable(dir);  // fail before any chain starts

  const EnsembleResult res = run_ensemble(cfg);
  write_results(res, cfg, dir);
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "run " << f.method << "/" << f.objective << ": H=" << fmt(res.series.entropy.back())
            << " l1=" << fmt(res.series.l1.back())
            << " success=" << fmt(res.series.success.back()) << " wall=" << fmt(res.wall_seconds)
            << "s out=" << dir.string() << "\n";
  return kExitOk;
}

int cmd_compare(const CLI::App* cmd, ExperimentFlags& f, std::vector<std::string>& methods) {
  merge_config_file(cmd, f);
  apply_seed_env(cmd, f);
  if (methods.empty()) methods = {"ksa", "msa", "mfl"};
  const auto dir = default_out("compare", f, methods.front());
  ensure_writable(dir);

  // all methods share the config; the FP reference shares the grid and law
  std::vector<EnsembleResult> results;
  ExperimentConfig cfg;
  for (const auto& m : methods) {
    cfg = to_experiment(f, m);
    cfg.validate();
    results.push_back(run_ensemble(cfg));
  }

  FPConfig fp{cfg.reference_grid, 0.0, cfg.chain.schedule, cfg.chain.objective};
  const DensityField init =
      uniform_density(cfg.reference_grid, cfg.chain.init_interval[0], cfg.chain.init_interval[1]);
  const FPResult ref = fp_solve(init, fp, cfg.chain.t_final);
  const DensityField ref_coarse = rebin_density(ref.density, cfg.histogram_grid);
  const DensityField gibbs_coarse = rebin_density(
      gibbs_density(cfg.chain.objective, cfg.chain.schedule.temperature(cfg.chain.t_final),
                    cfg.reference_grid),
      cfg.histogram_grid);

  const auto density_path = dir / "compare_density.csv";
  std::ofstream out(density_path);
  if (!out) throw config_error("cannot write " + density_path.string());
  out << "x";
  for (const auto& m : methods) out << ",f_" << m;
  out << ",f_reference,f_gibbs\n";
  for (int i = 0; i < cfg.histogram_grid.cells; ++i) {
    out << csv_num(cfg.histogram_grid.center(i));
    for (const auto& r : results) out << ',' << csv_num(r.densities.back().empirical.values[i]);
    out << ',' << csv_num(ref_coarse.values[i]) << ',' << csv_num(gibbs_coarse.values[i]) << '\n';
  }
  out.close();

  for (std::size_t k = 0; k < methods.size(); ++k) {
    const auto& series = results[k].series;
    std::ofstream s(dir / ("series_" + methods[k] + ".csv"));
    s << "t,H,l1,clipped_fraction\n";
    for (std::size_t i = 0; i < series.times.size(); ++i) {
      s << csv_num(series.times[i]) << ',' << csv_num(series.entropy[i]) << ','
        << csv_num(series.l1[i]) << ',' << csv_num(series.clipped_fraction[i]) << '\n';
    }
    const double l1_ref = l1_distance(results[k].densities.back().empirical, ref_coarse);
    std::cout << "compare " << methods[k] << ": l1_to_gibbs=" << fmt(series.l1.back())
              << " l1_to_reference=" << fmt(l1_ref) << " H=" << fmt(series.entropy.back()) << "\n";
  }
  std::filesystem::remove(dir / ".incomplete");
  std::cout << "compare: wrote " << density_path.string() << "\n";
  return kExitOk;
}

int cmd_fp_reference(ExperimentFlags& f, double dt_pde, int series_points) {
  const auto dir = default_out("fp-reference", f, "");
  ensure_writable(dir);
  const Grid1D grid = make_grid(f.ref_grid[0], f.ref_grid[1], static_cast<int>(f.ref_grid[2]));
  const ObjectiveFunction obj = make_objective(f.objective, 1);
  FPConfig cfg{grid, dt_pde, make_schedule(f.schedule, f.t0), obj};
  const DensityField init = uniform_density(grid, f.init_interval[0], f.init_interval[1]);
  const FPResult res = fp_solve(init, cfg, f.t_final, {}, series_points);
  const DensityField gibbs =
      gibbs_density(obj, cfg.schedule.temperature(f.t_final), grid);

  {
    std::ofstream out(dir / "fp_density.csv");
    out << "x,f,f_gibbs\n";
    for (int i = 0; i < grid.cells; ++i) {
      out << csv_num(grid.center(i)) << ',' << csv_num(res.density.values[i]) << ','
          << csv_num(gibbs.values[i]) << '\n';
    }
  }
  {
    std::ofstream out(dir / "fp_series.csv");
    out << "t,entropy,l1_to_gibbs\n";
    for (const auto& p : res.series) {
      out << csv_num(p.t) << ',' << csv_num(p.entropy) << ',' << csv_num(p.l1_to_gibbs) << '\n';
    }
  }
  std::filesystem::remove(dir / ".incomplete");
  std::cout << "fp-reference " << f.objective << ": final H=" << fmt(res.series.back().entropy)
            << " l1=" << fmt(res.series.back().l1_to_gibbs) << " out=" << dir.string() << "\n";
  return kExitOk;
}

int cmd_laplace(ExperimentFlags& f, std::vector<double>& temps, std::vector<double>& support) {
  const Grid1D grid = make_grid(f.ref_grid[0], f.ref_grid[1], static_cast<int>(f.ref_grid[2]));
  const ObjectiveFunction obj = make_objective(f.objective, 1);
  const DensityField g = uniform_density(grid, support[0], support[1]);
  const auto values = laplace_probe(g, obj, temps);
  std::cout << "T,value\n";
  for (std::size_t i = 0; i < temps.size(); ++i) {
    std::cout << csv_num(temps[i]) << ',' << csv_num(values[i]) << "\n";
  }
  if (!f.out.empty()) {
    const std::filesystem::path dir(f.out);
    ensure_writable(dir);
    std::ofstream out(dir / "laplace.csv");
    out << "T,value\n";
    for (std::size_t i = 0; i < temps.size(); ++i) {
      out << csv_num(temps[i]) << ',' << csv_num(values[i]) << '\n';
    }
    std::filesystem::remove(dir / ".incomplete");
  }
  return kExitOk;
}

int cmd_check(std::vector<std::string>& suites, std::uint64_t seed) {
  const auto reports = run_checks(suites, seed);
  bool all_ok = true;
  for (const auto& r : reports) {
    std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.suite << ": " << r.detail << "\n";
    all_ok = all_ok && r.passed;
  }
  return all_ok ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kinanneal: kinetic and Maxwellian annealing dynamics with their mean-field "
               "Langevin limit, entropy diagnostics and a structure-preserving reference solver"};
  app.require_subcommand(1);

  ExperimentFlags run_flags;
  auto* run = app.add_subcommand("run", "Run one method as an ensemble and write diagnostics");
  add_experiment_flags(run, run_flags, true);

  ExperimentFlags cmp_flags;
  std::vector<std::string> cmp_methods;
  auto* cmp = app.add_subcommand("compare",
                                 "Run several methods plus the FP reference on a shared config");
  cmp->add_option("--methods", cmp_methods, "Methods to compare (default ksa msa mfl)")
      ->delimiter(',');
  add_experiment_flags(cmp, cmp_flags, false);

  ExperimentFlags fp_flags;
  fp_flags.ref_grid = {-6.0, 6.0, 2400.0};
  double fp_dt = 0.0;
  int fp_series = 50;
  auto* fpr = app.add_subcommand("fp-reference",
                                 "Integrate the mean-field equation on the reference grid");
  fpr->add_option("--objective", fp_flags.objective)->capture_default_str();
  fpr->add_option("--t0", fp_flags.t0)->capture_default_str();
  fpr->add_option("--schedule", fp_flags.schedule)->capture_default_str();
  fpr->add_option("--t-final", fp_flags.t_final)->capture_default_str();
  fpr->add_option("--grid", fp_flags.ref_grid, "Solver grid: a b n")
      ->expected(3)
      ->capture_default_str();
  fpr->add_option("--dt-pde", fp_dt, "PDE step; 0 = largest monotone step")->capture_default_str();
  fpr->add_option("--init-interval", fp_flags.init_interval, "Uniform initial support a b")
      ->expected(2)
      ->capture_default_str();
  fpr->add_option("--series-points", fp_series)->capture_default_str();
  fpr->add_option("--out,-o", fp_flags.out, "Output directory");

  ExperimentFlags lap_flags;
  lap_flags.ref_grid = {-6.0, 6.0, 2048.0};
  std::vector<double> lap_temps{1.0, 0.1, 0.01, 0.001};
  std::vector<double> lap_support{-3.0, 3.0};
  auto* lap = app.add_subcommand("laplace", "Temperature sweep of the Laplace-principle probe");
  lap->add_option("--objective", lap_flags.objective)->capture_default_str();
  lap->add_option("--temps", lap_temps, "Descending temperatures")->delimiter(',');
  lap->add_option("--support", lap_support, "Support a b of the uniform base density")
      ->expected(2)
      ->capture_default_str();
  lap->add_option("--grid", lap_flags.ref_grid, "Quadrature grid: a b n")
      ->expected(3)
      ->capture_default_str();
  lap->add_option("--out,-o", lap_flags.out, "Optional output directory");

  std::vector<std::string> check_suites;
  std::uint64_t check_seed = 0x5eedULL;
  auto* chk = app.add_subcommand("check", "Run the invariant suites and report residuals");
  chk->add_option("--suite", check_suites,
                  "Subset of: detailed-balance, entropy, fp, symmetry (default all)")
      ->delimiter(',');
  chk->add_option("--seed", check_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(run, run_flags);
    if (cmp->parsed()) return cmd_compare(cmp, cmp_flags, cmp_methods);
    if (fpr->parsed()) return cmd_fp_reference(fp_flags, fp_dt, fp_series);
    if (lap->parsed()) return cmd_laplace(lap_flags, lap_temps, lap_support);
    if (chk->parsed()) return cmd_check(check_suites, check_seed);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitConfig;
}
