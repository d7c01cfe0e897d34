#include "kinanneal/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "kinanneal/errors.hpp"

namespace kinanneal {

namespace {

using json = nlohmann::ordered_json;

std::string format_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_time_tag(double t) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", t);
  return buf;
}

std::string schedule_kind_name(ScheduleKind k) {
  switch (k) {
    case ScheduleKind::constant: return "constant";
    case ScheduleKind::logarithmic: return "log";
    case ScheduleKind::table: return "table";
  }
  return "?";
}

}  // namespace

void ExperimentConfig::validate() const {
  chain.validate();
  if (runs < 1) throw config_error("ensemble: runs must be >= 1");
  if (chain.objective.dimension != 1) {
    throw config_error("ensemble: pooled diagnostics are 1D; drive run_chain directly for d > 1");
  }
  for (double t : snapshot_times) {
    if (t < 0.0 || t > chain.t_final + 1e-12) {
      throw config_error("ensemble: snapshot times must lie in [0, t_final]");
    }
  }
  make_grid(histogram_grid.lower, histogram_grid.upper, histogram_grid.cells);
  make_grid(reference_grid.lower, reference_grid.upper, reference_grid.cells);
}

EnsembleResult run_ensemble(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto t_start = std::chrono::steady_clock::now();

  std::vector<double> times(cfg.snapshot_times);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (times.empty() || std::abs(times.back() - cfg.chain.t_final) > 1e-12) {
    times.push_back(cfg.chain.t_final);
  }
  const std::size_t n_snaps = times.size();
  const std::size_t runs = cfg.runs;

  // one scalar slot per (snapshot, run); filled by index, so the pooled
  // result cannot depend on worker scheduling
  std::vector<std::vector<double>> pooled(n_snaps, std::vector<double>(runs));

  std::atomic<std::size_t> next_run{0};
  std::mutex fail_mutex;
  std::exception_ptr failure;

  auto worker = [&]() {
    try {
      for (;;) {
        const std::size_t r = next_run.fetch_add(1);
        if (r >= runs) break;
        const auto states = run_chain(cfg.chain, times, r);
        for (std::size_t s = 0; s < n_snaps; ++s) pooled[s][r] = states[s].position[0];
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(fail_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  unsigned degree = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
  degree = std::max(1u, std::min<unsigned>(degree, static_cast<unsigned>(runs)));
  if (degree == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(degree);
    for (unsigned i = 0; i < degree; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  EnsembleResult res;
  res.dimension = 1;
  res.finals = pooled.back();
  res.run_seeds.resize(runs);
  for (std::size_t r = 0; r < runs; ++r) res.run_seeds[r] = derive_stream_seed(cfg.chain.seed, r);

  res.series.method = method_name(cfg.chain.method);
  res.series.eps = cfg.chain.eps;
  res.series.schedule = schedule_kind_name(cfg.chain.schedule.kind());
  res.series.seed_count = runs;

  const auto& obj = cfg.chain.objective;
  const bool has_star = obj.known_minimizer.has_value();
  for (std::size_t s = 0; s < n_snaps; ++s) {
    const double t = times[s];
    const double temperature = cfg.chain.schedule.temperature(t);
    const HistogramDensity hist = histogram_density(pooled[s], cfg.histogram_grid);
    const DensityField gibbs_ref =
        rebin_density(gibbs_density(obj, temperature, cfg.reference_grid), cfg.histogram_grid);
    res.series.times.push_back(t);
    res.series.entropy.push_back(relative_entropy(hist.density, gibbs_ref));
    res.series.entropy_std_error.push_back(
        relative_entropy_std_error(hist.density, gibbs_ref, runs));
    res.series.l1.push_back(l1_distance(hist.density, gibbs_ref));
    res.series.clipped_fraction.push_back(hist.clipped_fraction);
    if (has_star) {
      res.series.success.push_back(
          success_rate(pooled[s], 1, *obj.known_minimizer, cfg.success_tol));
    } else {
      res.series.success.push_back(std::numeric_limits<double>::quiet_NaN());
    }
    res.densities.push_back({t, hist.density, gibbs_ref, hist.clipped_fraction});
    if (hist.clipped_fraction > 0.01) {
      res.warnings.push_back("clipped fraction " + format_num(hist.clipped_fraction) + " at t=" +
                             format_time_tag(t) + " exceeds 1%");
    }
  }
  if (runs < 100) res.warnings.push_back("low-sample: diagnostics pooled over fewer than 100 runs");

  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

namespace {

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["method"] = method_name(cfg.chain.method);
  j["objective"] = cfg.chain.objective.name;
  j["dimension"] = cfg.chain.objective.dimension;
  j["epsilon"] = cfg.chain.eps;
  j["dt"] = cfg.chain.dt;
  j["t_final"] = cfg.chain.t_final;
  j["schedule"] = {{"kind", schedule_kind_name(cfg.chain.schedule.kind())},
                   {"t0", cfg.chain.schedule.t0()}};
  if (cfg.chain.schedule.kind() == ScheduleKind::table) {
    json pts = json::array();
    for (const auto& [t, T] : cfg.chain.schedule.points()) pts.push_back({t, T});
    j["schedule"]["points"] = pts;
  }
  j["selection"] = selection_name(cfg.chain.selection.kind);
  j["seed"] = cfg.chain.seed;
  j["init_interval"] = {cfg.chain.init_interval[0], cfg.chain.init_interval[1]};
  j["runs"] = cfg.runs;
  j["snapshot_times"] = cfg.snapshot_times;
  j["histogram_grid"] = {cfg.histogram_grid.lower, cfg.histogram_grid.upper,
                         cfg.histogram_grid.cells};
  j["reference_grid"] = {cfg.reference_grid.lower, cfg.reference_grid.upper,
                         cfg.reference_grid.cells};
  j["success_tol"] = cfg.success_tol;
  j["threads"] = cfg.threads;
  return j;
}

void write_series_csv(const std::filesystem::path& path, const DiagnosticSeries& s) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path.string());
  out << "t,H,l1,clipped_fraction\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    out << format_num(s.times[i]) << ',' << format_num(s.entropy[i]) << ','
        << format_num(s.l1[i]) << ',' << format_num(s.clipped_fraction[i]) << '\n';
  }
}

void write_density_csv(const std::filesystem::path& path, const SnapshotDensity& snap) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write " + path.string());
  out << "x,f_empirical,f_gibbs\n";
  for (int i = 0; i < snap.empirical.grid.cells; ++i) {
    out << format_num(snap.empirical.grid.center(i)) << ',' << format_num(snap.empirical.values[i])
        << ',' << format_num(snap.gibbs.values[i]) << '\n';
  }
}

}  // namespace

std::filesystem::path write_results(const EnsembleResult& res, const ExperimentConfig& cfg,
                                    const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto marker = dir / ".incomplete";
  {
    std::ofstream probe(marker);
    if (!probe) throw config_error("output directory unwritable: " + dir.string());
  }

  const auto manifest_path = dir / "manifest.json";
  {
    json j;
    j["tool"] = "kinanneal";
    j["format"] = 1;
    j["config"] = config_to_json(cfg);
    json summary;
    summary["final_entropy"] = res.series.entropy.back();
    summary["final_l1"] = res.series.l1.back();
    summary["final_success"] = res.series.success.back();
    summary["wall_seconds"] = res.wall_seconds;
    summary["warnings"] = res.warnings;
    j["summary"] = summary;
    std::ofstream out(manifest_path);
    if (!out) throw config_error("cannot write " + manifest_path.string());
    out << j.dump(2) << '\n';
  }

  write_series_csv(dir / "series.csv", res.series);
  for (const auto& snap : res.densities) {
    write_density_csv(dir / ("density_t" + format_time_tag(snap.time) + ".csv"), snap);
  }

  std::filesystem::remove(marker);
  return manifest_path;
}

ExperimentConfig read_manifest(const std::filesystem::path& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw config_error("cannot read manifest " + manifest_path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error("manifest parse error: " + std::string(e.what()));
  }
  if (!j.contains("config")) throw config_error("manifest: missing config section");
  const json& c = j["config"];

  ExperimentConfig cfg;
  cfg.chain.method = parse_method(c.at("method").get<std::string>());
  cfg.chain.objective =
      make_objective(c.at("objective").get<std::string>(), c.at("dimension").get<int>());
  cfg.chain.eps = c.at("epsilon").get<double>();
  cfg.chain.dt = c.at("dt").get<double>();
  cfg.chain.t_final = c.at("t_final").get<double>();
  const json& s = c.at("schedule");
  const std::string kind = s.at("kind").get<std::string>();
  if (kind == "constant") {
    cfg.chain.schedule = CoolingSchedule::constant(s.at("t0").get<double>());
  } else if (kind == "log") {
    cfg.chain.schedule = CoolingSchedule::logarithmic(s.at("t0").get<double>());
  } else if (kind == "table") {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : s.at("points")) pts.emplace_back(p[0].get<double>(), p[1].get<double>());
    cfg.chain.schedule = CoolingSchedule::table(std::move(pts));
  } else {
    throw config_error("manifest: unknown schedule kind \"" + kind + "\"");
  }
  cfg.chain.selection.kind = parse_selection(c.at("selection").get<std::string>());
  cfg.chain.selection.dimension = cfg.chain.objective.dimension;
  cfg.chain.seed = c.at("seed").get<std::uint64_t>();
  cfg.chain.init_interval = {c.at("init_interval")[0].get<double>(),
                             c.at("init_interval")[1].get<double>()};
  cfg.runs = c.at("runs").get<std::size_t>();
  cfg.snapshot_times = c.at("snapshot_times").get<std::vector<double>>();
  const auto& hg = c.at("histogram_grid");
  cfg.histogram_grid = make_grid(hg[0].get<double>(), hg[1].get<double>(), hg[2].get<int>());
  const auto& rg = c.at("reference_grid");
  cfg.reference_grid = make_grid(rg[0].get<double>(), rg[1].get<double>(), rg[2].get<int>());
  cfg.success_tol = c.at("success_tol").get<double>();
  cfg.threads = c.at("threads").get<unsigned>();
  return cfg;
}

}  // namespace kinanneal
