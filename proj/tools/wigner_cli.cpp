// Batch front end: run, convergence sweeps and kernel-table export.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wigner/config.hpp"
#include "wigner/io.hpp"
#include "wigner/parallel.hpp"
#include "wigner/simulation.hpp"

namespace fs = std::filesystem;
using namespace wigner;

namespace {

constexpr const char* kVersion = "wigner 1.0.0";

struct Common {
  std::string config;
  std::string out = ".";
  int threads = 0;
  int resample = 0;
  std::string scheme;
  double poisson_dy = 0.0;
  std::vector<std::string> overrides;
};

// Config-stage failures get exit code 1; everything after that 2.
struct ConfigStageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string iso_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SimulationConfig load(const Common& c) {
  try {
    ConfigEntries e = load_config_file(c.config);
    for (const auto& ov : c.overrides) {
      const auto eq = ov.find('=');
      if (eq == std::string::npos) throw ConfigError(ov, "--set expects key=value");
      std::string key = ov.substr(0, eq), value = ov.substr(eq + 1);
      e.values[key] = value;
      e.lines[key] = 0;
    }
    if (!c.scheme.empty()) {
      e.values["time.scheme"] = c.scheme;
      e.lines["time.scheme"] = 0;
    }
    if (c.poisson_dy > 0.0) {
      e.values["potential.poisson_dy"] = format_double(c.poisson_dy);
      e.lines["potential.poisson_dy"] = 0;
    }
    SimulationConfig cfg = config_from_entries(e);
    if (c.threads > 0) cfg.threads = c.threads;
    return cfg;
  } catch (const ParameterError& e) {
    throw ConfigStageError(e.what());
  }
}

void apply_threads(const Common& c) {
  int n = c.threads;
  if (n <= 0)
    if (const char* env = std::getenv("WIGNER_THREADS")) n = std::atoi(env);
  if (n > 0) set_thread_count(n);
}

void prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
}

CsvMeta meta_for(const SimulationConfig& cfg) {
  return {{"version", kVersion},
          {"potential", potential_name(cfg.potential)},
          {"grid", "Q=" + std::to_string(cfg.Q) + " M=" + std::to_string(cfg.M) + " N_k=" + std::to_string(cfg.N_k)},
          {"dt", format_double(cfg.dt)},
          {"scheme", cfg.scheme.name()}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << text;
  if (!f) throw IoError("write to '" + path.string() + "' failed");
}

// Plain key: value manifest; the configuration is echoed line by line.
void write_manifest(const fs::path& dir, const SimulationConfig& cfg, const std::string& start,
                    double wall_seconds, const std::vector<std::string>& snapshots, const std::string& series,
                    const std::vector<std::string>& warnings) {
  std::ostringstream m;
  m << "version: " << kVersion << '\n';
  m << "start_time: " << start << '\n';
  m << "end_time: " << iso_now() << '\n';
  m << "wall_seconds: " << format_double(wall_seconds) << '\n';
  m << "threads: " << thread_count() << '\n';
  m << "config_file: resolved.cfg\n";
  m << "series: " << series << '\n';
  for (const auto& s : snapshots) m << "snapshot: " << s << '\n';
  for (const auto& w : warnings) m << "warning: " << w << '\n';
  std::istringstream cfgtext(config_to_text(cfg));
  std::string line;
  while (std::getline(cfgtext, line)) {
    const auto eq = line.find(" = ");
    m << "config." << line.substr(0, eq) << ": " << line.substr(eq + 3) << '\n';
  }
  write_text(dir / "resolved.cfg", config_to_text(cfg));
  write_text(dir / "manifest.txt", m.str());
}

int cmd_run(const Common& c) {
  const SimulationConfig cfg = load(c);
  apply_threads(c);
  prepare_out(c.out);
  const fs::path dir(c.out);
  const std::string start = iso_now();
  const auto t0 = std::chrono::steady_clock::now();
  const CsvMeta meta = meta_for(cfg);
  std::vector<std::string> snaps;
  std::vector<std::string> warnings;

  if (cfg.dimensions == 2) {
    const RunResult r = evolve(cfg);
    warnings = r.warnings;
    for (const auto& s : r.snapshots) {
      const std::string name = snapshot_file_name(s.time());
      write_snapshot_csv((dir / name).string(), s, c.resample, meta);
      snaps.push_back(name);
    }
    write_series_csv((dir / "observables.csv").string(), r.series, meta);
  } else {
    const RunResult4 r = evolve_4d(cfg);
    warnings = r.warnings;
    for (const auto& s : r.snapshots) {
      const std::string name = snapshot_file_name(s.t);
      write_marginal_csv((dir / name).string(), *r.grid, s, meta);
      snaps.push_back(name);
    }
    write_series_csv((dir / "observables.csv").string(), r.series, meta);
  }
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_manifest(dir, cfg, start, wall, snaps, "observables.csv", warnings);
  std::cout << "wrote " << snaps.size() << " snapshot(s) to " << c.out << '\n';
  return 0;
}

int cmd_convergence(const Common& c, const std::string& axis, const std::vector<double>& values) {
  const SimulationConfig base = load(c);
  if (axis != "N_k" && axis != "M" && axis != "N_um" && axis != "dt")
    throw ConfigStageError("--axis must be one of N_k, M, N_um, dt");
  if (values.empty()) throw ConfigStageError("--values needs at least one entry");
  for (std::size_t i = 1; i < values.size(); ++i)
    if (!(values[i] > values[i - 1])) throw ConfigStageError("--values must be strictly ascending");
  if (base.dimensions != 2) throw ConfigStageError("convergence sweeps cover two-dimensional runs");

  std::vector<SimulationConfig> cfgs;
  for (double v : values) {
    SimulationConfig cfg = base;
    const bool integral = std::floor(v) == v;
    if (axis != "dt" && !integral) throw ConfigStageError("--values for " + axis + " must be integers");
    if (axis == "N_k") cfg.N_k = static_cast<int>(v);
    if (axis == "M") cfg.M = static_cast<int>(v);
    if (axis == "N_um") cfg.N_um = static_cast<int>(v);
    if (axis == "dt") cfg.dt = v;
    cfg.snapshot_times.clear();
    try {
      cfg.validate();
    } catch (const ParameterError& e) {
      throw ConfigStageError(axis + " = " + format_double(v) + ": " + e.what());
    }
    cfgs.push_back(cfg);
  }
  apply_threads(c);
  prepare_out(c.out);
  const fs::path dir(c.out);
  const CsvMeta meta = meta_for(base);

  // the finest member is the largest resolution, or the smallest dt
  const std::size_t ref = axis == "dt" ? 0 : values.size() - 1;
  std::vector<WignerState> finals;
  ObservableSeries summary;
  std::ofstream obs(dir / "sweep_observables.csv");
  if (!obs) throw IoError("cannot write sweep_observables.csv");
  for (const auto& [k, v] : meta) obs << "# " << k << ": " << v << '\n';
  obs << "value,mass,pr,mean_x,mean_p,var_x,var_p,uncertainty\n";
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    const bool rerun = axis != "N_um" || i == 0;
    if (rerun) {
      RunResult r = evolve(cfgs[i]);
      finals.push_back(std::move(r.snapshots.back()));
    } else {
      finals.push_back(finals.front());
    }
    const auto& st = finals.back();
    const Moments m = uncertainty(st, cfgs[i].N_um, cfgs[i].consts.hbar, cfgs[i].normalize_moments);
    obs << format_double(values[i]) << ',' << format_double(total_mass(st)) << ','
        << format_double(partial_mass(st, cfgs[i].N_um)) << ',' << format_double(m.mean_x) << ','
        << format_double(m.mean_p) << ',' << format_double(m.var_x) << ',' << format_double(m.var_p) << ','
        << format_double(m.product) << '\n';
    std::cerr << axis << " = " << format_double(values[i]) << " done\n";
  }

  std::ofstream err(dir / "errors.csv");
  if (!err) throw IoError("cannot write errors.csv");
  for (const auto& [k, v] : meta) err << "# " << k << ": " << v << '\n';
  err << "# axis: " << axis << '\n';
  err << "value,eps2,epsinf\n";
  if (values.size() == 1) {
    std::cerr << "warning: a single sweep value leaves nothing to compare; errors.csv is empty\n";
    return 0;
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == ref) continue;
    ErrorNorms e;
    if (axis == "N_um") {
      // the field is the same; compare the uniform-mesh observables instead
      const Moments a = uncertainty(finals[i], cfgs[i].N_um, base.consts.hbar);
      const Moments b = uncertainty(finals[ref], cfgs[ref].N_um, base.consts.hbar);
      e.eps2 = std::abs(a.product - b.product);
      e.eps_inf = std::abs(partial_mass(finals[i], cfgs[i].N_um) - partial_mass(finals[ref], cfgs[ref].N_um));
    } else {
      e = error_norms(finals[i], finals[ref], base.N_um);
    }
    err << format_double(values[i]) << ',' << format_double(e.eps2) << ',' << format_double(e.eps_inf) << '\n';
  }
  std::cout << "wrote errors.csv and sweep_observables.csv to " << c.out << '\n';
  return 0;
}

int cmd_kernel_table(const Common& c, bool poisson) {
  const SimulationConfig cfg = load(c);
  if (cfg.dimensions != 2) throw ConfigStageError("kernel-table exports one-dimensional tables");
  apply_threads(c);
  prepare_out(c.out);
  const fs::path dir(c.out);
  const CsvMeta meta = meta_for(cfg);
  const GridPtr grid = make_grid(cfg);
  const KernelTable exact = kernel_coefficients(cfg.potential, grid, cfg.consts, cfg.quad);
  write_table_csv((dir / "kernel_exact.csv").string(), exact, meta);
  if (!poisson) {
    std::cout << "wrote kernel_exact.csv to " << c.out << '\n';
    return 0;
  }
  const KernelTable pois = poisson_kernel_coefficients(cfg.potential, grid, cfg.consts, cfg.poisson_dy);
  write_table_csv((dir / "kernel_poisson.csv").string(), pois, meta);
  KernelTable diff = pois;
  for (std::size_t i = 0; i < diff.values().size(); ++i) diff.values()[i] -= exact.values()[i];
  write_table_csv((dir / "kernel_difference.csv").string(), diff, meta);
  const double maxnorm = table_max_difference(exact, pois);
  write_text(dir / "kernel_norms.txt", "max_norm: " + format_double(maxnorm) + '\n');
  std::cout << "max |poisson - exact| = " << format_double(maxnorm) << '\n';
  return 0;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "configuration file")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--threads", c.threads, "worker threads (default: WIGNER_THREADS or runtime default)");
  sub->add_option("--scheme", c.scheme, "splitting scheme")->check(CLI::IsMember({"strang", "yoshida4"}));
  sub->add_option("--poisson-dy", c.poisson_dy, "Poisson-summation spacing");
  sub->add_option("--set", c.overrides, "override a config key, key=value (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wigner equation solver"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Common common;
  auto* run = app.add_subcommand("run", "evolve one configuration");
  add_common(run, common);
  run->add_option("--resample", common.resample, "write snapshots on an N_um x N_um uniform mesh")
      ->check(CLI::PositiveNumber);

  std::string axis;
  std::vector<double> values;
  auto* conv = app.add_subcommand("convergence", "self-convergence sweep against the finest member");
  add_common(conv, common);
  conv->add_option("--axis", axis, "N_k, M, N_um or dt")->required();
  conv->add_option("--values", values, "ascending sweep values")->required()->delimiter(',');

  bool poisson = false;
  auto* table = app.add_subcommand("kernel-table", "export coefficient tables");
  add_common(table, common);
  table->add_flag("--poisson", poisson, "also write the Poisson-route table and the difference");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(common);
    if (conv->parsed()) return cmd_convergence(common, axis, values);
    return cmd_kernel_table(common, poisson);
  } catch (const ConfigStageError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
