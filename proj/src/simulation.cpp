#include "wigner/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wigner/errors.hpp"
#include "wigner/parallel.hpp"

namespace wigner {

namespace {

long steps_for(double t, double dt) { return std::lround(t / dt); }

bool on_step_grid(double t, double dt) {
  return std::abs(static_cast<double>(steps_for(t, dt)) * dt - t) <= 1e-9 * std::max(1.0, std::abs(t));
}

ObservableRecord record_2d(const WignerState& st, const UniformObservables* obs, bool normalize) {
  ObservableRecord r;
  r.t = st.time();
  r.total_mass = total_mass(st);
  if (obs) {
    const auto s = obs->sums(st);
    const auto m = moments_from_sums(s, normalize);
    r.pr = s.partial;
    r.mean_x = m.mean_x;
    r.mean_p = m.mean_p;
    r.var_x = m.var_x;
    r.var_p = m.var_p;
    r.uncertainty = m.product;
  } else {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.pr = r.mean_x = r.mean_p = r.var_x = r.var_p = r.uncertainty = nan;
  }
  return r;
}

}  // namespace

void SimulationConfig::validate() const {
  if (dimensions != 2 && dimensions != 4) throw ParameterError("dimensions must be 2 or 4");
  if (!(x_lo < x_hi)) throw ParameterError("x_lo must be below x_hi");
  if (Q < 1) throw ParameterError("Q must be at least 1");
  if (M < 3) throw ParameterError("M must be at least 3");
  if (!(k_min < k_max)) throw ParameterError("k_min must be below k_max");
  if (N_k < 2 || N_k % 2 != 0) throw ParameterError("N_k must be even and at least 2");
  consts.validate();
  validate_potential(potential);
  if (is_two_dimensional(potential) != (dimensions == 4))
    throw ParameterError("potential '" + potential_name(potential) + "' does not match dimensions = " +
                         std::to_string(dimensions));
  if (const auto* md = std::get_if<MultiDelta2DPotential>(&potential))
    for (const auto& pt : md->points)
      if (pt[0] < x_lo || pt[0] > x_hi || pt[1] < x_lo || pt[1] > x_hi)
        throw ParameterError("multi-delta point lies outside the spatial domain");
  if (route == KernelRoute::poisson && dimensions == 4) throw ParameterError("the Poisson route is one-dimensional");
  if (init == InitKind::fermi_dirac) {
    if (dimensions != 4) throw ParameterError("fermi-dirac initial data needs dimensions = 4");
    fermi_dirac.validate();
  } else {
    packet.validate();
    if (dimensions == 4) packet2.validate();
  }
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  if (!(t_final >= 0.0)) throw ParameterError("t_final must be non-negative");
  if (!on_step_grid(t_final, dt)) throw ParameterError("t_final must be a whole number of steps dt");
  for (double t : snapshot_times)
    if (!(t >= 0.0 && t <= t_final * (1.0 + 1e-12))) throw ParameterError("snapshot time outside [0, t_final]");
  if (!(max_tau > 0.0)) throw ParameterError("max_tau must be positive");
  if (N_um < 1) throw ParameterError("N_um must be at least 1");
  if (threads < 0) throw ParameterError("threads must be non-negative");
  if (!(memory_budget_mb > 0.0)) throw ParameterError("memory budget must be positive");
}

long SimulationConfig::num_steps() const { return steps_for(t_final, dt); }

std::vector<long> SimulationConfig::snapshot_steps() const {
  std::vector<long> s;
  if (snapshot_times.empty()) s.push_back(num_steps());
  for (double t : snapshot_times) s.push_back(std::min(steps_for(t, dt), num_steps()));
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

GridPtr make_grid(const SimulationConfig& c) { return make_phase_grid(c.x_lo, c.x_hi, c.Q, c.M, c.k_min, c.k_max, c.N_k); }

std::shared_ptr<const KernelTable> build_kernel_table(const SimulationConfig& c, const GridPtr& grid) {
  if (c.route == KernelRoute::poisson)
    return std::make_shared<const KernelTable>(poisson_kernel_coefficients(c.potential, grid, c.consts, c.poisson_dy));
  return std::make_shared<const KernelTable>(kernel_coefficients(c.potential, grid, c.consts, c.quad));
}

RunResult evolve(const SimulationConfig& config, std::shared_ptr<const KernelTable> table, const ProgressHook& progress) {
  config.validate();
  if (config.dimensions != 2) throw ParameterError("evolve: use evolve_4d for dimensions = 4");
  if (config.threads > 0) set_thread_count(config.threads);

  RunResult out;
  out.grid = table ? table->grid_ptr() : make_grid(config);
  if (!table) table = build_kernel_table(config, out.grid);

  WignerState state = init_gaussian(out.grid, config.packet);
  if (const double tail = gaussian_tail_mass(*out.grid, config.packet); tail > 1e-3)
    out.warnings.push_back("initial packet loses " + std::to_string(tail) + " of its mass to the truncated domain");
  const WignerState initial = state;
  const WignerState* inflow = config.inflow == Inflow::initial ? &initial : nullptr;

  Stepper stepper(table, config.consts, config.scheme, config.max_tau, config.seam);
  std::unique_ptr<UniformObservables> obs;
  if (config.observables) obs = std::make_unique<UniformObservables>(*out.grid, config.N_um, config.consts.hbar);

  const auto snaps = config.snapshot_steps();
  auto next_snap = snaps.begin();
  const long n = config.num_steps();
  out.series.append(record_2d(state, obs.get(), config.normalize_moments));
  if (next_snap != snaps.end() && *next_snap == 0) {
    out.snapshots.push_back(state);
    ++next_snap;
  }
  for (long step = 1; step <= n; ++step) {
    stepper.step(state, config.dt, inflow);
    state.set_time(static_cast<double>(step) * config.dt);
    if (!state.all_finite())
      throw DivergenceError("non-finite value in the Wigner function at step " + std::to_string(step), step);
    out.series.append(record_2d(state, obs.get(), config.normalize_moments));
    if (next_snap != snaps.end() && *next_snap == step) {
      out.snapshots.push_back(state);
      ++next_snap;
    }
    if (progress) progress(step, state.time());
  }
  return out;
}

double estimate_4d_bytes(const SimulationConfig& c) {
  const double nx = static_cast<double>(c.Q) * c.M;
  const double nk = c.N_k;
  const double state = nx * nx * nk * nk * sizeof(double);
  const double table = nx * nx * nk * nk * sizeof(cplx);
  const double mult = nx * nx * nk * (nk / 2 + 1) * sizeof(cplx);
  const double plans = nk * c.M * (c.M * sizeof(double) + sizeof(int));
  // two distinct kernel and two distinct advection lengths per step at most
  const double copies = c.inflow == Inflow::initial ? 2.0 : 1.0;
  return copies * state + table + 2.0 * mult + 2.0 * plans;
}

RunResult4 evolve_4d(const SimulationConfig& config, const ProgressHook& progress) {
  config.validate();
  if (config.dimensions != 4) throw ParameterError("evolve_4d: configuration is not four-dimensional");
  const double need = estimate_4d_bytes(config);
  if (need > config.memory_budget_mb * 1024.0 * 1024.0)
    throw CapacityError("4-D run needs about " + std::to_string(static_cast<long>(need / (1024.0 * 1024.0))) +
                        " MiB, above the budget of " + std::to_string(static_cast<long>(config.memory_budget_mb)) +
                        " MiB");
  if (config.threads > 0) set_thread_count(config.threads);

  RunResult4 out;
  out.grid = make_grid(config);
  auto table = build_kernel_table(config, out.grid);
  WignerState4 state = config.init == InitKind::fermi_dirac
                           ? init_fermi_dirac_4d(out.grid, config.fermi_dirac, config.consts.hbar)
                           : init_gaussian_4d(out.grid, config.packet, config.packet2);
  std::unique_ptr<WignerState4> initial;
  if (config.inflow == Inflow::initial) initial = std::make_unique<WignerState4>(state);

  Stepper stepper(table, config.consts, config.scheme, config.max_tau, config.seam);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto record = [&] {
    ObservableRecord r;
    r.t = state.time();
    r.total_mass = total_mass(state);
    r.pr = r.mean_x = r.mean_p = r.var_x = r.var_p = r.uncertainty = nan;
    out.series.append(r);
  };

  const auto snaps = config.snapshot_steps();
  auto next_snap = snaps.begin();
  const long n = config.num_steps();
  record();
  if (next_snap != snaps.end() && *next_snap == 0) {
    out.snapshots.push_back({state.time(), spatial_marginal_2d(state)});
    ++next_snap;
  }
  for (long step = 1; step <= n; ++step) {
    stepper.step(state, config.dt, initial.get());
    state.set_time(static_cast<double>(step) * config.dt);
    if (!state.all_finite())
      throw DivergenceError("non-finite value in the Wigner function at step " + std::to_string(step), step);
    record();
    if (next_snap != snaps.end() && *next_snap == step) {
      out.snapshots.push_back({state.time(), spatial_marginal_2d(state)});
      ++next_snap;
    }
    if (progress) progress(step, state.time());
  }
  return out;
}

}  // namespace wigner
