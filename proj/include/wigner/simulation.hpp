#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wigner/dynamics.hpp"
#include "wigner/kernels.hpp"
#include "wigner/observables.hpp"

namespace wigner {

enum class KernelRoute { exact, poisson };
enum class InitKind { gaussian, fermi_dirac };

struct SimulationConfig {
  int dimensions = 2;  // phase-space dimension: 2 or 4

  // grid, shared by every spatial / wavenumber axis
  double x_lo = -30.0, x_hi = 30.0;
  int Q = 20, M = 55;
  double k_min = -3.141592653589793, k_max = 3.141592653589793;
  int N_k = 128;

  PhysicalConstants consts;
  PotentialSpec potential = DeltaPotential{1.0};
  KernelRoute route = KernelRoute::exact;
  double poisson_dy = 0.0;  // <= 0: default spacing
  QuadSpec quad;

  InitKind init = InitKind::gaussian;
  GaussianPacketSpec packet;
  GaussianPacketSpec packet2;  // second dimension in 4-D
  FermiDiracSpec fermi_dirac;

  double dt = 0.01, t_final = 10.0;
  std::vector<double> snapshot_times;  // empty: t_final only
  SplitScheme scheme = SplitScheme::yoshida4();
  Inflow inflow = Inflow::zero;
  SeamDrift seam = SeamDrift::node;
  double max_tau = 10.0;

  int N_um = 600;
  bool observables = true;          // uniform-mesh moments each step
  bool normalize_moments = false;   // divide moments by the mesh mass
  int threads = 0;                  // 0: leave the runtime default
  double memory_budget_mb = 4096.0; // 4-D runs only

  void validate() const;
  long num_steps() const;
  /// Step indices at which snapshots are taken, ascending and unique.
  std::vector<long> snapshot_steps() const;
};

GridPtr make_grid(const SimulationConfig& config);

/// Coefficient table for the configured route.
std::shared_ptr<const KernelTable> build_kernel_table(const SimulationConfig& config, const GridPtr& grid);

struct RunResult {
  GridPtr grid;
  std::vector<WignerState> snapshots;
  ObservableSeries series;
  std::vector<std::string> warnings;
};

struct MarginalSnapshot {
  double t = 0.0;
  std::vector<double> fsm;  // (p1, p2) row-major on the collocation points
};

struct RunResult4 {
  GridPtr grid;
  std::vector<MarginalSnapshot> snapshots;
  ObservableSeries series;
  std::vector<std::string> warnings;
};

/// Called after every step with (step index, state time).
using ProgressHook = std::function<void(long, double)>;

/// 2-D run. A prebuilt table may be passed to skip construction.
RunResult evolve(const SimulationConfig& config, std::shared_ptr<const KernelTable> table = nullptr,
                 const ProgressHook& progress = {});

/// 4-D run; snapshots keep only the spatial marginal. The series records
/// time and total mass; the uniform-mesh columns are NaN.
RunResult4 evolve_4d(const SimulationConfig& config, const ProgressHook& progress = {});

/// Estimated peak bytes of a 4-D run (state, inflow copy, table, caches).
double estimate_4d_bytes(const SimulationConfig& config);

}  // namespace wigner
