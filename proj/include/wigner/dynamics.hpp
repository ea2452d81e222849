#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "wigner/grid.hpp"
#include "wigner/kernels.hpp"

namespace wigner {

/// Composition of Strang steps A(c dt/2) B(c dt) A(c dt/2), A = advection,
/// B = kernel stage, over the stage coefficients c.
struct SplitScheme {
  enum class Kind { strang, yoshida4 };

  Kind kind = Kind::yoshida4;
  std::vector<double> stage_coefficients;

  static SplitScheme strang();
  /// Triple jump w1, w0, w1 with w1 = 1 / (2 - 2^(1/3)) and w0 = 1 - 2 w1 < 0.
  static SplitScheme yoshida4();
  /// "strang" or "yoshida4".
  static SplitScheme from_name(const std::string& name);

  std::string name() const;
  int order() const noexcept { return kind == Kind::strang ? 2 : 4; }

  /// Sub-flow sequence of one step of length dt, with adjacent advections
  /// merged: (is_advection, tau) pairs.
  std::vector<std::pair<bool, double>> substeps(double dt) const;
};

/// What enters through the inflow boundary.
enum class Inflow {
  zero,     // homogeneous inflow data
  initial,  // the initial field's boundary value at the same wavenumber(s)
};

/// Semi-Lagrangian solver of the transport sub-flow f(x) <- f(x - v tau),
/// v = hbar k / m, on equal-width Chebyshev elements.
///
/// For a given shift every element sees the same departure geometry, so a
/// plan stores, per wavenumber node and local node, the element offset and the
/// M Lagrange weights of the departure point. Plans are cached per tau.
class Advector {
public:
  Advector(GridPtr grid, const PhysicalConstants& consts, double max_abs_tau = 10.0,
           SeamDrift seam = SeamDrift::node);

  const PhaseGrid& grid() const noexcept { return *grid_; }

  /// Columns of a row-major (num_x x ncols) block with row stride `stride`;
  /// column c moves with hbar transport_k(node) / m, node = (c / divisor) % N_k.
  /// `left` / `right` give the inflow value per column (null means zero).
  struct ColumnLayout {
    std::size_t stride = 0;
    std::size_t ncols = 0;
    std::size_t divisor = 1;  // velocity node = (c / divisor) % N_k
  };

  void advect_columns(double* data, const ColumnLayout& layout, double tau, const double* left = nullptr,
                      const double* right = nullptr) const;

  /// 2-D phase space.
  void apply(WignerState& state, double tau, const WignerState* inflow = nullptr) const;
  /// 4-D phase space: x1 sweep with hbar k1 / m, then x2 sweep with hbar k2 / m.
  void apply(WignerState4& state, double tau, const WignerState4* inflow = nullptr) const;

  /// Drops cached plans.
  void clear_cache() const;
  /// Bytes held by one plan on this grid.
  double plan_bytes() const noexcept;

private:
  struct Plan {
    std::vector<int> offset;       // [node j][local l] element shift, or kOutLeft / kOutRight
    std::vector<double> weights;   // [node j][local l][m]
  };
  static constexpr int kOutLeft = -1 << 30;
  static constexpr int kOutRight = 1 << 30;

  std::shared_ptr<const Plan> plan_for(double tau) const;
  std::shared_ptr<const Plan> build_plan(double tau) const;

  GridPtr grid_;
  PhysicalConstants consts_;
  double max_abs_tau_;
  SeamDrift seam_;
  mutable std::mutex mutex_;
  mutable std::map<double, std::shared_ptr<const Plan>> cache_;
};

/// Exact flow of the truncated pseudo-differential sub-equation: every mode
/// alpha_nu of each k-slice is multiplied by exp(tau c_nu(x)). The Nyquist
/// multiplier is forced to 1 (c = 0) so the result stays real.
class KernelStage {
public:
  explicit KernelStage(std::shared_ptr<const KernelTable> table);

  const KernelTable& table() const noexcept { return *table_; }

  void apply(WignerState& state, double tau) const;
  void apply(WignerState4& state, double tau) const;

  void clear_cache() const;
  double multiplier_bytes() const noexcept;

private:
  // half-spectrum multipliers, one row per spatial point
  std::shared_ptr<const std::vector<cplx>> multipliers(double tau) const;

  std::shared_ptr<const KernelTable> table_;
  std::size_t half_ = 0;  // spectrum length per spatial point
  mutable std::mutex mutex_;
  mutable std::map<double, std::shared_ptr<const std::vector<cplx>>> cache_;
};

/// Free functions matching the sub-flow vocabulary. They build throwaway
/// solvers; time loops should hold an Advector / KernelStage instead.
void advect(WignerState& state, const PhysicalConstants& consts, double tau, Inflow inflow = Inflow::zero);
void apply_kernel(WignerState& state, const KernelTable& table, double tau);

/// Theta_V^T[f] evaluated directly in mode space: sum_nu c_nu alpha_nu psi_nu.
WignerState kernel_operator(const WignerState& state, const KernelTable& table);

/// One splitting step of length dt; advances state time.
class Stepper {
public:
  Stepper(std::shared_ptr<const KernelTable> table, const PhysicalConstants& consts, SplitScheme scheme,
          double max_abs_tau = 10.0, SeamDrift seam = SeamDrift::node);

  void step(WignerState& state, double dt, const WignerState* inflow = nullptr) const;
  void step(WignerState4& state, double dt, const WignerState4* inflow = nullptr) const;

  const Advector& advector() const noexcept { return advector_; }
  const KernelStage& kernel_stage() const noexcept { return kernel_; }
  const SplitScheme& scheme() const noexcept { return scheme_; }

  /// Cache footprint for a given dt (plans plus multipliers).
  double cache_bytes(double dt) const;

private:
  KernelStage kernel_;
  Advector advector_;
  SplitScheme scheme_;
};

}  // namespace wigner
