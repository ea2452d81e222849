#pragma once

#include <span>
#include <vector>

#include "wigner/grid.hpp"

namespace wigner {

struct GaussianPacketSpec {
  double x0 = -10.0;  // nm
  double k0 = 2.0;    // nm^-1
  double sigma = 2.0; // nm

  void validate() const;
};

struct FermiDiracSpec {
  double effective_mass_ratio = 0.067;
  double m_e = 5.68562966;     // eV fs^2 nm^-2
  double k_B = 8.61734279e-5;  // eV / K
  double T = 300.0;            // K
  double E_F = 0.1;            // eV

  double mass() const noexcept { return effective_mass_ratio * m_e; }
  void validate() const;
};

/// f = exp(-(x - x0)^2 / (2 sigma^2) - 2 sigma^2 (k - k0)^2) / pi at the
/// collocation points.
WignerState init_gaussian(const GridPtr& grid, const GaussianPacketSpec& spec);

/// Mass of the packet lying outside the truncated phase-space box.
double gaussian_tail_mass(const PhaseGrid& grid, const GaussianPacketSpec& spec);

/// Product of two packets, one per dimension.
WignerState4 init_gaussian_4d(const GridPtr& grid, const GaussianPacketSpec& first, const GaussianPacketSpec& second);

/// Position-independent 2-D Fermi-Dirac Wigner function at (k1, k2).
double fermi_dirac_value(const FermiDiracSpec& spec, double hbar, double k1, double k2);

WignerState4 init_fermi_dirac_4d(const GridPtr& grid, const FermiDiracSpec& spec, double hbar);

/// Element-wise Clenshaw-Curtis weights, one per stored collocation point
/// (shared end points carry the weight of each of their elements).
std::vector<double> clenshaw_curtis_weights(const SpatialMesh& mesh);

/// int f dk per stored spatial point, exact in mode space (L_k alpha_0).
std::vector<double> spatial_marginal(const WignerState& state);
/// F_sm(x1, x2) = int int f dk1 dk2, row-major over (p1, p2).
std::vector<double> spatial_marginal_2d(const WignerState4& state);

double total_mass(const WignerState& state);
double total_mass(const WignerState4& state);

/// Sum in a fixed pairwise order, independent of how the terms were produced.
double pairwise_sum(std::span<const double> v);

struct Moments {
  double mass = 0.0;  // midpoint mass on the uniform mesh
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
  double product = 0.0;  // sigma_x sigma_p
};

/// Midpoint quadratures on the cell-centred N_um x N_um mesh, evaluated as
/// linear functionals of the collocation values: the resampling matrices are
/// folded into per-point weight vectors once, so each observable costs one
/// pass over the state.
class UniformObservables {
public:
  UniformObservables(const PhaseGrid& grid, int n_um, double hbar);

  int n_um() const noexcept { return n_um_; }

  struct Sums {
    double mass = 0.0, partial = 0.0, x = 0.0, x2 = 0.0, p = 0.0, p2 = 0.0;
  };
  Sums sums(const WignerState& state) const;

  double partial_mass(const WignerState& state) const { return sums(state).partial; }
  Moments moments(const WignerState& state, bool normalize = false) const;

private:
  int n_um_;
  std::size_t nx_, nk_;
  std::vector<double> wx_one_, wx_pos_, wx_x_, wx_x2_;  // per stored x point
  std::vector<double> wk_one_, wk_p_, wk_p2_;           // per k node
};

/// Moments from raw sums. Unnormalized (the averages of the text) unless
/// `normalize`, which divides by the mesh mass first. Variances below -1e-10
/// raise NumericQualityError; smaller negatives are clipped.
Moments moments_from_sums(const UniformObservables::Sums& s, bool normalize);

/// P_r = int_{x >= 0} f on the uniform mesh.
double partial_mass(const WignerState& state, int n_um);

/// sigma_x sigma_p and the moments behind it (p = hbar k).
Moments uncertainty(const WignerState& state, int n_um, double hbar, bool normalize = false);

/// Same quantities by explicit resampling followed by midpoint sums.
Moments uncertainty_reference(const WignerState& state, int n_um, double hbar, bool normalize = false);
double partial_mass_reference(const WignerState& state, int n_um);

struct ErrorNorms {
  double eps2 = 0.0;
  double eps_inf = 0.0;
};

/// Discrete L2 (midpoint weights) and max-norm distance after resampling both
/// states to the same uniform mesh.
ErrorNorms error_norms(const WignerState& candidate, const WignerState& reference, int n_um);
ErrorNorms error_norms(const UniformField& candidate, const UniformField& reference);

struct ObservableRecord {
  double t = 0.0;
  double total_mass = 0.0;
  double pr = 0.0;
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
  double uncertainty = 0.0;
};

class ObservableSeries {
public:
  /// Times must increase strictly.
  void append(const ObservableRecord& r);
  const std::vector<ObservableRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  const ObservableRecord& back() const { return records_.back(); }
  /// Record whose time is closest to t.
  const ObservableRecord& at_time(double t) const;

private:
  std::vector<ObservableRecord> records_;
};

}  // namespace wigner
