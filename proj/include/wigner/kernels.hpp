#pragma once

#include <array>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "wigner/grid.hpp"
#include "wigner/quadrature.hpp"

namespace wigner {

struct PhysicalConstants {
  double hbar = 1.0;  // eV fs
  double mass = 1.0;  // eV fs^2 nm^-2

  void validate() const;
};

/// V(x) = H delta(x)
struct DeltaPotential {
  double H = 1.0;
};

/// V(x) = H log|x|. `epsilon` splits the coefficient integral into a Taylor
/// piece on (0, epsilon) and a cosine-integral piece.
struct LogarithmicPotential {
  double H = 1.0;
  double epsilon = 1e-5;
};

/// V(x) = H |x|^-alpha, 0 < alpha < 1
struct InversePowerPotential {
  double H = 1.0;
  double alpha = 0.5;
};

/// V(x) = H / x^2
struct InverseSquarePotential {
  double H = 1.0;
};

/// V(x) = H exp(-x^2 / (2 a^2)) / (sqrt(2 pi) a)
struct GaussianFinitePotential {
  double H = 1.0;
  double a = 1.0;
};

/// V(x1, x2) = H sum_i delta(x1 - d1_i) delta(x2 - d2_i)
struct MultiDelta2DPotential {
  double H = 1.0;
  std::vector<std::array<double, 2>> points;
};

using PotentialSpec = std::variant<DeltaPotential, LogarithmicPotential, InversePowerPotential,
                                   InverseSquarePotential, GaussianFinitePotential, MultiDelta2DPotential>;

std::string potential_name(const PotentialSpec& spec);
bool is_two_dimensional(const PotentialSpec& spec);
void validate_potential(const PotentialSpec& spec);

/// Potential V(x) for the families that have pointwise values away from
/// their singularity (used by the Poisson-summation route).
double potential_value(const PotentialSpec& spec, double x);

/// Wigner kernel V_w(x, k) of a one-dimensional family (fs^-1 nm).
/// Logarithmic returns the k -> 0+ limit -2Hx/hbar at k = 0; the inverse
/// power kernel returns 0 there.
double wigner_kernel_value(const PotentialSpec& spec, const PhysicalConstants& consts, double x, double k);

/// Wigner kernel of MultiDelta2D at (x1, x2, k1, k2).
double wigner_kernel_value_2d(const PotentialSpec& spec, const PhysicalConstants& consts, double x1, double x2,
                              double k1, double k2);

/// Prefactor of the MultiDelta2D kernel, 2H / (pi^2 hbar).
double multi_delta_prefactor(const MultiDelta2DPotential& p, const PhysicalConstants& consts);

/// Coefficients c_nu(x) of the truncated pseudo-differential operator.
///
/// One-dimensional tables are indexed (spatial point p, FFT slot s); the
/// four-dimensional table is indexed ((p1, p2), (s1, s2)) with p2 and s2
/// fastest. The Nyquist entries are computed like the others; the kernel
/// stage ignores them.
class KernelTable {
public:
  KernelTable() = default;
  KernelTable(GridPtr grid, bool four_dimensional, std::string label);

  const PhaseGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  bool four_dimensional() const noexcept { return four_d_; }
  const std::string& label() const noexcept { return label_; }

  std::size_t num_points() const noexcept { return num_points_; }
  std::size_t num_modes() const noexcept { return num_modes_; }

  cplx& at(std::size_t point, std::size_t slot) noexcept { return values_[point * num_modes_ + slot]; }
  cplx at(std::size_t point, std::size_t slot) const noexcept { return values_[point * num_modes_ + slot]; }
  /// Entry by signed mode number (1-D tables).
  cplx mode(std::size_t point, int nu) const noexcept;

  const std::vector<cplx>& values() const noexcept { return values_; }
  std::vector<cplx>& values() noexcept { return values_; }

private:
  GridPtr grid_;
  bool four_d_ = false;
  std::string label_;
  std::size_t num_points_ = 0;
  std::size_t num_modes_ = 0;
  std::vector<cplx> values_;
};

/// Exact-route coefficient table. Two-dimensional families need a grid used
/// as the tensor square of its spatial and wavenumber meshes.
KernelTable kernel_coefficients(const PotentialSpec& spec, const GridPtr& grid, const PhysicalConstants& consts,
                                const QuadSpec& quad = {});

/// One entry of the exact-route table for a 1-D family, at arbitrary x and
/// integer mode nu.
cplx kernel_coefficient(const PotentialSpec& spec, const PhysicalConstants& consts, double x, int nu, double L_k);

/// Poisson-summation approximation of the kernel, integrated term by term.
/// Default spacing pi / L_k when delta_y <= 0.
KernelTable poisson_kernel_coefficients(const PotentialSpec& spec, const GridPtr& grid,
                                        const PhysicalConstants& consts, double delta_y = 0.0);

/// Maximum-norm difference of two tables on the same grid.
double table_max_difference(const KernelTable& a, const KernelTable& b);

}  // namespace wigner
