#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace wigner {

using cplx = std::complex<double>;

/// Chebyshev spectral-element discretization of an interval [lo, hi].
///
/// The interval is split into `num_elements` equal cells. Each cell carries the
/// same `points_per_element` Chebyshev-Gauss-Lobatto nodes, sorted ascending, so
/// neighbouring cells share their end points (stored twice).
struct SpatialMesh {
  double lo = 0.0;
  double hi = 0.0;
  int num_elements = 0;
  int points_per_element = 0;
  std::vector<double> element_boundaries;   // num_elements + 1 positions
  std::vector<double> reference_nodes;      // nodes on [-1, 1], ascending
  std::vector<double> barycentric_weights;  // shared by every element
  std::vector<double> points;               // num_elements * points_per_element

  std::size_t size() const noexcept { return points.size(); }
  double element_width() const noexcept { return (hi - lo) / num_elements; }
  double element_lo(int e) const noexcept { return element_boundaries[static_cast<std::size_t>(e)]; }
  double element_hi(int e) const noexcept { return element_boundaries[static_cast<std::size_t>(e) + 1]; }
  double point(int e, int l) const noexcept {
    return points[static_cast<std::size_t>(e) * points_per_element + l];
  }

  /// Element whose closed interval contains x (the left one on a shared
  /// boundary, except at `hi`). Returns -1 when x lies outside [lo, hi].
  int locate(double x) const noexcept;
};

SpatialMesh build_spatial_mesh(double lo, double hi, int num_elements, int points_per_element);

/// Values of the M Lagrange basis polynomials of one element at a point given
/// by its reference coordinate t in [-1, 1]. Exact unit vectors at the nodes.
void lagrange_row(const SpatialMesh& mesh, double t, std::span<double> row);

/// Barycentric (second form) evaluation of the element interpolant at x.
double barycentric_eval(const SpatialMesh& mesh, std::span<const double> element_values, int element,
                        double x);

/// Drift of the k_min node, which is also k_max on the periodic axis.
enum class SeamDrift {
  node,  // its own wavenumber k_min
  mean,  // (k_min + k_max) / 2; keeps k -> -k symmetry of a symmetric axis
};

/// Uniform periodic collocation in wavenumber, k_j = k_min + j L_k / N_k.
struct WavenumberMesh {
  double k_min = 0.0;
  double k_max = 0.0;
  int num_points = 0;

  double length() const noexcept { return k_max - k_min; }
  double spacing() const noexcept { return length() / num_points; }
  double node(int j) const noexcept { return k_min + j * length() / num_points; }
  std::vector<double> nodes() const;
  /// Wavenumber that sets the drift of node j. Averaging the k_min and k_max
  /// departures every step would add an O(dt) smearing; `mean` is its
  /// dt -> 0 limit.
  double transport_k(int j, SeamDrift seam) const noexcept {
    return j == 0 && seam == SeamDrift::mean ? 0.5 * (k_min + k_max) : node(j);
  }

  /// Fourier mode carried by FFT slot s (0 <= s < N_k); modes run -N/2+1..N/2.
  int mode_of_slot(int s) const noexcept { return s <= num_points / 2 ? s : s - num_points; }
  int slot_of_mode(int nu) const noexcept { return nu >= 0 ? nu : nu + num_points; }
  /// Angular wavenumber of mode nu in the dual variable, 2 pi nu / L_k.
  double mode_frequency(int nu) const noexcept;
};

WavenumberMesh build_wavenumber_mesh(double k_min, double k_max, int num_points);

/// Mode coefficients alpha_nu of the trigonometric interpolant through the
/// nodal values, stored in FFT slot order (see WavenumberMesh::slot_of_mode).
std::vector<cplx> k_forward(std::span<const double> values);

/// Nodal values from mode coefficients (slot order). The input is assumed
/// conjugate-symmetric; only slots 0..N/2 are read.
std::vector<double> k_inverse(std::span<const cplx> modes);

/// Trigonometric interpolation weight of node j at wavenumber k (the periodic
/// Dirichlet kernel with the Nyquist mode split symmetrically).
double trig_interp_weight(const WavenumberMesh& mesh, int j, double k);

/// Two-dimensional phase space: one spatial and one wavenumber axis.
struct PhaseGrid {
  SpatialMesh x;
  WavenumberMesh k;

  std::size_t size() const noexcept { return x.size() * static_cast<std::size_t>(k.num_points); }
};

using GridPtr = std::shared_ptr<const PhaseGrid>;

GridPtr make_phase_grid(double x_lo, double x_hi, int num_elements, int points_per_element, double k_min,
                        double k_max, int num_k);

/// Real phase-space field f(x_p, k_j), row-major with the wavenumber index
/// fastest.
class WignerState {
public:
  WignerState() = default;
  explicit WignerState(GridPtr grid, double time = 0.0);

  const PhaseGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t num_x() const noexcept { return grid_->x.size(); }
  std::size_t num_k() const noexcept { return static_cast<std::size_t>(grid_->k.num_points); }

  double& operator()(std::size_t p, std::size_t j) noexcept { return values_[p * num_k() + j]; }
  double operator()(std::size_t p, std::size_t j) const noexcept { return values_[p * num_k() + j]; }

  std::span<double> row(std::size_t p) noexcept { return {values_.data() + p * num_k(), num_k()}; }
  std::span<const double> row(std::size_t p) const noexcept { return {values_.data() + p * num_k(), num_k()}; }

  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double time() const noexcept { return time_; }
  void set_time(double t) noexcept { time_ = t; }

  bool all_finite() const noexcept;

private:
  GridPtr grid_;
  std::vector<double> values_;
  double time_ = 0.0;
};

/// Real field f(x1, x2, k1, k2) on the tensor square of a PhaseGrid. Flat
/// index ((p1 * Nx + p2) * Nk + j1) * Nk + j2, so each spatial point owns a
/// contiguous Nk x Nk wavenumber block.
class WignerState4 {
public:
  WignerState4() = default;
  explicit WignerState4(GridPtr grid, double time = 0.0);

  const PhaseGrid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::size_t num_x() const noexcept { return grid_->x.size(); }
  std::size_t num_k() const noexcept { return static_cast<std::size_t>(grid_->k.num_points); }
  std::size_t block_size() const noexcept { return num_k() * num_k(); }

  double& operator()(std::size_t p1, std::size_t p2, std::size_t j1, std::size_t j2) noexcept {
    return values_[((p1 * num_x() + p2) * num_k() + j1) * num_k() + j2];
  }
  double operator()(std::size_t p1, std::size_t p2, std::size_t j1, std::size_t j2) const noexcept {
    return values_[((p1 * num_x() + p2) * num_k() + j1) * num_k() + j2];
  }
  /// Wavenumber block of spatial point (p1, p2).
  std::span<const double> block(std::size_t p1, std::size_t p2) const noexcept {
    return {values_.data() + (p1 * num_x() + p2) * block_size(), block_size()};
  }

  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  double time() const noexcept { return time_; }
  void set_time(double t) noexcept { time_ = t; }

  bool all_finite() const noexcept;

  /// Bytes needed to hold one state on `grid`.
  static double storage_bytes(const PhaseGrid& grid) noexcept;

private:
  GridPtr grid_;
  std::vector<double> values_;
  double time_ = 0.0;
};

/// Dense matrix on the cell-centred uniform evaluation mesh, row i = x_i,
/// column j = k_j.
struct UniformField {
  int n = 0;
  double x_lo = 0.0, x_hi = 0.0, k_min = 0.0, k_max = 0.0;
  std::vector<double> values;

  double dx() const noexcept { return (x_hi - x_lo) / n; }
  double dk() const noexcept { return (k_max - k_min) / n; }
  double x(int i) const noexcept { return x_lo + (i + 0.5) * dx(); }
  double k(int j) const noexcept { return k_min + (j + 0.5) * dk(); }
  double operator()(int i, int j) const noexcept { return values[static_cast<std::size_t>(i) * n + j]; }
};

/// Spatial interpolation matrix (n_um x num_x, stored sparse per row as one
/// element plus M weights) evaluated at the cell centres of the uniform mesh.
struct UniformXSampler {
  std::vector<int> element;     // per uniform row
  std::vector<double> weights;  // n_um * M
};

UniformXSampler make_uniform_x_sampler(const SpatialMesh& mesh, int n_um);

/// Dense trig-interpolation matrix (n_um x N_k) to the uniform k centres.
std::vector<double> make_uniform_k_sampler(const WavenumberMesh& mesh, int n_um);

UniformField resample_uniform(const WignerState& state, int n_um);

}  // namespace wigner
