#include "wigner/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>

#include "wigner/errors.hpp"
#include "wigner/fft.hpp"
#include "wigner/parallel.hpp"

namespace wigner {

SpatialMesh build_spatial_mesh(double lo, double hi, int num_elements, int points_per_element) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw ParameterError("spatial mesh: domain must satisfy X_L < X_R");
  if (num_elements < 1) throw ParameterError("spatial mesh: Q must be at least 1");
  if (points_per_element < 3) throw ParameterError("spatial mesh: M must be at least 3");

  SpatialMesh mesh;
  mesh.lo = lo;
  mesh.hi = hi;
  mesh.num_elements = num_elements;
  mesh.points_per_element = points_per_element;

  const int q = num_elements;
  const int m = points_per_element;
  const double centre = 0.5 * (lo + hi);
  const double half_length = 0.5 * (hi - lo);
  // centre-relative form keeps a symmetric domain exactly symmetric
  mesh.element_boundaries.resize(static_cast<std::size_t>(q) + 1);
  for (int e = 0; e <= q; ++e)
    mesh.element_boundaries[static_cast<std::size_t>(e)] = centre + half_length * (2.0 * e - q) / q;
  mesh.element_boundaries.front() = lo;
  mesh.element_boundaries.back() = hi;

  // sin form of the Gauss-Lobatto points: exactly antisymmetric in floating point
  mesh.reference_nodes.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j)
    mesh.reference_nodes[static_cast<std::size_t>(j)] =
        std::sin(std::numbers::pi * (2.0 * j - (m - 1)) / (2.0 * (m - 1)));
  mesh.reference_nodes.front() = -1.0;
  mesh.reference_nodes.back() = 1.0;

  mesh.barycentric_weights.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == m - 1) w *= 0.5;
    mesh.barycentric_weights[static_cast<std::size_t>(j)] = w;
  }

  mesh.points.resize(static_cast<std::size_t>(q) * m);
  for (int e = 0; e < q; ++e) {
    const double a = mesh.element_lo(e);
    const double b = mesh.element_hi(e);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int j = 0; j < m; ++j)
      mesh.points[static_cast<std::size_t>(e) * m + j] = mid + half * mesh.reference_nodes[static_cast<std::size_t>(j)];
    mesh.points[static_cast<std::size_t>(e) * m] = a;
    mesh.points[static_cast<std::size_t>(e) * m + m - 1] = b;
  }
  return mesh;
}

int SpatialMesh::locate(double x) const noexcept {
  if (!(x >= lo && x <= hi)) return -1;
  int e = static_cast<int>(std::floor((x - lo) / element_width()));
  e = std::clamp(e, 0, num_elements - 1);
  while (e > 0 && x < element_lo(e)) --e;
  while (e < num_elements - 1 && x > element_hi(e)) ++e;
  if (e > 0 && x == element_lo(e)) --e;
  return e;
}

void lagrange_row(const SpatialMesh& mesh, double t, std::span<double> row) {
  const auto m = mesh.reference_nodes.size();
  if (row.size() != m) throw ParameterError("lagrange_row: row length must equal M");
  for (std::size_t j = 0; j < m; ++j) {
    if (t == mesh.reference_nodes[j]) {
      std::fill(row.begin(), row.end(), 0.0);
      row[j] = 1.0;
      return;
    }
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    row[j] = mesh.barycentric_weights[j] / (t - mesh.reference_nodes[j]);
    sum += row[j];
  }
  for (auto& r : row) r /= sum;
}

double barycentric_eval(const SpatialMesh& mesh, std::span<const double> element_values, int element,
                        double x) {
  const auto m = static_cast<std::size_t>(mesh.points_per_element);
  if (element_values.size() != m) throw ParameterError("barycentric_eval: expected M element values");
  if (element < 0 || element >= mesh.num_elements) throw ParameterError("barycentric_eval: bad element index");
  const double a = mesh.element_lo(element);
  const double b = mesh.element_hi(element);
  if (!(x >= a && x <= b))
    throw DomainError("barycentric_eval: point " + std::to_string(x) + " outside element " + std::to_string(element));
  const double t = (2.0 * x - (a + b)) / (b - a);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double d = t - mesh.reference_nodes[j];
    if (d == 0.0) return element_values[j];
    const double w = mesh.barycentric_weights[j] / d;
    num += w * element_values[j];
    den += w;
  }
  return num / den;
}

WavenumberMesh build_wavenumber_mesh(double k_min, double k_max, int num_points) {
  if (!(k_min < k_max)) throw ParameterError("wavenumber mesh: k_min must be below k_max");
  if (num_points < 2 || num_points % 2 != 0) throw ParameterError("wavenumber mesh: N_k must be even and >= 2");
  return WavenumberMesh{k_min, k_max, num_points};
}

std::vector<double> WavenumberMesh::nodes() const {
  std::vector<double> out(static_cast<std::size_t>(num_points));
  for (int j = 0; j < num_points; ++j) out[static_cast<std::size_t>(j)] = node(j);
  return out;
}

double WavenumberMesh::mode_frequency(int nu) const noexcept { return 2.0 * std::numbers::pi * nu / length(); }

const RealFft& cached_fft(int n, bool two_d) {
  static std::mutex mutex;
  static std::map<std::pair<int, bool>, std::unique_ptr<RealFft>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{n, two_d}];
  if (!slot) slot = std::make_unique<RealFft>(n, two_d);
  return *slot;
}

std::vector<cplx> k_forward(std::span<const double> values) {
  const int n = static_cast<int>(values.size());
  if (n < 2 || n % 2 != 0) throw ParameterError("k_forward: length must be even and >= 2");
  const RealFft& fft = cached_fft(n, false);
  std::vector<cplx> half(static_cast<std::size_t>(n / 2 + 1));
  fft.forward(values.data(), half.data());
  std::vector<cplx> modes(static_cast<std::size_t>(n));
  const double scale = 1.0 / n;
  for (int s = 0; s <= n / 2; ++s) modes[static_cast<std::size_t>(s)] = half[static_cast<std::size_t>(s)] * scale;
  for (int s = n / 2 + 1; s < n; ++s) modes[static_cast<std::size_t>(s)] = std::conj(modes[static_cast<std::size_t>(n - s)]);
  return modes;
}

std::vector<double> k_inverse(std::span<const cplx> modes) {
  const int n = static_cast<int>(modes.size());
  if (n < 2 || n % 2 != 0) throw ParameterError("k_inverse: length must be even and >= 2");
  const RealFft& fft = cached_fft(n, false);
  std::vector<cplx> half(modes.begin(), modes.begin() + n / 2 + 1);
  std::vector<double> out(static_cast<std::size_t>(n));
  fft.backward(half.data(), out.data());
  return out;
}

double trig_interp_weight(const WavenumberMesh& mesh, int j, double k) {
  const int n = mesh.num_points;
  double phi = 2.0 * std::numbers::pi * (k - mesh.node(j)) / mesh.length();
  phi = std::remainder(phi, 2.0 * std::numbers::pi);
  if (std::abs(phi) < 1e-15) return 1.0;
  const double s = std::sin(0.5 * phi);
  return std::sin(0.5 * n * phi) * std::cos(0.5 * phi) / (s * n);
}

GridPtr make_phase_grid(double x_lo, double x_hi, int num_elements, int points_per_element, double k_min,
                        double k_max, int num_k) {
  auto g = std::make_shared<PhaseGrid>();
  g->x = build_spatial_mesh(x_lo, x_hi, num_elements, points_per_element);
  g->k = build_wavenumber_mesh(k_min, k_max, num_k);
  return g;
}

WignerState::WignerState(GridPtr grid, double time) : grid_(std::move(grid)), time_(time) {
  if (!grid_) throw ParameterError("WignerState: null grid");
  values_.assign(grid_->size(), 0.0);
}

bool WignerState::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

WignerState4::WignerState4(GridPtr grid, double time) : grid_(std::move(grid)), time_(time) {
  if (!grid_) throw ParameterError("WignerState4: null grid");
  const double n = storage_bytes(*grid_) / sizeof(double);
  values_.assign(static_cast<std::size_t>(n), 0.0);
}

bool WignerState4::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double WignerState4::storage_bytes(const PhaseGrid& grid) noexcept {
  const double nx = static_cast<double>(grid.x.size());
  const double nk = grid.k.num_points;
  return nx * nx * nk * nk * sizeof(double);
}

UniformXSampler make_uniform_x_sampler(const SpatialMesh& mesh, int n_um) {
  if (n_um < 1) throw ParameterError("uniform mesh: N_um must be at least 1");
  const auto m = static_cast<std::size_t>(mesh.points_per_element);
  UniformXSampler s;
  s.element.resize(static_cast<std::size_t>(n_um));
  s.weights.resize(static_cast<std::size_t>(n_um) * m);
  const double h = (mesh.hi - mesh.lo) / n_um;
  for (int i = 0; i < n_um; ++i) {
    const double x = mesh.lo + (i + 0.5) * h;
    const int e = mesh.locate(x);
    const double a = mesh.element_lo(e);
    const double b = mesh.element_hi(e);
    s.element[static_cast<std::size_t>(i)] = e;
    lagrange_row(mesh, (2.0 * x - (a + b)) / (b - a), {s.weights.data() + static_cast<std::size_t>(i) * m, m});
  }
  return s;
}

std::vector<double> make_uniform_k_sampler(const WavenumberMesh& mesh, int n_um) {
  if (n_um < 1) throw ParameterError("uniform mesh: N_um must be at least 1");
  const auto nk = static_cast<std::size_t>(mesh.num_points);
  std::vector<double> t(static_cast<std::size_t>(n_um) * nk);
  const double h = mesh.length() / n_um;
  for (int jj = 0; jj < n_um; ++jj) {
    const double k = mesh.k_min + (jj + 0.5) * h;
    for (std::size_t j = 0; j < nk; ++j)
      t[static_cast<std::size_t>(jj) * nk + j] = trig_interp_weight(mesh, static_cast<int>(j), k);
  }
  return t;
}

UniformField resample_uniform(const WignerState& state, int n_um) {
  const auto& grid = state.grid();
  const auto xs = make_uniform_x_sampler(grid.x, n_um);
  const auto ks = make_uniform_k_sampler(grid.k, n_um);
  const auto m = static_cast<std::size_t>(grid.x.points_per_element);
  const auto nk = state.num_k();
  const auto n = static_cast<std::size_t>(n_um);

  UniformField out;
  out.n = n_um;
  out.x_lo = grid.x.lo;
  out.x_hi = grid.x.hi;
  out.k_min = grid.k.k_min;
  out.k_max = grid.k.k_max;
  out.values.assign(n * n, 0.0);

  WIGNER_PARALLEL_FOR
  for (long i = 0; i < static_cast<long>(n); ++i) {
    std::vector<double> g(nk, 0.0);
    const auto e = static_cast<std::size_t>(xs.element[static_cast<std::size_t>(i)]);
    const double* w = xs.weights.data() + static_cast<std::size_t>(i) * m;
    for (std::size_t a = 0; a < m; ++a) {
      const double wa = w[a];
      if (wa == 0.0) continue;
      const auto row = state.row(e * m + a);
      for (std::size_t j = 0; j < nk; ++j) g[j] += wa * row[j];
    }
    double* dst = out.values.data() + static_cast<std::size_t>(i) * n;
    for (std::size_t jj = 0; jj < n; ++jj) {
      const double* t = ks.data() + jj * nk;
      double acc = 0.0;
      for (std::size_t j = 0; j < nk; ++j) acc += t[j] * g[j];
      dst[jj] = acc;
    }
  }
  return out;
}

}  // namespace wigner
