#include "wigner/reference.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "wigner/errors.hpp"

namespace wigner::reference {

namespace {

// value at x of the column whose samples sit at data[p * stride]
double sample(const SpatialMesh& mesh, const double* data, std::size_t stride, double x, double left, double right) {
  const int e = mesh.locate(x);
  if (e < 0) return x < mesh.lo ? left : right;
  const auto m = static_cast<std::size_t>(mesh.points_per_element);
  std::vector<double> vals(m);
  for (std::size_t a = 0; a < m; ++a) vals[a] = data[(static_cast<std::size_t>(e) * m + a) * stride];
  return barycentric_eval(mesh, vals, e, x);
}

void sweep(const PhaseGrid& g, const PhysicalConstants& c, double tau, double* data, std::size_t stride,
           std::size_t ncols, std::size_t divisor, const double* left, const double* right, SeamDrift seam) {
  const auto& mesh = g.x;
  const std::size_t nx = mesh.size();
  const auto nk = static_cast<std::size_t>(g.k.num_points);
  std::vector<double> out(nx);
  for (std::size_t col = 0; col < ncols; ++col) {
    const std::size_t j = (col / divisor) % nk;
    const double v = c.hbar * g.k.transport_k(static_cast<int>(j), seam) / c.mass;
    const double lv = left ? left[col] : 0.0;
    const double rv = right ? right[col] : 0.0;
    for (std::size_t p = 0; p < nx; ++p) out[p] = sample(mesh, data + col, stride, mesh.points[p] - v * tau, lv, rv);
    for (std::size_t p = 0; p < nx; ++p) data[p * stride + col] = out[p];
  }
}

}  // namespace

void advect(WignerState& state, const PhysicalConstants& consts, double tau, const WignerState* inflow, SeamDrift seam) {
  const std::size_t nk = state.num_k();
  const double* left = inflow ? inflow->values().data() : nullptr;
  const double* right = inflow ? inflow->values().data() + (inflow->num_x() - 1) * nk : nullptr;
  sweep(state.grid(), consts, tau, state.values().data(), nk, nk, 1, left, right, seam);
}

void advect(WignerState4& state, const PhysicalConstants& consts, double tau, const WignerState4* inflow, SeamDrift seam) {
  const std::size_t nx = state.num_x();
  const std::size_t nk = state.num_k();
  const std::size_t plane = nx * nk * nk;
  const double* init = inflow ? inflow->values().data() : nullptr;
  sweep(state.grid(), consts, tau, state.values().data(), plane, plane, nk, init,
        init ? init + (nx - 1) * plane : nullptr, seam);
  for (std::size_t p1 = 0; p1 < nx; ++p1) {
    const double* base = init ? init + p1 * plane : nullptr;
    sweep(state.grid(), consts, tau, state.values().data() + p1 * plane, nk * nk, nk * nk, 1, base,
          base ? base + (nx - 1) * nk * nk : nullptr, seam);
  }
}

double apply_kernel(WignerState& state, const KernelTable& table, double tau) {
  const std::size_t n = state.num_k();
  if (table.four_dimensional() || table.num_points() != state.num_x()) throw ParameterError("reference kernel: shape");
  std::vector<cplx> tw(n);
  for (std::size_t r = 0; r < n; ++r) tw[r] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / n);
  double residue = 0.0;
  std::vector<cplx> modes(n);
  for (std::size_t p = 0; p < state.num_x(); ++p) {
    auto row = state.row(p);
    for (std::size_t s = 0; s < n; ++s) {
      cplx acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += row[j] * std::conj(tw[(s * j) % n]);
      modes[s] = acc / static_cast<double>(n) * (s == n / 2 ? cplx(1.0) : std::exp(tau * table.at(p, s)));
    }
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t s = 0; s < n; ++s) acc += modes[s] * tw[(s * j) % n];
      residue = std::max(residue, std::abs(acc.imag()));
      row[j] = acc.real();
    }
  }
  return residue;
}

double apply_kernel(WignerState4& state, const KernelTable& table, double tau) {
  const std::size_t n = state.num_k();
  const std::size_t nx = state.num_x();
  if (!table.four_dimensional() || table.num_points() != nx * nx) throw ParameterError("reference kernel: shape");
  std::vector<cplx> tw(n);
  for (std::size_t r = 0; r < n; ++r) tw[r] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(r) / n);
  double residue = 0.0;
  std::vector<cplx> modes(n * n);
  for (std::size_t p = 0; p < nx * nx; ++p) {
    double* blk = state.values().data() + p * n * n;
    for (std::size_t s1 = 0; s1 < n; ++s1)
      for (std::size_t s2 = 0; s2 < n; ++s2) {
        cplx acc = 0.0;
        for (std::size_t j1 = 0; j1 < n; ++j1)
          for (std::size_t j2 = 0; j2 < n; ++j2)
            acc += blk[j1 * n + j2] * std::conj(tw[(s1 * j1 + s2 * j2) % n]);
        const bool nyq = s1 == n / 2 || s2 == n / 2;
        modes[s1 * n + s2] = acc / static_cast<double>(n * n) * (nyq ? cplx(1.0) : std::exp(tau * table.at(p, s1 * n + s2)));
      }
    for (std::size_t j1 = 0; j1 < n; ++j1)
      for (std::size_t j2 = 0; j2 < n; ++j2) {
        cplx acc = 0.0;
        for (std::size_t s1 = 0; s1 < n; ++s1)
          for (std::size_t s2 = 0; s2 < n; ++s2) acc += modes[s1 * n + s2] * tw[(s1 * j1 + s2 * j2) % n];
        residue = std::max(residue, std::abs(acc.imag()));
        blk[j1 * n + j2] = acc.real();
      }
  }
  return residue;
}

}  // namespace wigner::reference
