#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "wigner/errors.hpp"
#include "wigner/grid.hpp"

using namespace wigner;

namespace {

// direct O(N^2) DFT in the solver's basis convention
std::vector<cplx> naive_modes(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<cplx> out(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) acc += v[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * std::numbers::pi * s * j / n);
    out[static_cast<std::size_t>(s)] = acc / static_cast<double>(n);
  }
  return out;
}

double lagrange_direct(const std::vector<double>& nodes, const std::vector<double>& vals, double x) {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double l = 1.0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
      if (j != i) l *= (x - nodes[j]) / (nodes[i] - nodes[j]);
    sum += vals[i] * l;
  }
  return sum;
}

}  // namespace

TEST_CASE("spatial mesh nodes") {
  const auto m3 = build_spatial_mesh(-1.0, 1.0, 1, 3);
  CHECK(m3.points.size() == 3);
  CHECK(m3.points[0] == -1.0);
  CHECK(std::abs(m3.points[1]) < 1e-16);
  CHECK(m3.points[2] == 1.0);

  const auto m5 = build_spatial_mesh(0.0, 2.0, 1, 5);
  const double r = std::sqrt(2.0) / 2.0;
  const double expected[] = {0.0, 1.0 - r, 1.0, 1.0 + r, 2.0};
  for (int i = 0; i < 5; ++i) CHECK(m5.points[static_cast<std::size_t>(i)] == doctest::Approx(expected[i]).epsilon(1e-15));

  const auto big = build_spatial_mesh(-30.0, 30.0, 20, 55);
  CHECK(big.size() == 1100);
  CHECK(big.element_width() == doctest::Approx(3.0));
  for (int e = 0; e < 20; ++e) {
    CHECK(big.point(e, 0) == big.element_lo(e));
    CHECK(big.point(e, 54) == big.element_hi(e));
    for (int l = 1; l < 55; ++l) CHECK(big.point(e, l) > big.point(e, l - 1));
  }
  for (std::size_t i = 0; i < big.size(); ++i) CHECK(big.points[i] == -big.points[big.size() - 1 - i]);
}

TEST_CASE("spatial mesh rejects bad parameters") {
  CHECK_THROWS_AS(build_spatial_mesh(1.0, 1.0, 2, 5), ParameterError);
  CHECK_THROWS_AS(build_spatial_mesh(0.0, 1.0, 0, 5), ParameterError);
  CHECK_THROWS_AS(build_spatial_mesh(0.0, 1.0, 2, 2), ParameterError);
}

TEST_CASE("barycentric evaluation") {
  const auto mesh = build_spatial_mesh(-2.0, 4.0, 3, 4);
  std::vector<double> c(4, 3.25);
  CHECK(barycentric_eval(mesh, c, 1, 0.37) == doctest::Approx(3.25).epsilon(1e-15));

  // cubic reproduced exactly with M = 4
  for (int e = 0; e < 3; ++e) {
    std::vector<double> v(4);
    for (int l = 0; l < 4; ++l) v[static_cast<std::size_t>(l)] = std::pow(mesh.point(e, l), 3);
    for (double t : {0.1, 0.5, 0.93}) {
      const double x = mesh.element_lo(e) + t * mesh.element_width();
      CHECK(barycentric_eval(mesh, v, e, x) == doctest::Approx(x * x * x).epsilon(1e-13));
    }
    CHECK(barycentric_eval(mesh, v, e, mesh.point(e, 2)) == doctest::Approx(v[2]).epsilon(1e-14));
  }

  CHECK_THROWS_AS(barycentric_eval(mesh, c, 0, 1.5), DomainError);

  // random degree-6 polynomial against the product form
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto m7 = build_spatial_mesh(-1.0, 1.0, 2, 7);
  std::vector<double> coef(7);
  for (auto& a : coef) a = u(rng);
  auto poly = [&](double x) {
    double s = 0.0;
    for (int i = 6; i >= 0; --i) s = s * x + coef[static_cast<std::size_t>(i)];
    return s;
  };
  for (int e = 0; e < 2; ++e) {
    std::vector<double> nodes(7), vals(7);
    for (int l = 0; l < 7; ++l) {
      nodes[static_cast<std::size_t>(l)] = m7.point(e, l);
      vals[static_cast<std::size_t>(l)] = poly(nodes[static_cast<std::size_t>(l)]);
    }
    for (int trial = 0; trial < 20; ++trial) {
      const double x = m7.element_lo(e) + 0.5 * (u(rng) + 1.0) * m7.element_width();
      const double ref = lagrange_direct(nodes, vals, x);
      CHECK(std::abs(barycentric_eval(m7, vals, e, x) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("locate") {
  const auto mesh = build_spatial_mesh(-30.0, 30.0, 20, 5);
  CHECK(mesh.locate(-30.0) == 0);
  CHECK(mesh.locate(30.0) == 19);
  CHECK(mesh.locate(-27.0) == 0);
  CHECK(mesh.locate(0.1) == 10);
  CHECK(mesh.locate(30.0000001) == -1);
  CHECK(mesh.locate(-31.0) == -1);
}

TEST_CASE("wavenumber mesh and transforms") {
  const auto km = build_wavenumber_mesh(-std::numbers::pi, std::numbers::pi, 16);
  CHECK(km.node(0) == -std::numbers::pi);
  CHECK(km.node(8) == doctest::Approx(0.0));
  CHECK(km.mode_of_slot(8) == 8);
  CHECK(km.mode_of_slot(9) == -7);
  CHECK(km.slot_of_mode(-7) == 9);
  CHECK_THROWS_AS(build_wavenumber_mesh(0.0, 1.0, 15), ParameterError);

  std::vector<double> ones(16, 1.0);
  const auto m1 = k_forward(ones);
  CHECK(std::abs(m1[0] - cplx(1.0)) < 1e-15);
  for (std::size_t s = 1; s < 16; ++s) CHECK(std::abs(m1[s]) < 1e-15);

  std::vector<double> c(16);
  for (int j = 0; j < 16; ++j) c[static_cast<std::size_t>(j)] = std::cos(2.0 * std::numbers::pi * (km.node(j) - km.k_min) / km.length());
  const auto mc = k_forward(c);
  CHECK(std::abs(mc[1] - cplx(0.5)) < 1e-15);
  CHECK(std::abs(mc[15] - cplx(0.5)) < 1e-15);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int n : {2, 8, 30, 64, 128}) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = g(rng);
    const auto modes = k_forward(v);
    const auto ref = naive_modes(v);
    double energy_nodes = 0.0, energy_modes = 0.0;
    for (int s = 0; s < n; ++s) {
      CHECK(std::abs(modes[static_cast<std::size_t>(s)] - ref[static_cast<std::size_t>(s)]) < 1e-13);
      energy_nodes += v[static_cast<std::size_t>(s)] * v[static_cast<std::size_t>(s)];
      energy_modes += std::norm(modes[static_cast<std::size_t>(s)]);
    }
    CHECK(energy_modes * n == doctest::Approx(energy_nodes).epsilon(1e-13));
    for (int s = 1; s < n / 2; ++s)
      CHECK(std::abs(modes[static_cast<std::size_t>(n - s)] - std::conj(modes[static_cast<std::size_t>(s)])) < 1e-15);
    const auto back = k_inverse(modes);
    for (int j = 0; j < n; ++j) CHECK(std::abs(back[static_cast<std::size_t>(j)] - v[static_cast<std::size_t>(j)]) < 1e-13);
  }
}

TEST_CASE("trigonometric interpolation reproduces modes") {
  const auto km = build_wavenumber_mesh(-2.0, 3.0, 12);
  for (int nu : {0, 1, 3, 5}) {
    const double w = 2.0 * std::numbers::pi * nu / km.length();
    for (double k : {-1.7, 0.0, 0.33, 2.9}) {
      double s = 0.0;
      for (int j = 0; j < 12; ++j) s += std::cos(w * (km.node(j) - km.k_min) + 0.3) * trig_interp_weight(km, j, k);
      CHECK(s == doctest::Approx(std::cos(w * (k - km.k_min) + 0.3)).epsilon(1e-13));
    }
  }
  for (int j = 0; j < 12; ++j) CHECK(trig_interp_weight(km, j, km.node(j)) == 1.0);
  CHECK(std::abs(trig_interp_weight(km, 3, km.node(4))) < 1e-15);
}

TEST_CASE("uniform resampling") {
  auto grid = make_phase_grid(-3.0, 3.0, 3, 6, -std::numbers::pi, std::numbers::pi, 16);
  WignerState st(grid);
  for (auto& v : st.values()) v = 2.5;
  const auto uf = resample_uniform(st, 7);
  CHECK(uf.values.size() == 49);
  for (double v : uf.values) CHECK(v == doctest::Approx(2.5).epsilon(1e-13));

  // quadratic in x times one Fourier mode in k
  const auto& km = grid->k;
  const double w = 2.0 * std::numbers::pi * 3 / km.length();
  for (std::size_t p = 0; p < st.num_x(); ++p)
    for (std::size_t j = 0; j < st.num_k(); ++j) {
      const double x = grid->x.points[p];
      st(p, j) = (x * x - 0.5 * x) * std::sin(w * (km.node(static_cast<int>(j)) - km.k_min));
    }
  const auto u2 = resample_uniform(st, 10);
  CHECK(u2.x(0) == doctest::Approx(-3.0 + 0.3));
  CHECK(u2.k(0) == doctest::Approx(-std::numbers::pi + 0.1 * std::numbers::pi));
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double x = u2.x(i);
      const double exact = (x * x - 0.5 * x) * std::sin(w * (u2.k(j) - km.k_min));
      CHECK(std::abs(u2(i, j) - exact) < 1e-12);
    }
}

TEST_CASE("resampling does not amplify the maximum norm much") {
  auto grid = make_phase_grid(-10.0, 10.0, 4, 9, -4.0, 4.0, 32);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    WignerState st(grid);
    for (auto& v : st.values()) v = u(rng);
    double mx = 0.0;
    for (double v : st.values()) mx = std::max(mx, std::abs(v));
    const auto uf = resample_uniform(st, 40);
    double mu = 0.0;
    for (double v : uf.values) mu = std::max(mu, std::abs(v));
    CHECK(mu <= 5.0 * mx);
  }
}
