#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "wigner/errors.hpp"
#include "wigner/observables.hpp"
#include "wigner/quadrature.hpp"

using namespace wigner;

namespace {

constexpr double kPi = std::numbers::pi;

GridPtr paper_grid(int nk = 128, int M = 55) { return make_phase_grid(-30.0, 30.0, 20, M, -kPi, kPi, nk); }

// f(-x, -k): x mirrors point p -> nx-1-p, k node j -> (N - j) mod N
WignerState mirrored(const WignerState& s, bool flip_k) {
  WignerState out(s.grid_ptr());
  const std::size_t nx = s.num_x(), nk = s.num_k();
  for (std::size_t p = 0; p < nx; ++p)
    for (std::size_t j = 0; j < nk; ++j) out(nx - 1 - p, flip_k ? (nk - j) % nk : j) = s(p, j);
  return out;
}

}  // namespace

TEST_CASE("Clenshaw-Curtis weights integrate element polynomials exactly") {
  const auto mesh = build_spatial_mesh(-3.0, 3.0, 3, 9);
  const auto w = clenshaw_curtis_weights(mesh);
  double s0 = 0.0, s4 = 0.0, s8 = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = mesh.points[i];
    s0 += w[i];
    s4 += w[i] * std::pow(x, 4);
    s8 += w[i] * std::pow(x - 0.3, 8);
  }
  CHECK(s0 == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(s4 == doctest::Approx(2.0 * std::pow(3.0, 5) / 5.0).epsilon(1e-14));
  CHECK(s8 == doctest::Approx((std::pow(2.7, 9) + std::pow(3.3, 9)) / 9.0).epsilon(1e-13));
}

TEST_CASE("Gaussian initial data") {
  const auto g = make_phase_grid(-12.0, 12.0, 6, 9, -kPi, kPi, 16);
  const auto s = init_gaussian(g, GaussianPacketSpec{0.0, 0.0, 1.5});
  // x = 0 is an element end point and k = 0 the middle node
  const std::size_t p0 = 3 * 9;
  REQUIRE(g->x.points[p0] == 0.0);
  CHECK(s(p0, 8) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  CHECK_THROWS_AS(init_gaussian(g, GaussianPacketSpec{0.0, 0.0, -1.0}), ParameterError);
}

TEST_CASE("initial packet mass, uncertainty and tail") {
  const auto g = paper_grid();
  const GaussianPacketSpec spec{-10.0, 2.0, 2.0};
  const auto s = init_gaussian(g, spec);
  CHECK(std::abs(total_mass(s) - 1.0) < 1e-4);
  CHECK(gaussian_tail_mass(*g, spec) < 1e-3);
  const Moments m = uncertainty(s, 600, 1.0);
  CHECK(std::abs(m.product - 0.5) < 1e-3);
  CHECK(m.mean_x == doctest::Approx(-10.0).epsilon(1e-5));  // unnormalized: mass is 1 - tail
  CHECK(m.mean_p == doctest::Approx(2.0).epsilon(1e-5));
  // P(x >= 0) of N(-10, 2^2)
  const double tail = 0.5 * std::erfc(5.0 / std::sqrt(2.0));
  CHECK(std::abs(partial_mass(s, 600) - tail) < 1e-7);
}

TEST_CASE("tail warning threshold") {
  const auto g = paper_grid(32, 9);
  CHECK(gaussian_tail_mass(*g, GaussianPacketSpec{-29.0, 0.0, 2.0}) > 0.1);
  CHECK(gaussian_tail_mass(*g, GaussianPacketSpec{0.0, 0.0, 2.0}) < 1e-12);
}

TEST_CASE("marginal and mass of elementary fields") {
  const auto g = make_phase_grid(-5.0, 7.0, 4, 7, -2.0, 3.0, 16);
  WignerState c(g);
  for (auto& v : c.values()) v = 0.3;
  CHECK(total_mass(c) == doctest::Approx(0.3 * 12.0 * 5.0).epsilon(1e-14));

  WignerState mode(g);
  const double L = g->k.length();
  for (std::size_t p = 0; p < mode.num_x(); ++p)
    for (std::size_t j = 0; j < mode.num_k(); ++j)
      mode(p, j) = std::cos(2.0 * kPi * 3.0 * (g->k.node(static_cast<int>(j)) - g->k.k_min) / L);
  for (double m : spatial_marginal(mode)) CHECK(std::abs(m) < 1e-13);
}

TEST_CASE("mass agrees with a dense midpoint rule") {
  const auto g = make_phase_grid(-1.0, 1.0, 1, 5, -kPi, kPi, 8);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  WignerState s(g);
  for (auto& v : s.values()) v = u(rng);
  const UniformField f = resample_uniform(s, 2000);
  double dense = 0.0;
  for (double v : f.values) dense += v;
  dense *= f.dx() * f.dk();
  CHECK(std::abs(total_mass(s) - dense) < 1e-6);
}

TEST_CASE("folded observables match explicit resampling") {
  const auto g = make_phase_grid(-10.0, 10.0, 5, 9, -kPi, kPi, 32);
  const auto s = init_gaussian(g, GaussianPacketSpec{-1.0, 0.7, 1.3});
  for (int n : {50, 101}) {
    for (bool norm : {false, true}) {
      const Moments a = uncertainty(s, n, 0.8, norm), b = uncertainty_reference(s, n, 0.8, norm);
      CHECK(a.mass == doctest::Approx(b.mass).epsilon(1e-12));
      CHECK(a.mean_x == doctest::Approx(b.mean_x).epsilon(1e-12));
      CHECK(a.mean_p == doctest::Approx(b.mean_p).epsilon(1e-12));
      CHECK(a.var_x == doctest::Approx(b.var_x).epsilon(1e-12));
      CHECK(a.var_p == doctest::Approx(b.var_p).epsilon(1e-12));
      CHECK(a.product == doctest::Approx(b.product).epsilon(1e-12));
    }
    CHECK(partial_mass(s, n) == doctest::Approx(partial_mass_reference(s, n)).epsilon(1e-12));
  }
}

TEST_CASE("mirror symmetry of the observables") {
  const auto g = make_phase_grid(-10.0, 10.0, 5, 9, -kPi, kPi, 32);
  const auto s = init_gaussian(g, GaussianPacketSpec{-2.0, 0.7, 1.3});
  const auto r = mirrored(s, true);
  const Moments a = uncertainty(s, 200, 1.0), b = uncertainty(r, 200, 1.0);
  CHECK(std::abs(a.var_x - b.var_x) < 1e-12);
  CHECK(std::abs(a.var_p - b.var_p) < 1e-12);
  CHECK(std::abs(a.mean_x + b.mean_x) < 1e-12);
  CHECK(std::abs(a.mean_p + b.mean_p) < 1e-12);
  CHECK(std::abs(a.product - b.product) < 1e-12);

  const auto x_only = mirrored(s, false);
  CHECK(std::abs(partial_mass(s, 200) + partial_mass(x_only, 200) - total_mass(s)) < 1e-8);

  WignerState even(g);
  for (std::size_t i = 0; i < even.values().size(); ++i) even.values()[i] = s.values()[i] + x_only.values()[i];
  CHECK(partial_mass(even, 200) == doctest::Approx(0.5 * uncertainty(even, 200, 1.0).mass).epsilon(1e-12));
}

TEST_CASE("strongly negative variance is reported") {
  UniformObservables::Sums s;
  s.mass = 1.0;
  s.x = 0.0;
  s.x2 = -1e-6;
  s.p2 = 1.0;
  CHECK_THROWS_AS(moments_from_sums(s, false), NumericQualityError);
  s.x2 = -1e-13;
  const Moments m = moments_from_sums(s, false);
  CHECK(m.var_x == 0.0);
}

TEST_CASE("error norms") {
  const auto g = make_phase_grid(-4.0, 4.0, 4, 7, -kPi, kPi, 16);
  const auto a = init_gaussian(g, GaussianPacketSpec{0.0, 0.5, 1.0});
  auto b = a;
  for (auto& v : b.values()) v += 0.01;
  const ErrorNorms z = error_norms(a, a, 40);
  CHECK(z.eps2 == 0.0);
  CHECK(z.eps_inf == 0.0);
  const ErrorNorms e = error_norms(b, a, 40);
  CHECK(e.eps_inf == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(e.eps2 == doctest::Approx(0.01 * std::sqrt(8.0 * 2.0 * kPi)).epsilon(1e-12));

  // independent summation order on a random pair
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  UniformField p{30, -1.0, 2.0, -3.0, 1.0, {}}, q = p;
  for (int i = 0; i < 900; ++i) {
    p.values.push_back(u(rng));
    q.values.push_back(u(rng));
  }
  double sum = 0.0, mx = 0.0;
  for (int i = 899; i >= 0; --i) {
    const double d = p.values[static_cast<std::size_t>(i)] - q.values[static_cast<std::size_t>(i)];
    sum += d * d;
    mx = std::max(mx, std::abs(d));
  }
  const ErrorNorms r = error_norms(p, q);
  CHECK(r.eps2 == doctest::Approx(std::sqrt(sum * p.dx() * p.dk())).epsilon(1e-12));
  CHECK(r.eps_inf == mx);

  const auto other = make_phase_grid(-5.0, 4.0, 4, 7, -kPi, kPi, 16);
  CHECK_THROWS_AS(error_norms(init_gaussian(other, GaussianPacketSpec{0.0, 0.5, 1.0}), a, 40), ParameterError);
}

TEST_CASE("Fermi-Dirac data") {
  const FermiDiracSpec spec;
  const double hbar = 0.658211899;
  const double kt = spec.k_B * spec.T;
  const double pref = std::sqrt(2.0 * spec.mass() * kt) / (kPi * hbar);
  QuadSpec q;
  q.abs_tol = 1e-15;
  q.rel_tol = 1e-13;
  for (double k : {0.0, 0.3, 0.9, 2.0}) {
    const double shift = (hbar * hbar * k * k / (2.0 * spec.mass()) - spec.E_F) / kt;
    const auto r = oscillatory_quad([&](double y) { return 1.0 / (1.0 + std::exp(y * y + shift)); }, 0.0, 80.0, q);
    const double oracle = pref * r.value;
    CHECK(fermi_dirac_value(spec, hbar, k, 0.0) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(fermi_dirac_value(spec, hbar, 0.0, k) == doctest::Approx(oracle).epsilon(1e-12));
  }
  double prev = fermi_dirac_value(spec, hbar, 0.0, 0.0);
  for (int i = 1; i <= 30; ++i) {
    const double v = fermi_dirac_value(spec, hbar, 0.1 * i, 0.05 * i);
    CHECK(v < prev);
    prev = v;
  }

  const auto g = make_phase_grid(-2.0, 2.0, 2, 3, -kPi, kPi, 8);
  const auto s = init_fermi_dirac_4d(g, spec, hbar);
  for (std::size_t j1 = 0; j1 < 8; ++j1)
    for (std::size_t j2 = 0; j2 < 8; ++j2) {
      CHECK(s(0, 0, j1, j2) == s(5, 2, j1, j2));
      CHECK(s(1, 4, j1, j2) == s(3, 3, j1, j2));
    }
  FermiDiracSpec bad;
  bad.T = -1.0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
}

TEST_CASE("observable series") {
  ObservableSeries s;
  s.append({0.0, 1.0, 0.0, 0, 0, 0, 0, 0});
  s.append({0.5, 1.0, 0.1, 0, 0, 0, 0, 0});
  s.append({1.0, 1.0, 0.2, 0, 0, 0, 0, 0});
  CHECK_THROWS_AS(s.append({1.0, 1.0, 0.2, 0, 0, 0, 0, 0}), ParameterError);
  CHECK(s.at_time(0.6).pr == 0.1);
  CHECK(s.back().t == 1.0);
  CHECK(s.size() == 3);
}
