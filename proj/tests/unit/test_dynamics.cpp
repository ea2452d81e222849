#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "wigner/dynamics.hpp"
#include "wigner/errors.hpp"
#include "wigner/observables.hpp"
#include "wigner/reference.hpp"

using namespace wigner;

namespace {

constexpr double kPi = std::numbers::pi;

GridPtr small_grid(int Q = 8, int M = 11, int nk = 32, double X = 15.0) {
  return make_phase_grid(-X, X, Q, M, -kPi, kPi, nk);
}

WignerState random_state(const GridPtr& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  WignerState s(g);
  for (auto& v : s.values()) v = u(rng);
  // shared element end points hold one value
  const std::size_t m = static_cast<std::size_t>(g->x.points_per_element);
  for (std::size_t p = m; p < s.num_x(); p += m)
    for (std::size_t j = 0; j < s.num_k(); ++j) s(p, j) = s(p - 1, j);
  return s;
}

double packet(double x, double k, double x0, double k0, double sigma) {
  return std::exp(-(x - x0) * (x - x0) / (2 * sigma * sigma) - 2 * sigma * sigma * (k - k0) * (k - k0)) / kPi;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("split schemes") {
  const auto s = SplitScheme::strang();
  CHECK(s.order() == 2);
  const auto seq = s.substeps(0.1);
  REQUIRE(seq.size() == 3);
  CHECK(seq[0].first);
  CHECK(seq[0].second == doctest::Approx(0.05));
  CHECK_FALSE(seq[1].first);
  CHECK(seq[1].second == doctest::Approx(0.1));

  const auto y = SplitScheme::yoshida4();
  CHECK(y.order() == 4);
  const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
  REQUIRE(y.stage_coefficients.size() == 3);
  CHECK(y.stage_coefficients[0] == doctest::Approx(w1).epsilon(1e-15));
  CHECK(y.stage_coefficients[1] == doctest::Approx(1.0 - 2.0 * w1).epsilon(1e-15));
  CHECK(y.stage_coefficients[1] < 0.0);
  const auto ys = y.substeps(1.0);
  CHECK(ys.size() == 7);  // adjacent advections merged
  double adv = 0.0, ker = 0.0;
  for (const auto& [a, t] : ys) (a ? adv : ker) += t;
  CHECK(adv == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ker == doctest::Approx(1.0).epsilon(1e-15));

  CHECK(SplitScheme::from_name("strang").name() == "strang");
  CHECK(SplitScheme::from_name("yoshida4").name() == "yoshida4");
  CHECK_THROWS_AS(SplitScheme::from_name("rk4"), ParameterError);
}

TEST_CASE("advection leaves the zero-velocity slice alone") {
  const auto g = small_grid();
  REQUIRE(g->k.node(16) == 0.0);
  WignerState s = random_state(g, 1);
  const WignerState before = s;
  Advector adv(g, PhysicalConstants{});
  adv.apply(s, 2.7);
  for (std::size_t p = 0; p < s.num_x(); ++p) CHECK(s(p, 16) == before(p, 16));
}

TEST_CASE("zero shift is the identity") {
  const auto g = small_grid();
  WignerState s = random_state(g, 2);
  const WignerState before = s;
  advect(s, PhysicalConstants{}, 0.0);
  CHECK(s.values() == before.values());
}

TEST_CASE("constant field with initial inflow stays constant") {
  const auto g = small_grid();
  WignerState s(g);
  for (auto& v : s.values()) v = 0.75;
  const WignerState initial = s;
  Advector adv(g, PhysicalConstants{});
  for (double tau : {0.3, -1.1, 4.0, 9.5}) {
    adv.apply(s, tau, &initial);
    for (double v : s.values()) CHECK(v == doctest::Approx(0.75).epsilon(1e-13));
  }
}

TEST_CASE("zero inflow empties the domain for long shifts") {
  const auto g = small_grid();
  WignerState s(g);
  for (auto& v : s.values()) v = 1.0;
  Advector adv(g, PhysicalConstants{}, 20.0);
  adv.apply(s, 15.0);
  // |v| = |k| >= 2 pi / 32 for every nonzero node; shift 15 |k| leaves the
  // upwind part of the domain empty
  for (std::size_t p = 0; p < s.num_x(); ++p)
    for (std::size_t j = 0; j < s.num_k(); ++j) {
      const double x = g->x.points[p];
      const double depart = x - g->k.node(static_cast<int>(j)) * 15.0;
      if (depart < -15.0 - 1e-12 || depart > 15.0 + 1e-12) CHECK(s(p, j) == 0.0);
    }
}

TEST_CASE("advection rejects shifts beyond the plan bound") {
  const auto g = small_grid();
  WignerState s(g);
  Advector adv(g, PhysicalConstants{}, 1.0);
  CHECK_THROWS_AS(adv.apply(s, 1.5), ParameterError);
  CHECK_NOTHROW(adv.apply(s, -1.0));
}

TEST_CASE("seam node drifts with the mean of the end wavenumbers") {
  const auto sym = small_grid();
  CHECK(sym->k.transport_k(0, SeamDrift::mean) == 0.0);
  CHECK(sym->k.transport_k(0, SeamDrift::node) == sym->k.k_min);
  CHECK(sym->k.transport_k(5, SeamDrift::mean) == sym->k.node(5));
  // shifted axis: the seam sits at k = 1 +- pi and drifts with k = 1
  const auto g = make_phase_grid(-15.0, 15.0, 8, 11, 1.0 - kPi, 1.0 + kPi, 32);
  WignerState s(g);
  for (std::size_t p = 0; p < s.num_x(); ++p)
    for (std::size_t j = 0; j < s.num_k(); ++j) s(p, j) = std::exp(-0.1 * g->x.points[p] * g->x.points[p]);
  Advector(g, PhysicalConstants{}, 10.0, SeamDrift::mean).apply(s, 2.0);
  for (std::size_t p = 0; p < s.num_x(); ++p) {
    const double x = g->x.points[p] - 2.0;
    CHECK(std::abs(s(p, 0) - std::exp(-0.1 * x * x)) < 1e-6);  // M = 11 interpolation
  }
}

TEST_CASE("free propagation matches the analytic translate") {
  const auto g = make_phase_grid(-30.0, 30.0, 20, 25, -kPi, kPi, 64);
  const GaussianPacketSpec spec{-10.0, 2.0, 2.0};
  WignerState s = init_gaussian(g, spec);
  auto table = std::make_shared<const KernelTable>(kernel_coefficients(DeltaPotential{0.0}, g, PhysicalConstants{}));
  Stepper stepper(table, PhysicalConstants{}, SplitScheme::yoshida4());
  for (int n = 0; n < 300; ++n) stepper.step(s, 0.01);
  CHECK(s.time() == doctest::Approx(3.0));
  const auto kn = g->k.nodes();
  double err = 0.0;
  for (std::size_t p = 0; p < s.num_x(); ++p)
    for (std::size_t j = 0; j < s.num_k(); ++j)
      err = std::max(err, std::abs(s(p, j) - packet(g->x.points[p] - kn[j] * s.time(), kn[j], -10.0, 2.0, 2.0)));
  CHECK(err < 1e-4);
}

TEST_CASE("planned advection agrees with the reference solver") {
  const auto g = small_grid(6, 9, 16, 12.0);
  const PhysicalConstants c{0.658211899, 0.38};
  const WignerState init = random_state(g, 3);
  for (double tau : {0.013, -0.4, 1.7, -6.0, 9.9}) {
    for (bool use_inflow : {false, true})
      for (SeamDrift seam : {SeamDrift::node, SeamDrift::mean}) {
        WignerState a = init, b = init;
        const WignerState* in = use_inflow ? &init : nullptr;
        Advector(g, c, 10.0, seam).apply(a, tau, in);
        reference::advect(b, c, tau, in, seam);
        CHECK(max_diff(a.values(), b.values()) < 1e-12);
      }
  }
}

TEST_CASE("planned 4-D advection agrees with the reference solver") {
  const auto g = small_grid(3, 5, 8, 6.0);
  const PhysicalConstants c{};
  const WignerState a2 = random_state(g, 4), b2 = random_state(g, 14);
  WignerState4 init(g);
  for (std::size_t i = 0; i < init.num_x(); ++i)
    for (std::size_t j = 0; j < init.num_x(); ++j)
      for (std::size_t k = 0; k < init.num_k(); ++k)
        for (std::size_t l = 0; l < init.num_k(); ++l) init(i, j, k, l) = a2(i, k) * b2(j, l) + a2(j, l) * b2(i, k);
  for (double tau : {0.21, -1.3}) {
    for (SeamDrift seam : {SeamDrift::node, SeamDrift::mean}) {
      WignerState4 a = init, b = init;
      Advector(g, c, 10.0, seam).apply(a, tau, &init);
      reference::advect(b, c, tau, &init, seam);
      CHECK(max_diff(a.values(), b.values()) < 1e-12);
    }
  }
}

TEST_CASE("kernel stage preserves marginal and per-point k-norm") {
  const auto g = small_grid(6, 9, 32, 12.0);
  const PhysicalConstants c{};
  const WignerState init = random_state(g, 5);
  for (const PotentialSpec& pot : {PotentialSpec{DeltaPotential{1.0}}, PotentialSpec{LogarithmicPotential{1.0, 1e-5}},
                                   PotentialSpec{InverseSquarePotential{1.0}}}) {
    auto table = std::make_shared<const KernelTable>(kernel_coefficients(pot, g, c));
    KernelStage stage(table);
    WignerState s = init;
    stage.apply(s, 0.37);
    const auto m0 = spatial_marginal(init), m1 = spatial_marginal(s);
    CHECK(max_diff(m0, m1) < 1e-12);
    for (std::size_t p = 0; p < s.num_x(); ++p) {
      double n0 = 0.0, n1 = 0.0;
      for (std::size_t j = 0; j < s.num_k(); ++j) {
        n0 += init(p, j) * init(p, j);
        n1 += s(p, j) * s(p, j);
      }
      CHECK(std::abs(n1 - n0) <= 1e-12 * std::max(1.0, n0));
    }
  }
}

TEST_CASE("kernel stage agrees with the direct DFT and stays real") {
  const auto g = small_grid(4, 7, 16, 10.0);
  const PhysicalConstants c{};
  auto table = std::make_shared<const KernelTable>(kernel_coefficients(DeltaPotential{1.0}, g, c));
  const WignerState init = random_state(g, 6);
  for (double tau : {0.01, -0.5, 2.0}) {
    WignerState a = init, b = init;
    KernelStage(table).apply(a, tau);
    const double residue = reference::apply_kernel(b, *table, tau);
    CHECK(residue < 1e-12);
    CHECK(max_diff(a.values(), b.values()) < 1e-12);
  }
}

TEST_CASE("kernel stage derivative is the truncated operator") {
  const auto g = small_grid(4, 7, 32, 10.0);
  const PhysicalConstants c{};
  auto table = std::make_shared<const KernelTable>(kernel_coefficients(DeltaPotential{1.0}, g, c));
  const WignerState f = init_gaussian(g, GaussianPacketSpec{0.0, 1.0, 1.0});
  const WignerState theta = kernel_operator(f, *table);
  const double tau = 1e-6;
  WignerState plus = f, minus = f;
  apply_kernel(plus, *table, tau);
  apply_kernel(minus, *table, -tau);
  double scale = 0.0, err = 0.0;
  for (std::size_t i = 0; i < f.values().size(); ++i) {
    const double fd = (plus.values()[i] - minus.values()[i]) / (2 * tau);
    scale = std::max(scale, std::abs(theta.values()[i]));
    err = std::max(err, std::abs(fd - theta.values()[i]));
  }
  CHECK(scale > 1e-3);
  CHECK(err < 1e-7 * scale);
}

TEST_CASE("kernel stage composes as a group") {
  const auto g = small_grid(4, 7, 16, 10.0);
  auto table = std::make_shared<const KernelTable>(kernel_coefficients(DeltaPotential{2.0}, g, PhysicalConstants{}));
  const WignerState init = random_state(g, 7);
  WignerState a = init, b = init;
  KernelStage stage(table);
  stage.apply(a, 0.3);
  stage.apply(a, 0.45);
  stage.apply(b, 0.75);
  CHECK(max_diff(a.values(), b.values()) < 1e-12);
  stage.apply(a, -0.75);
  CHECK(max_diff(a.values(), init.values()) < 1e-12);
}

TEST_CASE("realness and interior mass over 1000 steps") {
  const auto g = make_phase_grid(-20.0, 20.0, 10, 25, -kPi, kPi, 32);
  const PhysicalConstants c{};
  auto table = std::make_shared<const KernelTable>(kernel_coefficients(GaussianFinitePotential{1.0, 1.0}, g, c));
  WignerState s = init_gaussian(g, GaussianPacketSpec{-4.0, 0.5, 2.0});
  const double m0 = total_mass(s);
  Stepper stepper(table, c, SplitScheme::strang());
  for (int n = 1; n <= 1000; ++n) {
    stepper.step(s, 0.001);
    if (n % 250 == 0) {
      WignerState probe = s;
      CHECK(reference::apply_kernel(probe, *table, 0.001) < 1e-12);
      CHECK(s.all_finite());
    }
  }
  CHECK(std::abs(total_mass(s) - m0) < 1e-10);
}

TEST_CASE("4-D kernel stage agrees with the direct DFT") {
  const auto g = small_grid(2, 5, 8, 4.0);
  const PhysicalConstants c{};
  const MultiDelta2DPotential md{1.0, {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}}};
  auto table = std::make_shared<const KernelTable>(kernel_coefficients(md, g, c));
  WignerState4 init(g);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& v : init.values()) v = u(rng);
  WignerState4 a = init, b = init;
  KernelStage(table).apply(a, 0.2);
  CHECK(reference::apply_kernel(b, *table, 0.2) < 1e-12);
  CHECK(max_diff(a.values(), b.values()) < 1e-12);
  const auto m0 = spatial_marginal_2d(init), m1 = spatial_marginal_2d(a);
  CHECK(max_diff(m0, m1) < 1e-12);
}

TEST_CASE("4-D separable free flight factorises") {
  const auto g = small_grid(3, 7, 16, 8.0);
  const PhysicalConstants c{};
  const GaussianPacketSpec p1{-1.0, 0.5, 1.5}, p2{0.5, -0.8, 1.2};
  WignerState4 s = init_gaussian_4d(g, p1, p2);
  WignerState a = init_gaussian(g, p1), b = init_gaussian(g, p2);
  Advector adv(g, c);
  adv.apply(s, 1.3);
  adv.apply(a, 1.3);
  adv.apply(b, 1.3);
  double err = 0.0;
  const std::size_t nx = s.num_x(), nk = s.num_k();
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nx; ++j)
      for (std::size_t k = 0; k < nk; ++k)
        for (std::size_t l = 0; l < nk; ++l) err = std::max(err, std::abs(s(i, j, k, l) - a(i, k) * b(j, l)));
  CHECK(err < 1e-13);
}
