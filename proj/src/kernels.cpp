#include "wigner/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wigner/errors.hpp"
#include "wigner/parallel.hpp"
#include "wigner/special.hpp"

namespace wigner {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// int_0^L cos(w k) dk
double cos_integral_0L(double w, double L) {
  if (std::abs(w) < 1e-8) return L - w * w * L * L * L / 6.0;
  return std::sin(w * L) / w;
}

double sinc(double u) { return std::abs(u) < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u; }

// int_0^L k cos(w k) dk, written without the 1/w^2 cancellation
double k_cos_integral_0L(double w, double L) {
  const double t = w * L;
  const double h = sinc(0.5 * t);
  return L * L * (sinc(t) - 0.5 * h * h);
}

double inverse_power_constant(const InversePowerPotential& p, const PhysicalConstants& c) {
  const double a = p.alpha;
  return p.H * std::pow(2.0, 1.0 + a) * std::tgamma(1.0 - a) * std::sin(0.5 * kPi * a) / (kPi * c.hbar);
}

}  // namespace

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ParameterError("constants: hbar must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw ParameterError("constants: mass must be positive");
}

std::string potential_name(const PotentialSpec& spec) {
  return std::visit(overloaded{[](const DeltaPotential&) { return std::string("delta"); },
                               [](const LogarithmicPotential&) { return std::string("logarithmic"); },
                               [](const InversePowerPotential&) { return std::string("inverse_power"); },
                               [](const InverseSquarePotential&) { return std::string("inverse_square"); },
                               [](const GaussianFinitePotential&) { return std::string("gaussian"); },
                               [](const MultiDelta2DPotential&) { return std::string("multi_delta_2d"); }},
                    spec);
}

bool is_two_dimensional(const PotentialSpec& spec) { return std::holds_alternative<MultiDelta2DPotential>(spec); }

void validate_potential(const PotentialSpec& spec) {
  std::visit(overloaded{[](const DeltaPotential& p) {
                          if (!std::isfinite(p.H)) throw ParameterError("potential.H must be finite");
                        },
                        [](const LogarithmicPotential& p) {
                          if (!std::isfinite(p.H)) throw ParameterError("potential.H must be finite");
                          if (!(p.epsilon > 0.0)) throw ParameterError("potential.epsilon must be positive");
                        },
                        [](const InversePowerPotential& p) {
                          if (!std::isfinite(p.H)) throw ParameterError("potential.H must be finite");
                          if (!(p.alpha > 0.0 && p.alpha < 1.0))
                            throw ParameterError("potential.alpha must lie in (0, 1)");
                        },
                        [](const InverseSquarePotential& p) {
                          if (!std::isfinite(p.H)) throw ParameterError("potential.H must be finite");
                        },
                        [](const GaussianFinitePotential& p) {
                          if (!std::isfinite(p.H)) throw ParameterError("potential.H must be finite");
                          if (!(p.a > 0.0)) throw ParameterError("potential.a must be positive");
                        },
                        [](const MultiDelta2DPotential& p) {
                          if (!std::isfinite(p.H)) throw ParameterError("potential.H must be finite");
                          if (p.points.empty()) throw ParameterError("potential.points must hold at least one point");
                        }},
             spec);
}

double potential_value(const PotentialSpec& spec, double x) {
  return std::visit(
      overloaded{[&](const LogarithmicPotential& p) { return p.H * std::log(std::abs(x)); },
                 [&](const InversePowerPotential& p) { return p.H * std::pow(std::abs(x), -p.alpha); },
                 [&](const InverseSquarePotential& p) { return p.H / (x * x); },
                 [&](const GaussianFinitePotential& p) {
                   return p.H * std::exp(-x * x / (2.0 * p.a * p.a)) / (std::sqrt(2.0 * kPi) * p.a);
                 },
                 [&](const auto&) -> double {
                   throw ParameterError("potential_value: " + potential_name(spec) + " has no pointwise values");
                 }},
      spec);
}

double wigner_kernel_value(const PotentialSpec& spec, const PhysicalConstants& c, double x, double k) {
  return std::visit(
      overloaded{
          [&](const DeltaPotential& p) { return 2.0 * p.H / (kPi * c.hbar) * std::sin(2.0 * x * k); },
          [&](const LogarithmicPotential& p) {
            if (k == 0.0) return -2.0 * p.H * x / c.hbar;
            return -p.H / c.hbar * std::sin(2.0 * x * k) / std::abs(k);
          },
          [&](const InversePowerPotential& p) {
            if (k == 0.0) return 0.0;
            return inverse_power_constant(p, c) * std::sin(2.0 * x * k) * std::pow(std::abs(k), p.alpha - 1.0);
          },
          [&](const InverseSquarePotential& p) { return -4.0 * p.H / c.hbar * std::abs(k) * std::sin(2.0 * x * k); },
          [&](const GaussianFinitePotential& p) {
            return 2.0 * p.H / (kPi * c.hbar) * std::sin(2.0 * x * k) * std::exp(-2.0 * p.a * p.a * k * k);
          },
          [&](const MultiDelta2DPotential&) -> double {
            throw ParameterError("wigner_kernel_value: multi_delta_2d needs two positions and wavenumbers");
          }},
      spec);
}

double multi_delta_prefactor(const MultiDelta2DPotential& p, const PhysicalConstants& c) {
  return 2.0 * p.H / (kPi * kPi * c.hbar);
}

double wigner_kernel_value_2d(const PotentialSpec& spec, const PhysicalConstants& c, double x1, double x2, double k1,
                              double k2) {
  const auto* p = std::get_if<MultiDelta2DPotential>(&spec);
  if (!p) throw ParameterError("wigner_kernel_value_2d: only multi_delta_2d is two-dimensional");
  double s = 0.0;
  for (const auto& d : p->points) s += std::sin(2.0 * (x1 - d[0]) * k1 + 2.0 * (x2 - d[1]) * k2);
  return multi_delta_prefactor(*p, c) * s;
}

KernelTable::KernelTable(GridPtr grid, bool four_dimensional, std::string label)
    : grid_(std::move(grid)), four_d_(four_dimensional), label_(std::move(label)) {
  if (!grid_) throw ParameterError("KernelTable: null grid");
  const std::size_t nx = grid_->x.size();
  const auto nk = static_cast<std::size_t>(grid_->k.num_points);
  num_points_ = four_d_ ? nx * nx : nx;
  num_modes_ = four_d_ ? nk * nk : nk;
  values_.assign(num_points_ * num_modes_, cplx(0.0, 0.0));
}

cplx KernelTable::mode(std::size_t point, int nu) const noexcept {
  return at(point, static_cast<std::size_t>(grid_->k.slot_of_mode(nu)));
}

cplx kernel_coefficient(const PotentialSpec& spec, const PhysicalConstants& c, double x, int nu, double L) {
  const double nt = 2.0 * kPi * nu / L;
  const double wp = 2.0 * x + nt;
  const double wm = 2.0 * x - nt;
  return std::visit(
      overloaded{
          [&](const DeltaPotential& p) {
            return cplx(0.0, 2.0 * p.H / (kPi * c.hbar) * (cos_integral_0L(wp, L) - cos_integral_0L(wm, L)));
          },
          [&](const LogarithmicPotential& p) {
            const double e = p.epsilon;
            const double taylor = nt * x * e * e - (nt * x * x * x / 3.0 + nt * nt * nt * x / 12.0) * e * e * e * e;
            // Ci(|w|e) - Ci(|w|L) = ln(e/L) + Cin(wL) - Cin(we); the logarithms cancel in
            // the pairing, which leaves an expression that is regular at w = 0
            const double ci_part = 0.5 * (cosine_integral_entire(wp * L) - cosine_integral_entire(wm * L) +
                                          cosine_integral_entire(wm * e) - cosine_integral_entire(wp * e));
            return cplx(0.0, 2.0 * p.H / c.hbar * (taylor + ci_part));
          },
          [&](const InversePowerPotential& p) {
            const double beta = 1.0 - p.alpha;
            const double d = cos_power_integral(wp, beta, L) - cos_power_integral(wm, beta, L);
            return cplx(0.0, inverse_power_constant(p, c) * d);
          },
          [&](const InverseSquarePotential& p) {
            return cplx(0.0, 4.0 * p.H / c.hbar * (k_cos_integral_0L(wm, L) - k_cos_integral_0L(wp, L)));
          },
          [&](const GaussianFinitePotential& p) {
            const double g = 2.0 * p.a * p.a;
            const int panels = static_cast<int>(std::ceil((std::abs(wp) + std::abs(wm)) * L / (2.0 * kPi))) + 4;
            const double s = composite_gauss(
                [&](double k) { return std::sin(2.0 * x * k) * std::sin(nt * k) * std::exp(-g * k * k); }, 0.0, L,
                panels, 16);
            return cplx(0.0, -2.0 * 2.0 * p.H / (kPi * c.hbar) * s);
          },
          [&](const MultiDelta2DPotential&) -> cplx {
            throw ParameterError("kernel_coefficient: multi_delta_2d needs the four-dimensional table");
          }},
      spec);
}

namespace {

KernelTable gaussian_table(const GaussianFinitePotential& p, const GridPtr& grid, const PhysicalConstants& c,
                           const QuadSpec& quad) {
  const auto& xs = grid->x;
  const int n = grid->k.num_points;
  const double L = grid->k.length();
  KernelTable table(grid, false, "gaussian");

  double xmax = 0.0;
  for (double x : xs.points) xmax = std::max(xmax, std::abs(x));
  const double fastest = 2.0 * xmax + 2.0 * kPi * (n / 2) / L;
  const int order = quad.panel_rule_order;
  const int panels = static_cast<int>(std::ceil(fastest * L / (2.0 * kPi))) + 2;
  const auto& rule = gauss_legendre(order);

  const std::size_t nq = static_cast<std::size_t>(panels) * static_cast<std::size_t>(order);
  std::vector<double> kq(nq), wq(nq);
  const double h = L / panels;
  for (int pnl = 0; pnl < panels; ++pnl)
    for (int i = 0; i < order; ++i) {
      const std::size_t q = static_cast<std::size_t>(pnl) * order + i;
      kq[q] = (pnl + 0.5) * h + 0.5 * h * rule.nodes[static_cast<std::size_t>(i)];
      wq[q] = 0.5 * h * rule.weights[static_cast<std::size_t>(i)] * std::exp(-2.0 * p.a * p.a * kq[q] * kq[q]);
    }
  const int half = n / 2;
  std::vector<double> rows(static_cast<std::size_t>(half + 1) * nq);
  for (int nu = 0; nu <= half; ++nu) {
    const double nt = 2.0 * kPi * nu / L;
    for (std::size_t q = 0; q < nq; ++q) rows[static_cast<std::size_t>(nu) * nq + q] = wq[q] * std::sin(nt * kq[q]);
  }
  const double scale = -2.0 * 2.0 * p.H / (kPi * c.hbar);

  WIGNER_PARALLEL_FOR
  for (long pt = 0; pt < static_cast<long>(xs.size()); ++pt) {
    const double x = xs.points[static_cast<std::size_t>(pt)];
    std::vector<double> s(nq);
    for (std::size_t q = 0; q < nq; ++q) s[q] = std::sin(2.0 * x * kq[q]);
    for (int nu = 1; nu <= half; ++nu) {
      const double* r = rows.data() + static_cast<std::size_t>(nu) * nq;
      double acc = 0.0;
      for (std::size_t q = 0; q < nq; ++q) acc += r[q] * s[q];
      const cplx v(0.0, scale * acc);
      table.at(static_cast<std::size_t>(pt), static_cast<std::size_t>(nu)) = v;
      // sin is odd in floating point, so the negative mode is the exact negative
      if (nu < half) table.at(static_cast<std::size_t>(pt), static_cast<std::size_t>(n - nu)) = -v;
    }
  }

  // spot-check the fastest entry against a rule with twice the panels
  const double x_worst = std::abs(xs.points.front()) >= std::abs(xs.points.back()) ? xs.points.front() : xs.points.back();
  const std::size_t p_worst = std::abs(xs.points.front()) >= std::abs(xs.points.back()) ? 0 : xs.size() - 1;
  const double nt = 2.0 * kPi * (half - 1) / L;
  const double fine = scale * composite_gauss(
                                  [&](double k) {
                                    return std::sin(2.0 * x_worst * k) * std::sin(nt * k) *
                                           std::exp(-2.0 * p.a * p.a * k * k);
                                  },
                                  0.0, L, 2 * panels, order);
  double norm = 0.0;
  for (const auto& v : table.values()) norm = std::max(norm, std::abs(v));
  const double diff = std::abs(fine - table.at(p_worst, static_cast<std::size_t>(half - 1)).imag());
  if (diff > std::max(quad.abs_tol, quad.rel_tol * norm))
    throw AccuracyError("kernel_coefficients: Gaussian quadrature did not reach tolerance", fine, diff);
  return table;
}

KernelTable multi_delta_table(const MultiDelta2DPotential& p, const GridPtr& grid, const PhysicalConstants& c) {
  const auto& xs = grid->x;
  const std::size_t nx = xs.size();
  const int n = grid->k.num_points;
  const auto nn = static_cast<std::size_t>(n);
  const double L = grid->k.length();
  KernelTable table(grid, true, "multi_delta_2d");
  const double K = multi_delta_prefactor(p, c);

  std::vector<double> mu(nn);
  for (int s = 0; s < n; ++s) mu[static_cast<std::size_t>(s)] = grid->k.mode_frequency(grid->k.mode_of_slot(s));

  // per-axis factors: S(a, mu) = -i sn, C(a, mu) = cs
  auto factors = [&](double a, std::vector<double>& sn, std::vector<double>& cs) {
    for (std::size_t s = 0; s < nn; ++s) {
      sn[s] = cos_integral_0L(a - mu[s], L) - cos_integral_0L(a + mu[s], L);
      cs[s] = cos_integral_0L(a - mu[s], L) + cos_integral_0L(a + mu[s], L);
    }
  };

  WIGNER_PARALLEL_FOR
  for (long p1 = 0; p1 < static_cast<long>(nx); ++p1) {
    std::vector<double> s1(nn), c1(nn), s2(nn), c2(nn);
    std::vector<double> acc(nn * nn);
    for (std::size_t p2 = 0; p2 < nx; ++p2) {
      std::fill(acc.begin(), acc.end(), 0.0);
      for (const auto& d : p.points) {
        factors(2.0 * (xs.points[static_cast<std::size_t>(p1)] - d[0]), s1, c1);
        factors(2.0 * (xs.points[p2] - d[1]), s2, c2);
        for (std::size_t a = 0; a < nn; ++a)
          for (std::size_t b = 0; b < nn; ++b) acc[a * nn + b] += s1[a] * c2[b] + c1[a] * s2[b];
      }
      const std::size_t pt = static_cast<std::size_t>(p1) * nx + p2;
      for (std::size_t m = 0; m < nn * nn; ++m) table.at(pt, m) = cplx(0.0, -K * acc[m]);
    }
  }
  return table;
}

}  // namespace

KernelTable kernel_coefficients(const PotentialSpec& spec, const GridPtr& grid, const PhysicalConstants& consts,
                                const QuadSpec& quad) {
  if (!grid) throw ParameterError("kernel_coefficients: null grid");
  validate_potential(spec);
  consts.validate();
  quad.validate();
  if (const auto* g = std::get_if<GaussianFinitePotential>(&spec)) return gaussian_table(*g, grid, consts, quad);
  if (const auto* m = std::get_if<MultiDelta2DPotential>(&spec)) return multi_delta_table(*m, grid, consts);

  const auto& xs = grid->x;
  const int n = grid->k.num_points;
  const double L = grid->k.length();
  KernelTable table(grid, false, potential_name(spec));
  WIGNER_PARALLEL_FOR
  for (long pt = 0; pt < static_cast<long>(xs.size()); ++pt) {
    const double x = xs.points[static_cast<std::size_t>(pt)];
    for (int s = 0; s < n; ++s)
      table.at(static_cast<std::size_t>(pt), static_cast<std::size_t>(s)) =
          kernel_coefficient(spec, consts, x, grid->k.mode_of_slot(s), L);
  }
  return table;
}

KernelTable poisson_kernel_coefficients(const PotentialSpec& spec, const GridPtr& grid,
                                        const PhysicalConstants& consts, double delta_y) {
  if (!grid) throw ParameterError("poisson_kernel_coefficients: null grid");
  validate_potential(spec);
  consts.validate();
  const bool is_log = std::holds_alternative<LogarithmicPotential>(spec);
  if (!is_log && !std::holds_alternative<GaussianFinitePotential>(spec))
    throw ParameterError("poisson_kernel_coefficients: supported for logarithmic and gaussian potentials only");
  const int n = grid->k.num_points;
  const auto nn = static_cast<std::size_t>(n);
  const double L = grid->k.length();
  // the k-integral runs over [-L_k, L_k], whose dual spacing is pi / L_k
  const double dy = delta_y > 0.0 ? delta_y : kPi / L;

  // zeta runs symmetrically over -Z .. Z with Z dy covering the dual window
  // pi N_k / L_k, so every slot including Nyquist meets its aligned term; the
  // k-integral of each term is 2 int_0^L cos((y + nu~) k) dk
  const double window = kPi * n / L;
  const long zmax = std::max(1L, std::lround(std::ceil(window / dy - 1e-9)));
  const auto nz = static_cast<std::size_t>(2 * zmax + 1);
  std::vector<double> y(nz);
  for (std::size_t z = 0; z < nz; ++z) y[z] = (static_cast<double>(z) - static_cast<double>(zmax)) * dy;
  std::vector<double> m(nn * nz);
  for (int s = 0; s < n; ++s) {
    const double nt = grid->k.mode_frequency(grid->k.mode_of_slot(s));
    for (std::size_t z = 0; z < nz; ++z) m[static_cast<std::size_t>(s) * nz + z] = 2.0 * cos_integral_0L(y[z] + nt, L);
  }
  const double scale = -dy / (2.0 * kPi * consts.hbar);  // 1/i = -i

  KernelTable table(grid, false, "poisson_" + potential_name(spec));
  const auto& xs = grid->x;
  WIGNER_PARALLEL_FOR
  for (long pt = 0; pt < static_cast<long>(xs.size()); ++pt) {
    const double x = xs.points[static_cast<std::size_t>(pt)];
    std::vector<double> d(nz);
    for (std::size_t z = 0; z < nz; ++z) {
      const double up = x + 0.5 * y[z];
      const double dn = x - 0.5 * y[z];
      if (is_log && (up == 0.0 || dn == 0.0)) {
        d[z] = 0.0;
        continue;
      }
      d[z] = potential_value(spec, up) - potential_value(spec, dn);
    }
    for (std::size_t s = 0; s < nn; ++s) {
      const double* row = m.data() + s * nz;
      double acc = 0.0;
      for (std::size_t z = 0; z < nz; ++z) acc += row[z] * d[z];
      table.at(static_cast<std::size_t>(pt), s) = cplx(0.0, scale * acc);
    }
  }
  return table;
}

double table_max_difference(const KernelTable& a, const KernelTable& b) {
  if (a.values().size() != b.values().size())
    throw ParameterError("table_max_difference: tables have different shapes");
  double mx = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) mx = std::max(mx, std::abs(a.values()[i] - b.values()[i]));
  return mx;
}

}  // namespace wigner
