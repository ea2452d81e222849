#include "wigner/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wigner/errors.hpp"
#include "wigner/parallel.hpp"
#include "wigner/quadrature.hpp"

namespace wigner {

namespace {
constexpr double kPi = std::numbers::pi;

// P(lo <= X <= hi) for X ~ N(mu, s^2)
double normal_interval(double mu, double s, double lo, double hi) {
  const double r = 1.0 / (s * std::numbers::sqrt2);
  return 0.5 * (std::erf((hi - mu) * r) - std::erf((lo - mu) * r));
}
}  // namespace

void GaussianPacketSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(x0) || !std::isfinite(k0))
    throw ParameterError("gaussian packet: sigma must be positive and x0, k0 finite");
}

void FermiDiracSpec::validate() const {
  if (!(effective_mass_ratio > 0.0 && m_e > 0.0 && k_B > 0.0 && T > 0.0 && E_F > 0.0))
    throw ParameterError("fermi-dirac: all constants must be positive");
}

WignerState init_gaussian(const GridPtr& grid, const GaussianPacketSpec& spec) {
  spec.validate();
  WignerState st(grid);
  const auto& km = grid->k;
  const double s2 = spec.sigma * spec.sigma;
  std::vector<double> gk(st.num_k());
  for (std::size_t j = 0; j < gk.size(); ++j) {
    const double dk = km.node(static_cast<int>(j)) - spec.k0;
    gk[j] = std::exp(-2.0 * s2 * dk * dk);
  }
  for (std::size_t p = 0; p < st.num_x(); ++p) {
    const double dx = grid->x.points[p] - spec.x0;
    const double gx = std::exp(-dx * dx / (2.0 * s2)) / kPi;
    for (std::size_t j = 0; j < gk.size(); ++j) st(p, j) = gx * gk[j];
  }
  return st;
}

double gaussian_tail_mass(const PhaseGrid& grid, const GaussianPacketSpec& spec) {
  spec.validate();
  const double px = normal_interval(spec.x0, spec.sigma, grid.x.lo, grid.x.hi);
  const double pk = normal_interval(spec.k0, 0.5 / spec.sigma, grid.k.k_min, grid.k.k_max);
  return 1.0 - px * pk;
}

WignerState4 init_gaussian_4d(const GridPtr& grid, const GaussianPacketSpec& first, const GaussianPacketSpec& second) {
  const auto a = init_gaussian(grid, first);
  const auto b = init_gaussian(grid, second);
  WignerState4 st(grid);
  const std::size_t nx = st.num_x(), nk = st.num_k();
  for (std::size_t p1 = 0; p1 < nx; ++p1)
    for (std::size_t p2 = 0; p2 < nx; ++p2)
      for (std::size_t j1 = 0; j1 < nk; ++j1)
        for (std::size_t j2 = 0; j2 < nk; ++j2) st(p1, p2, j1, j2) = a(p1, j1) * b(p2, j2);
  return st;
}

double fermi_dirac_value(const FermiDiracSpec& spec, double hbar, double k1, double k2) {
  const double m = spec.mass();
  const double kt = spec.k_B * spec.T;
  const double energy = hbar * hbar * (k1 * k1 + k2 * k2) / (2.0 * m);
  const double eta = (energy - spec.E_F) / kt;
  const double y_max = std::sqrt(35.0 + std::max(0.0, spec.E_F / kt));
  const auto& gl = gauss_legendre(64);
  double sum = 0.0;
  for (double a = 0.0; a < y_max; a += 1.0) {
    const double b = std::min(a + 1.0, y_max);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double part = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double y = mid + half * gl.nodes[i];
      part += gl.weights[i] / (1.0 + std::exp(y * y + eta));
    }
    sum += half * part;
  }
  return std::sqrt(2.0 * m * kt) / (kPi * hbar) * sum;
}

WignerState4 init_fermi_dirac_4d(const GridPtr& grid, const FermiDiracSpec& spec, double hbar) {
  spec.validate();
  if (!(hbar > 0.0)) throw ParameterError("fermi-dirac: hbar must be positive");
  WignerState4 st(grid);
  const std::size_t nk = st.num_k();
  std::vector<double> blk(nk * nk);
  for (std::size_t j1 = 0; j1 < nk; ++j1)
    for (std::size_t j2 = 0; j2 < nk; ++j2)
      blk[j1 * nk + j2] = fermi_dirac_value(spec, hbar, grid->k.node(static_cast<int>(j1)), grid->k.node(static_cast<int>(j2)));
  const std::size_t np = st.num_x() * st.num_x();
  for (std::size_t p = 0; p < np; ++p) std::copy(blk.begin(), blk.end(), st.values().begin() + static_cast<long>(p * nk * nk));
  return st;
}

std::vector<double> clenshaw_curtis_weights(const SpatialMesh& mesh) {
  const int n = mesh.points_per_element - 1;
  // reference weights on [-1, 1] at cos(j pi / n); symmetric, so the ascending
  // node order does not matter
  std::vector<double> ref(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    double s = 0.0;
    for (int k = 1; k <= n / 2; ++k) {
      const double b = (2 * k == n) ? 1.0 : 2.0;
      s += b / (4.0 * k * k - 1.0) * std::cos(2.0 * k * j * kPi / n);
    }
    const double c = (j == 0 || j == n) ? 1.0 : 2.0;
    ref[static_cast<std::size_t>(j)] = c / n * (1.0 - s);
  }
  const double half = 0.5 * mesh.element_width();
  std::vector<double> w(mesh.size());
  for (int e = 0; e < mesh.num_elements; ++e)
    for (int l = 0; l <= n; ++l) w[static_cast<std::size_t>(e) * (n + 1) + l] = half * ref[static_cast<std::size_t>(l)];
  return w;
}

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t h = v.size() / 2;
  return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

std::vector<double> spatial_marginal(const WignerState& state) {
  const double L = state.grid().k.length();
  const auto nk = static_cast<double>(state.num_k());
  std::vector<double> out(state.num_x());
  for (std::size_t p = 0; p < out.size(); ++p) out[p] = L * pairwise_sum(state.row(p)) / nk;
  return out;
}

std::vector<double> spatial_marginal_2d(const WignerState4& state) {
  const double L = state.grid().k.length();
  const auto nb = static_cast<double>(state.block_size());
  const std::size_t nx = state.num_x();
  std::vector<double> out(nx * nx);
  WIGNER_PARALLEL_FOR
  for (long p = 0; p < static_cast<long>(nx * nx); ++p)
    out[static_cast<std::size_t>(p)] =
        L * L * pairwise_sum(state.block(static_cast<std::size_t>(p) / nx, static_cast<std::size_t>(p) % nx)) / nb;
  return out;
}

double total_mass(const WignerState& state) {
  const auto w = clenshaw_curtis_weights(state.grid().x);
  const auto marg = spatial_marginal(state);
  std::vector<double> terms(w.size());
  for (std::size_t p = 0; p < w.size(); ++p) terms[p] = w[p] * marg[p];
  return pairwise_sum(terms);
}

double total_mass(const WignerState4& state) {
  const auto w = clenshaw_curtis_weights(state.grid().x);
  const auto marg = spatial_marginal_2d(state);
  const std::size_t nx = w.size();
  std::vector<double> terms(nx * nx);
  for (std::size_t p1 = 0; p1 < nx; ++p1)
    for (std::size_t p2 = 0; p2 < nx; ++p2) terms[p1 * nx + p2] = w[p1] * w[p2] * marg[p1 * nx + p2];
  return pairwise_sum(terms);
}

// ---------------------------------------------------------------- uniform mesh

UniformObservables::UniformObservables(const PhaseGrid& grid, int n_um, double hbar)
    : n_um_(n_um), nx_(grid.x.size()), nk_(static_cast<std::size_t>(grid.k.num_points)) {
  if (!(hbar > 0.0)) throw ParameterError("observables: hbar must be positive");
  const auto xs = make_uniform_x_sampler(grid.x, n_um);
  const auto ks = make_uniform_k_sampler(grid.k, n_um);
  const auto m = static_cast<std::size_t>(grid.x.points_per_element);
  const double hx = (grid.x.hi - grid.x.lo) / n_um;
  const double hk = grid.k.length() / n_um;

  wx_one_.assign(nx_, 0.0);
  wx_pos_.assign(nx_, 0.0);
  wx_x_.assign(nx_, 0.0);
  wx_x2_.assign(nx_, 0.0);
  for (int i = 0; i < n_um; ++i) {
    const double x = grid.x.lo + (i + 0.5) * hx;
    const auto e = static_cast<std::size_t>(xs.element[static_cast<std::size_t>(i)]);
    for (std::size_t a = 0; a < m; ++a) {
      const double w = xs.weights[static_cast<std::size_t>(i) * m + a] * hx;
      const std::size_t p = e * m + a;
      wx_one_[p] += w;
      if (x >= 0.0) wx_pos_[p] += w;
      wx_x_[p] += w * x;
      wx_x2_[p] += w * x * x;
    }
  }
  wk_one_.assign(nk_, 0.0);
  wk_p_.assign(nk_, 0.0);
  wk_p2_.assign(nk_, 0.0);
  for (int jj = 0; jj < n_um; ++jj) {
    const double pv = hbar * (grid.k.k_min + (jj + 0.5) * hk);
    for (std::size_t j = 0; j < nk_; ++j) {
      const double w = ks[static_cast<std::size_t>(jj) * nk_ + j] * hk;
      wk_one_[j] += w;
      wk_p_[j] += w * pv;
      wk_p2_[j] += w * pv * pv;
    }
  }
}

UniformObservables::Sums UniformObservables::sums(const WignerState& state) const {
  if (state.num_x() != nx_ || state.num_k() != nk_) throw ParameterError("observables: state does not match the mesh");
  std::vector<double> t0(nx_), tp(nx_), tp2(nx_);
  WIGNER_PARALLEL_FOR
  for (long pl = 0; pl < static_cast<long>(nx_); ++pl) {
    const auto p = static_cast<std::size_t>(pl);
    const auto row = state.row(p);
    double a = 0.0, b = 0.0, c = 0.0;
    for (std::size_t j = 0; j < nk_; ++j) {
      a += wk_one_[j] * row[j];
      b += wk_p_[j] * row[j];
      c += wk_p2_[j] * row[j];
    }
    t0[p] = a;
    tp[p] = b;
    tp2[p] = c;
  }
  std::vector<double> buf(nx_);
  auto dot = [&](const std::vector<double>& w, const std::vector<double>& t) {
    for (std::size_t p = 0; p < nx_; ++p) buf[p] = w[p] * t[p];
    return pairwise_sum(buf);
  };
  Sums s;
  s.mass = dot(wx_one_, t0);
  s.partial = dot(wx_pos_, t0);
  s.x = dot(wx_x_, t0);
  s.x2 = dot(wx_x2_, t0);
  s.p = dot(wx_one_, tp);
  s.p2 = dot(wx_one_, tp2);
  return s;
}

Moments moments_from_sums(const UniformObservables::Sums& s, bool normalize) {
  Moments m;
  m.mass = s.mass;
  double vx, vp;
  if (normalize) {
    if (!(s.mass > 0.0)) throw NumericQualityError("observables: cannot normalize by a non-positive mass");
    m.mean_x = s.x / s.mass;
    m.mean_p = s.p / s.mass;
    vx = s.x2 / s.mass - m.mean_x * m.mean_x;
    vp = s.p2 / s.mass - m.mean_p * m.mean_p;
  } else {
    // int (x - <x>)^2 f with <x> = int x f, no division by the mass
    m.mean_x = s.x;
    m.mean_p = s.p;
    vx = s.x2 - 2.0 * m.mean_x * s.x + m.mean_x * m.mean_x * s.mass;
    vp = s.p2 - 2.0 * m.mean_p * s.p + m.mean_p * m.mean_p * s.mass;
  }
  if (vx < -1e-10 || vp < -1e-10)
    throw NumericQualityError("observables: negative variance (var_x = " + std::to_string(vx) +
                              ", var_p = " + std::to_string(vp) + ")");
  m.var_x = std::max(vx, 0.0);
  m.var_p = std::max(vp, 0.0);
  m.product = std::sqrt(m.var_x) * std::sqrt(m.var_p);
  return m;
}

Moments UniformObservables::moments(const WignerState& state, bool normalize) const {
  return moments_from_sums(sums(state), normalize);
}

double partial_mass(const WignerState& state, int n_um) {
  return UniformObservables(state.grid(), n_um, 1.0).partial_mass(state);
}

Moments uncertainty(const WignerState& state, int n_um, double hbar, bool normalize) {
  return UniformObservables(state.grid(), n_um, hbar).moments(state, normalize);
}

namespace {
UniformObservables::Sums reference_sums(const WignerState& state, int n_um, double hbar) {
  const auto u = resample_uniform(state, n_um);
  const double cell = u.dx() * u.dk();
  UniformObservables::Sums s;
  for (int i = 0; i < n_um; ++i) {
    const double x = u.x(i);
    for (int j = 0; j < n_um; ++j) {
      const double f = u(i, j) * cell;
      const double p = hbar * u.k(j);
      s.mass += f;
      if (x >= 0.0) s.partial += f;
      s.x += x * f;
      s.x2 += x * x * f;
      s.p += p * f;
      s.p2 += p * p * f;
    }
  }
  return s;
}
}  // namespace

Moments uncertainty_reference(const WignerState& state, int n_um, double hbar, bool normalize) {
  return moments_from_sums(reference_sums(state, n_um, hbar), normalize);
}

double partial_mass_reference(const WignerState& state, int n_um) { return reference_sums(state, n_um, 1.0).partial; }

ErrorNorms error_norms(const UniformField& a, const UniformField& b) {
  if (a.n != b.n || a.x_lo != b.x_lo || a.x_hi != b.x_hi || a.k_min != b.k_min || a.k_max != b.k_max)
    throw ParameterError("error_norms: the two fields live on different uniform meshes");
  ErrorNorms out;
  std::vector<double> sq(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    sq[i] = d * d;
    out.eps_inf = std::max(out.eps_inf, std::abs(d));
  }
  out.eps2 = std::sqrt(pairwise_sum(sq) * a.dx() * a.dk());
  return out;
}

ErrorNorms error_norms(const WignerState& candidate, const WignerState& reference, int n_um) {
  const auto& gc = candidate.grid();
  const auto& gr = reference.grid();
  if (gc.x.lo != gr.x.lo || gc.x.hi != gr.x.hi || gc.k.k_min != gr.k.k_min || gc.k.k_max != gr.k.k_max)
    throw ParameterError("error_norms: candidate and reference cover different phase-space domains");
  return error_norms(resample_uniform(candidate, n_um), resample_uniform(reference, n_um));
}

// ---------------------------------------------------------------- series

void ObservableSeries::append(const ObservableRecord& r) {
  if (!records_.empty() && !(r.t > records_.back().t))
    throw ParameterError("observable series: times must increase strictly");
  records_.push_back(r);
}

const ObservableRecord& ObservableSeries::at_time(double t) const {
  if (records_.empty()) throw ParameterError("observable series is empty");
  return *std::min_element(records_.begin(), records_.end(),
                           [t](const auto& a, const auto& b) { return std::abs(a.t - t) < std::abs(b.t - t); });
}

}  // namespace wigner
