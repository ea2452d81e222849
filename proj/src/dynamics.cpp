#include "wigner/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "wigner/errors.hpp"
#include "wigner/fft.hpp"
#include "wigner/parallel.hpp"

namespace wigner {

// ---------------------------------------------------------------- splitting

SplitScheme SplitScheme::strang() { return {Kind::strang, {1.0}}; }

SplitScheme SplitScheme::yoshida4() {
  const double w1 = 1.0 / (2.0 - std::cbrt(2.0));
  const double w0 = 1.0 - 2.0 * w1;
  return {Kind::yoshida4, {w1, w0, w1}};
}

SplitScheme SplitScheme::from_name(const std::string& name) {
  if (name == "strang") return strang();
  if (name == "yoshida4") return yoshida4();
  throw ParameterError("unknown splitting scheme '" + name + "' (expected strang or yoshida4)");
}

std::string SplitScheme::name() const { return kind == Kind::strang ? "strang" : "yoshida4"; }

std::vector<std::pair<bool, double>> SplitScheme::substeps(double dt) const {
  std::vector<std::pair<bool, double>> seq;
  auto push_advection = [&](double tau) {
    if (!seq.empty() && seq.back().first)
      seq.back().second += tau;
    else
      seq.emplace_back(true, tau);
  };
  for (double c : stage_coefficients) {
    push_advection(0.5 * c * dt);
    seq.emplace_back(false, c * dt);
    push_advection(0.5 * c * dt);
  }
  return seq;
}

// ---------------------------------------------------------------- advection

Advector::Advector(GridPtr grid, const PhysicalConstants& consts, double max_abs_tau, SeamDrift seam)
    : grid_(std::move(grid)), consts_(consts), max_abs_tau_(max_abs_tau), seam_(seam) {
  if (!grid_) throw ParameterError("Advector: null grid");
  consts_.validate();
  if (!(max_abs_tau_ > 0.0)) throw ParameterError("Advector: the tau bound must be positive");
}

double Advector::plan_bytes() const noexcept {
  const double m = grid_->x.points_per_element;
  return grid_->k.num_points * m * (m * sizeof(double) + sizeof(int));
}

void Advector::clear_cache() const {
  std::lock_guard lock(mutex_);
  cache_.clear();
}

std::shared_ptr<const Advector::Plan> Advector::plan_for(double tau) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(tau); it != cache_.end()) return it->second;
  }
  auto plan = build_plan(tau);
  std::lock_guard lock(mutex_);
  // a handful of distinct substep lengths recur; anything beyond that is churn
  if (cache_.size() >= 8) cache_.clear();
  cache_.emplace(tau, plan);
  return plan;
}

std::shared_ptr<const Advector::Plan> Advector::build_plan(double tau) const {
  const auto& mesh = grid_->x;
  const auto& km = grid_->k;
  const int m = mesh.points_per_element;
  const auto mm = static_cast<std::size_t>(m);
  const int nk = km.num_points;
  const double w = mesh.element_width();

  auto plan = std::make_shared<Plan>();
  plan->offset.assign(static_cast<std::size_t>(nk) * mm, 0);
  plan->weights.assign(static_cast<std::size_t>(nk) * mm * mm, 0.0);

  for (int j = 0; j < nk; ++j) {
    const double k = km.transport_k(j, seam_);
    const double shift = consts_.hbar * k / consts_.mass * tau;
    int* off = plan->offset.data() + static_cast<std::size_t>(j) * mm;
    double* wt = plan->weights.data() + static_cast<std::size_t>(j) * mm * mm;
    if (shift == 0.0) {
      for (std::size_t l = 0; l < mm; ++l) wt[l * mm + l] = 1.0;
      continue;
    }
    // the last node repeats the first node of the next element
    for (int l = 0; l < m - 1; ++l) {
      const double u = (0.5 * (1.0 + mesh.reference_nodes[static_cast<std::size_t>(l)]) * w - shift) / w;
      const double d = std::floor(u);
      if (d < -2.0 * mesh.num_elements) {
        off[l] = kOutLeft;
        continue;
      }
      if (d > 2.0 * mesh.num_elements) {
        off[l] = kOutRight;
        continue;
      }
      off[l] = static_cast<int>(d);
      const double t = std::clamp(2.0 * (u - d) - 1.0, -1.0, 1.0);
      lagrange_row(mesh, t, {wt + static_cast<std::size_t>(l) * mm, mm});
    }
    const auto last = mm - 1;
    off[last] = (off[0] == kOutLeft || off[0] == kOutRight) ? off[0] : off[0] + 1;
    std::copy_n(wt, mm, wt + last * mm);
  }
  return plan;
}

void Advector::advect_columns(double* data, const ColumnLayout& layout, double tau, const double* left,
                              const double* right) const {
  if (!(std::abs(tau) <= max_abs_tau_))
    throw ParameterError("advect: |tau| = " + std::to_string(std::abs(tau)) + " fs exceeds the configured bound");
  if (tau == 0.0) return;
  const auto plan = plan_for(tau);
  const auto& mesh = grid_->x;
  const int q = mesh.num_elements;
  const auto mm = static_cast<std::size_t>(mesh.points_per_element);
  const std::size_t nx = mesh.size();
  const auto nk = static_cast<std::size_t>(grid_->k.num_points);
  constexpr std::size_t kBlock = 8;
  const std::size_t nblocks = (layout.ncols + kBlock - 1) / kBlock;

  WIGNER_PARALLEL_FOR
  for (long blk = 0; blk < static_cast<long>(nblocks); ++blk) {
    const std::size_t c0 = static_cast<std::size_t>(blk) * kBlock;
    const std::size_t nb = std::min(kBlock, layout.ncols - c0);
    std::vector<double> in(nx * kBlock), out(nx * kBlock);
    for (std::size_t p = 0; p < nx; ++p)
      for (std::size_t b = 0; b < nb; ++b) in[p * kBlock + b] = data[p * layout.stride + c0 + b];

    for (std::size_t b = 0; b < nb; ++b) {
      const std::size_t c = c0 + b;
      const std::size_t j = (c / layout.divisor) % nk;
      const double lv = left ? left[c] : 0.0;
      const double rv = right ? right[c] : 0.0;
      {
        const int* off = plan->offset.data() + j * mm;
        const double* wt = plan->weights.data() + j * mm * mm;
        for (int e = 0; e < q; ++e) {
          for (std::size_t l = 0; l < mm; ++l) {
            const int o = off[l];
            double v;
            if (o == kOutLeft) {
              v = lv;
            } else if (o == kOutRight) {
              v = rv;
            } else {
              const int target = e + o;
              const double* row = wt + l * mm;
              if (target == q && row[0] == 1.0) {
                // departure exactly at the right end of the domain
                v = in[(static_cast<std::size_t>(q) * mm - 1) * kBlock + b];
              } else if (target < 0) {
                v = lv;
              } else if (target >= q) {
                v = rv;
              } else {
                const double* src = in.data() + static_cast<std::size_t>(target) * mm * kBlock + b;
                double acc = 0.0;
                for (std::size_t a = 0; a < mm; ++a) acc += row[a] * src[a * kBlock];
                v = acc;
              }
            }
            out[(static_cast<std::size_t>(e) * mm + l) * kBlock + b] = v;
          }
        }
      }
    }
    for (std::size_t p = 0; p < nx; ++p)
      for (std::size_t b = 0; b < nb; ++b) data[p * layout.stride + c0 + b] = out[p * kBlock + b];
  }
}

void Advector::apply(WignerState& state, double tau, const WignerState* inflow) const {
  if (state.num_x() != grid_->x.size() || state.num_k() != static_cast<std::size_t>(grid_->k.num_points))
    throw ParameterError("advect: state and advector grids differ");
  const std::size_t nk = state.num_k();
  const double* left = inflow ? inflow->values().data() : nullptr;
  const double* right = inflow ? inflow->values().data() + (inflow->num_x() - 1) * nk : nullptr;
  advect_columns(state.values().data(), {nk, nk, 1}, tau, left, right);
}

void Advector::apply(WignerState4& state, double tau, const WignerState4* inflow) const {
  if (state.num_x() != grid_->x.size() || state.num_k() != static_cast<std::size_t>(grid_->k.num_points))
    throw ParameterError("advect: state and advector grids differ");
  const std::size_t nx = state.num_x();
  const std::size_t nk = state.num_k();
  const std::size_t plane = nx * nk * nk;  // one x1 row
  double* data = state.values().data();
  const double* init = inflow ? inflow->values().data() : nullptr;

  advect_columns(data, {plane, plane, nk}, tau, init, init ? init + (nx - 1) * plane : nullptr);
  for (std::size_t p1 = 0; p1 < nx; ++p1) {
    const double* base = init ? init + p1 * plane : nullptr;
    advect_columns(data + p1 * plane, {nk * nk, nk * nk, 1}, tau, base,
                   base ? base + (nx - 1) * nk * nk : nullptr);
  }
}

// ---------------------------------------------------------------- kernel stage

KernelStage::KernelStage(std::shared_ptr<const KernelTable> table) : table_(std::move(table)) {
  if (!table_) throw ParameterError("KernelStage: null table");
  const auto n = static_cast<std::size_t>(table_->grid().k.num_points);
  half_ = table_->four_dimensional() ? n * (n / 2 + 1) : n / 2 + 1;
}

double KernelStage::multiplier_bytes() const noexcept {
  return static_cast<double>(table_->num_points()) * static_cast<double>(half_) * sizeof(cplx);
}

void KernelStage::clear_cache() const {
  std::lock_guard lock(mutex_);
  cache_.clear();
}

std::shared_ptr<const std::vector<cplx>> KernelStage::multipliers(double tau) const {
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(tau); it != cache_.end()) return it->second;
  }
  const auto n = static_cast<std::size_t>(table_->grid().k.num_points);
  const std::size_t nyq = n / 2;
  const std::size_t np = table_->num_points();
  auto mult = std::make_shared<std::vector<cplx>>(np * half_);
  const bool four_d = table_->four_dimensional();
  WIGNER_PARALLEL_FOR
  for (long pt = 0; pt < static_cast<long>(np); ++pt) {
    const auto p = static_cast<std::size_t>(pt);
    cplx* dst = mult->data() + p * half_;
    if (!four_d) {
      for (std::size_t s = 0; s <= nyq; ++s) dst[s] = s == nyq ? cplx(1.0) : std::exp(tau * table_->at(p, s));
    } else {
      for (std::size_t s1 = 0; s1 < n; ++s1)
        for (std::size_t s2 = 0; s2 <= nyq; ++s2)
          dst[s1 * (nyq + 1) + s2] =
              (s1 == nyq || s2 == nyq) ? cplx(1.0) : std::exp(tau * table_->at(p, s1 * n + s2));
    }
  }
  std::lock_guard lock(mutex_);
  if (cache_.size() >= 8) cache_.clear();
  cache_.emplace(tau, mult);
  return mult;
}

void KernelStage::apply(WignerState& state, double tau) const {
  if (table_->four_dimensional() || state.num_x() != table_->num_points() ||
      state.num_k() != static_cast<std::size_t>(table_->grid().k.num_points))
    throw ParameterError("apply_kernel: table does not match the state grid");
  if (tau == 0.0) return;
  const auto mult = multipliers(tau);
  const auto n = state.num_k();
  const auto& fft = cached_fft(static_cast<int>(n));
  const double scale = 1.0 / static_cast<double>(n);
  WIGNER_PARALLEL_FOR
  for (long pt = 0; pt < static_cast<long>(state.num_x()); ++pt) {
    const auto p = static_cast<std::size_t>(pt);
    thread_local std::vector<cplx> spec;
    spec.resize(half_);
    double* row = state.values().data() + p * n;
    fft.forward(row, spec.data());
    const cplx* m = mult->data() + p * half_;
    for (std::size_t s = 0; s < half_; ++s) spec[s] *= m[s];
    fft.backward(spec.data(), row);
    for (std::size_t j = 0; j < n; ++j) row[j] *= scale;
  }
}

void KernelStage::apply(WignerState4& state, double tau) const {
  const std::size_t nx = state.num_x();
  if (!table_->four_dimensional() || nx * nx != table_->num_points() ||
      state.num_k() != static_cast<std::size_t>(table_->grid().k.num_points))
    throw ParameterError("apply_kernel: table does not match the 4-D state grid");
  if (tau == 0.0) return;
  const auto mult = multipliers(tau);
  const auto n = state.num_k();
  const auto& fft = cached_fft(static_cast<int>(n), true);
  const double scale = 1.0 / static_cast<double>(n * n);
  WIGNER_PARALLEL_FOR
  for (long pt = 0; pt < static_cast<long>(nx * nx); ++pt) {
    const auto p = static_cast<std::size_t>(pt);
    thread_local std::vector<cplx> spec;
    spec.resize(half_);
    double* blk = state.values().data() + p * n * n;
    fft.forward(blk, spec.data());
    const cplx* m = mult->data() + p * half_;
    for (std::size_t s = 0; s < half_; ++s) spec[s] *= m[s];
    fft.backward(spec.data(), blk);
    for (std::size_t j = 0; j < n * n; ++j) blk[j] *= scale;
  }
}

// ---------------------------------------------------------------- wrappers

void advect(WignerState& state, const PhysicalConstants& consts, double tau, Inflow inflow) {
  Advector adv(state.grid_ptr(), consts);
  if (inflow == Inflow::initial) {
    const WignerState boundary = state;
    adv.apply(state, tau, &boundary);
  } else {
    adv.apply(state, tau);
  }
}

void apply_kernel(WignerState& state, const KernelTable& table, double tau) {
  KernelStage(std::make_shared<const KernelTable>(table)).apply(state, tau);
}

WignerState kernel_operator(const WignerState& state, const KernelTable& table) {
  const auto n = state.num_k();
  if (table.four_dimensional() || state.num_x() != table.num_points() ||
      n != static_cast<std::size_t>(table.grid().k.num_points))
    throw ParameterError("kernel_operator: table does not match the state grid");
  WignerState out(state.grid_ptr(), state.time());
  for (std::size_t p = 0; p < state.num_x(); ++p) {
    auto modes = k_forward(state.row(p));
    for (std::size_t s = 0; s < n; ++s) modes[s] *= (s == n / 2) ? cplx(0.0) : table.at(p, s);
    const auto back = k_inverse(modes);
    std::copy(back.begin(), back.end(), out.row(p).begin());
  }
  return out;
}

Stepper::Stepper(std::shared_ptr<const KernelTable> table, const PhysicalConstants& consts, SplitScheme scheme,
                 double max_abs_tau, SeamDrift seam)
    : kernel_(table), advector_(table->grid_ptr(), consts, max_abs_tau, seam), scheme_(std::move(scheme)) {
  double sum = 0.0;
  for (double c : scheme_.stage_coefficients) sum += c;
  if (scheme_.stage_coefficients.empty() || std::abs(sum - 1.0) > 1e-15)
    throw ParameterError("splitting stage coefficients must sum to 1");
}

void Stepper::step(WignerState& state, double dt, const WignerState* inflow) const {
  for (const auto& [is_adv, tau] : scheme_.substeps(dt)) {
    if (is_adv)
      advector_.apply(state, tau, inflow);
    else
      kernel_.apply(state, tau);
  }
  state.set_time(state.time() + dt);
}

void Stepper::step(WignerState4& state, double dt, const WignerState4* inflow) const {
  for (const auto& [is_adv, tau] : scheme_.substeps(dt)) {
    if (is_adv)
      advector_.apply(state, tau, inflow);
    else
      kernel_.apply(state, tau);
  }
  state.set_time(state.time() + dt);
}

double Stepper::cache_bytes(double dt) const {
  std::vector<double> adv, ker;
  for (const auto& [is_adv, tau] : scheme_.substeps(dt)) {
    auto& v = is_adv ? adv : ker;
    if (std::find(v.begin(), v.end(), tau) == v.end()) v.push_back(tau);
  }
  return static_cast<double>(adv.size()) * advector_.plan_bytes() +
         static_cast<double>(ker.size()) * kernel_.multiplier_bytes();
}

}  // namespace wigner
