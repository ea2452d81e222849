#include "wigner/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <string>

#include "wigner/errors.hpp"

namespace wigner {

void QuadSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw ParameterError("QuadSpec: tolerances must be positive");
  if (panel_rule_order < 2) throw ParameterError("QuadSpec: panel_rule_order must be at least 2");
  if (max_subdivisions < 1) throw ParameterError("QuadSpec: max_subdivisions must be positive");
}

namespace {

GaussLegendre compute_gauss_legendre(int n) {
  GaussLegendre rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Newton on P_n starting from the Tricomi estimate
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
  return rule;
}

struct Panel {
  double a;
  double b;
  double value;  // refined (two-half) estimate
  double halves[2];
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

class PanelIntegrator {
public:
  PanelIntegrator(const std::function<double(double)>& f, const GaussLegendre& rule, bool tolerate_endpoint)
      : f_(f), rule_(rule), tolerate_(tolerate_endpoint) {}

  double rule_sum(double a, double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
      const double x = mid + half * rule_.nodes[i];
      double v = f_(x);
      if (!std::isfinite(v)) {
        // a node that rounded onto a declared singular end point carries no measure
        if (tolerate_ && (x <= a || x >= b || half < 1e-14 * std::max(1.0, std::abs(mid)))) v = 0.0;
        else throw DomainError("oscillatory_quad: integrand not finite at " + std::to_string(x));
      }
      s += rule_.weights[i] * v;
    }
    return s * half;
  }

  Panel make(double a, double b, double coarse) const {
    Panel p{a, b, 0.0, {0.0, 0.0}, 0.0};
    const double m = 0.5 * (a + b);
    p.halves[0] = rule_sum(a, m);
    p.halves[1] = rule_sum(m, b);
    p.value = p.halves[0] + p.halves[1];
    p.error = std::abs(p.value - coarse);
    return p;
  }

private:
  const std::function<double(double)>& f_;
  const GaussLegendre& rule_;
  bool tolerate_;
};

QuadResult adaptive(const std::function<double(double)>& f, double a, double b, const QuadSpec& spec,
                    bool tolerate_endpoint) {
  const GaussLegendre& rule = gauss_legendre(spec.panel_rule_order);
  PanelIntegrator integ(f, rule, tolerate_endpoint);
  std::priority_queue<Panel> open;
  double frozen_value = 0.0;
  double frozen_error = 0.0;
  // a few initial panels guard against a symmetric oscillation fooling the
  // whole-versus-halves comparison on the full interval
  constexpr int initial_panels = 8;
  double total = 0.0;
  double total_error = 0.0;
  for (int i = 0; i < initial_panels; ++i) {
    const double lo = a + (b - a) * i / initial_panels;
    const double hi = i + 1 == initial_panels ? b : a + (b - a) * (i + 1) / initial_panels;
    Panel p = integ.make(lo, hi, integ.rule_sum(lo, hi));
    total += p.value;
    total_error += p.error;
    open.push(p);
  }
  long panels = initial_panels;
  const double eps = std::numeric_limits<double>::epsilon();

  while (!open.empty()) {
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (total_error <= target) break;
    if (panels >= spec.max_subdivisions) {
      throw AccuracyError("oscillatory_quad: tolerance not met within max_subdivisions", total, total_error);
    }
    Panel p = open.top();
    open.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b) || (p.b - p.a) <= 8.0 * eps * std::max(std::abs(p.a), std::abs(p.b))) {
      frozen_value += p.value;
      frozen_error += p.error;
      continue;
    }
    const Panel left = integ.make(p.a, m, p.halves[0]);
    const Panel right = integ.make(m, p.b, p.halves[1]);
    total += left.value + right.value - p.value;
    total_error += left.error + right.error - p.error;
    open.push(left);
    open.push(right);
    ++panels;
  }

  // recompute the sums from scratch; running updates drift by round-off
  double value = frozen_value;
  double error = frozen_error;
  while (!open.empty()) {
    value += open.top().value;
    error += open.top().error;
    open.pop();
  }
  const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
  if (error > target)
    throw AccuracyError("oscillatory_quad: tolerance not met (panels cannot be refined further)", value, error);
  return {value, error, panels};
}

}  // namespace

const GaussLegendre& gauss_legendre(int order) {
  if (order < 2) throw ParameterError("gauss_legendre: order must be at least 2");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendre>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussLegendre>(compute_gauss_legendre(order));
  return *slot;
}

double composite_gauss(const std::function<double(double)>& f, double a, double b, int panels, int order) {
  if (panels < 1) throw ParameterError("composite_gauss: need at least one panel");
  const GaussLegendre& rule = gauss_legendre(order);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    total += 0.5 * h * s;
  }
  return total;
}

QuadResult oscillatory_quad(const std::function<double(double)>& f, double a, double b, const QuadSpec& spec,
                            Singular singular) {
  spec.validate();
  if (!std::isfinite(a) || !std::isfinite(b)) throw ParameterError("oscillatory_quad: limits must be finite");
  if (a == b) return {};
  if (a > b) {
    const Singular flipped = singular == Singular::left    ? Singular::right
                             : singular == Singular::right ? Singular::left
                                                           : singular;
    QuadResult r = oscillatory_quad(f, b, a, spec, flipped);
    r.value = -r.value;
    return r;
  }
  const double len = b - a;
  switch (singular) {
    case Singular::none:
      return adaptive(f, a, b, spec, false);
    case Singular::left: {
      std::function<double(double)> g = [&](double u) {
        const double x = a + len * u * u;
        return x == a ? 0.0 : f(x) * 2.0 * len * u;
      };
      return adaptive(g, 0.0, 1.0, spec, true);
    }
    case Singular::right: {
      std::function<double(double)> g = [&](double u) {
        const double x = b - len * u * u;
        return x == b ? 0.0 : f(x) * 2.0 * len * u;
      };
      return adaptive(g, 0.0, 1.0, spec, true);
    }
    case Singular::both: {
      const double m = a + 0.5 * len;
      QuadSpec half = spec;
      half.abs_tol = 0.5 * spec.abs_tol;
      const QuadResult l = oscillatory_quad(f, a, m, half, Singular::left);
      const QuadResult r = oscillatory_quad(f, m, b, half, Singular::right);
      return {l.value + r.value, l.error + r.error, l.panels + r.panels};
    }
  }
  return {};
}

QuadResult quad_with_breaks(const std::function<double(double)>& f, double a, double b,
                            std::span<const double> breaks, const QuadSpec& spec) {
  std::vector<double> cuts{a};
  for (double c : breaks)
    if (c > a && c < b) cuts.push_back(c);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cuts.push_back(b);
  QuadSpec piece = spec;
  piece.abs_tol = spec.abs_tol / static_cast<double>(cuts.size() - 1);
  QuadResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const bool left_sing = i > 0;
    const bool right_sing = i + 2 < cuts.size();
    const Singular s = left_sing && right_sing ? Singular::both
                       : left_sing             ? Singular::left
                       : right_sing            ? Singular::right
                                               : Singular::none;
    const QuadResult r = oscillatory_quad(f, cuts[i], cuts[i + 1], piece, s);
    total.value += r.value;
    total.error += r.error;
    total.panels += r.panels;
  }
  return total;
}

double wynn_epsilon(std::span<const double> s, double& error) {
  const std::size_t n = s.size();
  if (n == 0) throw ParameterError("wynn_epsilon: empty sequence");
  if (n < 3) {
    error = n == 2 ? std::abs(s[1] - s[0]) : std::numeric_limits<double>::infinity();
    return s.back();
  }
  // e[k] holds column k of the epsilon table along the current diagonal
  std::vector<double> prev(s.begin(), s.end());  // column 0
  std::vector<double> prev2(n + 1, 0.0);         // column -1
  double best = s.back();
  double best_err = std::abs(s[n - 1] - s[n - 2]);
  double last_even = s.back();
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<double> cur(n - k);
    bool ok = true;
    for (std::size_t i = 0; i + k < n; ++i) {
      const double d = prev[i + 1] - prev[i];
      if (d == 0.0 || !std::isfinite(d)) {
        ok = false;
        break;
      }
      cur[i] = prev2[i + 1] + 1.0 / d;
    }
    if (!ok) break;
    if (k % 2 == 0) {
      const double est = cur.back();
      const double err = std::abs(est - last_even) + (cur.size() > 1 ? std::abs(cur[cur.size() - 1] - cur[cur.size() - 2]) : 0.0);
      if (std::isfinite(est) && err < best_err) {
        best = est;
        best_err = err;
      }
      last_even = est;
    }
    prev2 = std::move(prev);
    prev = std::move(cur);
  }
  error = best_err;
  return best;
}

QuadResult fourier_tail(const std::function<double(double)>& g, double omega, double a, Trig trig,
                        const QuadSpec& spec) {
  spec.validate();
  if (!(omega > 0.0)) throw ParameterError("fourier_tail: omega must be positive");
  const double half_period = std::numbers::pi / omega;
  std::function<double(double)> integrand = [&](double y) {
    return g(y) * (trig == Trig::sine ? std::sin(omega * y) : std::cos(omega * y));
  };
  // first cut: next zero of the trig factor beyond a
  const double phase_shift = trig == Trig::sine ? 0.0 : 0.5;
  double zero = (std::floor(a / half_period - phase_shift) + 1.0 + phase_shift) * half_period;
  if (zero <= a) zero += half_period;

  QuadSpec piece = spec;
  piece.abs_tol = 0.01 * spec.abs_tol;
  piece.rel_tol = 0.01 * spec.rel_tol;
  QuadResult head = oscillatory_quad(integrand, a, zero, piece);

  std::vector<double> sums;
  double running = head.value;
  long panels = head.panels;
  double estimate = running;
  double err = std::numeric_limits<double>::infinity();
  double previous = std::numeric_limits<double>::quiet_NaN();
  int stable = 0;
  constexpr int max_terms = 400;
  for (int n = 0; n < max_terms; ++n) {
    const double lo = zero + n * half_period;
    const QuadResult term = oscillatory_quad(integrand, lo, lo + half_period, piece);
    running += term.value;
    panels += term.panels;
    sums.push_back(running);
    if (sums.size() >= 6) {
      // Wynn works best on a window of recent sums
      const std::size_t w = std::min<std::size_t>(sums.size(), 40);
      estimate = wynn_epsilon({sums.data() + sums.size() - w, w}, err);
      const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(estimate));
      if (std::isfinite(previous) && std::abs(estimate - previous) <= target && err <= target) {
        if (++stable >= 2) return {estimate, std::max(err, std::abs(estimate - previous)), panels};
      } else {
        stable = 0;
      }
      previous = estimate;
    }
  }
  throw AccuracyError("fourier_tail: series acceleration did not converge", estimate, err);
}

}  // namespace wigner
