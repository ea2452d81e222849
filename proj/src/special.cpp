#include "wigner/special.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "wigner/errors.hpp"

namespace wigner {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 10000;

// Below this argument the power series are used; above, continued fractions.
constexpr double kCiSwitch = 4.0;
constexpr double kFresnelSwitch = 1.5;
constexpr double kCosPowerSwitch = 4.0;

// sum_{n>=1} (-x^2)^n / (2n (2n)!), i.e. Ci(x) - gamma - ln x
double ci_series_tail(double x) {
  const double x2 = x * x;
  double u = 1.0;
  double sum = 0.0;
  for (int n = 1; n < 200; ++n) {
    u *= -x2 / ((2.0 * n - 1.0) * (2.0 * n));
    const double term = u / (2.0 * n);
    sum += term;
    if (std::abs(term) < kEps * 1e-3 * std::max(std::abs(sum), 1e-300)) break;
  }
  return sum;
}

// Ci(x) by the continued fraction for E1(ix) (modified Lentz).
double ci_continued_fraction(double x) {
  using C = std::complex<double>;
  C b(1.0, x);
  C c(1.0 / kTiny, 0.0);
  C d = 1.0 / b;
  C h = d;
  int i = 2;
  for (; i <= kMaxIter; ++i) {
    const double a = -static_cast<double>(i - 1) * (i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const C del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
  }
  if (i > kMaxIter) throw AccuracyError("cosine_integral: continued fraction did not converge", 0.0, 1.0);
  h *= C(std::cos(x), -std::sin(x));
  return -h.real();
}

}  // namespace

double cosine_integral(double x) {
  if (!(x > 0.0)) throw DomainError("cosine_integral: argument must be positive, got " + std::to_string(x));
  if (!std::isfinite(x)) return 0.0;
  if (x <= kCiSwitch) return euler_gamma + std::log(x) + ci_series_tail(x);
  return ci_continued_fraction(x);
}

double cosine_integral_entire(double x) {
  x = std::abs(x);
  if (x == 0.0) return 0.0;
  if (x <= kCiSwitch) return -ci_series_tail(x);
  return euler_gamma + std::log(x) - ci_continued_fraction(x);
}

double fresnel_c(double x) {
  const double ax = std::abs(x);
  double c = 0.0;
  if (ax == 0.0) {
    c = 0.0;
  } else if (ax <= kFresnelSwitch) {
    // sum (-1)^n (pi/2)^{2n} x^{4n+1} / ((2n)! (4n+1))
    const double q = 0.5 * std::numbers::pi * ax * ax;
    double u = ax;
    double sum = ax;
    for (int n = 1; n < 200; ++n) {
      u *= -q * q / ((2.0 * n - 1.0) * (2.0 * n));
      const double term = u / (4.0 * n + 1.0);
      sum += term;
      if (std::abs(term) < kEps * 1e-3 * std::abs(sum)) break;
    }
    c = sum;
  } else {
    using C = std::complex<double>;
    const double pix2 = std::numbers::pi * ax * ax;
    C b(1.0, -pix2);
    C cc(1.0 / kTiny, 0.0);
    C d = 1.0 / b;
    C h = d;
    int n = -1;
    int k = 2;
    for (; k <= kMaxIter; ++k) {
      n += 2;
      const double a = -static_cast<double>(n) * (n + 1);
      b += 4.0;
      d = 1.0 / (a * d + b);
      cc = b + a / cc;
      const C del = cc * d;
      h *= del;
      if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < kEps) break;
    }
    if (k > kMaxIter) throw AccuracyError("fresnel_c: continued fraction did not converge", 0.5, 1.0);
    h *= C(ax, -ax);
    const C cs = C(0.5, 0.5) * (1.0 - C(std::cos(0.5 * pix2), std::sin(0.5 * pix2)) * h);
    c = cs.real();
  }
  return x < 0.0 ? -c : c;
}

double gamma_fn(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw DomainError("gamma_fn: argument must lie in (0, 2), got " + std::to_string(alpha));
  return std::tgamma(alpha);
}

double cos_power_integral(double omega, double alpha, double L, const QuadSpec& spec) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("cos_power_integral: alpha must lie in (0, 1), got " + std::to_string(alpha));
  if (!(L > 0.0)) throw ParameterError("cos_power_integral: L must be positive");
  spec.validate();
  const double w = std::abs(omega);
  const double z = w * L;
  const double scale = std::pow(L, 1.0 - alpha);
  const long max_iter = std::min<long>(spec.max_subdivisions, 1'000'000);

  if (z <= kCosPowerSwitch) {
    const double z2 = z * z;
    double u = 1.0;
    double sum = 1.0 / (1.0 - alpha);
    for (long n = 1; n < max_iter; ++n) {
      u *= -z2 / ((2.0 * n - 1.0) * (2.0 * n));
      const double term = u / (2.0 * n + 1.0 - alpha);
      sum += term;
      if (std::abs(term) < kEps * 1e-3 * std::abs(sum)) return scale * sum;
    }
    throw AccuracyError("cos_power_integral: series did not converge", scale * sum, std::abs(scale * u));
  }

  // Half-line value minus the tail int_L^inf exp(i w k) k^-alpha dk, where the
  // tail is exp(i z) L^(1-alpha) times the continued fraction of
  // Gamma(1-alpha, -i z) exp(-i z) (-i z)^(alpha-1).
  using C = std::complex<double>;
  const double a = 1.0 - alpha;
  const C x(0.0, -z);
  C b = x + 1.0 - a;
  C c(1.0 / kTiny, 0.0);
  C d = 1.0 / b;
  C h = d;
  bool converged = false;
  for (long i = 1; i < max_iter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const C del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      converged = true;
      break;
    }
  }
  const C tail = std::polar(1.0, z) * scale * h;
  const double half_line = std::tgamma(a) * std::sin(0.5 * std::numbers::pi * alpha) * std::pow(w, alpha - 1.0);
  const double value = half_line - tail.real();
  if (!converged) throw AccuracyError("cos_power_integral: continued fraction did not converge", value, std::abs(tail));
  return value;
}

}  // namespace wigner
