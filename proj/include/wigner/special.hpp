#pragma once

#include "wigner/quadrature.hpp"

namespace wigner {

inline constexpr double euler_gamma = 0.57721566490153286061;

/// Ci(x) = -int_x^inf cos(t)/t dt for x > 0.
double cosine_integral(double x);

/// Cin(x) = int_0^x (1 - cos t)/t dt = gamma + ln|x| - Ci(|x|). Entire and
/// even, so differences of Ci at nearby arguments can be formed without the
/// logarithmic cancellation.
double cosine_integral_entire(double x);

/// C(x) = int_0^x cos(pi t^2 / 2) dt.
double fresnel_c(double x);

/// Gamma function restricted to (0, 2).
double gamma_fn(double alpha);

/// int_0^L cos(omega k) k^(-alpha) dk for alpha in (0, 1), L > 0.
double cos_power_integral(double omega, double alpha, double L, const QuadSpec& spec = {});

}  // namespace wigner
