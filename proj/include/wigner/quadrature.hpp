#pragma once

#include <functional>
#include <span>
#include <vector>

namespace wigner {

/// Tolerances and limits for the adaptive quadrature routines.
struct QuadSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  long max_subdivisions = 1'000'000;
  int panel_rule_order = 16;  // Gauss-Legendre points per panel

  void validate() const;
};

/// Which end points of [a, b] carry an integrable singularity.
enum class Singular { none, left, right, both };

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long panels = 0;
};

/// Gauss-Legendre rule on [-1, 1]; computed once per order and cached.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussLegendre& gauss_legendre(int order);

/// Fixed composite Gauss-Legendre sum over `panels` equal panels of [a, b].
double composite_gauss(const std::function<double(double)>& f, double a, double b, int panels, int order);

/// Globally adaptive panel quadrature. Each panel is integrated with the
/// Gauss-Legendre rule on the whole panel and on its two halves; their
/// difference is the panel's error estimate and the panel with the largest
/// estimate is bisected until the total estimate meets the tolerance.
///
/// A declared singular end point is removed by the substitution
/// x = a + (b - a) u^2, which turns x^-1/2 type behaviour into a smooth
/// integrand. Throws AccuracyError (carrying the best estimate) when the
/// tolerance cannot be met within `max_subdivisions` panels.
QuadResult oscillatory_quad(const std::function<double(double)>& f, double a, double b,
                            const QuadSpec& spec = {}, Singular singular = Singular::none);

/// Adaptive quadrature over [a, b] split at the given interior break points
/// (each treated as a singular end point of its neighbouring pieces).
QuadResult quad_with_breaks(const std::function<double(double)>& f, double a, double b,
                            std::span<const double> breaks, const QuadSpec& spec = {});

enum class Trig { sine, cosine };

/// Integral of g(y) * sin(omega y) (or cos) over [a, infinity) for a slowly
/// decaying, smooth g. The range is cut at the zeros of the trigonometric
/// factor, each half period is integrated adaptively and the alternating
/// partial sums are accelerated with Wynn's epsilon algorithm.
QuadResult fourier_tail(const std::function<double(double)>& g, double omega, double a, Trig trig,
                        const QuadSpec& spec = {});

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the
/// best estimate and an error estimate in `error`.
double wynn_epsilon(std::span<const double> partial_sums, double& error);

}  // namespace wigner
