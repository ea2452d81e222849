#pragma once

#include "wigner/grid.hpp"
#include "wigner/kernels.hpp"

/// Straightforward serial versions of the two sub-flows: per-point element
/// search with barycentric evaluation, and a direct complex DFT in k. Slow,
/// but independent of the planned / FFT-based solvers they check.
namespace wigner::reference {

/// f(x, k) <- f(x - hbar k tau / m, k) with k from transport_k; outside the
/// domain the inflow state's boundary value (or zero) is used.
void advect(WignerState& state, const PhysicalConstants& consts, double tau, const WignerState* inflow = nullptr,
            SeamDrift seam = SeamDrift::node);
void advect(WignerState4& state, const PhysicalConstants& consts, double tau, const WignerState4* inflow = nullptr,
            SeamDrift seam = SeamDrift::node);

/// Multiplies every complex DFT mode by exp(tau c) (Nyquist left alone) and
/// keeps the real part. Returns the largest imaginary residue discarded.
double apply_kernel(WignerState& state, const KernelTable& table, double tau);
double apply_kernel(WignerState4& state, const KernelTable& table, double tau);

}  // namespace wigner::reference
