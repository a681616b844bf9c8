#pragma once

#include <array>

#include "entx/states.hpp"

namespace entx {

// Two-qubit concurrence together with the four spectrum roots it came
// from (descending, clamped at zero).
struct ConcurrenceReport {
    double value;
    std::array<double, 4> eigenvalue_roots;
};

// Wootters concurrence max(0, r1 - r2 - r3 - r4) of a two-qubit state,
// where the r_i are the square roots of the eigenvalues of
// sqrt(rho) * (sy(x)sy rho* sy(x)sy) * sqrt(rho).
ConcurrenceReport concurrence(const DensityMatrix& rho);

// max(0, -1/2 + 4|g_xx| - 2 g_zz); valid only for |g_xx| >= g_zz.
double concurrence_closed_form(const CorrelationPair& c);

// (Tr sqrt(sqrt(a) b sqrt(a)))^2.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

// Half the absolute eigenvalue sum of a - b.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

namespace detail {

// Hermitian square root with the same eigenvalue clamping rule as
// clamp_psd; bare matrix in, bare matrix out.
ComplexMatrix sqrt_psd(const ComplexMatrix& m);

// Concurrence of a raw 4x4 density matrix, skipping the DensityMatrix
// invariant checks. Hot-path variant for optimizers and sweeps.
ConcurrenceReport concurrence_unchecked(const ComplexMatrix& rho);

}  // namespace detail

}  // namespace entx
