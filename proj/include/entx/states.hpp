#pragma once

#include <vector>

#include "entx/qcore.hpp"

namespace entx {

// Nearest-neighbor spin-spin correlators of a translationally invariant
// chain, g_ab = <sigma_a sigma_b>/4. Construction rejects values outside
// [-1/4, 1/4] and pairs whose two-site state would not be positive
// semidefinite.
struct CorrelationPair {
    double g_xx;
    double g_zz;

    CorrelationPair(double g_xx, double g_zz);
};

// Density operator together with its register size. Construction checks
// Hermiticity and unit trace within 1e-12 and eigenvalues >= -1e-10.
struct DensityMatrix {
    QubitRegister reg;
    ComplexMatrix matrix;

    DensityMatrix(QubitRegister reg, ComplexMatrix matrix);
};

// Normalized state vector (norm within 1e-12 of one).
struct PureState {
    QubitRegister reg;
    std::vector<cplx> amplitudes;

    PureState(QubitRegister reg, std::vector<cplx> amplitudes);
};

// Bloch angles of a single-qubit pure state cos(theta/2)|0> +
// e^{i phi} sin(theta/2)|1>, with theta in [0, pi] and phi in [0, 2pi).
struct ProbeAngles {
    double theta;
    double phi;

    ProbeAngles(double theta, double phi);
};

enum class Boundary { open, periodic };

DensityMatrix to_density(const PureState& psi);

// Two-qubit state fixed by the correlators alone: diagonal
// (1/4+g_zz, 1/4-g_zz, 1/4-g_zz, 1/4+g_zz) with 2*g_xx connecting the
// central single-excitation pair.
DensityMatrix pair_state(const CorrelationPair& c);

// Equal superposition of all n single-excitation basis states, n >= 2.
PureState w_state(int n);

// Tensor product of single-qubit states, one factor per entry, first
// entry most significant.
PureState probe_product_state(const std::vector<ProbeAngles>& angles);

// Ground-state nearest-neighbor correlators of the length-L chain with
// H = sum_<ij> (sx sx + sy sy + lambda sz sz), averaged over all bonds.
// L must be even and in [2, 12]; a degenerate ground space is an error.
CorrelationPair ground_state_correlations(double lambda, int length, Boundary boundary);

}  // namespace entx
