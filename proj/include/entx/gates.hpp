#pragma once

#include "entx/qcore.hpp"

namespace entx {

enum class Geometry { pair_local, global_swap, spin_star };

// One collision's worth of parameters: the accumulated pulse area
// j_tau = J*tau, the zz anisotropy, and which coupling layout is active.
// star_length and star_spins_per_probe are meaningful only for spin_star.
struct CollisionConfig {
    double j_tau;
    double lambda;
    Geometry geometry;
    int star_length;
    int star_spins_per_probe;

    static CollisionConfig pair_local(double j_tau, double lambda);
    static CollisionConfig global_swap(double j_tau, double lambda);
    static CollisionConfig spin_star(double j_tau, double lambda, int length, int spins_per_probe);
};

// j*(sx sx + sy sy + lambda*sz sz) on two qubits.
ComplexMatrix xxz_hamiltonian(double j, double lambda);

// Sum of the two-body couplings (1,L) and (2,R) on the four-qubit
// register ordered (1, 2, L, R).
ComplexMatrix total_hamiltonian(double j, double lambda);
ComplexMatrix total_hamiltonian(const CollisionConfig& cfg);

// e^{i jt} (cos(2jt) I - i sin(2jt) SWAP).
ComplexMatrix partial_swap(double j_t);

// |00><00| + i|01><10| + i|10><01| + |11><11|.
ComplexMatrix iswap();

// The four-body involution SWAP_{1L} (x) SWAP_{2R} on the register
// (1, 2, L, R), written out term by term in the computational basis.
ComplexMatrix global_swap_generator();

// e^{i jt} (cos(2jt) I - i sin(2jt) S) with S the four-body generator.
ComplexMatrix global_partial_swap(double j_t);

// Both probes coupled to disjoint blocks of a length-L chain: probe L to
// spins 1..N, probe R to spins N+1..2N, every probe-spin pair carrying the
// same two-body coupling. Register order (L, R, spin 1, ..., spin L).
// Requires 2N <= L and L+2 <= 12.
ComplexMatrix spin_star_hamiltonian(double j, double lambda, int length, int spins_per_probe);
ComplexMatrix spin_star_hamiltonian(const CollisionConfig& cfg);

}  // namespace entx
