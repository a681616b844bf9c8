#include "entx/gates.hpp"

#include <cmath>

namespace entx {

static void require_finite_pulse(double j_tau) {
    if (!std::isfinite(j_tau))
        throw std::invalid_argument("CollisionConfig: pulse area must be finite");
}

CollisionConfig CollisionConfig::pair_local(double j_tau, double lambda) {
    require_finite_pulse(j_tau);
    return {j_tau, lambda, Geometry::pair_local, 0, 0};
}

CollisionConfig CollisionConfig::global_swap(double j_tau, double lambda) {
    require_finite_pulse(j_tau);
    return {j_tau, lambda, Geometry::global_swap, 0, 0};
}

CollisionConfig CollisionConfig::spin_star(double j_tau, double lambda, int length,
                                           int spins_per_probe) {
    require_finite_pulse(j_tau);
    if (spins_per_probe < 1)
        throw std::invalid_argument("CollisionConfig: need at least one spin per probe");
    if (2 * spins_per_probe > length)
        throw std::invalid_argument(
            "CollisionConfig: probe subsets overlap, need 2N <= chain length");
    return {j_tau, lambda, Geometry::spin_star, length, spins_per_probe};
}

ComplexMatrix xxz_hamiltonian(double j, double lambda) {
    ComplexMatrix h(4, 4);
    h(0, 0) = j * lambda;
    h(1, 1) = -j * lambda;
    h(2, 2) = -j * lambda;
    h(3, 3) = j * lambda;
    h(1, 2) = 2.0 * j;
    h(2, 1) = 2.0 * j;
    return h;
}

// Adds op, acting on qubits (qa, qb), into h without materializing the
// embedded matrix. Same index convention as embed_pair.
static void add_embedded_pair(ComplexMatrix& h, const ComplexMatrix& op, int n_qubits, int qa,
                              int qb) {
    const int dim = 1 << n_qubits;
    const int ma = 1 << (n_qubits - 1 - qa);
    const int mb = 1 << (n_qubits - 1 - qb);
    for (int s = 0; s < dim; ++s) {
        if ((s & (ma | mb)) != 0) continue;
        const int idx[4] = {s, s | mb, s | ma, s | ma | mb};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) h(idx[r], idx[c]) += op(r, c);
    }
}

ComplexMatrix total_hamiltonian(double j, double lambda) {
    const ComplexMatrix coupling = xxz_hamiltonian(j, lambda);
    ComplexMatrix h(16, 16);
    add_embedded_pair(h, coupling, 4, 0, 2);
    add_embedded_pair(h, coupling, 4, 1, 3);
    return h;
}

ComplexMatrix total_hamiltonian(const CollisionConfig& cfg) {
    if (cfg.geometry != Geometry::pair_local)
        throw std::invalid_argument("total_hamiltonian: config is not pair_local");
    return total_hamiltonian(1.0, cfg.lambda);
}

ComplexMatrix partial_swap(double j_t) {
    if (!std::isfinite(j_t))
        throw std::invalid_argument("partial_swap: pulse area must be finite");
    ComplexMatrix swap(4, 4);
    swap(0, 0) = 1.0;
    swap(1, 2) = 1.0;
    swap(2, 1) = 1.0;
    swap(3, 3) = 1.0;

    const cplx phase = std::exp(cplx(0.0, j_t));
    const cplx c = phase * std::cos(2.0 * j_t);
    const cplx s = phase * cplx(0.0, -std::sin(2.0 * j_t));
    return c * ComplexMatrix::identity(4) + s * swap;
}

ComplexMatrix iswap() {
    ComplexMatrix u(4, 4);
    u(0, 0) = 1.0;
    u(1, 2) = cplx(0.0, 1.0);
    u(2, 1) = cplx(0.0, 1.0);
    u(3, 3) = 1.0;
    return u;
}

ComplexMatrix global_swap_generator() {
    ComplexMatrix s(16, 16);
    // Diagonal projectors.
    s(0b0000, 0b0000) = 1.0;
    s(0b0101, 0b0101) = 1.0;
    s(0b1010, 0b1010) = 1.0;
    s(0b1111, 0b1111) = 1.0;
    // Single-pair exchanges.
    s(0b0001, 0b0100) = 1.0;
    s(0b0010, 0b1000) = 1.0;
    s(0b1011, 0b1110) = 1.0;
    s(0b1101, 0b0111) = 1.0;
    // Four-spin exchanges.
    s(0b0011, 0b1100) = 1.0;
    s(0b1001, 0b0110) = 1.0;
    // Hermitian conjugates of the six exchanges.
    s(0b0100, 0b0001) = 1.0;
    s(0b1000, 0b0010) = 1.0;
    s(0b1110, 0b1011) = 1.0;
    s(0b0111, 0b1101) = 1.0;
    s(0b1100, 0b0011) = 1.0;
    s(0b0110, 0b1001) = 1.0;
    return s;
}

ComplexMatrix global_partial_swap(double j_t) {
    if (!std::isfinite(j_t))
        throw std::invalid_argument("global_partial_swap: pulse area must be finite");
    const cplx phase = std::exp(cplx(0.0, j_t));
    const cplx c = phase * std::cos(2.0 * j_t);
    const cplx s = phase * cplx(0.0, -std::sin(2.0 * j_t));
    return c * ComplexMatrix::identity(16) + s * global_swap_generator();
}

ComplexMatrix spin_star_hamiltonian(double j, double lambda, int length, int spins_per_probe) {
    if (spins_per_probe < 1)
        throw std::invalid_argument("spin_star_hamiltonian: need at least one spin per probe");
    if (2 * spins_per_probe > length)
        throw std::invalid_argument(
            "spin_star_hamiltonian: probe subsets overlap, need 2N <= chain length");
    if (length + 2 > 12)
        throw std::invalid_argument("spin_star_hamiltonian: register exceeds 12 qubits");

    const ComplexMatrix coupling = xxz_hamiltonian(j, lambda);
    const int n = length + 2;
    ComplexMatrix h(1 << n, 1 << n);
    // Register order (L, R, spin 1, ..., spin L): probe L talks to the
    // first N spins, probe R to the next N.
    for (int s = 0; s < spins_per_probe; ++s) {
        add_embedded_pair(h, coupling, n, 0, 2 + s);
        add_embedded_pair(h, coupling, n, 1, 2 + spins_per_probe + s);
    }
    return h;
}

ComplexMatrix spin_star_hamiltonian(const CollisionConfig& cfg) {
    if (cfg.geometry != Geometry::spin_star)
        throw std::invalid_argument("spin_star_hamiltonian: config is not spin_star");
    return spin_star_hamiltonian(1.0, cfg.lambda, cfg.star_length, cfg.star_spins_per_probe);
}

}  // namespace entx
