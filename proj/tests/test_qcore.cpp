#include "doctest.h"

#include <cmath>
#include <random>

#include "entx/qcore.hpp"
#include "test_helpers.hpp"

using namespace entx;
using namespace testutil;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("kron identities and bit-flip action") {
    const ComplexMatrix i2 = ComplexMatrix::identity(2);
    CHECK(max_abs_diff(kron(i2, i2), ComplexMatrix::identity(4)) == 0.0);

    const ComplexMatrix xx = kron(pauli_x(), pauli_x());
    std::vector<cplx> v00 = basis_state(4, 0);
    ComplexMatrix out = xx * column_vector(v00);
    CHECK(std::abs(out(3, 0) - cplx(1.0)) < 1e-15);
    CHECK(std::abs(out(0, 0)) < 1e-15);
}

TEST_CASE("kron mixed-product rule on random factors") {
    std::mt19937 rng(11);
    const ComplexMatrix a = random_matrix(2, rng);
    const ComplexMatrix b = random_matrix(2, rng);
    const ComplexMatrix c = random_matrix(2, rng);
    const ComplexMatrix d = random_matrix(2, rng);
    CHECK(max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)) < 1e-13);
}

TEST_CASE("kron associativity") {
    std::mt19937 rng(12);
    const ComplexMatrix a = random_matrix(2, rng);
    const ComplexMatrix b = random_matrix(2, rng);
    const ComplexMatrix c = random_matrix(2, rng);
    // Entries agree up to the rounding of the two product orders.
    CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-14);
}

TEST_CASE("hermitian_eig on Pauli matrices") {
    const EigenSystem ez = hermitian_eig(pauli_z());
    CHECK(ez.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ez.values[1] == doctest::Approx(-1.0).epsilon(1e-14));

    const EigenSystem ex = hermitian_eig(pauli_x());
    CHECK(ex.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ex.values[1] == doctest::Approx(-1.0).epsilon(1e-14));
    // Eigenvector of +1 is (|0> + |1>)/sqrt(2) up to phase.
    const cplx r = ex.vectors(1, 0) / ex.vectors(0, 0);
    CHECK(std::abs(r - cplx(1.0)) < 1e-12);
}

TEST_CASE("hermitian_eig splits the exchange coupling into triplet and singlet") {
    const EigenSystem es = hermitian_eig(exchange_coupling(1.0, 1.0));
    CHECK(es.values[0] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(es.values[1] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(es.values[2] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(es.values[3] == doctest::Approx(-3.0).epsilon(1e-13));
}

TEST_CASE("hermitian_eig reconstructs random matrices") {
    std::mt19937 rng(21);
    for (int n : {3, 8, 32}) {
        const ComplexMatrix m = random_hermitian(n, rng);
        const EigenSystem es = hermitian_eig(m);

        ComplexMatrix lam(n, n);
        for (int i = 0; i < n; ++i) lam(i, i) = es.values[i];
        CHECK(max_abs_diff(es.vectors * lam * dagger(es.vectors), m) < 1e-10);
        CHECK(is_unitary(es.vectors, 1e-10));
        for (int i = 0; i + 1 < n; ++i) CHECK(es.values[i] >= es.values[i + 1]);
    }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
    ComplexMatrix m(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(hermitian_eig(m), std::invalid_argument);
}

TEST_CASE("unitary_from_hamiltonian basics") {
    std::mt19937 rng(31);
    const ComplexMatrix h = random_hermitian(6, rng);

    CHECK(max_abs_diff(unitary_from_hamiltonian(h, 0.0), ComplexMatrix::identity(6)) < 1e-12);

    const ComplexMatrix u = unitary_from_hamiltonian(h, 0.7);
    CHECK(is_unitary(u, 1e-10));
    CHECK(max_abs_diff(u * unitary_from_hamiltonian(h, -0.7), ComplexMatrix::identity(6)) < 1e-10);
}

TEST_CASE("unitary_from_hamiltonian reproduces the phase rotation of sz") {
    const double t = 0.43;
    const ComplexMatrix u = unitary_from_hamiltonian(pauli_z(), t);
    CHECK(std::abs(u(0, 0) - std::exp(cplx(0.0, -t))) < 1e-13);
    CHECK(std::abs(u(1, 1) - std::exp(cplx(0.0, t))) < 1e-13);
    CHECK(std::abs(u(0, 1)) < 1e-13);
}

TEST_CASE("XY coupling rotates only the single-excitation block") {
    // Two-level analysis of the {|01>, |10>} block: the off-diagonal 2J
    // hopping gives |01> -> cos(2Jt)|01> - i sin(2Jt)|10>, while |00> and
    // |11> sit at zero energy and acquire no phase.
    const double t = 0.37;
    const ComplexMatrix u = unitary_from_hamiltonian(exchange_coupling(1.0, 0.0), t);

    CHECK(std::abs(u(0, 0) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(u(3, 3) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(u(1, 1) - cplx(std::cos(2.0 * t), 0.0)) < 1e-12);
    CHECK(std::abs(u(2, 1) - cplx(0.0, -std::sin(2.0 * t))) < 1e-12);
    CHECK(std::abs(u(0, 1)) < 1e-13);
    CHECK(std::abs(u(3, 1)) < 1e-13);
}

TEST_CASE("energy expectation is conserved under evolution") {
    std::mt19937 rng(41);
    const ComplexMatrix h = random_hermitian(8, rng);
    const std::vector<cplx> psi0 = random_state(8, rng);

    const ComplexMatrix p0 = column_vector(psi0);
    const double e0 = trace(dagger(p0) * h * p0).real();
    for (double t : {0.0, 0.3, 0.7, 1.1}) {
        const ComplexMatrix pt = unitary_from_hamiltonian(h, t) * p0;
        const double et = trace(dagger(pt) * h * pt).real();
        CHECK(std::abs(et - e0) < 1e-10);
    }
}

TEST_CASE("partial_trace of a maximally entangled pair is maximally mixed") {
    const ComplexMatrix rho = projector(singlet());
    for (int q : {0, 1}) {
        const ComplexMatrix red = partial_trace(rho, 2, {q});
        CHECK(max_abs_diff(red, 0.5 * ComplexMatrix::identity(2)) < 1e-14);
    }
}

TEST_CASE("partial_trace of a product state recovers the factor") {
    std::mt19937 rng(51);
    const ComplexMatrix ra = random_density(2, rng);
    const ComplexMatrix rb = random_density(4, rng);
    const ComplexMatrix joint = kron(ra, rb);

    CHECK(max_abs_diff(partial_trace(joint, 3, {0}), ra) < 1e-13);
    CHECK(max_abs_diff(partial_trace(joint, 3, {1, 2}), rb) < 1e-13);
}

TEST_CASE("partial_trace composes over disjoint subsets") {
    std::mt19937 rng(52);
    const ComplexMatrix rho = random_density(16, rng);
    const ComplexMatrix step1 = partial_trace(rho, 4, {0, 2, 3});
    const ComplexMatrix two_step = partial_trace(step1, 3, {1, 2});
    const ComplexMatrix one_step = partial_trace(rho, 4, {2, 3});
    CHECK(max_abs_diff(two_step, one_step) < 1e-12);

    const double tr = trace(one_step).real();
    CHECK(std::abs(tr - 1.0) < 1e-12);
}

TEST_CASE("partial_trace rejects bad keep sets") {
    const ComplexMatrix rho = 0.25 * ComplexMatrix::identity(4);
    CHECK_THROWS_AS(partial_trace(rho, 2, {}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, 2, {2}), std::invalid_argument);
    CHECK_THROWS_AS(partial_trace(rho, 2, {0, 0}), std::invalid_argument);
}

TEST_CASE("embed_pair and apply_pair_gate agree") {
    std::mt19937 rng(61);
    const ComplexMatrix op = random_matrix(4, rng);
    const std::vector<cplx> psi = random_state(32, rng);

    for (auto [qa, qb] : {std::pair{0, 3}, std::pair{2, 1}, std::pair{4, 0}}) {
        const ComplexMatrix big = embed_pair(op, 5, qa, qb);
        ComplexMatrix dense_out = big * column_vector(psi);
        std::vector<cplx> fast = psi;
        apply_pair_gate(op, fast, 5, qa, qb);
        for (int i = 0; i < 32; ++i) CHECK(std::abs(dense_out(i, 0) - fast[i]) < 1e-13);
    }
}

TEST_CASE("embed_pair places the operator on the requested qubits") {
    // Exchange coupling on qubits (0, 2) of three qubits: |001> must be
    // inert (both coupled qubits are 0), |100> hops to |001>.
    const ComplexMatrix h = embed_pair(exchange_coupling(1.0, 0.0), 3, 0, 2);
    CHECK(std::abs(h(1, 4) - cplx(2.0)) < 1e-15);
    CHECK(std::abs(h(4, 1) - cplx(2.0)) < 1e-15);
    CHECK(std::abs(h(2, 2)) < 1e-15);
}

TEST_CASE("clamp_psd zeroes rounding noise and rejects real violations") {
    std::vector<double> ok = {1.0, -5e-11, 0.0};
    clamp_psd(ok);
    CHECK(ok[1] == 0.0);

    std::vector<double> bad = {1.0, -1e-8};
    CHECK_THROWS_AS(clamp_psd(bad), numerical_error);
}

TEST_CASE("unitary synthesis covers the quarter-period swap point") {
    // At t = pi/4 the exchange evolution is a full SWAP up to phase:
    // all populations transfer, checked through the |01> column.
    const ComplexMatrix u = unitary_from_hamiltonian(exchange_coupling(1.0, 1.0), kPi / 4.0);
    CHECK(std::abs(u(1, 1)) < 1e-12);
    CHECK(std::abs(std::abs(u(2, 1)) - 1.0) < 1e-12);
}
