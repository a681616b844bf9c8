#include "entx/states.hpp"

#include <cmath>

#include "doctest.h"
#include "test_helpers.hpp"

using namespace entx;

namespace {
const double kPi = std::acos(-1.0);
}

TEST_CASE("correlation pair rejects out-of-range correlators") {
    CHECK_THROWS_AS(CorrelationPair(0.3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CorrelationPair(-0.26, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(CorrelationPair(0.0, 0.26), std::invalid_argument);
    CHECK_THROWS_AS(CorrelationPair(std::nan(""), 0.0), std::invalid_argument);
    CHECK_NOTHROW(CorrelationPair(-0.25, -0.25));
    CHECK_NOTHROW(CorrelationPair(0.25, -0.25));
}

TEST_CASE("correlation pair rejects combinations without a density matrix") {
    // 1/4 - g_zz + 2 g_xx dips below zero here.
    CHECK_THROWS_AS(CorrelationPair(-0.25, 0.2), numerical_error);
    CHECK_THROWS_AS(CorrelationPair(0.25, 0.2), numerical_error);
    // 1/4 + g_zz stays nonnegative on the whole square, so the diagonal
    // never triggers; the extreme corner is fine.
    CHECK_NOTHROW(CorrelationPair(0.0, -0.25));
}

TEST_CASE("pair state reproduces the fully correlated singlet") {
    const DensityMatrix rho = pair_state(CorrelationPair(-0.25, -0.25));
    const ComplexMatrix expected = testutil::projector(testutil::singlet());
    CHECK(max_abs_diff(rho.matrix, expected) < 1e-15);
}

TEST_CASE("pair state with zero correlators is maximally mixed") {
    const DensityMatrix rho = pair_state(CorrelationPair(0.0, 0.0));
    CHECK(max_abs_diff(rho.matrix, 0.25 * ComplexMatrix::identity(4)) < 1e-15);
}

TEST_CASE("pair state entries at g = -0.2") {
    const DensityMatrix rho = pair_state(CorrelationPair(-0.2, -0.2));
    CHECK(rho.matrix(0, 0).real() == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(rho.matrix(1, 1).real() == doctest::Approx(0.45).epsilon(1e-14));
    CHECK(rho.matrix(2, 2).real() == doctest::Approx(0.45).epsilon(1e-14));
    CHECK(rho.matrix(3, 3).real() == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(rho.matrix(1, 2).real() == doctest::Approx(-0.4).epsilon(1e-14));
    CHECK(std::abs(rho.matrix(0, 3)) < 1e-15);
    CHECK(std::abs(rho.matrix(0, 1)) < 1e-15);
}

TEST_CASE("pair state is a valid density matrix across the admissible square") {
    // Walk a 21x21 grid and keep only parameter pairs the constructor
    // admits; each surviving state must pass every density-matrix check.
    int admitted = 0;
    for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 20; ++j) {
            const double gxx = -0.25 + 0.5 * i / 20.0;
            const double gzz = -0.25 + 0.5 * j / 20.0;
            try {
                const DensityMatrix rho = pair_state(CorrelationPair(gxx, gzz));
                ++admitted;
                CHECK(is_hermitian(rho.matrix));
                CHECK(std::abs(trace(rho.matrix) - cplx(1.0)) < 1e-14);
            } catch (const numerical_error&) {
            }
        }
    }
    CHECK(admitted > 200);
}

TEST_CASE("pair state commutes with the joint spin flip exactly") {
    const ComplexMatrix zz = kron(testutil::pauli_z(), testutil::pauli_z());
    for (double g : {-0.25, -0.1, -0.03}) {
        const DensityMatrix rho = pair_state(CorrelationPair(g, g));
        CHECK(max_abs_diff(zz * rho.matrix * zz, rho.matrix) == 0.0);
    }
}

TEST_CASE("density matrix constructor validates its input") {
    CHECK_THROWS_AS(DensityMatrix(QubitRegister(2), ComplexMatrix::identity(8)),
                    std::invalid_argument);

    ComplexMatrix skew(4, 4);
    skew(0, 0) = 1.0;
    skew(0, 1) = 0.5;
    CHECK_THROWS_AS(DensityMatrix(QubitRegister(2), skew), numerical_error);

    CHECK_THROWS_AS(DensityMatrix(QubitRegister(2), ComplexMatrix::identity(4)), numerical_error);

    ComplexMatrix indefinite(4, 4);
    indefinite(0, 0) = 0.6;
    indefinite(1, 1) = 0.5;
    indefinite(2, 2) = 0.0;
    indefinite(3, 3) = -0.1;
    CHECK_THROWS_AS(DensityMatrix(QubitRegister(2), indefinite), numerical_error);

    CHECK_NOTHROW(DensityMatrix(QubitRegister(2), 0.25 * ComplexMatrix::identity(4)));
}

TEST_CASE("pure state constructor validates size and norm") {
    CHECK_THROWS_AS(PureState(QubitRegister(2), {1.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(PureState(QubitRegister(1), {0.9, 0.0}), numerical_error);
    CHECK_NOTHROW(PureState(QubitRegister(1), {1.0, 0.0}));
}

TEST_CASE("probe angles enforce the Bloch ranges") {
    CHECK_THROWS_AS(ProbeAngles(-0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ProbeAngles(kPi + 0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ProbeAngles(0.5, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(ProbeAngles(0.5, 2.0 * kPi), std::invalid_argument);
    CHECK_NOTHROW(ProbeAngles(kPi, 0.0));
    CHECK_NOTHROW(ProbeAngles(0.0, 0.0));
}

TEST_CASE("to_density builds the projector") {
    const PureState psi(QubitRegister(1), {std::sqrt(0.5), cplx(0.0, std::sqrt(0.5))});
    const DensityMatrix rho = to_density(psi);
    CHECK(rho.matrix(0, 0).real() == doctest::Approx(0.5));
    CHECK(rho.matrix(1, 1).real() == doctest::Approx(0.5));
    CHECK(rho.matrix(0, 1).imag() == doctest::Approx(-0.5));
}

TEST_CASE("w_state places one excitation on each site") {
    const PureState w2 = w_state(2);
    CHECK(max_abs_diff(to_density(w2).matrix, testutil::projector(testutil::triplet_plus())) <
          1e-15);

    const PureState w3 = w_state(3);
    const double a = 1.0 / std::sqrt(3.0);
    CHECK(std::abs(w3.amplitudes[0b100] - cplx(a)) < 1e-15);
    CHECK(std::abs(w3.amplitudes[0b010] - cplx(a)) < 1e-15);
    CHECK(std::abs(w3.amplitudes[0b001] - cplx(a)) < 1e-15);
    CHECK(std::abs(w3.amplitudes[0b000]) == 0.0);
    CHECK(std::abs(w3.amplitudes[0b110]) == 0.0);

    CHECK_THROWS_AS(w_state(1), std::invalid_argument);
}

TEST_CASE("probe product state composes single-qubit states") {
    // theta = 0 is |0>, theta = pi is |1> up to the recorded phase.
    const PureState p00 = probe_product_state({ProbeAngles(0.0, 0.0), ProbeAngles(0.0, 0.0)});
    CHECK(std::abs(p00.amplitudes[0] - cplx(1.0)) < 1e-15);

    const PureState p01 = probe_product_state({ProbeAngles(0.0, 0.0), ProbeAngles(kPi, 0.0)});
    CHECK(std::abs(p01.amplitudes[1]) == doctest::Approx(1.0).epsilon(1e-14));

    const PureState plus = probe_product_state({ProbeAngles(kPi / 2.0, 0.0)});
    CHECK(plus.amplitudes[0].real() == doctest::Approx(std::sqrt(0.5)));
    CHECK(plus.amplitudes[1].real() == doctest::Approx(std::sqrt(0.5)));

    CHECK_THROWS_AS(probe_product_state({}), std::invalid_argument);
}

TEST_CASE("two-site ground state is the singlet") {
    const CorrelationPair g = ground_state_correlations(1.0, 2, Boundary::periodic);
    CHECK(g.g_xx == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(g.g_zz == doctest::Approx(-0.25).epsilon(1e-12));

    const CorrelationPair go = ground_state_correlations(1.0, 2, Boundary::open);
    CHECK(go.g_xx == doctest::Approx(-0.25).epsilon(1e-12));
    CHECK(go.g_zz == doctest::Approx(-0.25).epsilon(1e-12));
}

TEST_CASE("four-site ring correlators match dense diagonalization values") {
    const CorrelationPair iso = ground_state_correlations(1.0, 4, Boundary::periodic);
    CHECK(std::abs(iso.g_xx - (-1.0 / 6.0)) < 1e-12);
    CHECK(std::abs(iso.g_zz - (-1.0 / 6.0)) < 1e-12);

    const CorrelationPair xy = ground_state_correlations(0.0, 4, Boundary::periodic);
    CHECK(std::abs(xy.g_xx - (-std::sqrt(2.0) / 8.0)) < 1e-12);
    CHECK(std::abs(xy.g_zz - (-0.125)) < 1e-12);

    const CorrelationPair open4 = ground_state_correlations(1.0, 4, Boundary::open);
    CHECK(std::abs(open4.g_xx - (-0.179558378198271)) < 1e-12);
    CHECK(std::abs(open4.g_zz - (-0.179558378198271)) < 1e-12);
}

TEST_CASE("six-site ring correlators match dense diagonalization values") {
    const CorrelationPair iso = ground_state_correlations(1.0, 6, Boundary::periodic);
    CHECK(std::abs(iso.g_xx - (-0.155709757651777)) < 1e-12);

    const CorrelationPair xy = ground_state_correlations(0.0, 6, Boundary::periodic);
    CHECK(std::abs(xy.g_xx - (-1.0 / 6.0)) < 1e-12);
    CHECK(std::abs(xy.g_zz - (-1.0 / 9.0)) < 1e-12);
}

TEST_CASE("isotropic chains have equal transverse and longitudinal correlators") {
    for (int length : {4, 6, 8, 10}) {
        const CorrelationPair g = ground_state_correlations(1.0, length, Boundary::periodic);
        CHECK(std::abs(g.g_xx - g.g_zz) < 1e-10);
        // Strong enough correlations that the pair carries entanglement.
        CHECK(g.g_zz < -1.0 / 12.0);
    }
}

TEST_CASE("longer isotropic rings approach the known correlator trend") {
    const CorrelationPair g8 = ground_state_correlations(1.0, 8, Boundary::periodic);
    CHECK(std::abs(g8.g_zz - (-0.1521288920)) < 1e-9);
    const CorrelationPair g10 = ground_state_correlations(1.0, 10, Boundary::periodic);
    CHECK(std::abs(g10.g_zz - (-0.1505148785)) < 1e-9);
}

TEST_CASE("ground state rejects invalid chain sizes") {
    CHECK_THROWS_AS(ground_state_correlations(1.0, 3, Boundary::periodic), std::invalid_argument);
    CHECK_THROWS_AS(ground_state_correlations(1.0, 0, Boundary::periodic), std::invalid_argument);
    CHECK_THROWS_AS(ground_state_correlations(1.0, 14, Boundary::periodic), std::invalid_argument);
    CHECK_THROWS_WITH_AS(ground_state_correlations(1.0, 5, Boundary::open),
                         doctest::Contains("even"), std::invalid_argument);
}

TEST_CASE("degenerate ground spaces are reported, not averaged over") {
    // Strongly negative anisotropy makes the two ferromagnetic product
    // states degenerate ground states of the ring.
    CHECK_THROWS_AS(ground_state_correlations(-2.0, 4, Boundary::periodic), numerical_error);
}
