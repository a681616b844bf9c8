#include "entx/states.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

namespace entx {

static std::string num_str(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

CorrelationPair::CorrelationPair(double xx, double zz) : g_xx(xx), g_zz(zz) {
    if (!(std::abs(g_xx) <= 0.25) || !(std::abs(g_zz) <= 0.25))
        throw std::invalid_argument("CorrelationPair: correlators must lie in [-1/4, 1/4]");
    // Spectrum of the two-site state in closed form: 1/4 + g_zz twice,
    // 1/4 - g_zz +- 2 g_xx once each.
    const double eigs[3] = {0.25 + g_zz, 0.25 - g_zz + 2.0 * g_xx, 0.25 - g_zz - 2.0 * g_xx};
    for (double e : eigs) {
        if (e < -1e-12)
            throw numerical_error("CorrelationPair: pair (" + num_str(g_xx) + ", " + num_str(g_zz) +
                                  ") is not positive semidefinite (eigenvalue " + num_str(e) + ")");
    }
}

DensityMatrix::DensityMatrix(QubitRegister r, ComplexMatrix m) : reg(r), matrix(std::move(m)) {
    if (matrix.rows != reg.dim() || matrix.cols != reg.dim())
        throw std::invalid_argument("DensityMatrix: matrix shape does not match the register");
    if (!is_hermitian(matrix, 1e-12))
        throw numerical_error("DensityMatrix: matrix is not Hermitian within 1e-12");
    const cplx tr = trace(matrix);
    if (std::abs(tr - cplx(1.0)) > 1e-12)
        throw numerical_error("DensityMatrix: trace is " + num_str(tr.real()) + ", expected 1");
    const std::vector<double> values = detail::hermitian_eigenvalues(matrix);
    if (values.back() < -1e-10)
        throw numerical_error("DensityMatrix: negative eigenvalue " + num_str(values.back()));
}

PureState::PureState(QubitRegister r, std::vector<cplx> amps) : reg(r), amplitudes(std::move(amps)) {
    if (static_cast<int>(amplitudes.size()) != reg.dim())
        throw std::invalid_argument("PureState: amplitude count does not match the register");
    double norm2 = 0.0;
    for (const cplx& a : amplitudes) norm2 += std::norm(a);
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12)
        throw numerical_error("PureState: norm is " + num_str(std::sqrt(norm2)) + ", expected 1");
}

ProbeAngles::ProbeAngles(double t, double p) : theta(t), phi(p) {
    const double pi = std::acos(-1.0);
    if (!(theta >= 0.0 && theta <= pi))
        throw std::invalid_argument("ProbeAngles: theta must lie in [0, pi]");
    if (!(phi >= 0.0 && phi < 2.0 * pi))
        throw std::invalid_argument("ProbeAngles: phi must lie in [0, 2*pi)");
}

DensityMatrix to_density(const PureState& psi) {
    const int d = psi.reg.dim();
    ComplexMatrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = psi.amplitudes[i] * std::conj(psi.amplitudes[j]);
    return DensityMatrix(psi.reg, std::move(m));
}

DensityMatrix pair_state(const CorrelationPair& c) {
    ComplexMatrix m(4, 4);
    m(0, 0) = 0.25 + c.g_zz;
    m(1, 1) = 0.25 - c.g_zz;
    m(2, 2) = 0.25 - c.g_zz;
    m(3, 3) = 0.25 + c.g_zz;
    m(1, 2) = 2.0 * c.g_xx;
    m(2, 1) = 2.0 * c.g_xx;
    return DensityMatrix(QubitRegister(2), std::move(m));
}

PureState w_state(int n) {
    if (n < 2) throw std::invalid_argument("w_state: need at least 2 qubits");
    const QubitRegister reg(n);
    std::vector<cplx> amps(reg.dim());
    const double a = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i) amps[1 << (n - 1 - i)] = a;
    return PureState(reg, std::move(amps));
}

PureState probe_product_state(const std::vector<ProbeAngles>& angles) {
    if (angles.empty()) throw std::invalid_argument("probe_product_state: empty angle list");
    std::vector<cplx> amps = {1.0};
    for (const ProbeAngles& a : angles) {
        const cplx a0 = std::cos(a.theta / 2.0);
        const cplx a1 = std::exp(cplx(0.0, a.phi)) * std::sin(a.theta / 2.0);
        std::vector<cplx> next(2 * amps.size());
        for (size_t i = 0; i < amps.size(); ++i) {
            next[2 * i] = amps[i] * a0;
            next[2 * i + 1] = amps[i] * a1;
        }
        amps = std::move(next);
    }
    return PureState(QubitRegister(static_cast<int>(angles.size())), std::move(amps));
}

namespace {

// Chain sites use the same big-endian convention as qubit registers:
// site i is bit (L-1-i) of the basis index.
struct SectorBasis {
    std::vector<int> states;    // basis indices with the sector's excitation count
    std::vector<int> position;  // inverse map, -1 outside the sector
};

SectorBasis sector_basis(int length, int excitations) {
    SectorBasis b;
    b.position.assign(1 << length, -1);
    for (int s = 0; s < (1 << length); ++s) {
        if (__builtin_popcount(static_cast<unsigned>(s)) == excitations) {
            b.position[s] = static_cast<int>(b.states.size());
            b.states.push_back(s);
        }
    }
    return b;
}

std::vector<std::pair<int, int>> chain_bonds(int length, Boundary boundary) {
    std::vector<std::pair<int, int>> bonds;
    for (int i = 0; i + 1 < length; ++i) bonds.emplace_back(i, i + 1);
    // The two-site ring has only one distinct bond; adding the wraparound
    // would double the coupling.
    if (boundary == Boundary::periodic && length > 2) bonds.emplace_back(length - 1, 0);
    return bonds;
}

// Chain Hamiltonian restricted to one excitation sector (the coupling
// conserves total z magnetization, so sectors do not mix).
ComplexMatrix sector_hamiltonian(const SectorBasis& basis, int length, double lambda,
                                 const std::vector<std::pair<int, int>>& bonds) {
    const int dim = static_cast<int>(basis.states.size());
    ComplexMatrix h(dim, dim);
    for (int p = 0; p < dim; ++p) {
        const int s = basis.states[p];
        double diag = 0.0;
        for (const auto& [a, b] : bonds) {
            const int bit_a = (s >> (length - 1 - a)) & 1;
            const int bit_b = (s >> (length - 1 - b)) & 1;
            diag += lambda * (bit_a == bit_b ? 1.0 : -1.0);
            if (bit_a != bit_b) {
                const int flipped = s ^ ((1 << (length - 1 - a)) | (1 << (length - 1 - b)));
                h(basis.position[flipped], p) += 2.0;
            }
        }
        h(p, p) += diag;
    }
    return h;
}

}  // namespace

CorrelationPair ground_state_correlations(double lambda, int length, Boundary boundary) {
    if (length < 2 || length > 12)
        throw std::invalid_argument("ground_state_correlations: length must lie in [2, 12]");
    if (length % 2 != 0)
        throw std::invalid_argument(
            "ground_state_correlations: length must be even to keep the ground state unique");

    const auto bonds = chain_bonds(length, boundary);

    // The coupling commutes with the global spin flip, which maps the
    // k-excitation sector onto the (L-k) one; diagonalizing k <= L/2 and
    // mirroring covers the full spectrum.
    std::vector<double> spectrum;
    std::vector<double> ground_vector;
    SectorBasis ground_basis;
    double ground_energy = 0.0;
    bool have_ground = false;

    for (int k = 0; k <= length / 2; ++k) {
        SectorBasis basis = sector_basis(length, k);
        const ComplexMatrix h = sector_hamiltonian(basis, length, lambda, bonds);
        const EigenSystem es = hermitian_eig(h);
        const int copies = (k == length / 2) ? 1 : 2;
        for (double v : es.values)
            for (int c = 0; c < copies; ++c) spectrum.push_back(v);

        const int dim = static_cast<int>(basis.states.size());
        const double lowest = es.values[dim - 1];
        if (!have_ground || lowest < ground_energy) {
            have_ground = true;
            ground_energy = lowest;
            ground_vector.resize(dim);
            // Sector matrices are real, so the eigenvector phases are real
            // up to rounding.
            for (int i = 0; i < dim; ++i) ground_vector[i] = es.vectors(i, dim - 1).real();
            ground_basis = std::move(basis);
        }
    }

    std::sort(spectrum.begin(), spectrum.end());
    int multiplicity = 0;
    while (multiplicity < static_cast<int>(spectrum.size()) &&
           spectrum[multiplicity] < spectrum[0] + 1e-10)
        ++multiplicity;
    if (multiplicity > 1)
        throw numerical_error("ground_state_correlations: ground state is degenerate (multiplicity " +
                              std::to_string(multiplicity) + ")");

    double norm2 = 0.0;
    for (double v : ground_vector) norm2 += v * v;
    const double scale = 1.0 / norm2;

    double xx_sum = 0.0;
    double zz_sum = 0.0;
    for (const auto& [a, b] : bonds) {
        const int mask = (1 << (length - 1 - a)) | (1 << (length - 1 - b));
        for (size_t p = 0; p < ground_basis.states.size(); ++p) {
            const int s = ground_basis.states[p];
            const int bit_a = (s >> (length - 1 - a)) & 1;
            const int bit_b = (s >> (length - 1 - b)) & 1;
            zz_sum += (bit_a == bit_b ? 1.0 : -1.0) * ground_vector[p] * ground_vector[p] * scale;
            if (bit_a != bit_b) {
                // x x flips both sites; amplitudes outside the sector are
                // zero, so only opposite-bit pairs contribute.
                const int q = ground_basis.position[s ^ mask];
                xx_sum += ground_vector[q] * ground_vector[p] * scale;
            }
        }
    }
    const double n_bonds = static_cast<double>(bonds.size());
    return CorrelationPair(xx_sum / (4.0 * n_bonds), zz_sum / (4.0 * n_bonds));
}

}  // namespace entx
