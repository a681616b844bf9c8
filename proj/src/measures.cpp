#include "entx/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace entx {

static std::string num_str(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

// Same -1e-10 violation rule as clamp_psd, plus a relative floor: values
// below 64 eps times the spectral radius are indistinguishable from zero
// at the eigensolver's accuracy and taking their square roots would
// inject O(sqrt(eps)) noise into exactly singular states.
static void snap_spectrum(std::vector<double>& values) {
    double radius = 0.0;
    for (double v : values) radius = std::max(radius, std::abs(v));
    const double cutoff = 64.0 * std::numeric_limits<double>::epsilon() * radius;
    for (double& v : values) {
        if (v < -1e-10)
            throw numerical_error("sqrt_psd: negative eigenvalue " + num_str(v));
        if (v <= cutoff) v = 0.0;
    }
}

ComplexMatrix sqrt_psd(const ComplexMatrix& m) {
    const EigenSystem es = hermitian_eig(m);
    std::vector<double> values = es.values;
    snap_spectrum(values);

    const int n = m.rows;
    ComplexMatrix scaled = es.vectors;
    for (int j = 0; j < n; ++j) {
        const double r = std::sqrt(values[j]);
        for (int i = 0; i < n; ++i) scaled(i, j) *= r;
    }
    return scaled * dagger(es.vectors);
}

ConcurrenceReport concurrence_unchecked(const ComplexMatrix& rho) {
    static const ComplexMatrix yy = [] {
        ComplexMatrix m(4, 4);
        m(0, 3) = -1.0;
        m(1, 2) = 1.0;
        m(2, 1) = 1.0;
        m(3, 0) = -1.0;
        return m;
    }();

    // The four spectrum roots of sqrt(rho) (yy rho* yy) sqrt(rho) are the
    // singular values of b = conj(sqrt(rho)) yy sqrt(rho); reading them
    // off the Hermitian embedding [[0, b], [b+, 0]] avoids squaring b and
    // keeps near-zero roots at full precision.
    const ComplexMatrix root = sqrt_psd(rho);
    const ComplexMatrix b = conjugate(root) * yy * root;

    ComplexMatrix embed(8, 8);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            embed(i, 4 + j) = b(i, j);
            embed(4 + i, j) = std::conj(b(j, i));
        }
    }
    const std::vector<double> values = detail::hermitian_eigenvalues(embed);

    ConcurrenceReport report;
    for (int i = 0; i < 4; ++i) report.eigenvalue_roots[i] = std::max(0.0, values[i]);
    report.value = std::max(0.0, report.eigenvalue_roots[0] - report.eigenvalue_roots[1] -
                                     report.eigenvalue_roots[2] - report.eigenvalue_roots[3]);
    return report;
}

}  // namespace detail

ConcurrenceReport concurrence(const DensityMatrix& rho) {
    if (rho.reg.n_qubits != 2)
        throw std::invalid_argument("concurrence: defined for two-qubit states only");
    return detail::concurrence_unchecked(rho.matrix);
}

double concurrence_closed_form(const CorrelationPair& c) {
    if (!(std::abs(c.g_xx) >= c.g_zz))
        throw std::invalid_argument("concurrence_closed_form: requires |g_xx| >= g_zz");
    return std::max(0.0, -0.5 + 4.0 * std::abs(c.g_xx) - 2.0 * c.g_zz);
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    if (!(a.reg == b.reg)) throw std::invalid_argument("fidelity: register sizes differ");
    const ComplexMatrix root = detail::sqrt_psd(a.matrix);
    std::vector<double> values = detail::hermitian_eigenvalues(root * b.matrix * root);
    detail::snap_spectrum(values);
    double sum = 0.0;
    for (double v : values) sum += std::sqrt(v);
    return std::min(1.0, sum * sum);
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (!(a.reg == b.reg)) throw std::invalid_argument("trace_distance: register sizes differ");
    const std::vector<double> values = detail::hermitian_eigenvalues(a.matrix - b.matrix);
    double sum = 0.0;
    for (double v : values) sum += std::abs(v);
    return 0.5 * sum;
}

}  // namespace entx
