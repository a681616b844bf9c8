#include "entx/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace entx {

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

static void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument(std::string(op) + ": shape mismatch");
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "operator+");
    ComplexMatrix r(a.rows, a.cols);
    for (size_t i = 0; i < a.a.size(); ++i) r.a[i] = a.a[i] + b.a[i];
    return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "operator-");
    ComplexMatrix r(a.rows, a.cols);
    for (size_t i = 0; i < a.a.size(); ++i) r.a[i] = a.a[i] - b.a[i];
    return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols != b.rows)
        throw std::invalid_argument("operator*: inner dimensions differ");
    ComplexMatrix r(a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int k = 0; k < a.cols; ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx(0.0)) continue;
            const cplx* brow = &b.a[static_cast<size_t>(k) * b.cols];
            cplx* rrow = &r.a[static_cast<size_t>(i) * b.cols];
            for (int j = 0; j < b.cols; ++j) rrow[j] += aik * brow[j];
        }
    }
    return r;
}

ComplexMatrix operator*(cplx s, const ComplexMatrix& m) {
    ComplexMatrix r(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = s * m.a[i];
    return r;
}

ComplexMatrix operator*(double s, const ComplexMatrix& m) { return cplx(s, 0.0) * m; }

ComplexMatrix dagger(const ComplexMatrix& m) {
    ComplexMatrix r(m.cols, m.rows);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

ComplexMatrix conjugate(const ComplexMatrix& m) {
    ComplexMatrix r(m.rows, m.cols);
    for (size_t i = 0; i < m.a.size(); ++i) r.a[i] = std::conj(m.a[i]);
    return r;
}

cplx trace(const ComplexMatrix& m) {
    if (!m.square()) throw std::invalid_argument("trace: matrix not square");
    cplx t = 0.0;
    for (int i = 0; i < m.rows; ++i) t += m(i, i);
    return t;
}

double max_abs(const ComplexMatrix& m) {
    double v = 0.0;
    for (const cplx& x : m.a) v = std::max(v, std::abs(x));
    return v;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double v = 0.0;
    for (size_t i = 0; i < a.a.size(); ++i) v = std::max(v, std::abs(a.a[i] - b.a[i]));
    return v;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
    if (!m.square()) return false;
    for (int i = 0; i < m.rows; ++i)
        for (int j = i; j < m.cols; ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    return true;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
    if (!m.square()) return false;
    return max_abs_diff(dagger(m) * m, ComplexMatrix::identity(m.rows)) <= tol;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows * b.rows, a.cols * b.cols);
    for (int ia = 0; ia < a.rows; ++ia)
        for (int ja = 0; ja < a.cols; ++ja) {
            const cplx av = a(ia, ja);
            if (av == cplx(0.0)) continue;
            for (int ib = 0; ib < b.rows; ++ib)
                for (int jb = 0; jb < b.cols; ++jb)
                    r(ia * b.rows + ib, ja * b.cols + jb) = av * b(ib, jb);
        }
    return r;
}

// Cyclic Jacobi for complex Hermitian matrices. Each (p, q) step factors the
// phase u out of the off-diagonal entry and applies the classic real rotation
// to the remaining symmetric 2x2 block. A is diagonalized in place; V, when
// non-null, accumulates the eigenvector columns.
static void jacobi_diagonalize(ComplexMatrix& A, ComplexMatrix* V) {
    const int n = A.rows;
    // Exact symmetrization keeps the rotations consistent when the input
    // carries rounding-level asymmetry.
    for (int i = 0; i < n; ++i) {
        A(i, i) = cplx(A(i, i).real(), 0.0);
        for (int j = i + 1; j < n; ++j) {
            const cplx v = 0.5 * (A(i, j) + std::conj(A(j, i)));
            A(i, j) = v;
            A(j, i) = std::conj(v);
        }
    }

    double fro2 = 0.0;
    for (const cplx& x : A.a) fro2 += std::norm(x);
    const double stop2 = std::max(fro2, 1.0) * 1e-30;

    const int max_sweeps = 100;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off2 = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off2 += 2.0 * std::norm(A(p, q));
        if (off2 <= stop2) break;

        const double rot_tol = 1e-18 * std::sqrt(std::max(fro2, 1.0)) / n;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const cplx g = A(p, q);
                const double ag = std::abs(g);
                if (ag <= rot_tol) continue;

                const double alpha = A(p, p).real();
                const double beta = A(q, q).real();
                const cplx u = g / ag;
                const double zeta = (beta - alpha) / (2.0 * ag);
                const double t = (zeta >= 0.0)
                                     ? 1.0 / (zeta + std::sqrt(1.0 + zeta * zeta))
                                     : 1.0 / (zeta - std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                // The row update below applies J+ = [[c, s u], [-s, c u]],
                // so zeroing A(p, q) needs s = -t c, not the +t c of the
                // convention that applies J+ from the right.
                const double s = -t * c;

                // Rows p and q of A (left action by J^dagger).
                for (int k = 0; k < n; ++k) {
                    const cplx ap = A(p, k);
                    const cplx aq = A(q, k);
                    A(p, k) = c * ap + s * u * aq;
                    A(q, k) = -s * ap + c * u * aq;
                }
                // Columns p and q of A (right action by J).
                for (int k = 0; k < n; ++k) {
                    const cplx ap = A(k, p);
                    const cplx aq = A(k, q);
                    A(k, p) = c * ap + s * std::conj(u) * aq;
                    A(k, q) = -s * ap + c * std::conj(u) * aq;
                }
                A(p, p) = cplx(alpha - t * ag, 0.0);
                A(q, q) = cplx(beta + t * ag, 0.0);
                A(p, q) = 0.0;
                A(q, p) = 0.0;

                if (V != nullptr) {
                    for (int k = 0; k < n; ++k) {
                        const cplx vp = (*V)(k, p);
                        const cplx vq = (*V)(k, q);
                        (*V)(k, p) = c * vp + s * std::conj(u) * vq;
                        (*V)(k, q) = -s * vp + c * std::conj(u) * vq;
                    }
                }
            }
        }
    }
    if (sweep == max_sweeps)
        throw numerical_error("hermitian_eig: Jacobi sweeps did not converge");
}

static void check_eig_input(const ComplexMatrix& m) {
    if (!m.square()) throw std::invalid_argument("hermitian_eig: matrix not square");
    if (!is_hermitian(m, 1e-12))
        throw std::invalid_argument("hermitian_eig: input is not Hermitian within 1e-12");
}

EigenSystem hermitian_eig(const ComplexMatrix& m) {
    check_eig_input(m);
    const int n = m.rows;
    ComplexMatrix A = m;
    ComplexMatrix V = ComplexMatrix::identity(n);
    jacobi_diagonalize(A, &V);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return A(i, i).real() > A(j, j).real(); });

    EigenSystem es;
    es.values.resize(n);
    es.vectors = ComplexMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        es.values[j] = A(order[j], order[j]).real();
        for (int i = 0; i < n; ++i) es.vectors(i, j) = V(i, order[j]);
    }
    return es;
}

namespace detail {

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    check_eig_input(m);
    const int n = m.rows;
    ComplexMatrix A = m;
    jacobi_diagonalize(A, nullptr);

    std::vector<double> values(n);
    for (int i = 0; i < n; ++i) values[i] = A(i, i).real();
    std::sort(values.begin(), values.end(), std::greater<double>());
    return values;
}

}  // namespace detail

ComplexMatrix unitary_from_hamiltonian(const ComplexMatrix& h, double t) {
    const EigenSystem es = hermitian_eig(h);
    const int n = h.rows;
    ComplexMatrix w = es.vectors;
    for (int j = 0; j < n; ++j) {
        const cplx phase = std::exp(cplx(0.0, -es.values[j] * t));
        for (int i = 0; i < n; ++i) w(i, j) *= phase;
    }
    return w * dagger(es.vectors);
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, int n_qubits, const std::vector<int>& keep) {
    if (n_qubits < 1 || n_qubits > 14)
        throw std::invalid_argument("partial_trace: qubit count must be in [1, 14]");
    const int dim = 1 << n_qubits;
    if (rho.rows != dim || rho.cols != dim)
        throw std::invalid_argument("partial_trace: matrix dimension does not match qubit count");
    if (keep.empty())
        throw std::invalid_argument("partial_trace: keep set must be nonempty");

    std::vector<bool> seen(n_qubits, false);
    for (int q : keep) {
        if (q < 0 || q >= n_qubits)
            throw std::invalid_argument("partial_trace: keep index out of range");
        if (seen[q]) throw std::invalid_argument("partial_trace: duplicate keep index");
        seen[q] = true;
    }

    std::vector<int> traced;
    for (int q = 0; q < n_qubits; ++q)
        if (!seen[q]) traced.push_back(q);

    const int nk = static_cast<int>(keep.size());
    const int ne = n_qubits - nk;
    const int dk = 1 << nk;
    const int de = 1 << ne;

    // Scatter tables from compact kept/traced labels to full-register indices.
    std::vector<int> kidx(dk, 0), eidx(de, 0);
    for (int i = 0; i < dk; ++i)
        for (int t = 0; t < nk; ++t)
            if ((i >> (nk - 1 - t)) & 1) kidx[i] |= 1 << (n_qubits - 1 - keep[t]);
    for (int e = 0; e < de; ++e)
        for (int t = 0; t < ne; ++t)
            if ((e >> (ne - 1 - t)) & 1) eidx[e] |= 1 << (n_qubits - 1 - traced[t]);

    ComplexMatrix out(dk, dk);
    for (int i = 0; i < dk; ++i)
        for (int j = 0; j < dk; ++j) {
            cplx v = 0.0;
            for (int e = 0; e < de; ++e) v += rho(kidx[i] | eidx[e], kidx[j] | eidx[e]);
            out(i, j) = v;
        }
    return out;
}

ComplexMatrix embed_pair(const ComplexMatrix& op, int n_qubits, int qa, int qb) {
    if (op.rows != 4 || op.cols != 4)
        throw std::invalid_argument("embed_pair: operator must be 4x4");
    if (qa == qb || qa < 0 || qb < 0 || qa >= n_qubits || qb >= n_qubits)
        throw std::invalid_argument("embed_pair: invalid qubit indices");

    const int dim = 1 << n_qubits;
    const int ma = 1 << (n_qubits - 1 - qa);
    const int mb = 1 << (n_qubits - 1 - qb);

    ComplexMatrix out(dim, dim);
    for (int s = 0; s < dim; ++s) {
        if (s & (ma | mb)) continue;
        const int idx[4] = {s, s | mb, s | ma, s | ma | mb};
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) out(idx[r], idx[c]) = op(r, c);
    }
    return out;
}

void apply_pair_gate(const ComplexMatrix& gate, std::vector<cplx>& psi, int n_qubits, int qa, int qb) {
    if (gate.rows != 4 || gate.cols != 4)
        throw std::invalid_argument("apply_pair_gate: gate must be 4x4");
    if (qa == qb || qa < 0 || qb < 0 || qa >= n_qubits || qb >= n_qubits)
        throw std::invalid_argument("apply_pair_gate: invalid qubit indices");
    const int dim = 1 << n_qubits;
    if (static_cast<int>(psi.size()) != dim)
        throw std::invalid_argument("apply_pair_gate: state dimension does not match qubit count");

    const int ma = 1 << (n_qubits - 1 - qa);
    const int mb = 1 << (n_qubits - 1 - qb);
    for (int s = 0; s < dim; ++s) {
        if (s & (ma | mb)) continue;
        const int idx[4] = {s, s | mb, s | ma, s | ma | mb};
        cplx v[4];
        for (int r = 0; r < 4; ++r) {
            v[r] = 0.0;
            for (int c = 0; c < 4; ++c) v[r] += gate(r, c) * psi[idx[c]];
        }
        for (int r = 0; r < 4; ++r) psi[idx[r]] = v[r];
    }
}

void clamp_psd(std::vector<double>& eigenvalues) {
    for (double& e : eigenvalues) {
        if (e < -1e-10)
            throw numerical_error("clamp_psd: eigenvalue " + std::to_string(e) +
                                  " is below the PSD tolerance of -1e-10");
        if (e < 0.0) e = 0.0;
    }
}

}  // namespace entx
