#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace entx {

using cplx = std::complex<double>;

// Raised when a computation leaves the numerically trustworthy regime:
// eigenvalues more negative than the PSD tolerance, eigensolver
// non-convergence, degenerate ground spaces, and the like. Distinct from
// std::invalid_argument, which flags precondition violations by the caller.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Dense row-major complex matrix.
struct ComplexMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<cplx> a;

    ComplexMatrix() = default;
    ComplexMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {
        if (r <= 0 || c <= 0)
            throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
    }

    static ComplexMatrix identity(int n);
    static ComplexMatrix zero(int r, int c) { return ComplexMatrix(r, c); }

    cplx& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const cplx& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    bool square() const { return rows == cols; }
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, const ComplexMatrix& m);
ComplexMatrix operator*(double s, const ComplexMatrix& m);

ComplexMatrix dagger(const ComplexMatrix& m);
ComplexMatrix conjugate(const ComplexMatrix& m);
cplx trace(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12);
bool is_unitary(const ComplexMatrix& m, double tol = 1e-10);

// Qubit 0 is the most significant bit of the computational-basis index:
// |b0 b1 ... b_{n-1}> maps to index sum_i b_i 2^{n-1-i}.
struct QubitRegister {
    int n_qubits = 0;

    explicit QubitRegister(int n) : n_qubits(n) {
        if (n < 1 || n > 14)
            throw std::invalid_argument("QubitRegister: qubit count must be in [1, 14]");
    }

    int dim() const { return 1 << n_qubits; }
    bool operator==(const QubitRegister& o) const { return n_qubits == o.n_qubits; }
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Eigenvalues sorted descending; vectors holds the matching eigenvectors
// as columns, so m = vectors * diag(values) * dagger(vectors).
struct EigenSystem {
    std::vector<double> values;
    ComplexMatrix vectors;
};

EigenSystem hermitian_eig(const ComplexMatrix& m);

namespace detail {

// Eigenvalues only (descending), skipping eigenvector accumulation.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

}  // namespace detail

// exp(-i h t) through the eigendecomposition of h.
ComplexMatrix unitary_from_hamiltonian(const ComplexMatrix& h, double t);

// Reduced matrix over the kept qubits, in the order given by keep.
ComplexMatrix partial_trace(const ComplexMatrix& rho, int n_qubits, const std::vector<int>& keep);

// Embeds a two-qubit operator so it acts on qubits (qa, qb) of an n-qubit
// register, with qa supplying the more significant bit of the operator's
// own two-qubit basis.
ComplexMatrix embed_pair(const ComplexMatrix& op, int n_qubits, int qa, int qb);

// In-place application of a two-qubit gate to a state vector, same qubit
// convention as embed_pair.
void apply_pair_gate(const ComplexMatrix& gate, std::vector<cplx>& psi, int n_qubits, int qa, int qb);

// Rounding guard for contractually PSD spectra: values in [-1e-10, 0) are
// set to 0; anything more negative is a genuine violation and throws.
void clamp_psd(std::vector<double>& eigenvalues);

}  // namespace entx
