#pragma once

#include <complex>
#include <vector>

namespace sclab::linalg {

/// Real symmetric tridiagonal matrix — the uniform container for all three
/// model Hamiltonians (Dicke-basis spin chains and the finite-difference
/// Schrödinger operator are all tridiagonal).
struct SymTridiag {
    std::vector<double> diag;  ///< n diagonal entries (energy units)
    std::vector<double> off;   ///< n-1 off-diagonal entries

    int n() const { return static_cast<int>(diag.size()); }
    /// Throws Error if the arrays are inconsistent or contain non-finite
    /// entries.
    void validate() const;
};

/// Dense real symmetric matrix, row-major.
struct DenseSym {
    int n = 0;
    std::vector<double> a;  ///< n*n entries, a[i*n+j]

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
    static DenseSym zero(int n);
};

/// Dense complex square matrix; carrier for tensor-product operators and
/// Berezin quantization matrices.
struct ComplexDense {
    int n = 0;
    std::vector<std::complex<double>> a;  ///< n*n entries, a[i*n+j]

    std::complex<double>& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    const std::complex<double>& at(int i, int j) const {
        return a[static_cast<std::size_t>(i) * n + j];
    }
    static ComplexDense zero(int n);
    static ComplexDense identity(int n);

    ComplexDense& operator+=(const ComplexDense& other);
    ComplexDense& operator-=(const ComplexDense& other);
    ComplexDense& operator*=(std::complex<double> c);
};

ComplexDense operator*(const ComplexDense& A, const ComplexDense& B);
ComplexDense operator-(ComplexDense A, const ComplexDense& B);
ComplexDense operator+(ComplexDense A, const ComplexDense& B);

/// Largest absolute deviation from Hermitian symmetry.
double hermitian_defect(const ComplexDense& M);

/// (eigenvalue, unit eigenvector) with an explicit residual so callers can
/// audit solver quality instead of trusting it.
struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0;  ///< ||T v - value * v||_2
};

/// Ascending eigenvalues; vectors optional (column i of `vectors` pairs with
/// values[i] when present).
struct Spectrum {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};

/// Number of eigenvalues of T strictly below x, via the shifted LDL^T Sturm
/// recurrence. Pivot magnitudes are floored at 1e-300 so the count stays
/// exact through underflow; total function, never throws.
int sturm_count(const SymTridiag& T, double x);

/// The k lowest eigenvalues, each bisected to a bracket of width <= tol
/// starting from Gershgorin bounds; tol <= 0 selects the default width
/// 1e-14 * max(1, ||T||). Throws IterationLimit if any eigenvalue needs more
/// than 200 bisection steps (tol below representable resolution).
Spectrum tridiag_eigs(const SymTridiag& T, int k, double tol);

/// Gershgorin upper bound on ||T||_2 (cheap, deterministic).
double norm_bound(const SymTridiag& T);

/// Ground eigenpair via bisection + inverse iteration (all-ones start, at
/// most 8 iterations, shift offset 1e-12*||T|| to keep the factorization
/// regular; restart with a further-perturbed shift on a singular pivot).
/// tol is the bisection bracket width; tol <= 0 selects the default
/// 1e-14 * max(1, ||T||). The residual meets 1e-10 * max(1, ||T||).
///
/// Throws NearDegenerate when the two lowest eigenvalues differ by
/// <= 1e-13*||T||: the ground vector of the full matrix is then numerically
/// meaningless (any rotation of the degenerate pair solves the equations
/// equally well) and reflection-symmetric callers must use
/// ground_pair_parity instead.
EigenPair ground_pair(const SymTridiag& T, double tol);

/// Ground eigenpair of a reflection-symmetric tridiagonal matrix
/// (diag[i] == diag[n-1-i], off[i] == off[n-2-i], required exactly),
/// computed inside the even-parity subspace.
///
/// Why it exists: for double-well-type spectra the tunnelling splitting
/// between the lowest even/odd pair decays exponentially and underflows
/// double precision long before the interesting parameter range, so a
/// generic solver returns an arbitrary mixture of the pair. The true ground
/// state is the even member (the off-diagonals are negative, so the ground
/// vector is strictly positive and cannot be odd); folding onto the
/// even sector restores a healthy spectral gap. The returned vector
/// satisfies v[i] == v[n-1-i] bitwise, which downstream parity-odd
/// observables rely on for exact cancellation.
EigenPair ground_pair_parity(const SymTridiag& T, double tol);

/// Full spectrum of a dense symmetric matrix via cyclic Jacobi rotations
/// (sweeps until the off-diagonal Frobenius mass falls below 1e-14 of the
/// total). Always returns eigenvectors. Throws SizeExceeded for n > 4096.
Spectrum dense_eigen(const DenseSym& D);

/// Spectral norm = max |eigenvalue| (all inputs here are (real or complex)
/// symmetric/Hermitian).
double operator_norm(const SymTridiag& T);
double operator_norm(const DenseSym& D);

/// Hermitian complex case. Checks Hermitian symmetry to 1e-12 (throws
/// NotHermitian otherwise). A matrix whose off-diagonal Frobenius mass is
/// <= 1e-12 of its total is treated as diagonal and resolved by inspection
/// (relative error bounded by the same 1e-12); otherwise the matrix is
/// embedded as the real symmetric [[Re, -Im], [Im, Re]] and run through
/// Jacobi.
double operator_norm(const ComplexDense& M);

}  // namespace sclab::linalg
