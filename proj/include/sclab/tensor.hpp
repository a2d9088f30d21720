#pragma once

#include <array>
#include <map>
#include <vector>

#include "sclab/linalg.hpp"

namespace sclab::tensor {

using linalg::ComplexDense;

/// Single-site operator labels. X, Y, Z are the Pauli matrices
/// [[0,1],[1,0]], [[0,-i],[i,0]], [[1,0],[0,-1]]; Id is the 2x2 identity.
enum class Pauli { Id, X, Y, Z };

/// Real polynomial on the closed unit ball in R^3:
/// sum of coeff * x^a y^b z^c terms. Total degree is capped at 4 by the
/// operations that consume it.
struct Poly3 {
    /// exponent triple (a, b, c) -> coefficient; the ordered map keeps term
    /// iteration deterministic.
    std::map<std::array<int, 3>, double> terms;

    static Poly3 constant(double c) { return Poly3{}.add(0, 0, 0, c); }
    static Poly3 monomial(int a, int b, int c, double coeff) {
        return Poly3{}.add(a, b, c, coeff);
    }
    /// Adds coeff * x^a y^b z^c (merging with an existing term) and returns
    /// *this for chaining.
    Poly3& add(int a, int b, int c, double coeff);

    int degree() const;
    double eval(double x, double y, double z) const;
};

/// Pointwise product of two polynomials. No degree cap of its own; the
/// consuming operation enforces whatever cap it declares.
Poly3 poly_mul(const Poly3& f, const Poly3& g);

/// Partial derivative along axis 0, 1, or 2 (x, y, z).
Poly3 poly_diff(const Poly3& f, int axis);

/// op acting on site i (1-based) of an N-site chain, all other slots
/// identity; site 1 is the leftmost (most significant) Kronecker factor.
/// Throws Error for i outside 1..N, SizeExceeded for N > 10.
ComplexDense site_embed(Pauli op, int i, int N);

/// Average of the product factor_1(i_1) ... factor_L(i_L) over all
/// N(N-1)...(N-L+1) injective placements of the L factors into N sites.
/// This is the exact finite-N symmetrization of a fixed elementary tensor;
/// the identity slots make the full permutation average collapse to it.
/// Throws Error for empty factors or L > N, SizeExceeded for N > 10.
ComplexDense symmetrize_place(const std::vector<Pauli>& factors, int N);

/// Full N!-term permutation average (1/N!) sum_pi U_pi A U_pi^*; exact but
/// factorially expensive, used to validate symmetrize_place. Idempotent.
/// Throws SizeExceeded for N > 4.
ComplexDense full_symmetrizer(const ComplexDense& A, int N);

/// Quantization of a ball polynomial on (C^2)^(tensor N): monomial
/// x^a y^b z^c with L = a+b+c factors maps to the symmetrized placement of
/// a copies of X, b of Y, c of Z; constants map to multiples of the
/// identity; monomials with L > N contribute zero. Linear in p.
/// Throws DegreeExceeded above total degree 4, SizeExceeded for N > 10.
ComplexDense quantize_poly(const Poly3& p, int N);

/// The same map restricted to the symmetric sector, dimension N+1, via
/// collective-spin closed forms (real entries unless y appears oddly):
///   z -> 2 J3/N,  z^2 -> (4 J3^2 - N)/(N(N-1)),
///   xz -> 2(J1 J3 + J3 J1)/(N(N-1)),  and cyclic relabelings.
/// Monomials with degree above N contribute zero.
/// Throws DegreeExceeded above total degree 2.
ComplexDense quantize_poly_dicke(const Poly3& p, int N);

/// <psi| quantize_poly_dicke(p, N) |psi> for a real unit vector psi of
/// length N+1, evaluated termwise through the band structure in O(N) per
/// term (no dense matrix is formed). Same degree cap as
/// quantize_poly_dicke.
double dicke_expectation(const std::vector<double>& psi, const Poly3& p);

/// Collective spin operator J_axis (axis 1, 2, 3) on the symmetric sector,
/// dimension N+1, basis |k> = k up-spins, J3 = diag(k - N/2).
ComplexDense collective_spin(int axis, int N);

/// Matrix of A in the orthonormal symmetric-sector basis |k> (uniform
/// superposition of product states with k up-spins). Verifies that A maps
/// each |k> into the sector to within 1e-12 * max(1, ||A|k>||); throws
/// SectorLeak otherwise. Throws SizeExceeded for N > 10.
ComplexDense dicke_project(const ComplexDense& A, int N);

/// Operator-norm distance between the ferromagnetic chain Hamiltonian per
/// site and the quantization of its classical symbol -(J/2) z^2 - B x.
/// The field terms cancel exactly, so the value is B-independent; the
/// remainder is diagonal with largest magnitude J/(2(N-1)) for even N and
/// J(N+1)/(2N^2) for odd N, decaying like J/(2N).
/// Throws Error for N < 2, SizeExceeded for N > 10.
double verify_qnh(int N, double J, double B);

}  // namespace sclab::tensor
