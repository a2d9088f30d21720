#pragma once

#include <vector>

#include "sclab/linalg.hpp"

namespace sclab::models {

/// One-dimensional double-well Schrödinger operator -hbar^2 d^2/dx^2 + V with
/// V(q) = (q^2-1)^2, discretized by second-order central differences with
/// Dirichlet walls at +-L.
struct DoubleWellConfig {
    double hbar = 0.0;  ///< semiclassical parameter, > 0
    double L = 3.0;     ///< half-width of the position box
    int M = 2048;       ///< interior grid points

    /// Grid spacing 2L/(M+1).
    double dx() const { return 2.0 * L / (M + 1); }
    /// Throws Error for non-positive hbar/L; ResolutionGuard when M < 64 or
    /// the spacing violates dx <= sqrt(hbar)/8 (the well is then unresolved).
    void validate() const;
};

/// Ferromagnetic mean-field spin-1/2 chain with transverse field:
/// H = -(J/2N) (sum_i sigma3(i))^2 - B sum_i sigma1(i).
struct CurieWeissConfig {
    int N = 0;       ///< number of sites, >= 1
    double B = 0.5;  ///< transverse field
    double J = 1.0;  ///< ferromagnetic coupling

    void validate() const;  ///< throws Error when N < 1
};

/// Two-site Bose-Hubbard model at the reference parameter point, normalized
/// so the N -> infinity limit is an order-one function on the Bloch sphere:
/// H = -(2/(N+1)^2) (Sz^2 - N + 1/2) - (1/(N+1)) Sx
/// in the spin-(N/2) representation carried by the (N+1)-dimensional
/// fixed-particle-number sector.
struct BoseHubbardConfig {
    int N = 0;         ///< boson number, >= 1
    double T = 1.0;    ///< hopping amplitude
    double U = -2.0;   ///< on-site interaction
    double rho = -2.0; ///< neighbor coupling

    /// Throws Error when N < 1; UnsupportedParameters when (T, U, rho) differ
    /// from the reference values the normalized matrix entries encode.
    void validate() const;
};

/// Symmetry-breaking perturbations. cw_field adds a uniform longitudinal
/// field epsilon * sum_i sigma3(i); schrodinger_flea adds a localized
/// Gaussian bump delta * exp(-((x - q0)/w)^2) to the potential.
struct Perturbation {
    enum class Kind { cw_field, schrodinger_flea };
    struct Flea {
        double delta = 0.0;  ///< bump amplitude
        double q0 = 0.0;     ///< bump center (position units)
        double w = 0.0;      ///< bump width, > 0
    };
    Kind kind = Kind::cw_field;
    double epsilon = 0.0;  ///< longitudinal field strength (cw_field)
    Flea flea;             ///< bump parameters (schrodinger_flea)
};

/// Matrix plus the position grid it lives on.
struct DoubleWellOperator {
    linalg::SymTridiag matrix;
    std::vector<double> grid;  ///< x_i = -L + (i+1) dx, i = 0..M-1
    double dx = 0.0;
};

/// The double-well potential (q^2 - 1)^2.
inline double quartic_potential(double q) {
    const double w = q * q - 1.0;
    return w * w;
}

/// Interior grid points of the position box, built mirrored
/// (x[M-1-i] is the exact negation of x[i]) so potentials even in q produce
/// bitwise reflection-symmetric matrices.
std::vector<double> double_well_grid(const DoubleWellConfig& cfg);

/// diag_i = 2 hbar^2/dx^2 + V(x_i), off_i = -hbar^2/dx^2.
/// Errors: those of DoubleWellConfig::validate.
DoubleWellOperator build_double_well(const DoubleWellConfig& cfg);

/// Symmetric-sector matrix over |k>, k = number of up spins (dimension N+1):
/// diag(k) = -(J/(2N)) (2k-N)^2, off(k -> k+1) = -B sqrt((N-k)(k+1)).
linalg::SymTridiag build_cw_dicke(const CurieWeissConfig& cfg);

/// Full 2^N-dimensional construction of the same Hamiltonian on product
/// space (real entries). Throws SizeExceeded for N > 10.
linalg::ComplexDense build_cw_tensor(const CurieWeissConfig& cfg);

/// Fixed-particle-number matrix over |n1>, n1 = bosons on site 1 (dimension
/// N+1): diag(n1) = -(2/(N+1)^2) ((n1-N/2)^2 - N + 1/2),
/// off(n1 -> n1+1) = -(1/(2(N+1))) sqrt((N-n1)(n1+1)).
linalg::SymTridiag build_bh(const BoseHubbardConfig& cfg);

/// Perturbed copy of a spin matrix: diag(k) += epsilon * (2k - N).
/// Throws KindMismatch for a non-cw_field perturbation or a dimension that
/// does not match cfg.
linalg::SymTridiag apply_perturbation(const linalg::SymTridiag& H, const Perturbation& p,
                                      const CurieWeissConfig& cfg);

/// Perturbed copy of a position-space matrix:
/// diag_i += delta * exp(-((x_i - q0)/w)^2) on the grid cfg describes.
/// Throws KindMismatch for a non-flea perturbation or a dimension mismatch;
/// Error when w <= 0.
linalg::SymTridiag apply_perturbation(const linalg::SymTridiag& H, const Perturbation& p,
                                      const DoubleWellConfig& cfg);

}  // namespace sclab::models
