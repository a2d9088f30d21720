#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "sclab/linalg.hpp"
#include "sclab/tensor.hpp"

namespace sclab::quantize {

using linalg::ComplexDense;
using tensor::Poly3;

/// Point on the unit sphere, theta in [0,pi], phi in [0,2pi). Build through
/// of(), which wraps phi, rejects theta outside its range, and canonicalizes
/// the poles to phi = 0.
struct SpherePoint {
    double theta = 0.0;
    double phi = 0.0;

    static SpherePoint of(double theta, double phi);
};

/// Point of the phase plane; both coordinates must be finite.
struct PhasePoint {
    double q = 0.0;
    double p = 0.0;

    void validate() const;
};

struct SphereNode {
    SpherePoint pt;
    double weight = 0.0;  ///< combined weight; all weights sum to 4*pi
};

/// Product quadrature on the sphere: Gauss-Legendre in cos(theta) crossed
/// with a uniform grid in phi. Nodes are stored ring-major (fixed theta,
/// phi ascending), n_phi per ring, and contain no poles. Exact for
/// polynomials in (cos t, sin t cos p, sin t sin p) up to max_degree.
struct SphereQuad {
    int max_degree = 0;
    int n_theta = 0;
    int n_phi = 0;
    std::vector<SphereNode> nodes;
};

/// Real function on the sphere together with its declared polynomial degree
/// in (cos t, sin t cos p, sin t sin p); the degree drives quadrature
/// sufficiency checks.
struct SphereFn {
    int degree = 0;
    std::function<double(const SpherePoint&)> eval;
};

/// Wraps a ball polynomial as a sphere function via x = sin t cos p,
/// y = sin t sin p, z = cos t.
SphereFn sphere_poly(const Poly3& p);

/// Husimi density of a symmetric-sector state at the quadrature nodes:
/// values are (N+1)/(4 pi) |<node|psi>|^2 >= 0, and mass is their quadrature
/// integral (1 up to rounding by the resolution of identity).
struct HusimiDensity {
    std::vector<double> values;
    double mass = 0.0;
};

/// Expansion of the spin coherent state at omega over the up-count basis:
/// c_k = sqrt(C(N,k)) cos^k(t/2) (e^{i p} sin(t/2))^{N-k}. Unit vector.
/// Throws SizeExceeded above one million sites.
std::vector<std::complex<double>> spin_coherent_coeffs(int N, const SpherePoint& omega);

/// Builds the product quadrature exact through max_degree (<= 5000,
/// SizeExceeded above). ceil((max_degree+2)/2) Gauss-Legendre rings of
/// max_degree+2 uniform azimuthal points.
SphereQuad sphere_quadrature(int max_degree);

/// Coherent-state quantization of f at inverse spin 1/N:
/// (N+1)/(4 pi) * integral of f(omega) |omega><omega|. Hermitian for real
/// f. Throws QuadratureTooCoarse unless quad covers degree 2N + f.degree.
ComplexDense berezin_spin_matrix(int N, const SphereFn& f, const SphereQuad& quad);

/// Same map evaluated in closed form for polynomials of degree <= 2,
/// through the collective spin operators on the N+1 sector:
///   1 -> I,   r_a -> 2 J_a/(N+2),
///   r_a^2 -> (4 J_a^2 + (N+2) I)/((N+2)(N+3)),
///   r_a r_b -> 2 (J_a J_b + J_b J_a)/((N+2)(N+3)).
/// Throws DegreeExceeded above degree 2.
ComplexDense berezin_poly_matrix(const Poly3& p, int N);

/// <psi| berezin_poly_matrix(p, N) |psi> for a real vector psi of length
/// N+1, evaluated through the band structure in O(N) per term — the fast
/// path for large sweeps. Same degree cap as berezin_poly_matrix.
double berezin_dicke_expect(const std::vector<double>& psi, const Poly3& p);

/// Husimi density of a unit symmetric-sector state at the quadrature nodes.
/// Throws QuadratureTooCoarse unless quad covers degree 2N, or when the
/// integrated mass strays from 1 by more than 1e-8.
HusimiDensity husimi_spin_density(const std::vector<std::complex<double>>& psi,
                                  const SphereQuad& quad);
HusimiDensity husimi_spin_density(const std::vector<double>& psi, const SphereQuad& quad);

/// Quantized expectation through the density instead of the matrix:
/// (N+1)/(4 pi) * integral of f |<omega|psi>|^2 — O(nodes * N) rather than
/// O(nodes * N^2). Requires quad to cover degree 2N + f.degree and psi to
/// be normalized.
double husimi_spin_expect(const std::vector<std::complex<double>>& psi, const SphereFn& f,
                          const SphereQuad& quad);
double husimi_spin_expect(const std::vector<double>& psi, const SphereFn& f,
                          const SphereQuad& quad);

/// Poisson bracket of two polynomials restricted to the unit sphere, in the
/// orientation fixed by {cos t, sin t cos p} = -sin t sin p; equivalently
/// -r . (grad f x grad g), which is again a polynomial.
Poly3 sphere_bracket(const Poly3& f, const Poly3& g);

/// One row of the finite-N quantization diagnostics.
struct DiagnosticsRow {
    int N = 0;
    double norm_f = 0.0;          ///< ||Q(f)||, approaching sup |f|
    double product_defect = 0.0;  ///< ||Q(f)Q(g) - Q(fg)||, approaching 0
    double dgr_defect = 0.0;      ///< commutator-vs-bracket defect, see below
};

/// Report of the three deformation-quantization conditions over a list of
/// inverse-spin values. The commutator defect is
/// || (sign * i * N / scale) [Q(f), Q(g)] - Q({f,g}) ||, with (sign, scale)
/// measured once at N = 8 and frozen at (+1, 2).
struct DiagnosticsReport {
    int dgr_sign = +1;
    double dgr_scale = 2.0;
    std::vector<DiagnosticsRow> rows;
};

/// Runs the diagnostics for sphere polynomials f, g of degree <= 4 at each
/// N in Ns. Throws DegreeExceeded above degree 4 (products and brackets are
/// formed internally and covered by the 2N+8 quadrature), Error for empty
/// or non-positive inputs.
DiagnosticsReport quantization_diagnostics(const std::vector<int>& Ns, const Poly3& f,
                                           const Poly3& g);

/// Gaussian coherent state centered at (q, p), sampled on the model grid
/// with weight sqrt(dx) so it is a unit grid vector:
///   (pi hbar)^{-1/4} e^{-i p q/(2 hbar)} e^{i p x/hbar} e^{-(x-q)^2/(2 hbar)}.
/// Throws TailEscape when q sits closer than 5 sqrt(hbar) to the box edge.
std::vector<std::complex<double>> schrodinger_coherent(const PhasePoint& qp, double hbar,
                                                       const std::vector<double>& grid);

/// Rectangular phase-space integration window.
struct PhaseWindow {
    double qmin = -2.0, qmax = 2.0;
    double pmin = -2.0, pmax = 2.0;

    void validate() const;
};

/// Trapezoid mesh resolution: interval counts along q and p.
struct PhaseMesh {
    int nq = 0;
    int np = 0;
};

/// Smallest mesh satisfying the spacing requirement (<= sqrt(hbar)/4 in
/// both directions) for the window.
PhaseMesh phase_mesh_for(const PhaseWindow& window, double hbar);

/// Husimi density of a grid state over a trapezoid phase-space mesh:
/// values[i*(np+1)+j] = |<coherent(q_i, p_j)|psi>|^2 / (2 pi hbar), with
/// mass its trapezoid integral over the window.
struct PhaseDensity {
    PhaseWindow window;
    int nq = 0, np = 0;
    std::vector<double> q;       ///< nq+1 node positions
    std::vector<double> p;       ///< np+1 node momenta
    std::vector<double> values;  ///< (nq+1)*(np+1), q-major
    double mass = 0.0;
};

/// Computes the phase-space density and verifies at least 99.9% of the mass
/// lies inside the window. Throws QuadratureTooCoarse when the mesh spacing
/// exceeds sqrt(hbar)/4, WindowTooSmall when the tail check fails,
/// TailEscape when the window pushes coherent centers against the box edge.
PhaseDensity husimi_schrodinger_density(const std::vector<double>& psi, double hbar,
                                        const std::vector<double>& grid,
                                        const PhaseWindow& window, const PhaseMesh& mesh);

/// (1/(2 pi hbar)) * integral of f(q,p) |<coherent|psi>|^2 over the window,
/// by the trapezoid rule on the same mesh. Same errors as the density.
double husimi_schrodinger_expect(const std::vector<double>& psi, double hbar,
                                 const std::vector<double>& grid,
                                 const std::function<double(double, double)>& f,
                                 const PhaseWindow& window, const PhaseMesh& mesh);

}  // namespace sclab::quantize
