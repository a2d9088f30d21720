#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace sclab::classical {

/// The three classical limit systems.
enum class ModelId { double_well, curie_weiss, bose_hubbard };

/// Phase-space geometry: the (q,p) plane, the closed unit ball (Bloch
/// vectors of a spin-1/2 mean state), or the unit sphere.
enum class Space { plane, ball, sphere };

/// Phase-space point. Interpretation is fixed by the owning model's space:
/// (q, p, 0) on the plane, a Cartesian Bloch vector (x, y, z) in the ball,
/// a unit Cartesian vector on the sphere. Curved spaces are kept Cartesian
/// so the mirror symmetry below is an exact involution (sign flips never
/// round); angle constructors/accessors convert at the boundary.
struct ClassicalPoint {
    std::array<double, 3> c{0.0, 0.0, 0.0};
};

/// (q, p) on the plane. Throws Error for non-finite input.
ClassicalPoint plane_point(double q, double p);
/// Bloch vector in the closed unit ball. Throws DomainMismatch when
/// x^2+y^2+z^2 > 1 + 1e-12, Error for non-finite input.
ClassicalPoint ball_point(double x, double y, double z);
/// Unit vector (sin t cos p, sin t sin p, cos t). Throws Error when theta
/// lies outside [0, pi] or either angle is non-finite.
ClassicalPoint sphere_point(double theta, double phi);
/// Polar/azimuthal angles of a ball or sphere point, phi in [0, 2pi); the
/// handoff format for spin coherent states. Poles report phi = 0.
std::pair<double, double> sphere_angles(const ClassicalPoint& pt);

/// A classical model: which system, and (for the spin chain) its coupling
/// J > 0 and transverse field B >= 0.
struct ClassicalModel {
    ModelId id = ModelId::double_well;
    double J = 1.0;  ///< ferromagnetic coupling (curie_weiss only)
    double B = 0.5;  ///< transverse field (curie_weiss only)

    Space space() const;

    static ClassicalModel double_well();
    /// Throws Error when J <= 0 or B < 0.
    static ClassicalModel curie_weiss(double J, double B);
    static ClassicalModel bose_hubbard();
};

/// Real function on the model's phase space.
using Observable = std::function<double(const ClassicalPoint&)>;

/// Energy at a point of the model's phase space:
///   plane:  p^2 + (q^2 - 1)^2,
///   ball:   -(J/2) z^2 - B x,
///   sphere: -(x + z^2)/2.
/// Throws DomainMismatch when the point does not lie on the model's space.
double classical_hamiltonian(const ClassicalModel& model, const ClassicalPoint& pt);

/// The absolute minima of the energy plus every other stationary point the
/// scan located (reported but excluded from the minima proper).
struct MinimaSet {
    std::vector<ClassicalPoint> points;  ///< absolute minima, lexicographic
    double value = 0.0;                  ///< their common energy
    double max_gradient_norm = 0.0;      ///< worst refined gradient norm
    std::vector<ClassicalPoint> excluded;  ///< stationary, not absolute minima
    std::vector<double> excluded_values;   ///< energies of the excluded points
};

/// Locates all stationary points by a deterministic 201-per-coordinate grid
/// scan followed by Newton refinement to gradient norm <= 1e-12 (in the
/// scan coordinates: (q,p) on the plane, polar angles on the curved
/// spaces — ball minima lie on the boundary sphere for every admissible
/// field). Duplicates merge within 1e-8; the absolute minima must agree
/// with the model's closed forms and carry positive-semidefinite Hessians.
/// Throws Error for a curie_weiss field outside (0,1) and
/// RefinementDiverged when a grid candidate fails to converge.
MinimaSet find_minima(const ClassicalModel& model);

/// Poisson bracket of two observables at a point, with derivatives taken by
/// Richardson-corrected central differences at step 1e-6:
///   plane:  df/dq dg/dp - df/dp dg/dq,
///   ball:   r . (grad f x grad g)   (so {x,z} = -y),
///   sphere: -r . (grad f x grad g)  (so {z,x} = -y),
/// matching the orientations used by the quantization diagnostics.
double poisson_bracket(const ClassicalModel& model, const Observable& f, const Observable& g,
                       const ClassicalPoint& pt);

/// The mirror symmetry of each model: (q,p) -> (-q,-p) on the plane,
/// (x,y,z) -> (x,-y,-z) on ball and sphere. Exact involution.
/// Throws DomainMismatch when the point is off the model's space.
ClassicalPoint symmetry_apply(const ClassicalModel& model, const ClassicalPoint& pt);

/// Convex mixture of point evaluations — the limit of quantum ground states
/// when the minima are symmetry-related.
struct MixtureState {
    std::vector<ClassicalPoint> points;
    std::vector<double> weights;  ///< nonnegative, sum 1 within 1e-14
};

/// Uniform mixture over the minima. Requires the mirror symmetry to act
/// transitively on them (orbit of any minimum covers the whole set);
/// throws NotTransitive otherwise.
MixtureState limit_mixture(const MinimaSet& minima, const ClassicalModel& model);

/// Mixture evaluation functional: sum of w_i f(pt_i).
double mixture_expect(const MixtureState& mix, const Observable& f);

/// Symmetry audit of the candidate limit states built on the minima.
struct SsbReport {
    MinimaSet minima;
    std::vector<bool> dirac_invariant;  ///< per minimum: fixed by the action?
    bool mixture_invariant = false;     ///< the uniform mixture is invariant
    bool ssb = false;  ///< no pure candidate (Dirac at a minimum) is invariant
    MixtureState invariant_witness;     ///< the mixture, when invariant
    std::string notes;  ///< conventions and the stationary-point policy
};

/// Computes the minima and classifies the symmetry status of each candidate
/// limit state: verdict "ssb" when every Dirac state at a minimum moves
/// under the action while the uniform mixture stays invariant.
SsbReport ssb_verdict(const ClassicalModel& model);

}  // namespace sclab::classical
