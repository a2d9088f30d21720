#pragma once

#include <stdexcept>
#include <string>

namespace sclab {

/// Base class for every failure the library reports. Each concrete type names
/// one contract violation; the message carries the offending values so a
/// failure in a long sweep can be traced without a debugger.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- numerical / solver failures -----------------------------------------

/// An iterative solver hit its step cap before reaching the requested
/// tolerance (e.g. bisection asked for a width below representable spacing).
struct IterationLimit : Error { using Error::Error; };

/// The two lowest eigenvalues are separated by less than the resolvable
/// threshold; the ground vector of the full matrix is numerically undefined
/// and the caller must use the parity-projected path instead.
struct NearDegenerate : Error { using Error::Error; };

/// A dense operation was asked for a dimension beyond the desk-scale guard.
struct SizeExceeded : Error { using Error::Error; };

/// operator_norm was asked for a complex matrix that is not Hermitian.
struct NotHermitian : Error { using Error::Error; };

// --- model construction ----------------------------------------------------

/// The grid spacing is too coarse for the requested hbar.
struct ResolutionGuard : Error { using Error::Error; };

/// The Bose-Hubbard builder only accepts the reference parameter set; other
/// values would silently change the classical limit it is checked against.
struct UnsupportedParameters : Error { using Error::Error; };

/// A perturbation was applied to a Hamiltonian of the wrong kind/shape.
struct KindMismatch : Error { using Error::Error; };

// --- quantization ------------------------------------------------------------

/// The supplied sphere quadrature cannot integrate the requested integrand
/// exactly (declared degree too low).
struct QuadratureTooCoarse : Error { using Error::Error; };

/// A coherent state was requested at a centre whose Gaussian tail does not
/// fit inside the position grid.
struct TailEscape : Error { using Error::Error; };

/// The phase-space window captures less than the required Husimi mass, so
/// windowed moments would be biased.
struct WindowTooSmall : Error { using Error::Error; };

/// An operator claimed to preserve the symmetric sector leaks out of it.
struct SectorLeak : Error { using Error::Error; };

/// A polynomial exceeds the supported total degree.
struct DegreeExceeded : Error { using Error::Error; };

// --- classical phase spaces -------------------------------------------------

/// A phase-space point does not belong to the model's phase space.
struct DomainMismatch : Error { using Error::Error; };

/// Newton refinement of a stationary point failed to converge.
struct RefinementDiverged : Error { using Error::Error; };

/// The symmetry group does not act transitively on the minima set, so the
/// uniform-orbit mixture is undefined.
struct NotTransitive : Error { using Error::Error; };

// --- configuration / IO -------------------------------------------------------

/// Malformed config text. `line` is 1-based.
struct ParseError : Error {
    int line;
    ParseError(int line_, const std::string& what)
        : Error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

/// A key that no section defines.
struct UnknownKey : Error {
    int line;
    UnknownKey(int line_, const std::string& what)
        : Error("line " + std::to_string(line_) + ": unknown key: " + what), line(line_) {}
};

/// A value that does not parse as the key's declared type.
struct TypeMismatch : Error {
    int line;
    TypeMismatch(int line_, const std::string& what)
        : Error("line " + std::to_string(line_) + ": type mismatch: " + what), line(line_) {}
};

/// Filesystem failure while emitting a report.
struct IoError : Error { using Error::Error; };

}  // namespace sclab
