#pragma once

#include <stdexcept>
#include <string>

namespace spindex {

/// Base class of all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- domain / input errors ----------------------------------------------

/// Krein sign requested for a matrix without unit-circle eigenvalue pair.
struct NotElliptic : Error {
    using Error::Error;
};

/// A probed S(t) failed the symmetry check.
struct NonSymmetric : Error {
    using Error::Error;
};

/// Adaptive integration could not satisfy its error or lift contract.
struct StepFailure : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct NotAMinimizer : Error {
    using Error::Error;
};

struct CollapseToEndpoint : Error {
    using Error::Error;
};

/// Second-variation spectrum has (numerically) zero eigenvalues; index
/// claims are refused for degenerate extremals.
struct DegenerateHessian : Error {
    using Error::Error;
};

/// A polished mountain-pass candidate does not have Morse index 1.
struct IndexMismatch : Error {
    using Error::Error;
};

/// Legendre condition L_pp > 0 violated at a probed point.
struct LegendreViolation : Error {
    using Error::Error;
};

/// Transition-curve continuation lost its root bracket.
struct LostBracket : Error {
    using Error::Error;
};

// ---- degeneracy refusal ---------------------------------------------------

/// The endpoint of a path is omega-degenerate: |D(omega)| below tolerance.
/// Index values are undefined there and the toolkit refuses rather than
/// extrapolates.
struct DegenerateEndpoint : Error {
    DegenerateEndpoint(double phi_, double d_value_, const std::string& what_)
        : Error(what_), phi(phi_), d_value(d_value_) {}
    double phi;      ///< angle of the offending omega = e^{i phi}
    double d_value;  ///< D(omega) at the endpoint
};

// ---- internal consistency failures ----------------------------------------

/// Two independent computation routes disagreed; indicates a bug, not a
/// property of the input.
struct InternalCheckFailure : Error {
    using Error::Error;
};

struct CrossCheckMismatch : InternalCheckFailure {
    using InternalCheckFailure::InternalCheckFailure;
};

/// A theorem-backed assertion failed on a nondegenerate instance.
struct ConclusionViolated : InternalCheckFailure {
    using InternalCheckFailure::InternalCheckFailure;
};

}  // namespace spindex
