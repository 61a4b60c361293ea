#pragma once

#include <complex>

#include "spindex/mat2.hpp"

namespace spindex {

// Default tolerances; every operation that uses one accepts an override.
inline constexpr double kSymplTol = 1e-9;  ///< |det - 1| membership tolerance
inline constexpr double kEigTol = 1e-9;    ///< |tr| = 2 classification band
inline constexpr double kDegTol = 1e-8;    ///< |D(omega)| degeneracy band

/// Normal-form representatives of the two nondegenerate components.
inline constexpr Mat2 kMPlus{2.0, 0.0, 0.0, 0.5};
inline constexpr Mat2 kMMinus{-2.0, 0.0, 0.0, -0.5};

/// Eigenvalue structure of A in Sp(2). The eigenvalues come as lambda,
/// 1/lambda: a conjugate pair on the unit circle (elliptic), a real
/// reciprocal pair (hyperbolic), or a double eigenvalue +-1 (parabolic).
enum class EigKind {
    Elliptic,
    HyperbolicPositive,
    HyperbolicNegative,
    ParabolicPlus,
    ParabolicMinus,
};

struct EigenClass {
    EigKind kind;
    /// Elliptic: the Krein-positive angle theta(A) in (0, 2pi).
    /// Hyperbolic: the eigenvalue with |lambda| < 1.
    /// Parabolic: the repeated eigenvalue +-1.
    double angle_or_lambda;
};

/// A point omega = e^{i phi} on the upper unit semicircle, phi in [0, pi].
/// All omega-classifications depend only on cos(phi), so omega and its
/// conjugate are interchangeable and only the upper half is kept.
struct OmegaPoint {
    double phi = 0.0;
};

enum class ComponentSign { Plus, Minus, Degenerate };

/// Which of the three sets Sp(2)_omega^+, Sp(2)_omega^-, Sp(2)_omega^0
/// a matrix belongs to, together with the discriminant D(omega) that
/// decided it. Convention: Plus means D < 0, Minus means D > 0.
struct ComponentTag {
    ComponentSign sign;
    double d_value;
};

/// Selector for one member of a conjugate eigenvalue pair.
enum class EigSelect { UpperHalf, LowerHalf };

/// Classify the eigenvalue structure from the trace: |tr| < 2 elliptic,
/// tr > 2 / tr < -2 hyperbolic, |tr| = 2 (within eig_tol) parabolic.
EigenClass classify_eigen(const Mat2& A, double eig_tol = kEigTol);

/// Krein sign of the selected unit-circle eigenvalue: the sign of the
/// Hermitian form <Gv, v>, G = -iJ, evaluated on a corresponding
/// eigenvector v. The two conjugate eigenvalues carry opposite signs.
/// Throws NotElliptic when |tr| >= 2 - eig_tol: the double eigenvalues
/// +-1 have no principled selection rule and are refused.
int krein_sign(const Mat2& A, EigSelect which, double eig_tol = kEigTol);

/// Rotation function rho: Sp(2) -> S^1. Elliptic matrices map to
/// e^{i theta(A)} with theta(A) the Krein-positive angle; matrices with
/// real spectrum map to +1 (positive eigenvalues) or -1 (negative).
std::complex<double> rotation(const Mat2& A, double eig_tol = kEigTol);

/// Principal angle of rotation(A) in [0, 2pi): 0 for rho = +1, pi for
/// rho = -1, theta(A) for elliptic A. This is what lift tracking consumes.
double rotation_angle(const Mat2& A, double eig_tol = kEigTol);

/// D(omega) = conj(omega) * det(A - omega I), a real-valued discriminant.
/// Equals 2 cos(phi) - tr(A) on Sp(2).
double d_omega(const Mat2& A, OmegaPoint w);

/// Component of A relative to omega: Plus iff D < -deg_tol, Minus iff
/// D > deg_tol, Degenerate otherwise.
ComponentTag classify_component(const Mat2& A, OmegaPoint w, double deg_tol = kDegTol);

}  // namespace spindex
