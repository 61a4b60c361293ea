#pragma once

#include <vector>

#include "spindex/action.hpp"
#include "spindex/index.hpp"

namespace spindex::pendulum {

/// Forced pendulum xddot + beta sin(x) = f(t) with T-periodic zero-mean
/// forcing. The forcing is stored as a trigonometric series with zero
/// constant term, so the mean-zero constraint holds exactly.
struct PendulumProblem {
    double beta = 0.0;
    double period = 0.0;
    LoopRepr forcing;

    /// 0 < beta <= (pi/T)^2, the smallness condition under which the
    /// stability conclusions are asserted.
    [[nodiscard]] bool ortega_condition() const;
    [[nodiscard]] bool forcing_is_zero() const;
};

/// Build a problem from forcing coefficients: cos_coeffs[j-1] multiplies
/// cos(2 pi j t / T), sin_coeffs[j-1] multiplies sin(2 pi j t / T).
PendulumProblem make_problem(double beta, double period,
                             const std::vector<double>& cos_coeffs,
                             const std::vector<double>& sin_coeffs,
                             int modes = 64);

/// Fit a forcing series to (t, f) samples by least squares, then project
/// the constant term to zero.
PendulumProblem problem_from_samples(
    double beta, double period,
    const std::vector<std::pair<double, double>>& samples, int modes = 64);

/// Action density L = p^2/2 + beta cos(x) + x f(t); critical loops solve
/// xddot + beta sin(x) = f(t).
LagrangianSpec make_lagrangian(const PendulumProblem& problem);

/// Angular advance of variational solutions z = (x, y), y = -xdot, around
/// the loop u over k periods, sampled over equispaced initial lines.
struct RotationBound {
    int k_periods = 1;
    double bound = 0.0;  ///< k pi
    double max_delta_theta = 0.0;
    std::vector<double> per_direction;
    bool holds = false;  ///< max < k pi - strict_tol
};

RotationBound rotation_bound_check(const PendulumProblem& problem,
                                   const LoopRepr& u, int k_periods,
                                   int n_directions = 8,
                                   double strict_tol = 1e-9);

struct OrbitReport {
    CriticalPoint point;
    IndexReport indices;
    std::vector<RotationBound> bounds;  ///< k = 1 and k = 2
};

struct PendulumReport {
    double beta = 0.0;
    double period = 0.0;
    bool ortega_condition = false;
    bool forcing_zero = true;
    /// Stability assertions ran (requires the Ortega condition, nonzero
    /// forcing and nondegenerate orbits).
    bool assertions_checked = false;
    OrbitReport q1;  ///< minimizer
    OrbitReport q2;  ///< mountain pass
};

/// Full pipeline: minimizer, 2 pi translate, mountain pass, linearization,
/// indices over one and two covers, rotation bounds. When the Ortega
/// condition holds with nonzero forcing and both orbits are nondegenerate,
/// asserts the stability conclusions (q1 hyperbolic with positive
/// multipliers; i1(q2) = i2(q2) = 1 and q2 elliptic; i2 <= 1 for both) and
/// throws ConclusionViolated with diagnostics if any fails.
PendulumReport solve(const PendulumProblem& problem,
                     const SolverOptions& opts = {});

}  // namespace spindex::pendulum
