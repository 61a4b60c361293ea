#pragma once

#include <functional>
#include <vector>

#include "spindex/mat2.hpp"

namespace spindex {

enum class Smoothness { Smooth, PiecewiseConstant };

/// A linear T-periodic Hamiltonian system zdot = J S(t) z with S(t)
/// symmetric. The callback must be defined for all t >= 0 and T-periodic;
/// builders in this library fold t into [0, T) themselves.
struct HamiltonianSpec {
    std::function<Mat2(double)> S;
    double period = 0.0;
    Smoothness smoothness = Smoothness::Smooth;
    /// Interior discontinuity locations in (0, period), sorted; only
    /// meaningful for PiecewiseConstant. The integrator never steps
    /// across one.
    std::vector<double> breakpoints;
};

/// Constant-S system over one period of length T.
HamiltonianSpec constant_spec(const Mat2& S, double T);

/// Piecewise-constant system: segment k holds S = mats[k] on
/// [ends[k-1], ends[k]) with ends strictly increasing and ends.back() = T.
HamiltonianSpec piecewise_spec(const std::vector<double>& ends,
                               const std::vector<Mat2>& mats);

/// Probes symmetry of S at sample points (throws NonSymmetric) and
/// T-periodicity (throws Error on violation beyond 1e-12 relative).
void validate_spec(const HamiltonianSpec& spec);

/// Adaptive step control for the fundamental-solution integrator.
struct StepControl {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0;        ///< 0: period / 200
    double max_step_fraction = 1.0 / 64.0;  ///< cap as a fraction of the period
    double min_step_fraction = 1e-13;       ///< floor as a fraction of the period
    int max_nodes = 4000000;
};

}  // namespace spindex
