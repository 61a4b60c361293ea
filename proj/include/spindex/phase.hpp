#pragma once

#include <array>
#include <functional>

namespace spindex {

using Vec2 = std::array<double, 2>;

struct ArgTrackResult {
    Vec2 z;            ///< state at t1
    double delta_arg;  ///< continuous argument change of z over [t0, t1]
};

/// Integrate zdot = f(t, z) for a planar system while tracking the
/// continuous argument of z (atan2 lift). The step size adapts to both the
/// local truncation error and the per-step argument change, so the lift
/// never jumps branches. Throws StepFailure if z approaches the origin or
/// refinement bottoms out.
ArgTrackResult integrate_with_argument(
    const std::function<Vec2(double, const Vec2&)>& f, Vec2 z0, double t0,
    double t1, double rel_tol = 1e-10, double abs_tol = 1e-12);

}  // namespace spindex
