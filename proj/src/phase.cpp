#include "spindex/phase.hpp"

#include <cmath>
#include <numbers>

#include "rkdp.hpp"
#include "spindex/errors.hpp"

namespace spindex {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kArgMaxStep = 1.0;
}  // namespace

ArgTrackResult integrate_with_argument(
    const std::function<Vec2(double, const Vec2&)>& f, Vec2 z0, double t0,
    double t1, double rel_tol, double abs_tol) {
    const double span = t1 - t0;
    if (!(span > 0.0)) return {z0, 0.0};

    auto rhs = [&](double t, const detail::Arr<2>& y) -> detail::Arr<2> {
        const Vec2 d = f(t, {y[0], y[1]});
        return {d[0], d[1]};
    };

    detail::Arr<2> y{z0[0], z0[1]};
    double t = t0;
    double h = span / 200.0;
    const double h_min = span * 1e-13;
    double arg_prev = std::atan2(y[1], y[0]);
    double delta = 0.0;

    while (t < t1 - 1e-12 * span) {
        h = std::min(h, t1 - t);
        for (;;) {
            const auto out = detail::dp45_step<2>(rhs, t, y, h, rel_tol, abs_tol);
            if (out.err > 1.0) {
                h = detail::dp45_next_h(h, out.err);
                if (h < h_min) throw StepFailure("argument tracking: step underflow");
                continue;
            }
            const double norm = std::hypot(out.y[0], out.y[1]);
            if (!(norm > 1e-300))
                throw StepFailure("argument tracking: trajectory hit the origin");
            const double arg_new = std::atan2(out.y[1], out.y[0]);
            const double darg = std::remainder(arg_new - arg_prev, kTwoPi);
            if (std::abs(darg) >= kArgMaxStep) {
                h *= 0.5;
                if (h < h_min)
                    throw StepFailure("argument tracking: lift refinement exhausted");
                continue;
            }
            const bool hit_end = (t1 - (t + h)) < 1e-12 * span;
            t = hit_end ? t1 : t + h;
            y = out.y;
            arg_prev = arg_new;
            delta += darg;
            h = std::min(detail::dp45_next_h(h, out.err), span / 16.0);
            break;
        }
    }
    return {{y[0], y[1]}, delta};
}

}  // namespace spindex
