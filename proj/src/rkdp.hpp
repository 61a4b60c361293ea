#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

// Dormand-Prince 5(4) embedded step, shared by the fundamental-solution
// integrator and the phase trackers. Header is internal to src/.

namespace spindex::detail {

template <std::size_t N>
using Arr = std::array<double, N>;

template <std::size_t N>
Arr<N> axpy(const Arr<N>& y, double h, const Arr<N>& k) {
    Arr<N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + h * k[i];
    return r;
}

template <std::size_t N>
struct Dp45Out {
    Arr<N> y;    ///< 5th-order solution at t + h
    double err;  ///< scaled error norm; <= 1 means acceptable
};

/// One embedded step of the Dormand-Prince 5(4) pair. f(t, y) -> dy/dt.
template <std::size_t N, class F>
Dp45Out<N> dp45_step(F&& f, double t, const Arr<N>& y, double h, double rtol,
                     double atol) {
    constexpr double a21 = 1.0 / 5.0;
    constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                     a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
    constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                     a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                     a65 = -5103.0 / 18656.0;
    constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                     b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
    constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                     c5 = 8.0 / 9.0;
    constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                     e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                     e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

    const Arr<N> k1 = f(t, y);
    Arr<N> w;
    for (std::size_t i = 0; i < N; ++i) w[i] = y[i] + h * a21 * k1[i];
    const Arr<N> k2 = f(t + c2 * h, w);
    for (std::size_t i = 0; i < N; ++i)
        w[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    const Arr<N> k3 = f(t + c3 * h, w);
    for (std::size_t i = 0; i < N; ++i)
        w[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    const Arr<N> k4 = f(t + c4 * h, w);
    for (std::size_t i = 0; i < N; ++i)
        w[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    const Arr<N> k5 = f(t + c5 * h, w);
    for (std::size_t i = 0; i < N; ++i)
        w[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                           a64 * k4[i] + a65 * k5[i]);
    const Arr<N> k6 = f(t + h, w);

    Dp45Out<N> out;
    for (std::size_t i = 0; i < N; ++i)
        out.y[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                               b5 * k5[i] + b6 * k6[i]);
    const Arr<N> k7 = f(t + h, out.y);

    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                              e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double scale =
            atol + rtol * std::max(std::abs(y[i]), std::abs(out.y[i]));
        err = std::max(err, std::abs(e) / scale);
    }
    out.err = err;
    return out;
}

/// PI-free step-size update from the scaled error of an accepted or
/// rejected step.
inline double dp45_next_h(double h, double err) {
    const double fac = 0.9 * std::pow(std::max(err, 1e-12), -0.2);
    return h * std::clamp(fac, 0.2, 5.0);
}

}  // namespace spindex::detail
