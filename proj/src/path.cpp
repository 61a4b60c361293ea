#include "spindex/path.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rkdp.hpp"
#include "spindex/errors.hpp"
#include "spindex/sp2.hpp"

namespace spindex {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Largest admissible lift increment per grid interval. Stricter than the
// pi/2 contract so that wrap-around selection has margin.
constexpr double kLiftMaxStep = 1.0;

constexpr int kMaxLiftBisections = 48;

using detail::Arr;

Arr<4> to_arr(const Mat2& m) { return {m.a, m.b, m.c, m.d}; }
Mat2 to_mat(const Arr<4>& v) { return {v[0], v[1], v[2], v[3]}; }

double fold_period(double t, double T) {
    double tm = t - T * std::floor(t / T);
    if (tm >= T) tm -= T;  // guard against rounding at exact multiples
    return tm;
}

/// Renormalize det to 1 by the symmetric scaling det^{-1/2}.
Mat2 pin_determinant(const Mat2& m) {
    const double det = m.det();
    if (!(det > 0.0)) {
        std::ostringstream msg;
        msg << "integration produced a matrix with det = " << det;
        throw StepFailure(msg.str());
    }
    return m * (1.0 / std::sqrt(det));
}

/// Hard time stops in (t0, t1]: period boundaries and (for
/// piecewise-constant systems) every discontinuity. Steps never cross one.
std::vector<double> collect_stops(const HamiltonianSpec& spec, double t0,
                                  double t1) {
    std::vector<double> stops;
    const double T = spec.period;
    const long j0 = static_cast<long>(std::floor(t0 / T));
    const long j1 = static_cast<long>(std::ceil(t1 / T)) + 1;
    for (long j = j0; j <= j1; ++j) {
        const double base = static_cast<double>(j) * T;
        if (spec.smoothness == Smoothness::PiecewiseConstant) {
            for (double b : spec.breakpoints) {
                const double s = base + b;
                if (s > t0 && s < t1) stops.push_back(s);
            }
        }
        if (base > t0 && base < t1) stops.push_back(base);
    }
    stops.push_back(t1);
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end(),
                            [&](double x, double y) {
                                return std::abs(x - y) < 1e-12 * std::max(1.0, T);
                            }),
                stops.end());
    return stops;
}

struct Stepper {
    const HamiltonianSpec& spec;
    const StepControl& ctrl;
    double h;  // current step proposal

    explicit Stepper(const HamiltonianSpec& s, const StepControl& c)
        : spec(s), ctrl(c) {
        h = c.initial_step > 0.0 ? c.initial_step : s.period / 200.0;
        h = std::min(h, max_h());
    }

    [[nodiscard]] double max_h() const {
        return spec.period * ctrl.max_step_fraction;
    }
    [[nodiscard]] double min_h() const {
        return spec.period * ctrl.min_step_fraction;
    }

    /// One error-controlled step of length exactly hstep from (t, y).
    /// Returns the pinned matrix; err_out carries the accepted error.
    Mat2 attempt(double t, const Mat2& y, double hstep, double& err_out) const {
        Mat2 s_mid{};
        const bool frozen = spec.smoothness == Smoothness::PiecewiseConstant;
        if (frozen) s_mid = spec.S(t + 0.5 * hstep);
        auto rhs = [&](double tt, const Arr<4>& v) -> Arr<4> {
            const Mat2 s = frozen ? s_mid : spec.S(tt);
            return to_arr(kJ * s * to_mat(v));
        };
        const auto out =
            detail::dp45_step<4>(rhs, t, to_arr(y), hstep, ctrl.rel_tol, ctrl.abs_tol);
        err_out = out.err;
        return to_mat(out.y);
    }
};

}  // namespace

HamiltonianSpec constant_spec(const Mat2& S, double T) {
    HamiltonianSpec spec;
    spec.S = [S](double) { return S; };
    spec.period = T;
    spec.smoothness = Smoothness::PiecewiseConstant;
    return spec;
}

HamiltonianSpec piecewise_spec(const std::vector<double>& ends,
                               const std::vector<Mat2>& mats) {
    if (ends.empty() || ends.size() != mats.size())
        throw Error("piecewise_spec: need one S per segment end");
    for (std::size_t k = 0; k + 1 < ends.size(); ++k)
        if (!(ends[k] < ends[k + 1]))
            throw Error("piecewise_spec: segment ends must be strictly increasing");
    if (!(ends.front() > 0.0))
        throw Error("piecewise_spec: first segment end must be positive");
    const double T = ends.back();
    HamiltonianSpec spec;
    spec.period = T;
    spec.smoothness = Smoothness::PiecewiseConstant;
    spec.breakpoints.assign(ends.begin(), ends.end() - 1);
    spec.S = [ends, mats, T](double t) {
        const double tm = fold_period(t, T);
        const auto it = std::upper_bound(ends.begin(), ends.end(), tm);
        const std::size_t k =
            std::min<std::size_t>(static_cast<std::size_t>(it - ends.begin()),
                                  mats.size() - 1);
        return mats[k];
    };
    return spec;
}

void validate_spec(const HamiltonianSpec& spec) {
    if (!spec.S) throw Error("HamiltonianSpec: missing S callback");
    if (!(spec.period > 0.0)) throw Error("HamiltonianSpec: period must be positive");
    const double T = spec.period;
    // Probe points: a fixed sample plus segment midpoints.
    std::vector<double> probes;
    for (int i = 0; i < 16; ++i) probes.push_back(T * (i + 0.37) / 16.0);
    if (spec.smoothness == Smoothness::PiecewiseConstant) {
        double prev = 0.0;
        for (double b : spec.breakpoints) {
            probes.push_back(0.5 * (prev + b));
            prev = b;
        }
        probes.push_back(0.5 * (prev + T));
    }
    for (double t : probes) {
        const Mat2 s = spec.S(t);
        const double scale = std::max(1.0, s.max_abs());
        if (std::abs(s.b - s.c) > 1e-9 * scale) {
            std::ostringstream msg;
            msg << "S(" << t << ") is not symmetric: s12 = " << s.b
                << ", s21 = " << s.c;
            throw NonSymmetric(msg.str());
        }
        const Mat2 sT = spec.S(t + T);
        if ((sT - s).max_abs() > 1e-12 * scale) {
            std::ostringstream msg;
            msg << "S is not " << T << "-periodic at t = " << t;
            throw Error(msg.str());
        }
    }
}

SampledSymplecticPath integrate_fundamental(const HamiltonianSpec& spec,
                                            int n_periods,
                                            const StepControl& ctrl) {
    if (n_periods < 1) throw Error("integrate_fundamental: n_periods must be >= 1");
    validate_spec(spec);

    const double T = spec.period;
    const double t_end = static_cast<double>(n_periods) * T;
    const auto stops = collect_stops(spec, 0.0, t_end);

    SampledSymplecticPath path;
    path.spec = spec;
    path.periods = n_periods;
    path.times.push_back(0.0);
    path.mats.push_back(Mat2::identity());
    path.lift.push_back(0.0);

    Stepper stepper(spec, ctrl);
    Mat2 y = Mat2::identity();
    double t = 0.0;
    double theta_prev = 0.0;  // rotation_angle(I)
    std::size_t stop_idx = 0;
    long lingering = 0;

    while (stop_idx < stops.size()) {
        const double stop = stops[stop_idx];
        if (t >= stop) {
            ++stop_idx;
            continue;
        }
        double h = std::min(stepper.h, stop - t);
        int bisections = 0;
        for (;;) {
            double err = 0.0;
            Mat2 y_new = stepper.attempt(t, y, h, err);
            if (err > 1.0) {
                h = std::min(detail::dp45_next_h(h, err), stop - t);
                if (h < stepper.min_h())
                    throw StepFailure("integrate_fundamental: step size underflow");
                continue;
            }
            y_new = pin_determinant(y_new);
            const double theta_new = rotation_angle(y_new);
            const double dtheta = std::remainder(theta_new - theta_prev, kTwoPi);
            if (std::abs(dtheta) >= kLiftMaxStep) {
                // Lift ambiguity: refine until the branch is unambiguous.
                h *= 0.5;
                if (++bisections > kMaxLiftBisections || h < stepper.min_h())
                    throw StepFailure(
                        "integrate_fundamental: lift refinement exhausted");
                continue;
            }
            const bool hit_stop = (stop - (t + h)) < 1e-12 * T;
            t = hit_stop ? stop : t + h;
            y = y_new;
            theta_prev = theta_new;
            path.times.push_back(t);
            path.mats.push_back(y);
            path.lift.push_back(path.lift.back() + dtheta);
            if (std::abs(std::abs(y.trace()) - 2.0) <= kEigTol) ++lingering;
            stepper.h = std::min(detail::dp45_next_h(h, err), stepper.max_h());
            break;
        }
        if (static_cast<int>(path.times.size()) > ctrl.max_nodes)
            throw StepFailure("integrate_fundamental: node budget exceeded");
    }

    path.parabolic_lingering =
        lingering * 10 > static_cast<long>(path.times.size());
    return path;
}

Mat2 advance_matrix(const HamiltonianSpec& spec, Mat2 y, double t0, double t1,
                    const StepControl& ctrl) {
    if (!(t1 > t0)) return y;
    const auto stops = collect_stops(spec, t0, t1);
    Stepper stepper(spec, ctrl);
    double t = t0;
    std::size_t stop_idx = 0;
    while (stop_idx < stops.size()) {
        const double stop = stops[stop_idx];
        if (t >= stop) {
            ++stop_idx;
            continue;
        }
        double h = std::min(stepper.h, stop - t);
        for (;;) {
            double err = 0.0;
            const Mat2 y_new = stepper.attempt(t, y, h, err);
            if (err > 1.0) {
                h = std::min(detail::dp45_next_h(h, err), stop - t);
                if (h < stepper.min_h())
                    throw StepFailure("advance_matrix: step size underflow");
                continue;
            }
            const bool hit_stop = (stop - (t + h)) < 1e-12 * spec.period;
            t = hit_stop ? stop : t + h;
            y = pin_determinant(y_new);
            stepper.h = std::min(detail::dp45_next_h(h, err), stepper.max_h());
            break;
        }
    }
    return y;
}

SampledSymplecticPath iterate_path(const SampledSymplecticPath& one_period, int m) {
    if (m < 1) throw Error("iterate_path: m must be >= 1");
    if (one_period.periods != 1)
        throw Error("iterate_path: input must cover exactly one period");
    if (m == 1) return one_period;

    const double T = one_period.period();
    std::vector<double> btimes = one_period.times;
    std::vector<Mat2> bmats = one_period.mats;

    std::vector<Mat2> powers(static_cast<std::size_t>(m));
    powers[0] = Mat2::identity();
    for (int j = 1; j < m; ++j) powers[j] = one_period.monodromy() * powers[j - 1];

    StepControl tight;
    tight.rel_tol = 1e-12;
    tight.abs_tol = 1e-14;

    SampledSymplecticPath out;
    out.spec = one_period.spec;
    out.periods = m;

    int inserted = 0;
    constexpr int kInsertBudget = 4096;
    for (;;) {
        const std::size_t K = btimes.size();
        out.times.clear();
        out.mats.clear();
        out.lift.clear();
        std::vector<std::pair<int, std::size_t>> src;  // (block, base index)
        for (int j = 0; j < m; ++j) {
            for (std::size_t i = (j == 0 ? 0u : 1u); i < K; ++i) {
                out.times.push_back(static_cast<double>(j) * T + btimes[i]);
                out.mats.push_back(bmats[i] * powers[j]);
                src.emplace_back(j, i);
            }
        }
        // Re-track the lift; on a branch ambiguity refine the base grid.
        out.lift.assign(out.times.size(), 0.0);
        double theta_prev = rotation_angle(out.mats.front());
        bool refined = false;
        for (std::size_t g = 1; g < out.mats.size(); ++g) {
            const double theta = rotation_angle(out.mats[g]);
            const double dtheta = std::remainder(theta - theta_prev, kTwoPi);
            if (std::abs(dtheta) >= kLiftMaxStep) {
                const auto [jb, ib] = src[g];
                if (ib == 0)
                    throw StepFailure("iterate_path: cannot refine at a seam");
                const double ta = btimes[ib - 1];
                const double tb = btimes[ib];
                const double tm = 0.5 * (ta + tb);
                if (!one_period.spec.S || ++inserted > kInsertBudget ||
                    tb - ta < 1e-12 * T)
                    throw StepFailure("iterate_path: lift refinement exhausted");
                const Mat2 mid =
                    advance_matrix(one_period.spec, bmats[ib - 1], ta, tm, tight);
                btimes.insert(btimes.begin() + static_cast<long>(ib), tm);
                bmats.insert(bmats.begin() + static_cast<long>(ib),
                             pin_determinant(mid));
                refined = true;
                break;
            }
            out.lift[g] = out.lift[g - 1] + dtheta;
            theta_prev = theta;
        }
        if (!refined) break;
    }

    long lingering = 0;
    for (const Mat2& a : out.mats)
        if (std::abs(std::abs(a.trace()) - 2.0) <= kEigTol) ++lingering;
    out.parabolic_lingering = lingering * 10 > static_cast<long>(out.mats.size());
    return out;
}

SampledSymplecticPath prefix_periods(const SampledSymplecticPath& path, int j) {
    if (j < 1 || j > path.periods)
        throw Error("prefix_periods: requested prefix outside the path");
    if (j == path.periods) return path;
    const double target = static_cast<double>(j) * path.period();
    const double tol = 1e-12 * path.period() * j;
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        if (std::abs(path.times[k] - target) <= tol) {
            SampledSymplecticPath out;
            out.spec = path.spec;
            out.periods = j;
            out.times.assign(path.times.begin(), path.times.begin() + k + 1);
            out.mats.assign(path.mats.begin(), path.mats.begin() + k + 1);
            out.lift.assign(path.lift.begin(), path.lift.begin() + k + 1);
            out.parabolic_lingering = path.parabolic_lingering;
            return out;
        }
    }
    throw InternalCheckFailure("prefix_periods: period boundary node missing");
}

}  // namespace spindex
