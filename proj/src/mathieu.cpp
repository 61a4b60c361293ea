#include "spindex/mathieu.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spindex/errors.hpp"
#include "spindex/phase.hpp"

namespace spindex::mathieu {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this |D| margin the component sign of a region sample is taken
// from the extended-precision trace instead of the double pipeline.
constexpr double kSignOracleBand = 1e-6;

// h values under this are treated as undetectable by the double backend.
constexpr double kDoubleNoiseFloor = 1e-10;

StepControl scan_ctrl() {
    StepControl ctrl;
    ctrl.rel_tol = 1e-11;
    ctrl.abs_tol = 1e-13;
    return ctrl;
}

StepControl curve_ctrl() {
    StepControl ctrl;
    ctrl.rel_tol = 1e-12;
    ctrl.abs_tol = 1e-14;
    return ctrl;
}

double fast_trace(double omega2, double eps) {
    const HamiltonianSpec spec = make_spec({omega2, eps});
    const Mat2 m =
        advance_matrix(spec, Mat2::identity(), 0.0, kPi, curve_ctrl());
    return m.trace();
}

/// Fixed-step RK4 on the fundamental matrix in long double. Step count
/// grows with the tongue label's frequency scale so that the truncation
/// error stays below ~1e-14 even around omega ~ 4.
long double precise_trace_impl(long double omega2, long double eps) {
    const int steps = 60000;
    const long double pi_l = 3.14159265358979323846264338327950288L;
    const long double h = pi_l / steps;
    // State: columns of the fundamental matrix, z = (p, q).
    long double a = 1.0L, b = 0.0L, c = 0.0L, d = 1.0L;
    auto deriv = [&](long double t, long double p1, long double q1,
                     long double p2, long double q2, long double out[4]) {
        const long double s = omega2 + eps * std::cos(2.0L * t);
        out[0] = -s * q1;
        out[1] = p1;
        out[2] = -s * q2;
        out[3] = p2;
    };
    for (int i = 0; i < steps; ++i) {
        const long double t = h * i;
        long double k1[4], k2[4], k3[4], k4[4];
        deriv(t, a, c, b, d, k1);
        deriv(t + 0.5L * h, a + 0.5L * h * k1[0], c + 0.5L * h * k1[1],
              b + 0.5L * h * k1[2], d + 0.5L * h * k1[3], k2);
        deriv(t + 0.5L * h, a + 0.5L * h * k2[0], c + 0.5L * h * k2[1],
              b + 0.5L * h * k2[2], d + 0.5L * h * k2[3], k3);
        deriv(t + h, a + h * k3[0], c + h * k3[1], b + h * k3[2],
              d + h * k3[3], k4);
        a += h / 6.0L * (k1[0] + 2.0L * k2[0] + 2.0L * k3[0] + k4[0]);
        c += h / 6.0L * (k1[1] + 2.0L * k2[1] + 2.0L * k3[1] + k4[1]);
        b += h / 6.0L * (k1[2] + 2.0L * k2[2] + 2.0L * k3[2] + k4[2]);
        d += h / 6.0L * (k1[3] + 2.0L * k2[3] + 2.0L * k3[3] + k4[3]);
    }
    return a + d;
}

/// Golden-section maximization of f on [lo, hi] (f unimodal there).
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double xtol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > xtol) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? x1 : x2;
}

/// Illinois (modified regula falsi) root finder; stops when |f| <= ftol.
double illinois(const std::function<double(double)>& f, double lo, double hi,
                double flo, double fhi, double ftol) {
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw LostBracket("root bracket does not straddle zero");
    for (int it = 0; it < 200; ++it) {
        const double x = (lo * fhi - hi * flo) / (fhi - flo);
        const double fx = f(x);
        if (std::abs(fx) <= ftol) return x;
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
            fhi *= 0.5;
        } else {
            hi = x;
            fhi = fx;
            flo *= 0.5;
        }
        if (std::abs(hi - lo) < 1e-17 * std::max(1.0, std::abs(lo)))
            return 0.5 * (lo + hi);
    }
    throw LostBracket("root iteration did not converge");
}

/// Signed tongue detector: h(omega2) = s * (tr(omega2) - target) with
/// s chosen so that h > 0 strictly inside the tongue.
struct TongueProblem {
    int n;
    double eps;
    double target;  // +2 (even n) or -2 (odd n)
    double sign;    // +1 even, -1 odd

    double h_fast(double omega2) const {
        return sign * (fast_trace(omega2, eps) - target);
    }
    double h_precise(double omega2) const {
        return static_cast<double>(
            static_cast<long double>(sign) *
            (precise_trace_impl(omega2, eps) -
             static_cast<long double>(target)));
    }
};

}  // namespace

HamiltonianSpec make_spec(const MathieuParams& params) {
    if (params.omega2 < 0.0)
        throw Error("mathieu: omega2 must be nonnegative");
    HamiltonianSpec spec;
    spec.period = kPi;
    spec.smoothness = Smoothness::Smooth;
    const double omega2 = params.omega2;
    const double eps = params.eps;
    spec.S = [omega2, eps](double t) {
        return Mat2{1.0, 0.0, 0.0, omega2 + eps * std::cos(2.0 * t)};
    };
    return spec;
}

double monodromy_trace(const MathieuParams& params) {
    return fast_trace(params.omega2, params.eps);
}

double precise_trace(const MathieuParams& params) {
    return static_cast<double>(precise_trace_impl(params.omega2, params.eps));
}

std::vector<ScanCell> scan_plane(const ScanGrid& grid, double deg_tol) {
    if (grid.omega2_count < 1 || grid.eps_count < 1)
        throw Error("scan_plane: grid counts must be positive");
    std::vector<ScanCell> cells;
    cells.reserve(static_cast<std::size_t>(grid.omega2_count) * grid.eps_count);
    const StepControl ctrl = scan_ctrl();
    for (int io = 0; io < grid.omega2_count; ++io) {
        const double omega2 =
            grid.omega2_count == 1
                ? grid.omega2_min
                : grid.omega2_min + (grid.omega2_max - grid.omega2_min) * io /
                                        (grid.omega2_count - 1);
        for (int ie = 0; ie < grid.eps_count; ++ie) {
            const double eps =
                grid.eps_count == 1
                    ? grid.eps_min
                    : grid.eps_min +
                          (grid.eps_max - grid.eps_min) * ie / (grid.eps_count - 1);
            ScanCell cell;
            cell.params = {omega2, eps};
            const HamiltonianSpec spec = make_spec(cell.params);
            const SampledSymplecticPath two = integrate_fundamental(spec, 2, ctrl);
            const SampledSymplecticPath one = prefix_periods(two, 1);
            cell.report = make_index_report(one, {0.0, kPi}, deg_tol, &two);
            cell.tr1 = cell.report.tr1;
            cell.tr2 = two.monodromy().trace();
            cell.report.tr2 = cell.tr2;
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

TongueBounds tongue_boundaries_at(int n, double eps, double curve_tol) {
    if (n < 1) throw Error("tongue_boundaries_at: n must be >= 1");
    if (!(eps > 0.0)) throw Error("tongue_boundaries_at: eps must be positive");

    TongueProblem prob;
    prob.n = n;
    prob.eps = eps;
    prob.sign = n % 2 == 0 ? 1.0 : -1.0;
    prob.target = n % 2 == 0 ? 2.0 : -2.0;

    const double center = static_cast<double>(n) * n;
    const double width = std::max(0.5, (n == 1 ? 0.75 : 0.5) * eps);
    const double lo = std::max(center - width, 1e-3);
    const double hi = center + width;

    // Locate the interior: tr is unimodal toward the tongue in this window.
    TongueBounds out{0.0, 0.0, false};
    std::function<double(double)> h = [&](double x) { return prob.h_fast(x); };
    double peak = golden_max(h, lo, hi, 1e-10);
    double hpeak = h(peak);
    if (hpeak <= kDoubleNoiseFloor) {
        // Tongue thinner than double resolution; go to extended precision.
        out.used_precise = true;
        h = [&](double x) { return prob.h_precise(x); };
        peak = golden_max(h, lo, hi, 1e-12);
        hpeak = h(peak);
        if (hpeak <= 1e-15) {
            std::ostringstream msg;
            msg << "tongue " << n << " at eps = " << eps
                << " is below numerical resolution (peak h = " << hpeak << ")";
            throw LostBracket(msg.str());
        }
    }
    const double hlo = h(lo);
    const double hhi = h(hi);
    if (!(hlo < 0.0) || !(hhi < 0.0)) {
        std::ostringstream msg;
        msg << "tongue " << n << " at eps = " << eps
            << " is not bracketed by the search window";
        throw LostBracket(msg.str());
    }
    const double ftol = std::min(curve_tol, std::max(hpeak / 4.0, 1e-16));
    out.left = illinois(h, lo, peak, hlo, hpeak, ftol);
    out.right = illinois(h, peak, hi, hpeak, hhi, ftol);
    if (out.left > out.right) std::swap(out.left, out.right);
    return out;
}

std::vector<TransitionCurve> trace_transition_curves(int n_max, double eps_max,
                                                     double step,
                                                     double curve_tol) {
    if (n_max < 1) throw Error("trace_transition_curves: n_max must be >= 1");
    if (!(step > 0.0) || !(eps_max > 0.0))
        throw Error("trace_transition_curves: step and eps_max must be positive");

    std::vector<TransitionCurve> curves;
    for (int n = 1; n <= n_max; ++n) {
        const int mult = n % 2 == 0 ? +1 : -1;
        TransitionCurve left{n, Branch::Left, mult, {}};
        TransitionCurve right{n, Branch::Right, mult, {}};
        const double foot = static_cast<double>(n) * n;
        left.points.emplace_back(0.0, foot);
        right.points.emplace_back(0.0, foot);
        for (double eps = step; eps <= eps_max + 1e-12; eps += step) {
            const TongueBounds tb = tongue_boundaries_at(n, eps, curve_tol);
            left.points.emplace_back(eps, tb.left);
            right.points.emplace_back(eps, tb.right);
        }
        curves.push_back(std::move(left));
        curves.push_back(std::move(right));
    }
    return curves;
}

DeltaThetaRecord delta_theta(const MathieuParams& params, double p0, double q0,
                             int k_periods, double res_tol) {
    if (p0 == 0.0 && q0 == 0.0)
        throw Error("delta_theta: initial direction must be nonzero");
    if (k_periods < 1) throw Error("delta_theta: k_periods must be >= 1");
    const double norm = std::hypot(p0, q0);
    DeltaThetaRecord rec;
    rec.params = params;
    rec.p0 = p0 / norm;
    rec.q0 = q0 / norm;
    rec.k_periods = k_periods;

    const double omega2 = params.omega2;
    const double eps = params.eps;
    const auto rhs = [omega2, eps](double t, const Vec2& z) -> Vec2 {
        return {-(omega2 + eps * std::cos(2.0 * t)) * z[1], z[0]};
    };
    const ArgTrackResult res = integrate_with_argument(
        rhs, {rec.p0, rec.q0}, 0.0, k_periods * kPi, 1e-11, 1e-13);
    rec.delta_theta = res.delta_arg;
    const double nearest = std::round(rec.delta_theta / kPi) * kPi;
    rec.resonant = std::abs(rec.delta_theta - nearest) <= res_tol;
    return rec;
}

Crossection crossection(double eps, double omega2_max, double curve_tol,
                        double deg_tol) {
    if (!(eps > 0.0)) throw Error("crossection: eps must be positive");
    if (!(omega2_max > 1.0)) throw Error("crossection: omega2_max must exceed 1");

    Crossection cs;
    cs.eps = eps;

    const int n_max = static_cast<int>(std::floor(std::sqrt(omega2_max)));
    std::vector<TongueBounds> tongues;
    for (int n = 1; n <= n_max; ++n)
        tongues.push_back(tongue_boundaries_at(n, eps, curve_tol));

    // The chosen eps must lie below the first tongue's intersection with
    // the eps axis: its left boundary must still be at positive omega2.
    if (!(tongues.front().left > 2e-3)) {
        std::ostringstream msg;
        msg << "crossection: eps = " << eps
            << " is not below the first tongue's intersection with the eps axis";
        throw Error(msg.str());
    }

    for (const TongueBounds& tb : tongues) {
        if (tb.right > omega2_max)
            throw Error("crossection: tongue extends beyond omega2_max");
        cs.boundaries.push_back(tb.left);
        cs.boundaries.push_back(tb.right);
    }

    const StepControl ctrl = scan_ctrl();
    const double omega2_min = 1e-2;
    std::vector<std::pair<double, double>> spans;
    double prev = omega2_min;
    for (std::size_t i = 0; i < cs.boundaries.size(); ++i) {
        spans.emplace_back(prev, cs.boundaries[i]);
        prev = cs.boundaries[i];
    }
    spans.emplace_back(prev, omega2_max);

    for (const auto& [lo, hi] : spans) {
        CrossectionRegion reg;
        reg.lo = lo;
        reg.hi = hi;
        reg.sample = 0.5 * (lo + hi);
        const HamiltonianSpec spec = make_spec({reg.sample, eps});
        const SampledSymplecticPath one = integrate_fundamental(spec, 1, ctrl);
        const double tr = one.monodromy().trace();
        reg.tr1 = tr;

        auto component = [&](double phi) -> ComponentSign {
            const double dv = 2.0 * std::cos(phi) - tr;
            if (std::abs(dv) > kSignOracleBand)
                return dv < 0.0 ? ComponentSign::Plus : ComponentSign::Minus;
            reg.oracle_assisted = true;
            const double tr_p = precise_trace({reg.sample, eps});
            const double dv_p = 2.0 * std::cos(phi) - tr_p;
            if (std::abs(dv_p) <= 1e-15) {
                std::ostringstream msg;
                msg << "crossection: region sample at omega2 = " << reg.sample
                    << " is degenerate beyond extended precision";
                throw DegenerateEndpoint(phi, dv_p, msg.str());
            }
            reg.tr1 = tr_p;
            return dv_p < 0.0 ? ComponentSign::Plus : ComponentSign::Minus;
        };

        const ComponentSign s_plus = component(0.0);
        const ComponentSign s_minus = component(kPi);
        reg.i1 = index_omega_signed(one, OmegaPoint{0.0}, s_plus);
        reg.i_minus1 = index_omega_signed(one, OmegaPoint{kPi}, s_minus);
        reg.i2 = reg.i1 + reg.i_minus1;
        if (!reg.oracle_assisted) {
            // Cross-check against the standard double-cover route.
            const int i2_cover = index_i2(one, deg_tol);
            if (i2_cover != reg.i2)
                throw CrossCheckMismatch("crossection: i2 routes disagree");
            reg.stability = classify_stability(one.monodromy(), deg_tol).kind;
        } else {
            reg.stability = std::abs(reg.tr1) < 2.0 ? Stability::Elliptic
                            : reg.tr1 > 2.0 ? Stability::HyperbolicPositive
                                            : Stability::HyperbolicNegative;
        }
        cs.regions.push_back(reg);
    }
    return cs;
}

}  // namespace spindex::mathieu
