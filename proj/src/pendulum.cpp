#include "spindex/pendulum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spindex/errors.hpp"
#include "spindex/phase.hpp"

namespace spindex::pendulum {

namespace {

constexpr double kPi = std::numbers::pi;

void validate_problem(const PendulumProblem& p) {
    if (!(p.beta > 0.0)) throw Error("pendulum: beta must be positive");
    if (!(p.period > 0.0)) throw Error("pendulum: period must be positive");
    if (p.forcing.coeffs.size() == 0 ||
        std::abs(p.forcing.period - p.period) > 1e-12 * p.period)
        throw Error("pendulum: forcing series does not match the period");
    if (p.forcing.coeffs[0] != 0.0)
        throw Error("pendulum: forcing must have zero mean");
}

}  // namespace

bool PendulumProblem::ortega_condition() const {
    const double bound = (kPi / period) * (kPi / period);
    return beta > 0.0 && beta <= bound;
}

bool PendulumProblem::forcing_is_zero() const {
    return forcing.coeffs.isZero(0.0);
}

PendulumProblem make_problem(double beta, double period,
                             const std::vector<double>& cos_coeffs,
                             const std::vector<double>& sin_coeffs,
                             int modes) {
    if (static_cast<int>(cos_coeffs.size()) > modes ||
        static_cast<int>(sin_coeffs.size()) > modes)
        throw Error("pendulum: forcing has more modes than the discretization");
    PendulumProblem p;
    p.beta = beta;
    p.period = period;
    p.forcing = LoopRepr::constant(0.0, period, modes);
    for (std::size_t j = 0; j < cos_coeffs.size(); ++j)
        p.forcing.coeffs[1 + j] = cos_coeffs[j];
    for (std::size_t j = 0; j < sin_coeffs.size(); ++j)
        p.forcing.coeffs[1 + modes + j] = sin_coeffs[j];
    validate_problem(p);
    return p;
}

PendulumProblem problem_from_samples(
    double beta, double period,
    const std::vector<std::pair<double, double>>& samples, int modes) {
    const int dim = 2 * modes + 1;
    if (static_cast<int>(samples.size()) < dim)
        throw Error("pendulum: need at least 2N+1 samples to fit N modes");
    Eigen::MatrixXd basis(samples.size(), dim);
    Eigen::VectorXd rhs(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double t = samples[i].first;
        rhs[i] = samples[i].second;
        basis(i, 0) = 1.0;
        for (int j = 1; j <= modes; ++j) {
            const double w = 2.0 * kPi * j / period;
            basis(i, j) = std::cos(w * t);
            basis(i, modes + j) = std::sin(w * t);
        }
    }
    Eigen::VectorXd c = basis.colPivHouseholderQr().solve(rhs);
    c[0] = 0.0;  // zero-mean projection
    PendulumProblem p;
    p.beta = beta;
    p.period = period;
    p.forcing = LoopRepr::from_coeffs(period, std::move(c));
    validate_problem(p);
    return p;
}

LagrangianSpec make_lagrangian(const PendulumProblem& problem) {
    validate_problem(problem);
    const double beta = problem.beta;
    const LoopRepr f = problem.forcing;
    LagrangianSpec spec;
    spec.period = problem.period;
    spec.L = [beta, f](double t, double x, double p) {
        return 0.5 * p * p + beta * std::cos(x) + x * f.value(t);
    };
    spec.L_x = [beta, f](double t, double x, double) {
        return -beta * std::sin(x) + f.value(t);
    };
    spec.L_p = [](double, double, double p) { return p; };
    spec.P = [](double, double, double) { return 1.0; };
    spec.Q = [](double, double, double) { return 0.0; };
    spec.R = [beta](double, double x, double) { return -beta * std::cos(x); };
    return spec;
}

RotationBound rotation_bound_check(const PendulumProblem& problem,
                                   const LoopRepr& u, int k_periods,
                                   int n_directions, double strict_tol) {
    validate_problem(problem);
    if (k_periods < 1) throw Error("rotation_bound_check: k_periods must be >= 1");
    if (n_directions < 1) throw Error("rotation_bound_check: need directions");

    const double beta = problem.beta;
    const auto rhs = [beta, u](double t, const Vec2& z) -> Vec2 {
        // z = (x, y), y = -xdot: xdot = -y, ydot = beta cos(u(t)) x.
        return {-z[1], beta * std::cos(u.value(t)) * z[0]};
    };

    RotationBound rb;
    rb.k_periods = k_periods;
    rb.bound = k_periods * kPi;
    rb.per_direction.reserve(static_cast<std::size_t>(n_directions));
    const double t1 = k_periods * problem.period;
    for (int i = 0; i < n_directions; ++i) {
        // Equispaced Lagrangian lines: angles i pi / n.
        const double a = kPi * i / n_directions;
        const ArgTrackResult res = integrate_with_argument(
            rhs, {std::cos(a), std::sin(a)}, 0.0, t1, 1e-11, 1e-13);
        rb.per_direction.push_back(res.delta_arg);
    }
    rb.max_delta_theta =
        *std::max_element(rb.per_direction.begin(), rb.per_direction.end());
    rb.holds = rb.max_delta_theta < rb.bound - strict_tol;
    return rb;
}

namespace {

OrbitReport analyze_orbit(const PendulumProblem& problem,
                          const LagrangianSpec& lag, const CriticalPoint& cp) {
    OrbitReport rep;
    rep.point = cp;
    const HamiltonianSpec ham = linearize_extremal(lag, cp.loop);
    StepControl ctrl;
    ctrl.rel_tol = 1e-11;
    ctrl.abs_tol = 1e-13;
    const SampledSymplecticPath two = integrate_fundamental(ham, 2, ctrl);
    const SampledSymplecticPath one = prefix_periods(two, 1);
    rep.indices = make_index_report(one, {0.0, kPi}, kDegTol, &two);
    rep.indices.tr2 = two.monodromy().trace();

    // Morse index equals the Conley-Zehnder index for nondegenerate
    // Legendre-convex extremals; a mismatch is a bug, not a property of
    // the input.
    if (rep.indices.i1 && *rep.indices.i1 != cp.morse_index) {
        std::ostringstream msg;
        msg << "Morse index " << cp.morse_index << " != i1 = "
            << *rep.indices.i1;
        throw CrossCheckMismatch(msg.str());
    }

    rep.bounds.push_back(rotation_bound_check(problem, cp.loop, 1));
    rep.bounds.push_back(rotation_bound_check(problem, cp.loop, 2));
    return rep;
}

}  // namespace

PendulumReport solve(const PendulumProblem& problem, const SolverOptions& opts) {
    validate_problem(problem);
    const LagrangianSpec lag = make_lagrangian(problem);

    PendulumReport rep;
    rep.beta = problem.beta;
    rep.period = problem.period;
    rep.ortega_condition = problem.ortega_condition();
    rep.forcing_zero = problem.forcing_is_zero();

    const LoopRepr seed =
        LoopRepr::constant(kPi, problem.period, opts.modes, opts.grid);
    const CriticalPoint q1 = find_minimizer(lag, seed, opts);

    // The 2 pi translate is critical with the same action (the forcing has
    // zero mean); reuse it as the far endpoint of the mountain-pass path.
    CriticalPoint q1_shift = q1;
    q1_shift.loop = q1.loop.shifted(2.0 * kPi);
    q1_shift.action = action_value(lag, q1_shift.loop);

    const CriticalPoint q2 = find_mountain_pass(lag, q1, q1_shift, opts);

    rep.q1 = analyze_orbit(problem, lag, q1);
    rep.q2 = analyze_orbit(problem, lag, q2);

    const bool nondegenerate = rep.q1.indices.i1 && rep.q1.indices.i2 &&
                               rep.q2.indices.i1 && rep.q2.indices.i2;
    if (rep.ortega_condition && !rep.forcing_zero && nondegenerate) {
        rep.assertions_checked = true;
        std::ostringstream bad;
        const auto& v1 = rep.q1.indices.stability;
        if (v1.kind != Stability::HyperbolicPositive ||
            !(v1.mult_a.real() > 0.0) || v1.mult_a.imag() != 0.0)
            bad << "q1 is not hyperbolic with positive multipliers; ";
        if (*rep.q2.indices.i1 != 1) bad << "i1(q2) != 1; ";
        if (*rep.q2.indices.i2 != 1) bad << "i2(q2) != 1; ";
        if (rep.q2.indices.stability.kind != Stability::Elliptic)
            bad << "q2 is not elliptic; ";
        if (*rep.q1.indices.i2 > 1 || *rep.q2.indices.i2 > 1)
            bad << "i2 exceeds 1; ";
        for (const auto& orbit : {&rep.q1, &rep.q2})
            for (const RotationBound& rb : orbit->bounds)
                if (!rb.holds) bad << "rotation bound failed for k = "
                                   << rb.k_periods << "; ";
        const std::string msg = bad.str();
        if (!msg.empty())
            throw ConclusionViolated("pendulum stability conclusions failed: " + msg);
    }
    return rep;
}

}  // namespace spindex::pendulum
