#include "spindex/action.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spindex/errors.hpp"

namespace spindex {

namespace {

void check_compatible(const LagrangianSpec& spec, const LoopRepr& loop) {
    if (!(spec.period > 0.0)) throw Error("LagrangianSpec: period must be positive");
    if (std::abs(spec.period - loop.period) > 1e-12 * spec.period)
        throw Error("loop period does not match the Lagrangian period");
    if (loop.grid < 4 * loop.modes + 4)
        throw Error("LoopRepr: quadrature grid must satisfy M >= 4N + 4");
}

struct GridSample {
    Eigen::VectorXd x, xd;
};

GridSample sample(const TrigBasis& basis, const Eigen::VectorXd& c) {
    return {basis.val * c, basis.dval * c};
}

}  // namespace

ActionEvaluator::ActionEvaluator(const LagrangianSpec& spec, double period,
                                 int modes, int grid)
    : spec_(&spec), basis_(period, modes, grid) {}

double ActionEvaluator::action(const Eigen::VectorXd& c) const {
    const GridSample s = sample(basis_, c);
    double acc = 0.0;
    for (int i = 0; i < basis_.grid; ++i)
        acc += spec_->L(basis_.tgrid[i], s.x[i], s.xd[i]);
    return acc * basis_.weight;
}

Eigen::VectorXd ActionEvaluator::gradient_raw(const Eigen::VectorXd& c) const {
    const GridSample s = sample(basis_, c);
    Eigen::VectorXd lx(basis_.grid), lp(basis_.grid);
    for (int i = 0; i < basis_.grid; ++i) {
        lx[i] = spec_->L_x(basis_.tgrid[i], s.x[i], s.xd[i]);
        lp[i] = spec_->L_p(basis_.tgrid[i], s.x[i], s.xd[i]);
    }
    return basis_.weight *
           (basis_.val.transpose() * lx + basis_.dval.transpose() * lp);
}

Eigen::VectorXd ActionEvaluator::riesz(const Eigen::VectorXd& raw) const {
    return raw.cwiseQuotient(basis_.h1_diag);
}

double ActionEvaluator::grad_norm(const Eigen::VectorXd& raw) const {
    return std::sqrt(raw.dot(riesz(raw)));
}

Eigen::MatrixXd ActionEvaluator::hessian(const Eigen::VectorXd& c) const {
    const GridSample s = sample(basis_, c);
    Eigen::VectorXd wp(basis_.grid), wq(basis_.grid), wr(basis_.grid);
    for (int i = 0; i < basis_.grid; ++i) {
        const double t = basis_.tgrid[i];
        const double p = spec_->P(t, s.x[i], s.xd[i]);
        if (!(p > 0.0)) {
            std::ostringstream msg;
            msg << "Legendre condition violated: P(" << t << ") = " << p;
            throw LegendreViolation(msg.str());
        }
        wp[i] = basis_.weight * p;
        wq[i] = basis_.weight * spec_->Q(t, s.x[i], s.xd[i]);
        wr[i] = basis_.weight * spec_->R(t, s.x[i], s.xd[i]);
    }
    Eigen::MatrixXd h =
        basis_.dval.transpose() * (wp.asDiagonal() * basis_.dval) +
        basis_.val.transpose() * (wr.asDiagonal() * basis_.val);
    const Eigen::MatrixXd cross =
        basis_.val.transpose() * (wq.asDiagonal() * basis_.dval);
    h += cross;
    h += cross.transpose();
    return 0.5 * (h + h.transpose());
}

double action_value(const LagrangianSpec& spec, const LoopRepr& loop) {
    check_compatible(spec, loop);
    ActionEvaluator ev(spec, spec.period, loop.modes, loop.grid);
    return ev.action(loop.coeffs);
}

LoopRepr action_gradient(const LagrangianSpec& spec, const LoopRepr& loop) {
    check_compatible(spec, loop);
    ActionEvaluator ev(spec, spec.period, loop.modes, loop.grid);
    return loop.with_coeffs(ev.riesz(ev.gradient_raw(loop.coeffs)));
}

double gradient_norm(const LagrangianSpec& spec, const LoopRepr& loop) {
    check_compatible(spec, loop);
    ActionEvaluator ev(spec, spec.period, loop.modes, loop.grid);
    return ev.grad_norm(ev.gradient_raw(loop.coeffs));
}

Eigen::MatrixXd second_variation(const LagrangianSpec& spec, const LoopRepr& loop) {
    check_compatible(spec, loop);
    ActionEvaluator ev(spec, spec.period, loop.modes, loop.grid);
    return ev.hessian(loop.coeffs);
}

MorseData morse_spectrum(const LagrangianSpec& spec, const LoopRepr& loop,
                         double eig_cutoff_rel) {
    const Eigen::MatrixXd h = second_variation(spec, loop);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h,
                                                      Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    const double cutoff = eig_cutoff_rel * ev.cwiseAbs().maxCoeff();
    MorseData md{0, 0, cutoff, ev.cwiseAbs().minCoeff()};
    for (int i = 0; i < ev.size(); ++i) {
        if (ev[i] < -cutoff)
            ++md.index;
        else if (ev[i] <= cutoff)
            ++md.nullity;
    }
    return md;
}

int morse_index(const LagrangianSpec& spec, const LoopRepr& loop,
                double eig_cutoff_rel) {
    const MorseData md = morse_spectrum(spec, loop, eig_cutoff_rel);
    if (md.nullity > 0) {
        std::ostringstream msg;
        msg << "degenerate extremal: " << md.nullity
            << " second-variation eigenvalue(s) within " << md.cutoff
            << " of zero";
        throw DegenerateHessian(msg.str());
    }
    return md.index;
}

namespace {

/// Newton iteration on the collocated critical-point equations. Returns
/// the polished coefficients; throws NoConvergence.
Eigen::VectorXd newton_polish(const ActionEvaluator& ev, Eigen::VectorXd c,
                              double tol, int max_iters) {
    const double scale = 1.0 + c.norm();
    for (int it = 0; it < max_iters; ++it) {
        const Eigen::VectorXd g = ev.gradient_raw(c);
        if (ev.grad_norm(g) <= tol) return c;
        const Eigen::MatrixXd h = ev.hessian(c);
        const Eigen::VectorXd delta = h.fullPivLu().solve(-g);
        if (!delta.allFinite() || delta.norm() > 1e4 * scale)
            throw NoConvergence("Newton polish diverged");
        c += delta;
    }
    if (ev.grad_norm(ev.gradient_raw(c)) <= tol) return c;
    throw NoConvergence("Newton polish did not reach tolerance");
}

/// H^1 steepest descent with Armijo backtracking until the gradient norm
/// falls below tol.
Eigen::VectorXd descend(const ActionEvaluator& ev, Eigen::VectorXd c, double tol,
                        int max_iters) {
    double sigma = 1.0;
    double a0 = ev.action(c);
    for (int it = 0; it < max_iters; ++it) {
        const Eigen::VectorXd g = ev.gradient_raw(c);
        const double gn = ev.grad_norm(g);
        if (gn <= tol) return c;
        const Eigen::VectorXd dir = ev.riesz(g);
        bool accepted = false;
        for (int bt = 0; bt < 80; ++bt) {
            const Eigen::VectorXd cand = c - sigma * dir;
            const double a_new = ev.action(cand);
            if (a_new <= a0 - 1e-4 * sigma * gn * gn) {
                c = cand;
                a0 = a_new;
                accepted = true;
                break;
            }
            sigma *= 0.5;
        }
        if (!accepted) throw NoConvergence("gradient descent stalled");
        sigma = std::min(sigma * 2.0, 1e4);
    }
    throw NoConvergence("gradient descent exceeded the iteration budget");
}

}  // namespace

CriticalPoint find_minimizer(const LagrangianSpec& spec, const LoopRepr& seed,
                             const SolverOptions& opts) {
    check_compatible(spec, seed);
    ActionEvaluator ev(spec, spec.period, seed.modes, seed.grid);

    Eigen::VectorXd c = descend(ev, seed.coeffs, opts.descent_tol,
                                opts.max_descent_iters);
    c = newton_polish(ev, c, opts.newton_tol, opts.max_newton_iters);

    CriticalPoint cp;
    cp.loop = seed.with_coeffs(c);
    cp.action = ev.action(c);
    cp.grad_norm = ev.grad_norm(ev.gradient_raw(c));
    cp.morse_index = morse_index(spec, cp.loop, opts.eig_cutoff_rel);
    if (cp.morse_index != 0) {
        std::ostringstream msg;
        msg << "converged critical point has Morse index " << cp.morse_index;
        throw NotAMinimizer(msg.str());
    }
    cp.kind = CriticalKind::Minimizer;
    return cp;
}

CriticalPoint find_mountain_pass(const LagrangianSpec& spec,
                                 const CriticalPoint& qa,
                                 const CriticalPoint& qb,
                                 const SolverOptions& opts) {
    check_compatible(spec, qa.loop);
    check_compatible(spec, qb.loop);
    if (qa.loop.modes != qb.loop.modes)
        throw Error("find_mountain_pass: endpoint discretizations differ");
    const int n_nodes = std::max(3, opts.path_nodes);
    ActionEvaluator ev(spec, spec.period, qa.loop.modes, qa.loop.grid);

    // Linear initial path of loops between the two minimizers.
    std::vector<Eigen::VectorXd> node(static_cast<std::size_t>(n_nodes));
    std::vector<double> act(static_cast<std::size_t>(n_nodes));
    for (int s = 0; s < n_nodes; ++s) {
        const double w = static_cast<double>(s) / (n_nodes - 1);
        node[s] = (1.0 - w) * qa.loop.coeffs + w * qb.loop.coeffs;
        act[s] = ev.action(node[s]);
    }

    double sigma = 1.0;
    int peak = 0;
    bool converged = false;
    for (int it = 0; it < opts.max_ridge_iters; ++it) {
        peak = static_cast<int>(
            std::max_element(act.begin(), act.end()) - act.begin());
        if (peak == 0 || peak == n_nodes - 1)
            throw CollapseToEndpoint("mountain pass: action peak slid to an endpoint");

        const Eigen::VectorXd g = ev.gradient_raw(node[peak]);
        const double gn = ev.grad_norm(g);
        if (gn <= opts.descent_tol) {
            converged = true;
            break;
        }
        Eigen::VectorXd dir = ev.riesz(g);
        dir /= gn;  // unit H^1 norm

        const double a0 = act[peak];
        const double floor = std::max(act[peak - 1], act[peak + 1]);
        const double gap = a0 - floor;

        bool accepted = false;
        double local = sigma;
        for (int bt = 0; bt < 80 && !accepted; ++bt) {
            Eigen::VectorXd cand = node[peak] - local * dir;
            double a_new = ev.action(cand);
            if (a_new <= a0 - 1e-4 * local * gn) {
                // Keep the moved node at or above its neighbors so the peak
                // stays resolved; when the three are already level, let it
                // drop and the neighbor takes over as peak.
                if (a_new < floor && gap > 1e-13 * (1.0 + std::abs(a0))) {
                    double lo = 0.0, hi = local;
                    for (int bis = 0; bis < 60; ++bis) {
                        const double mid = 0.5 * (lo + hi);
                        cand = node[peak] - mid * dir;
                        a_new = ev.action(cand);
                        if (a_new < floor)
                            hi = mid;
                        else
                            lo = mid;
                    }
                    cand = node[peak] - lo * dir;
                    a_new = ev.action(cand);
                    if (!(a_new < a0)) break;  // pinched; re-pick the peak
                }
                node[peak] = cand;
                act[peak] = a_new;
                accepted = true;
            } else {
                local *= 0.5;
            }
        }
        if (accepted) {
            sigma = std::min(local * 2.0, 1e3);
        } else {
            sigma *= 0.5;
            if (sigma < 1e-15)
                throw NoConvergence("mountain pass: ridge descent stalled");
        }
    }
    if (!converged)
        throw NoConvergence("mountain pass: iteration budget exceeded");

    Eigen::VectorXd c = newton_polish(ev, node[peak], opts.newton_tol,
                                      opts.max_newton_iters);

    const double sep = 1e-5 * (1.0 + qa.loop.coeffs.norm());
    if ((c - qa.loop.coeffs).norm() < sep || (c - qb.loop.coeffs).norm() < sep)
        throw CollapseToEndpoint("mountain pass: polished point equals an endpoint");

    CriticalPoint cp;
    cp.loop = qa.loop.with_coeffs(c);
    cp.action = ev.action(c);
    cp.grad_norm = ev.grad_norm(ev.gradient_raw(c));
    cp.morse_index = morse_index(spec, cp.loop, opts.eig_cutoff_rel);
    if (cp.morse_index != 1) {
        std::ostringstream msg;
        msg << "mountain-pass candidate has Morse index " << cp.morse_index
            << " (expected 1)";
        throw IndexMismatch(msg.str());
    }
    cp.kind = CriticalKind::MountainPass;
    cp.mp_value = cp.action;
    return cp;
}

HamiltonianSpec linearize_extremal(const LagrangianSpec& spec, const LoopRepr& loop) {
    check_compatible(spec, loop);
    // Legendre probe on the quadrature grid.
    for (int i = 0; i < loop.grid; ++i) {
        const double t = spec.period * i / loop.grid;
        double x, xd;
        loop.eval(t, x, xd);
        const double p = spec.P(t, x, xd);
        if (!(p > 0.0)) {
            std::ostringstream msg;
            msg << "Legendre condition violated: P(" << t << ") = " << p;
            throw LegendreViolation(msg.str());
        }
    }
    const double T = spec.period;
    HamiltonianSpec h;
    h.period = T;
    h.smoothness = Smoothness::Smooth;
    h.S = [loop, P = spec.P, Q = spec.Q, R = spec.R, T](double t) {
        double tm = t - T * std::floor(t / T);
        if (tm >= T) tm -= T;
        double x, xd;
        loop.eval(tm, x, xd);
        const double p = P(tm, x, xd);
        const double q = Q(tm, x, xd);
        const double r = R(tm, x, xd);
        const double ip = 1.0 / p;
        return Mat2{ip, -q * ip, -q * ip, q * q * ip - r};
    };
    return h;
}

}  // namespace spindex
