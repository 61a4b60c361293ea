#pragma once

#include <functional>
#include <optional>

#include "spindex/hamiltonian.hpp"
#include "spindex/loop.hpp"

namespace spindex {

/// One-degree-of-freedom Lagrangian L(t, x, xdot) with the Legendre
/// condition P = L_pp > 0. The second-derivative callbacks P, Q = L_xp and
/// R = L_xx feed the second variation and the linearized Hamiltonian.
struct LagrangianSpec {
    std::function<double(double, double, double)> L;
    std::function<double(double, double, double)> L_x;
    std::function<double(double, double, double)> L_p;
    std::function<double(double, double, double)> P;
    std::function<double(double, double, double)> Q;
    std::function<double(double, double, double)> R;
    double period = 0.0;
};

enum class CriticalKind { Minimizer, MountainPass, Other };

struct CriticalPoint {
    LoopRepr loop;
    double action = 0.0;
    double grad_norm = 0.0;  ///< H^1 norm of the discrete gradient
    int morse_index = 0;
    CriticalKind kind = CriticalKind::Other;
    std::optional<double> mp_value;  ///< minimax value for mountain passes
};

struct SolverOptions {
    int modes = 64;
    int grid = 0;  ///< 0: 4 * modes + 4
    double descent_tol = 1e-6;
    double newton_tol = 1e-10;
    int max_descent_iters = 50000;
    int max_newton_iters = 60;
    int path_nodes = 33;  ///< mountain-pass path discretization
    int max_ridge_iters = 200000;
    double eig_cutoff_rel = 1e-8;  ///< relative zero-band for Morse counting
};

/// Action A(q) = integral of L(t, q, qdot) by the periodic trapezoid rule
/// on the loop's quadrature grid.
double action_value(const LagrangianSpec& spec, const LoopRepr& loop);

/// Discrete action gradient, returned as the loop representing it in the
/// H^1 inner product (the Riesz representative); its vanishing is the
/// collocated Euler-Lagrange residual.
LoopRepr action_gradient(const LagrangianSpec& spec, const LoopRepr& loop);

/// H^1 norm of the discrete gradient at the loop.
double gradient_norm(const LagrangianSpec& spec, const LoopRepr& loop);

/// Second variation of the action, assembled in the trigonometric basis:
/// H_kl = integral of P ek' el' + Q (ek el' + ek' el) + R ek el.
Eigen::MatrixXd second_variation(const LagrangianSpec& spec, const LoopRepr& loop);

struct MorseData {
    int index;       ///< eigenvalues below -cutoff
    int nullity;     ///< eigenvalues within [-cutoff, cutoff]
    double cutoff;   ///< absolute zero band used
    double min_abs;  ///< smallest |eigenvalue|
};

MorseData morse_spectrum(const LagrangianSpec& spec, const LoopRepr& loop,
                         double eig_cutoff_rel = 1e-8);

/// Morse index; throws DegenerateHessian when the spectrum has a
/// (numerically) zero eigenvalue, since index claims for degenerate
/// extremals are refused.
int morse_index(const LagrangianSpec& spec, const LoopRepr& loop,
                double eig_cutoff_rel = 1e-8);

/// Gradient descent in the H^1 metric followed by a Newton polish.
/// Verifies morse_index == 0 (NotAMinimizer otherwise).
CriticalPoint find_minimizer(const LagrangianSpec& spec, const LoopRepr& seed,
                             const SolverOptions& opts = {});

/// Numerical mountain pass between two minimizers: discretize a path of
/// loops, repeatedly lower its action-maximal node by constrained steepest
/// descent, then Newton-polish the saddle and verify Morse index 1.
CriticalPoint find_mountain_pass(const LagrangianSpec& spec,
                                 const CriticalPoint& qa,
                                 const CriticalPoint& qb,
                                 const SolverOptions& opts = {});

/// Linearized Hamiltonian system along an extremal loop:
/// S(t) = [[1/P, -Q/P], [-Q/P, Q^2/P - R]] evaluated at (t, x(t), xdot(t)).
/// Throws LegendreViolation if P <= 0 anywhere on the grid.
HamiltonianSpec linearize_extremal(const LagrangianSpec& spec, const LoopRepr& loop);

/// Shared evaluation engine: caches the quadrature tables once and exposes
/// the primitives the solvers iterate on. Coefficient vectors are in the
/// loop's trigonometric basis.
class ActionEvaluator {
  public:
    ActionEvaluator(const LagrangianSpec& spec, double period, int modes, int grid);

    [[nodiscard]] double action(const Eigen::VectorXd& c) const;
    /// Partial derivatives dA/dc_k.
    [[nodiscard]] Eigen::VectorXd gradient_raw(const Eigen::VectorXd& c) const;
    /// H^1 Riesz representative of a raw gradient.
    [[nodiscard]] Eigen::VectorXd riesz(const Eigen::VectorXd& raw) const;
    [[nodiscard]] double grad_norm(const Eigen::VectorXd& raw) const;
    [[nodiscard]] Eigen::MatrixXd hessian(const Eigen::VectorXd& c) const;

    [[nodiscard]] const TrigBasis& basis() const { return basis_; }

  private:
    const LagrangianSpec* spec_;
    TrigBasis basis_;
};

}  // namespace spindex
