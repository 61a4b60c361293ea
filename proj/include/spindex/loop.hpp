#pragma once

#include <Eigen/Dense>

namespace spindex {

/// T-periodic loop as a truncated trigonometric series
///   q(t) = a0 + sum_{j=1..N} a_j cos(2 pi j t / T) + b_j sin(2 pi j t / T),
/// coefficients stored as [a0, a1..aN, b1..bN]. Periodicity is exact in
/// this basis and the H^1 inner product is diagonal on it.
struct LoopRepr {
    double period = 0.0;
    int modes = 0;  ///< N
    int grid = 0;   ///< M quadrature points; invariant M >= 4N + 4
    Eigen::VectorXd coeffs;

    [[nodiscard]] int dim() const { return 2 * modes + 1; }

    [[nodiscard]] double value(double t) const;
    [[nodiscard]] double derivative(double t) const;
    /// Evaluate value and derivative together (one recurrence pass).
    void eval(double t, double& x, double& xdot) const;

    [[nodiscard]] LoopRepr with_coeffs(Eigen::VectorXd c) const;
    /// Loop plus a constant shift.
    [[nodiscard]] LoopRepr shifted(double dc) const;

    static LoopRepr constant(double c, double period, int modes = 64, int grid = 0);
    static LoopRepr from_coeffs(double period, Eigen::VectorXd coeffs, int grid = 0);
};

/// Quadrature tables for one (period, modes, grid) choice: basis values and
/// derivatives on the uniform grid, plus the diagonal of the H^1 Gram
/// matrix. The uniform (periodic trapezoid) rule with M > 2N nodes is exact
/// for products of two basis functions.
struct TrigBasis {
    double period;
    int modes;
    int grid;
    double weight;  ///< T / M
    Eigen::VectorXd tgrid;
    Eigen::MatrixXd val;      ///< M x dim
    Eigen::MatrixXd dval;     ///< M x dim
    Eigen::VectorXd h1_diag;  ///< dim; <e_k, e_k> in H^1

    TrigBasis(double period_, int modes_, int grid_);
};

}  // namespace spindex
