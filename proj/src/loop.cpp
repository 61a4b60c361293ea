#include "spindex/loop.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "spindex/errors.hpp"

namespace spindex {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

int default_grid(int modes, int grid) { return grid > 0 ? grid : 4 * modes + 4; }
}  // namespace

void LoopRepr::eval(double t, double& x, double& xdot) const {
    const double base = kTwoPi * t / period;
    const std::complex<double> z = std::polar(1.0, base);
    std::complex<double> zj = 1.0;
    x = coeffs[0];
    xdot = 0.0;
    for (int j = 1; j <= modes; ++j) {
        zj *= z;
        const double cs = zj.real();
        const double sn = zj.imag();
        const double wj = kTwoPi * j / period;
        const double aj = coeffs[j];
        const double bj = coeffs[modes + j];
        x += aj * cs + bj * sn;
        xdot += wj * (bj * cs - aj * sn);
    }
}

double LoopRepr::value(double t) const {
    double x, xd;
    eval(t, x, xd);
    return x;
}

double LoopRepr::derivative(double t) const {
    double x, xd;
    eval(t, x, xd);
    return xd;
}

LoopRepr LoopRepr::with_coeffs(Eigen::VectorXd c) const {
    LoopRepr out = *this;
    out.coeffs = std::move(c);
    return out;
}

LoopRepr LoopRepr::shifted(double dc) const {
    LoopRepr out = *this;
    out.coeffs[0] += dc;
    return out;
}

LoopRepr LoopRepr::constant(double c, double period, int modes, int grid) {
    LoopRepr out;
    out.period = period;
    out.modes = modes;
    out.grid = default_grid(modes, grid);
    out.coeffs = Eigen::VectorXd::Zero(2 * modes + 1);
    out.coeffs[0] = c;
    return out;
}

LoopRepr LoopRepr::from_coeffs(double period, Eigen::VectorXd coeffs, int grid) {
    if (coeffs.size() % 2 == 0)
        throw Error("LoopRepr: coefficient vector must have odd size 2N+1");
    LoopRepr out;
    out.period = period;
    out.modes = static_cast<int>((coeffs.size() - 1) / 2);
    out.grid = default_grid(out.modes, grid);
    out.coeffs = std::move(coeffs);
    return out;
}

TrigBasis::TrigBasis(double period_, int modes_, int grid_)
    : period(period_), modes(modes_), grid(default_grid(modes_, grid_)) {
    if (grid < 4 * modes + 4)
        throw Error("TrigBasis: quadrature grid must satisfy M >= 4N + 4");
    const int dim = 2 * modes + 1;
    weight = period / grid;
    tgrid.resize(grid);
    val.resize(grid, dim);
    dval.resize(grid, dim);
    for (int i = 0; i < grid; ++i) {
        const double t = period * i / grid;
        tgrid[i] = t;
        val(i, 0) = 1.0;
        dval(i, 0) = 0.0;
        for (int j = 1; j <= modes; ++j) {
            const double wj = kTwoPi * j / period;
            const double cs = std::cos(wj * t);
            const double sn = std::sin(wj * t);
            val(i, j) = cs;
            val(i, modes + j) = sn;
            dval(i, j) = -wj * sn;
            dval(i, modes + j) = wj * cs;
        }
    }
    h1_diag.resize(dim);
    h1_diag[0] = period;
    for (int j = 1; j <= modes; ++j) {
        const double wj = kTwoPi * j / period;
        h1_diag[j] = 0.5 * period * (1.0 + wj * wj);
        h1_diag[modes + j] = h1_diag[j];
    }
}

}  // namespace spindex
