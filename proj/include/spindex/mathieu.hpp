#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "spindex/index.hpp"
#include "spindex/path.hpp"

namespace spindex::mathieu {

/// Parameters of pdot = -(omega^2 + eps cos 2t) q, qdot = p; the
/// Hamiltonian is pi-periodic in t. The chart axis conventionally uses
/// delta = omega^2.
struct MathieuParams {
    double omega2 = 1.0;
    double eps = 0.0;
};

/// S(t) = diag(1, omega^2 + eps cos 2t) over one period pi, state (p, q).
HamiltonianSpec make_spec(const MathieuParams& params);

/// Monodromy trace tr gamma(pi) via the standard pipeline.
double monodromy_trace(const MathieuParams& params);

/// Monodromy trace evaluated in extended precision with a fixed-step
/// scheme; resolves stability tongues whose width is below double
/// rounding (|tr| - 2 down to ~1e-15).
double precise_trace(const MathieuParams& params);

struct ScanGrid {
    double omega2_min = 0.05, omega2_max = 9.5;
    int omega2_count = 10;
    double eps_min = 0.0, eps_max = 1.5;
    int eps_count = 5;
};

struct ScanCell {
    MathieuParams params;
    double tr1 = 0.0, tr2 = 0.0;
    IndexReport report;
};

/// Index-annotated stability chart: one cell per grid point, emitted in
/// row-major order (omega2 outer, eps inner). Degenerate cells are flagged
/// in their report, never errored.
std::vector<ScanCell> scan_plane(const ScanGrid& grid, double deg_tol = kDegTol);

enum class Branch { Left, Right };

struct TransitionCurve {
    int n;           ///< tongue label; emanates from omega2 = n^2
    Branch branch;
    int multiplier;  ///< +1 for even n, -1 for odd n
    std::vector<std::pair<double, double>> points;  ///< (eps, omega2)
};

/// Stability-tongue boundaries at one eps: the two roots of
/// tr gamma(pi) = +-2 around omega2 = n^2. Switches to the extended
/// precision trace when the tongue is too thin for double arithmetic.
/// Throws LostBracket when the tongue cannot be located.
struct TongueBounds {
    double left, right;
    bool used_precise;  ///< extended-precision backend engaged
};
TongueBounds tongue_boundaries_at(int n, double eps, double curve_tol = 1e-9);

/// Trace both branches of tongues 1..n_max on the eps ladder
/// step, 2 step, ..., <= eps_max; each curve starts at the exact foot
/// (0, n^2). Points satisfy |tr -+ 2| <= curve_tol.
std::vector<TransitionCurve> trace_transition_curves(int n_max, double eps_max,
                                                     double step,
                                                     double curve_tol = 1e-9);

struct DeltaThetaRecord {
    MathieuParams params;
    double p0 = 1.0, q0 = 0.0;  ///< initial direction on the unit circle
    int k_periods = 1;
    double delta_theta = 0.0;  ///< continuous argument change over [0, k pi]
    bool resonant = false;     ///< delta_theta within res_tol of an integer multiple of pi
};

/// Phase advance of the solution from direction (p0, q0): the continuous
/// argument of (p(t), q(t)) over k periods, equivalently the integral of
/// 2H/(p^2+q^2) along the trajectory.
DeltaThetaRecord delta_theta(const MathieuParams& params, double p0, double q0,
                             int k_periods, double res_tol = 1e-6);

struct CrossectionRegion {
    double lo = 0.0, hi = 0.0;  ///< omega2 bounds of the region
    double sample = 0.0;        ///< omega2 where indices were evaluated
    int i1 = 0;
    int i_minus1 = 0;
    int i2 = 0;
    Stability stability{};
    double tr1 = 0.0;
    bool oracle_assisted = false;  ///< component sign taken from precise_trace
};

struct Crossection {
    double eps = 0.0;
    std::vector<double> boundaries;          ///< curve crossings, sorted
    std::vector<CrossectionRegion> regions;  ///< boundaries.size() + 1 entries
};

/// Fixed-eps crossection of the chart: all transition-curve crossings with
/// omega2 in (0, omega2_max] and the (i1, i2) values of every region
/// between them. Validates that eps lies below the first tongue's
/// intersection with the eps axis (its left boundary is still at
/// omega2 > 0).
Crossection crossection(double eps, double omega2_max = 17.0,
                        double curve_tol = 1e-9, double deg_tol = kDegTol);

}  // namespace spindex::mathieu
