#pragma once

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "spindex/path.hpp"
#include "spindex/sp2.hpp"

namespace spindex {

enum class Stability {
    Elliptic,
    HyperbolicPositive,
    HyperbolicNegative,
    Degenerate,
};

struct StabilityVerdict {
    Stability kind;
    std::complex<double> mult_a, mult_b;  ///< Floquet multiplier pair
    double trace;
};

/// Everything index-related about one path: the Conley-Zehnder index i1,
/// the double-cover index i2, omega-indices for requested angles, Floquet
/// multipliers and the stability verdict. Degenerate omegas are recorded
/// instead of reported as values.
struct IndexReport {
    std::optional<int> i1;
    std::optional<int> i2;
    std::vector<std::pair<double, std::optional<int>>> i_omega;  ///< (phi, index)
    StabilityVerdict stability{};
    std::vector<double> degenerate_at;
    double tr1 = 0.0;  ///< trace of the one-period monodromy
    double tr2 = 0.0;  ///< trace of the two-period monodromy
};

/// omega-index of the path: winding of rho along gamma, closed up through
/// the endpoint's component Sp(2)_omega^{+-}. With alpha = lift(T) mod 2pi:
/// endpoints in Sp(2)_omega^+ snap the total angle to the nearest multiple
/// of 2pi (even index), endpoints in Sp(2)_omega^- to 2 pi k + pi (odd
/// index). Throws DegenerateEndpoint when |D(omega)| <= deg_tol.
int index_omega(const SampledSymplecticPath& path, OmegaPoint w,
                double deg_tol = kDegTol);

/// Conley-Zehnder index i1 = index_omega at omega = 1.
int index_i1(const SampledSymplecticPath& path, double deg_tol = kDegTol);

/// Expert variant of index_omega for endpoints so close to Sp(2)_omega^0
/// that the sign of D(omega) cannot be resolved from the path itself: the
/// caller supplies the component sign from an external higher-precision
/// evaluation. The lift still comes from the path.
int index_omega_signed(const SampledSymplecticPath& path, OmegaPoint w,
                       ComponentSign sign);

/// Double-cover index i2 = i1(gamma^2), computed from the iterated path and
/// cross-checked against the Bott sum i1 + i_{-1}; the two routes must
/// agree (CrossCheckMismatch otherwise).
int index_i2(const SampledSymplecticPath& one_period, double deg_tol = kDegTol);

struct BottTerm {
    double phi;        ///< folded root angle in [0, pi]
    int multiplicity;  ///< 2 for conjugate pairs, 1 for real roots
    int index;
};

struct BottResult {
    int lhs;  ///< i_z(gamma^m)
    int rhs;  ///< sum of multiplicity * index over the m-th roots of z
    std::vector<BottTerm> terms;
    bool holds;
};

/// Verifies the iteration identity i_z(gamma^m) = sum_{omega^m = z}
/// i_omega(gamma) on a concrete path, returning both sides and the
/// per-root breakdown.
BottResult bott_check(const SampledSymplecticPath& one_period, int m,
                      OmegaPoint z, double deg_tol = kDegTol);

/// Stability verdict of a monodromy matrix from its trace; Degenerate
/// when |tr| is within deg_tol of 2.
StabilityVerdict classify_stability(const Mat2& monodromy,
                                    double deg_tol = kDegTol);

struct ParityCheck {
    int i2;
    Stability verdict;
    bool consistent;  ///< (i2 odd) == (verdict Elliptic)
};

/// The double-cover parity test: a nondegenerate path is elliptic iff i2
/// is odd. Returns both facts and their agreement.
ParityCheck parity_stability_check(const SampledSymplecticPath& one_period,
                                   double deg_tol = kDegTol);

/// Assemble a full report for a one-period path. Requested phi values are
/// reported in order; degeneracies are flagged, not thrown. When the
/// caller already integrated two periods, passing the two-period path
/// avoids re-iteration.
IndexReport make_index_report(const SampledSymplecticPath& one_period,
                              const std::vector<double>& phis,
                              double deg_tol = kDegTol,
                              const SampledSymplecticPath* two_periods = nullptr);

}  // namespace spindex
