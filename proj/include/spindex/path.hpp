#pragma once

#include <vector>

#include "spindex/hamiltonian.hpp"
#include "spindex/mat2.hpp"

namespace spindex {

/// Discrete stand-in for a continuous symplectic path gamma with
/// gamma(0) = I: a strictly increasing time grid, the matrix at each
/// node, and a continuous lift of the rotation angle,
/// e^{i lift[k]} = rho(mats[k]), lift[0] = 0.
///
/// Grid contract: every node matrix is within kSymplTol of Sp(2) and
/// consecutive lift values differ by less than pi/2, so the winding of
/// rho along the path is captured without branch ambiguity. There is a
/// node at every period boundary j * period().
struct SampledSymplecticPath {
    std::vector<double> times;
    std::vector<Mat2> mats;
    std::vector<double> lift;
    HamiltonianSpec spec;  ///< generator; kept for refinement and iteration
    int periods = 1;
    /// Set when more than 10% of the nodes sit within kEigTol of
    /// |tr| = 2; the lift is flat there and downstream indices deserve
    /// extra scrutiny.
    bool parabolic_lingering = false;

    [[nodiscard]] double period() const { return spec.period; }
    [[nodiscard]] double end_time() const { return times.back(); }
    [[nodiscard]] const Mat2& monodromy() const { return mats.back(); }
    [[nodiscard]] double end_lift() const { return lift.back(); }
};

/// Integrate the fundamental solution gammadot = J S(t) gamma, gamma(0)=I,
/// over [0, n_periods * T] with an adaptive Dormand-Prince 5(4) scheme.
/// After each accepted step the matrix is rescaled by det^{-1/2}, and the
/// step is bisected until the lift increment satisfies its contract.
/// Throws StepFailure when bisection bottoms out and NonSymmetric when a
/// probe of S(t) is asymmetric.
SampledSymplecticPath integrate_fundamental(const HamiltonianSpec& spec,
                                            int n_periods,
                                            const StepControl& ctrl = {});

/// m-th iterate: gamma^m(t) = gamma(t - jT) gamma(T)^j on [jT, (j+1)T].
/// The input must cover exactly one period. The lift is re-tracked from
/// scratch (it is not additive across monodromy multiplication); where the
/// node spacing is too coarse for unambiguous tracking, the base path is
/// refined by re-integration of its generator.
SampledSymplecticPath iterate_path(const SampledSymplecticPath& one_period, int m);

/// Sub-path covering [0, j * T] of a path over n >= j periods. Node at
/// j * T is guaranteed by the integrator's period clamping.
SampledSymplecticPath prefix_periods(const SampledSymplecticPath& path, int j);

/// Advance a single matrix through the flow from t0 to t1 (same stepper
/// as integrate_fundamental, no node/lift bookkeeping).
Mat2 advance_matrix(const HamiltonianSpec& spec, Mat2 y, double t0, double t1,
                    const StepControl& ctrl = {});

}  // namespace spindex
