#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "spindex/errors.hpp"
#include "spindex/path.hpp"
#include "spindex/sp2.hpp"

using namespace spindex;
namespace nums = std::numbers;

namespace {

HamiltonianSpec harmonic_spec(double omega) {
    return constant_spec(Mat2{1.0, 0.0, 0.0, omega * omega}, nums::pi);
}

}  // namespace

TEST_CASE("harmonic oscillator: monodromy trace and rotation lift") {
    for (double omega : {0.5, 1.0, 1.7, 2.5}) {
        const auto path = integrate_fundamental(harmonic_spec(omega), 1);
        CHECK(path.monodromy().trace() ==
              doctest::Approx(2.0 * std::cos(omega * nums::pi)).epsilon(1e-9));
        // rho is conjugation invariant, so the lift is exactly omega * t.
        for (std::size_t k = 0; k < path.times.size(); ++k)
            CHECK(path.lift[k] ==
                  doctest::Approx(omega * path.times[k]).epsilon(1e-8));
    }
}

TEST_CASE("zero Hamiltonian gives the constant identity path") {
    const auto path = integrate_fundamental(constant_spec(Mat2{}, 1.0), 1);
    for (const Mat2& m : path.mats) {
        CHECK((m - Mat2::identity()).max_abs() < 1e-14);
    }
    CHECK(path.end_lift() == 0.0);
    CHECK(path.parabolic_lingering);
}

TEST_CASE("constant hyperbolic S against the closed-form exponential") {
    const Mat2 s{1.0, 0.0, 0.0, -1.0};
    const double T = 1.0;
    const auto path = integrate_fundamental(constant_spec(s, T), 1);
    const Mat2 gen = kJ * s;  // [[0,1],[1,0]]
    CHECK(gen.a == 0.0);
    CHECK(gen.b == 1.0);
    CHECK(gen.c == 1.0);
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        const Mat2 exact = oracles::expm_traceless(gen, path.times[k]);
        CHECK((path.mats[k] - exact).max_abs() <= 1e-8);
    }
    CHECK(path.monodromy().trace() ==
          doctest::Approx(2.0 * std::cosh(T)).epsilon(1e-10));
    // Hyperbolic-positive all along: flat lift.
    for (double lift : path.lift) CHECK(lift == 0.0);
}

TEST_CASE("monodromy stays symplectic and the lift matches rho") {
    oracles::Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const int segs = 2 + static_cast<int>(rng.next() % 4);
        std::vector<double> ends;
        std::vector<Mat2> mats;
        double t = 0.0;
        for (int k = 0; k < segs; ++k) {
            t += rng.uniform(0.1, 0.5);
            ends.push_back(t);
            mats.push_back(oracles::random_symmetric(rng));
        }
        const auto spec = piecewise_spec(ends, mats);
        const auto path = integrate_fundamental(spec, 1);
        CHECK(std::abs(path.monodromy().det() - 1.0) <= 1e-9);
        for (std::size_t k = 0; k + 1 < path.lift.size(); ++k)
            CHECK(std::abs(path.lift[k + 1] - path.lift[k]) < nums::pi / 2.0);
        for (std::size_t k = 0; k < path.mats.size(); ++k) {
            const auto rho = rotation(path.mats[k]);
            const auto lifted = std::polar(1.0, path.lift[k]);
            CHECK(std::abs(rho - lifted) <= 1e-8);
        }
    }
}

TEST_CASE("asymmetric S is rejected") {
    HamiltonianSpec spec;
    spec.period = 1.0;
    spec.S = [](double) { return Mat2{1.0, 0.5, -0.5, 1.0}; };
    CHECK_THROWS_AS((void)integrate_fundamental(spec, 1), NonSymmetric);
}

TEST_CASE("iterate_path: identity for m = 1 and rotations compose") {
    const auto path = integrate_fundamental(harmonic_spec(1.0), 1);
    const auto same = iterate_path(path, 1);
    CHECK(same.times.size() == path.times.size());
    CHECK(same.end_lift() == path.end_lift());

    // gamma(t) = R(t) on [0, pi]; the double cover is R(t) on [0, 2 pi].
    const auto doubled = iterate_path(path, 2);
    CHECK(doubled.end_time() == doctest::Approx(2.0 * nums::pi));
    for (std::size_t k = 0; k < doubled.times.size(); ++k) {
        const Mat2 exact = Mat2::rotation(doubled.times[k]);
        CHECK((doubled.mats[k] - exact).max_abs() <= 1e-9);
    }
    CHECK(doubled.end_lift() == doctest::Approx(2.0 * nums::pi).epsilon(1e-9));
}

TEST_CASE("iterate_path agrees with direct integration over m periods") {
    oracles::Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const int segs = 2 + static_cast<int>(rng.next() % 3);
        std::vector<double> ends;
        std::vector<Mat2> mats;
        double t = 0.0;
        for (int k = 0; k < segs; ++k) {
            t += rng.uniform(0.15, 0.45);
            ends.push_back(t);
            mats.push_back(oracles::random_symmetric(rng, 1.5));
        }
        const auto spec = piecewise_spec(ends, mats);
        const auto one = integrate_fundamental(spec, 1);
        const auto two = iterate_path(one, 2);
        const auto direct = integrate_fundamental(spec, 2);
        CHECK((two.monodromy() - direct.monodromy()).max_abs() <=
              1e-8 * (1.0 + direct.monodromy().max_abs()));
        // Spot-check interior nodes of the iterate against re-integration.
        for (std::size_t pick = 1; pick < two.times.size();
             pick += std::max<std::size_t>(1, two.times.size() / 7)) {
            const Mat2 re = advance_matrix(spec, Mat2::identity(), 0.0,
                                           two.times[pick]);
            CHECK((two.mats[pick] - re).max_abs() <= 1e-8 * (1.0 + re.max_abs()));
        }
        CHECK(two.end_lift() == doctest::Approx(direct.end_lift()).epsilon(1e-8));
    }
}

TEST_CASE("prefix_periods recovers the one-period sub-path") {
    const auto two = integrate_fundamental(harmonic_spec(1.3), 2);
    const auto one = prefix_periods(two, 1);
    CHECK(one.end_time() == doctest::Approx(nums::pi));
    CHECK(one.monodromy().trace() ==
          doctest::Approx(2.0 * std::cos(1.3 * nums::pi)).epsilon(1e-9));
    CHECK_THROWS_AS((void)prefix_periods(two, 3), Error);
}

TEST_CASE("lift increments stay within the refinement contract") {
    // Fast rotation forces many refinement bisections.
    const auto spec = constant_spec(Mat2{6.0, 0.0, 0.0, 6.0}, 2.0);
    const auto path = integrate_fundamental(spec, 1);
    for (std::size_t k = 0; k + 1 < path.lift.size(); ++k)
        CHECK(std::abs(path.lift[k + 1] - path.lift[k]) < nums::pi / 2.0);
    CHECK(path.end_lift() == doctest::Approx(12.0).epsilon(1e-9));
}
