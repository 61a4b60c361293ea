#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "spindex/errors.hpp"
#include "spindex/mathieu.hpp"

using namespace spindex;
using namespace spindex::mathieu;
namespace nums = std::numbers;

TEST_CASE("make_spec basics") {
    // eps = 0: harmonic, tr = 2 cos(omega pi).
    const auto spec = make_spec({2.25, 0.0});
    const auto path = integrate_fundamental(spec, 1);
    CHECK(path.monodromy().trace() ==
          doctest::Approx(2.0 * std::cos(1.5 * nums::pi)).epsilon(1e-10));

    // Free particle: parabolic monodromy.
    const auto free_path = integrate_fundamental(make_spec({0.0, 0.0}), 1);
    CHECK(free_path.monodromy().trace() == doctest::Approx(2.0));
    CHECK(classify_stability(free_path.monodromy()).kind == Stability::Degenerate);

    // Inside the first tongue, confirmed by an independent Floquet oracle.
    const auto tongue = make_spec({1.0, 0.2});
    const double tr = integrate_fundamental(tongue, 1).monodromy().trace();
    CHECK(tr < -2.0);
    const Mat2 oracle = oracles::rk4_fundamental(tongue.S, nums::pi, 40000);
    CHECK(tr == doctest::Approx(oracle.trace()).epsilon(1e-8));
}

TEST_CASE("scan_plane rows and the eps = 0 index laws") {
    ScanGrid grid;
    grid.omega2_min = 2.25;
    grid.omega2_max = 2.25;
    grid.omega2_count = 1;
    grid.eps_min = 0.0;
    grid.eps_max = 0.4;
    grid.eps_count = 2;
    const auto cells = scan_plane(grid);
    REQUIRE(cells.size() == 2);
    CHECK(*cells[0].report.i1 == 1);
    CHECK(*cells[0].report.i2 == 3);
    CHECK(cells[0].report.stability.kind == Stability::Elliptic);

    ScanGrid tongue;
    tongue.omega2_min = 1.0;
    tongue.omega2_max = 1.0;
    tongue.omega2_count = 1;
    tongue.eps_min = 0.4;
    tongue.eps_max = 0.4;
    tongue.eps_count = 1;
    const auto inside = scan_plane(tongue);
    REQUIRE(inside.size() == 1);
    REQUIRE(inside[0].report.i2.has_value());
    CHECK(*inside[0].report.i2 % 2 == 0);
    CHECK(inside[0].report.stability.kind == Stability::HyperbolicNegative);
}

TEST_CASE("scan emits deterministic row-major order") {
    ScanGrid grid;
    grid.omega2_min = 0.3;
    grid.omega2_max = 1.3;
    grid.omega2_count = 3;
    grid.eps_min = 0.0;
    grid.eps_max = 0.5;
    grid.eps_count = 2;
    const auto cells = scan_plane(grid);
    REQUIRE(cells.size() == 6);
    CHECK(cells[0].params.omega2 == doctest::Approx(0.3));
    CHECK(cells[0].params.eps == doctest::Approx(0.0));
    CHECK(cells[1].params.eps == doctest::Approx(0.5));
    CHECK(cells[2].params.omega2 == doctest::Approx(0.8));
}

TEST_CASE("first tongue boundaries match the small-eps asymptotics") {
    // delta = 1 +- eps/2 + O(eps^2).
    const auto tb = tongue_boundaries_at(1, 0.1);
    CHECK(std::abs(tb.left - 0.95) <= 0.01);
    CHECK(std::abs(tb.right - 1.05) <= 0.01);
    CHECK_FALSE(tb.used_precise);

    // Boundary points satisfy the trace contract.
    CHECK(std::abs(monodromy_trace({tb.left, 0.1}) + 2.0) <= 1e-9);
    CHECK(std::abs(monodromy_trace({tb.right, 0.1}) + 2.0) <= 1e-9);
}

TEST_CASE("curve tracing covers the ladder and converges to the foot") {
    const auto curves = trace_transition_curves(1, 0.1, 0.02);
    REQUIRE(curves.size() == 2);
    for (const auto& c : curves) {
        CHECK(c.multiplier == -1);
        REQUIRE(c.points.size() == 6);  // foot + 5 rungs
        CHECK(c.points.front().second == doctest::Approx(1.0));
        for (std::size_t k = 1; k < c.points.size(); ++k) {
            const auto [eps, omega2] = c.points[k];
            CHECK(std::abs(monodromy_trace({omega2, eps}) + 2.0) <= 1e-9);
        }
    }
    // Branches approach the foot from opposite sides.
    CHECK(curves[0].points.back().second < 1.0);
    CHECK(curves[1].points.back().second > 1.0);
}

TEST_CASE("precise trace agrees with the pipeline away from tongues") {
    for (const MathieuParams p :
         {MathieuParams{2.5, 0.3}, MathieuParams{6.0, 0.8}, MathieuParams{0.4, 0.1}}) {
        CHECK(precise_trace(p) == doctest::Approx(monodromy_trace(p)).epsilon(1e-9));
    }
}

TEST_CASE("delta_theta at resonance and for rotations") {
    // eps = 0, omega = n, any direction: exactly n pi.
    for (int n : {1, 2, 3}) {
        const auto rec = delta_theta({static_cast<double>(n) * n, 0.0}, 0.0, 1.0, 1);
        CHECK(rec.delta_theta == doctest::Approx(n * nums::pi).epsilon(1e-9));
        CHECK(rec.resonant);
        const auto rec2 =
            delta_theta({static_cast<double>(n) * n, 0.0}, 0.6, 0.8, 1);
        CHECK(rec2.delta_theta == doctest::Approx(n * nums::pi).epsilon(1e-9));
    }

    // Noninteger omega from an axis direction: the ellipse phase moves by
    // omega pi, which lands axis-to-axis for half-integers.
    const auto rec = delta_theta({2.5 * 2.5, 0.0}, 1.0, 0.0, 1);
    CHECK(rec.delta_theta == doctest::Approx(2.5 * nums::pi).epsilon(1e-9));
    CHECK_FALSE(rec.resonant);
    // Off-axis directions deviate from omega pi but stay within pi of it.
    const auto off = delta_theta({2.5 * 2.5, 0.0}, 1.0, 1.0, 1);
    CHECK(std::abs(off.delta_theta - 2.5 * nums::pi) < nums::pi);
    CHECK(off.delta_theta != doctest::Approx(2.5 * nums::pi).epsilon(1e-6));
}

TEST_CASE("delta_theta flags the invariant line inside a tongue") {
    const MathieuParams params{1.0, 0.3};
    const auto path = integrate_fundamental(make_spec(params), 1);
    const Mat2 m = path.monodromy();
    REQUIRE(std::abs(m.trace()) > 2.0);
    // Eigenvector of the monodromy for the larger |multiplier|.
    const double tr = m.trace();
    const double lam =
        0.5 * (tr + (tr > 0 ? 1.0 : -1.0) * std::sqrt(tr * tr - 4.0));
    double vp, vq;
    if (std::abs(m.b) > std::abs(lam - m.a)) {
        vp = m.b;
        vq = lam - m.a;
    } else {
        vp = lam - m.d;
        vq = m.c;
    }
    const auto on_line = delta_theta(params, vp, vq, 1);
    CHECK(on_line.resonant);
    const double nearest =
        std::round(on_line.delta_theta / nums::pi) * nums::pi;
    CHECK(on_line.delta_theta == doctest::Approx(nearest).epsilon(1e-9));

    const auto off_line = delta_theta(params, vp - vq, vp + vq, 1);
    CHECK_FALSE(off_line.resonant);
}

TEST_CASE("trace is symmetric under eps -> -eps") {
    oracles::Rng rng(77);
    for (int i = 0; i < 12; ++i) {
        const double omega2 = rng.uniform(0.1, 9.0);
        const double eps = rng.uniform(0.0, 1.2);
        CHECK(monodromy_trace({omega2, eps}) ==
              doctest::Approx(monodromy_trace({omega2, -eps})).epsilon(1e-9));
    }
}

TEST_CASE("crossection at eps = 0.5 reproduces the nine-region sequences") {
    const auto cs = crossection(0.5, 17.0);
    REQUIRE(cs.regions.size() == 9);
    const int i1_expected[] = {1, 1, 1, 2, 3, 3, 3, 4, 5};
    const int i2_expected[] = {1, 2, 3, 4, 5, 6, 7, 8, 9};
    for (int k = 0; k < 9; ++k) {
        CHECK(cs.regions[k].i1 == i1_expected[k]);
        CHECK(cs.regions[k].i2 == i2_expected[k]);
    }
    // i2 alternates stability: odd = elliptic, even = hyperbolic.
    for (const auto& r : cs.regions) {
        if (r.i2 % 2 == 1)
            CHECK(r.stability == Stability::Elliptic);
        else
            CHECK((r.stability == Stability::HyperbolicPositive ||
                   r.stability == Stability::HyperbolicNegative));
    }
    // i1 jumps only across multiplier +1 curves (tongues 2 and 4), i_{-1}
    // only across multiplier -1 curves (tongues 1 and 3).
    const int i1_jump_at[] = {0, 0, 1, 1, 0, 0, 1, 1};
    for (int b = 0; b < 8; ++b) {
        const int di1 = cs.regions[b + 1].i1 - cs.regions[b].i1;
        const int dim1 = cs.regions[b + 1].i_minus1 - cs.regions[b].i_minus1;
        CHECK(di1 == i1_jump_at[b]);
        CHECK(dim1 == 1 - i1_jump_at[b]);
        CHECK(cs.regions[b + 1].i2 - cs.regions[b].i2 == 1);
    }
}

TEST_CASE("crossection rejects eps beyond the first tongue tip") {
    CHECK_THROWS_AS((void)crossection(5.0, 17.0), Error);
}
