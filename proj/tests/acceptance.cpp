// Acceptance suite: one criterion per section, one PASS/FAIL line each,
// nonzero exit iff any criterion fails. Expected values come from closed
// forms or from independent oracles (shooting, fixed-step re-integration),
// never from the pipeline under test.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "spindex/errors.hpp"
#include "spindex/index.hpp"
#include "spindex/mathieu.hpp"
#include "spindex/path.hpp"
#include "spindex/pendulum.hpp"

using namespace spindex;
namespace nums = std::numbers;

namespace {

int g_failures = 0;

class Criterion {
  public:
    Criterion(int number, std::string name)
        : number_(number), name_(std::move(name)),
          start_(std::chrono::steady_clock::now()) {}

    void expect(bool ok, const std::string& detail) {
        if (!ok) {
            ok_ = false;
            if (!detail.empty()) details_.push_back(detail);
        }
    }

    void note(const std::string& line) { details_.push_back(line); }

    double elapsed_s() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_)
            .count();
    }

    ~Criterion() {
        std::printf("[%s] %d. %s (%.2fs)\n", ok_ ? "PASS" : "FAIL", number_,
                    name_.c_str(), elapsed_s());
        for (const auto& d : details_) std::printf("       %s\n", d.c_str());
        if (!ok_) ++g_failures;
    }

  private:
    int number_;
    std::string name_;
    bool ok_ = true;
    std::vector<std::string> details_;
    std::chrono::steady_clock::time_point start_;
};

template <class T>
std::string str(const T& v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

constexpr double kT2pi = 2.0 * nums::pi;

// ---- criterion 1 -----------------------------------------------------------

void criterion_1() {
    Criterion c(1, "eps = 0 Mathieu index law (7 frequencies)");
    for (double omega : {0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5}) {
        const auto spec = mathieu::make_spec({omega * omega, 0.0});
        const auto two = integrate_fundamental(spec, 2);
        const auto one = prefix_periods(two, 1);
        const int i1 = index_i1(one);
        const int i2 = index_i2(one);
        const int i1_expected = 2 * static_cast<int>(std::floor(omega / 2.0)) + 1;
        const int i2_expected = 2 * static_cast<int>(std::floor(omega)) + 1;
        c.expect(i1 == i1_expected, "omega=" + str(omega) + ": i1=" + str(i1) +
                                        " expected " + str(i1_expected));
        c.expect(i2 == i2_expected, "omega=" + str(omega) + ": i2=" + str(i2) +
                                        " expected " + str(i2_expected));
    }
    c.expect(c.elapsed_s() < 5.0, "runtime exceeded 5 s");
}

// ---- criterion 2 -----------------------------------------------------------

void criterion_2() {
    Criterion c(2, "parity-stability theorem on 500 random cells");
    oracles::Rng rng(0x5eed);
    int kept = 0;
    long draws = 0;
    int violations = 0;
    while (kept < 500 && draws < 100000) {
        ++draws;
        const double omega2 = rng.uniform(0.05, 9.5);
        const double eps = rng.uniform(0.0, 1.5);
        StepControl ctrl;
        ctrl.rel_tol = 1e-11;
        ctrl.abs_tol = 1e-13;
        const auto spec = mathieu::make_spec({omega2, eps});
        const auto two = integrate_fundamental(spec, 2, ctrl);
        const auto one = prefix_periods(two, 1);
        const double tr1 = one.monodromy().trace();
        const double tr2 = two.monodromy().trace();
        if (std::abs(tr1 - 2.0) <= 1e-6 || std::abs(tr1 + 2.0) <= 1e-6 ||
            std::abs(tr2 - 2.0) <= 1e-6)
            continue;
        ++kept;
        const auto report = make_index_report(one, {}, kDegTol, &two);
        if (!report.i2) {
            ++violations;
            continue;
        }
        const bool odd = ((*report.i2 % 2) + 2) % 2 == 1;
        const bool elliptic = std::abs(tr1) < 2.0;
        if (odd != elliptic) {
            ++violations;
            c.expect(false, "omega2=" + str(omega2) + " eps=" + str(eps) +
                                ": i2=" + str(*report.i2) + " tr=" + str(tr1));
        }
    }
    c.expect(kept == 500, "only " + str(kept) + " nondegenerate cells");
    c.expect(violations == 0, str(violations) + " parity violations");
    c.expect(c.elapsed_s() < 60.0, "runtime exceeded 60 s");
}

// ---- criterion 3 -----------------------------------------------------------

void criterion_3() {
    Criterion c(3, "Bott iteration identity, 100 random systems, m in {2,3}");
    oracles::Rng rng(0xb077);
    int done = 0;
    long resampled = 0;
    while (done < 100 && resampled < 10000) {
        const int segs = 2 + static_cast<int>(rng.next() % 4);
        std::vector<double> ends;
        std::vector<Mat2> mats;
        double t = 0.0;
        for (int k = 0; k < segs; ++k) {
            t += rng.uniform(0.1, 0.4);
            ends.push_back(t);
            mats.push_back(oracles::random_symmetric(rng, 1.8));
        }
        try {
            const auto spec = piecewise_spec(ends, mats);
            const auto one = integrate_fundamental(spec, 1);
            for (int m : {2, 3}) {
                const auto res = bott_check(one, m, OmegaPoint{0.0});
                c.expect(res.holds, "trial " + str(done) + " m=" + str(m) +
                                        ": lhs=" + str(res.lhs) +
                                        " rhs=" + str(res.rhs));
            }
        } catch (const DegenerateEndpoint&) {
            ++resampled;
            continue;
        }
        ++done;
    }
    c.expect(done == 100, "only " + str(done) + " valid systems");
}

// ---- criteria 4 and 5 -------------------------------------------------------

void criteria_4_and_5() {
    SolverOptions opts;
    opts.modes = 64;

    // Criterion 4: Morse = Conley-Zehnder at the free equilibria and on the
    // forced demo instance.
    {
        Criterion c(4, "Morse index equals i1 (free equilibria and demo)");
        try {
            const auto free_problem = pendulum::make_problem(0.2, kT2pi, {}, {}, 64);
            const auto rep = pendulum::solve(free_problem, opts);
            c.expect(rep.q1.point.morse_index == 0, "free q1 Morse != 0");
            c.expect(rep.q1.indices.i1 && *rep.q1.indices.i1 == 0, "free i1(q1) != 0");
            c.expect(rep.q2.point.morse_index == 1, "free q2 Morse != 1");
            c.expect(rep.q2.indices.i1 && *rep.q2.indices.i1 == 1, "free i1(q2) != 1");
        } catch (const std::exception& e) {
            c.expect(false, std::string("free pipeline threw: ") + e.what());
        }
        try {
            const auto demo = pendulum::make_problem(0.2, kT2pi, {0.1}, {}, 64);
            const auto rep = pendulum::solve(demo, opts);
            c.expect(rep.q1.point.morse_index == 0, "demo q1 Morse != 0");
            c.expect(rep.q1.indices.i1 && *rep.q1.indices.i1 == 0, "demo i1(q1) != 0");
            c.expect(rep.q2.point.morse_index == 1, "demo q2 Morse != 1");
            c.expect(rep.q2.indices.i1 && *rep.q2.indices.i1 == 1, "demo i1(q2) != 1");
        } catch (const std::exception& e) {
            c.expect(false, std::string("demo pipeline threw: ") + e.what());
        }
    }

    // Criterion 5: the Ortega scenario on the demo instance with the
    // independent shooting/Floquet oracle.
    Criterion c(5, "Ortega scenario: demo instance with shooting oracle");
    try {
        const auto demo = pendulum::make_problem(0.2, kT2pi, {0.1}, {}, 64);
        const auto rep = pendulum::solve(demo, opts);
        c.expect(rep.assertions_checked, "assertions were not checked");

        const auto& v1 = rep.q1.indices.stability;
        c.expect(v1.kind == Stability::HyperbolicPositive, "q1 not hyperbolic");
        c.expect(v1.mult_a.imag() == 0.0 && v1.mult_b.imag() == 0.0,
                 "q1 multipliers not real");
        c.expect(v1.mult_a.real() > 0.0 && v1.mult_b.real() > 0.0,
                 "q1 multipliers not positive");
        c.expect(std::abs(v1.mult_a.real() - 1.0) > 1e-6 &&
                     std::abs(v1.mult_b.real() - 1.0) > 1e-6,
                 "q1 multiplier equals 1");

        const auto& v2 = rep.q2.indices.stability;
        c.expect(v2.kind == Stability::Elliptic, "q2 not elliptic");
        c.expect(std::abs(v2.mult_a.imag()) > 1e-9, "q2 multipliers on the real axis");

        const auto& rb2 = rep.q2.bounds[1];
        c.expect(rb2.k_periods == 2 && rb2.holds, "Delta theta over 2T not below 2 pi");
        {
            std::ostringstream margin;
            margin.precision(6);
            margin << std::fixed << "q2 rotation margin over 2T: "
                   << (rb2.bound - rb2.max_delta_theta) << " rad";
            c.note(margin.str());
        }

        const auto forcing = [](double t) { return 0.1 * std::cos(t); };
        for (const auto* orbit : {&rep.q1, &rep.q2}) {
            const auto shot = oracles::shoot_pendulum(
                0.2, kT2pi, forcing, orbit->point.loop.value(0.0),
                orbit->point.loop.derivative(0.0));
            c.expect(std::abs(shot.tr1 - orbit->indices.tr1) <= 1e-6,
                     "oracle tr1 mismatch: " + str(shot.tr1) + " vs " +
                         str(orbit->indices.tr1));
            c.expect(std::abs(shot.tr2 - orbit->indices.tr2) <= 1e-6,
                     "oracle tr2 mismatch: " + str(shot.tr2) + " vs " +
                         str(orbit->indices.tr2));
        }
    } catch (const std::exception& e) {
        c.expect(false, std::string("pipeline threw: ") + e.what());
    }
    c.expect(c.elapsed_s() < 120.0, "runtime exceeded 2 min");
}

// ---- criterion 6 -----------------------------------------------------------

void criterion_6() {
    Criterion c(6, "Figure-2 crossection sequences at eps = 0.5");
    try {
        const auto cs = mathieu::crossection(0.5, 17.0);
        const std::vector<int> i1_expected{1, 1, 1, 2, 3, 3, 3, 4, 5};
        const std::vector<int> i2_expected{1, 2, 3, 4, 5, 6, 7, 8, 9};
        c.expect(cs.regions.size() == 9,
                 "expected 9 regions, got " + str(cs.regions.size()));
        for (std::size_t k = 0; k < cs.regions.size() && k < 9; ++k) {
            c.expect(cs.regions[k].i1 == i1_expected[k],
                     "region " + str(k) + ": i1=" + str(cs.regions[k].i1));
            c.expect(cs.regions[k].i2 == i2_expected[k],
                     "region " + str(k) + ": i2=" + str(cs.regions[k].i2));
        }
    } catch (const std::exception& e) {
        c.expect(false, std::string("crossection threw: ") + e.what());
    }
}

// ---- criterion 7 -----------------------------------------------------------

void criterion_7() {
    Criterion c(7, "first-tongue boundaries at eps = 0.1");
    try {
        const auto curves = mathieu::trace_transition_curves(1, 0.1, 0.02);
        c.expect(curves.size() == 2, "expected two branches");
        for (const auto& curve : curves) {
            const auto [eps_end, omega2_end] = curve.points.back();
            c.expect(std::abs(eps_end - 0.1) < 1e-12, "ladder endpoint wrong");
            const double expected =
                curve.branch == mathieu::Branch::Left ? 0.95 : 1.05;
            c.expect(std::abs(omega2_end - expected) <= 0.01,
                     "boundary " + str(omega2_end) + " vs " + str(expected));
            for (std::size_t k = 1; k < curve.points.size(); ++k) {
                const auto [eps, omega2] = curve.points[k];
                const double tr = mathieu::monodromy_trace({omega2, eps});
                c.expect(std::abs(tr - 2.0 * curve.multiplier) <= 1e-9,
                         "curve point off the trace contract: tr=" + str(tr));
            }
        }
    } catch (const std::exception& e) {
        c.expect(false, std::string("curve tracing threw: ") + e.what());
    }
}

// ---- criterion 8 -----------------------------------------------------------

void criterion_8() {
    Criterion c(8, "rotation-bound lemma (harmonic equality and strict bound)");
    try {
        // Harmonic case at the boundary beta = (pi/T)^2: the advance is
        // k T sqrt(beta) = k pi for every direction, exactly.
        const double beta = std::pow(nums::pi / kT2pi, 2);
        const auto harmonic = pendulum::make_problem(beta, kT2pi, {}, {}, 32);
        const LoopRepr origin = LoopRepr::constant(0.0, kT2pi, 32);
        for (int k : {1, 2}) {
            const auto rb = pendulum::rotation_bound_check(harmonic, origin, k);
            const double expected = k * kT2pi * std::sqrt(beta);
            for (double dt : rb.per_direction)
                c.expect(std::abs(dt - expected) <= 1e-8,
                         "harmonic advance " + str(dt) + " vs " + str(expected));
        }

        // Forced nondegenerate instance: strict bound over 8 directions.
        SolverOptions opts;
        opts.modes = 64;
        const auto demo = pendulum::make_problem(0.2, kT2pi, {0.1}, {}, 64);
        const auto rep = pendulum::solve(demo, opts);
        for (const auto* orbit : {&rep.q1, &rep.q2}) {
            for (const auto& rb : orbit->bounds) {
                c.expect(rb.per_direction.size() == 8, "expected 8 directions");
                c.expect(rb.holds, "strict bound failed for k=" + str(rb.k_periods));
            }
        }
    } catch (const std::exception& e) {
        c.expect(false, std::string("rotation bound threw: ") + e.what());
    }
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criteria_4_and_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (g_failures > 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
