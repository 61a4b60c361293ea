// spindex command-line front end: index computation for builtin or
// file-defined systems, Mathieu chart workflows, the forced-pendulum
// pipeline and a randomized Bott-identity checker.
//
// Exit codes: 0 success, 1 input error, 2 degenerate-instance refusal,
// 3 internal consistency failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "spindex/errors.hpp"
#include "spindex/io.hpp"
#include "spindex/mathieu.hpp"
#include "spindex/pendulum.hpp"

namespace {

using nlohmann::json;
using namespace spindex;

constexpr double kPi = std::numbers::pi;

void emit(const std::string& content, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << content;
        if (content.empty() || content.back() != '\n') std::cout << '\n';
    } else {
        io::write_file_atomic(out_path, content);
    }
}

// ---- index ------------------------------------------------------------

struct IndexArgs {
    std::string builtin = "mathieu";
    double omega2 = 1.5 * 1.5;
    double eps = 0.0;
    double beta = 0.2;
    double period = 2.0 * kPi;
    double u0 = 0.0;
    std::vector<double> entries;
    std::string schedule;
    int m = 2;
    std::vector<double> phis;
    double deg_tol = kDegTol;
    std::string out;
};

HamiltonianSpec schedule_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open schedule file " + path);
    json j;
    in >> j;
    if (!j.contains("segments")) throw Error("schedule file: missing segments");
    std::vector<double> ends;
    std::vector<Mat2> mats;
    for (const auto& seg : j.at("segments")) {
        ends.push_back(seg.at("until").get<double>());
        const auto s = seg.at("S").get<std::vector<double>>();
        if (s.size() != 3)
            throw Error("schedule file: S must be [s11, s12, s22]");
        mats.push_back(Mat2{s[0], s[1], s[1], s[2]});
    }
    return piecewise_spec(ends, mats);
}

int run_index(const IndexArgs& args) {
    HamiltonianSpec spec;
    json params;
    if (!args.schedule.empty()) {
        spec = schedule_from_file(args.schedule);
        params["schedule"] = args.schedule;
    } else if (args.builtin == "mathieu") {
        spec = mathieu::make_spec({args.omega2, args.eps});
        params["omega2"] = args.omega2;
        params["eps"] = args.eps;
    } else if (args.builtin == "pendulum-linearized") {
        const double s22 = args.beta * std::cos(args.u0);
        spec = constant_spec(Mat2{1.0, 0.0, 0.0, s22}, args.period);
        params["beta"] = args.beta;
        params["T"] = args.period;
        params["u0"] = args.u0;
    } else if (args.builtin == "constant-S") {
        if (args.entries.size() != 4)
            throw Error("constant-S needs --entries s11,s12,s21,s22");
        if (std::abs(args.entries[1] - args.entries[2]) > 1e-12)
            throw Error("constant-S entries must be symmetric");
        spec = constant_spec(Mat2{args.entries[0], args.entries[1],
                                  args.entries[2], args.entries[3]},
                             args.period);
        params["T"] = args.period;
        params["entries"] = args.entries;
    } else {
        throw Error("unknown builtin '" + args.builtin + "'");
    }
    if (args.m < 1) throw Error("--m must be >= 1");

    const SampledSymplecticPath one = integrate_fundamental(spec, 1);

    json out;
    out["builtin"] = args.schedule.empty() ? args.builtin : "schedule";
    out["params"] = params;
    out["tr1"] = one.monodromy().trace();

    // Degeneracy at any requested omega is a refusal, not a flag, so the
    // command reports exactly which omega failed via exit code 2.
    std::vector<double> phis{0.0, kPi};
    for (double phi : args.phis)
        if (phi != 0.0 && phi != kPi) phis.push_back(phi);

    json omegas = json::array();
    for (double phi : phis) {
        json entry;
        entry["phi"] = phi;
        entry["index"] = index_omega(one, OmegaPoint{phi}, args.deg_tol);
        omegas.push_back(entry);
    }
    out["i_omega"] = omegas;
    out["i1"] = index_omega(one, OmegaPoint{0.0}, args.deg_tol);

    if (args.m >= 2) {
        out["i2"] = index_i2(one, args.deg_tol);
        const SampledSymplecticPath two = iterate_path(one, 2);
        out["tr2"] = two.monodromy().trace();
    }
    if (args.m > 2) {
        const auto bott = bott_check(one, args.m, OmegaPoint{0.0}, args.deg_tol);
        if (!bott.holds)
            throw CrossCheckMismatch("iterate index disagrees with the Bott sum");
        std::ostringstream key;
        key << "i1_iterate_" << args.m;
        out[key.str()] = bott.lhs;
    }
    const auto verdict = classify_stability(one.monodromy(), args.deg_tol);
    out["stability"] = io::stability_name(verdict.kind);
    out["multipliers"] = {{verdict.mult_a.real(), verdict.mult_a.imag()},
                          {verdict.mult_b.real(), verdict.mult_b.imag()}};
    emit(out.dump(2), args.out);
    return 0;
}

// ---- mathieu workflows --------------------------------------------------

struct ScanArgs {
    mathieu::ScanGrid grid;
    double deg_tol = kDegTol;
    std::string out_csv = "mathieu_scan.csv";
    std::string out_json = "mathieu_scan.json";
};

int run_scan(const ScanArgs& args) {
    const auto cells = mathieu::scan_plane(args.grid, args.deg_tol);
    io::write_file_atomic(args.out_csv, io::scan_csv(cells));
    io::write_file_atomic(args.out_json, io::scan_json(cells).dump(2));
    std::cout << "wrote " << cells.size() << " cells to " << args.out_csv
              << " and " << args.out_json << "\n";
    return 0;
}

struct CurvesArgs {
    int n_max = 1;
    double eps_max = 0.5;
    double step = 0.05;
    double curve_tol = 1e-9;
    std::string out = "mathieu_curves.csv";
};

int run_curves(const CurvesArgs& args) {
    const auto curves =
        mathieu::trace_transition_curves(args.n_max, args.eps_max, args.step,
                                         args.curve_tol);
    io::write_file_atomic(args.out, io::curves_csv(curves));
    std::cout << "wrote " << curves.size() << " curve branches to " << args.out
              << "\n";
    return 0;
}

struct CrossArgs {
    double eps = 0.5;
    double omega2_max = 17.0;
    double curve_tol = 1e-9;
    double deg_tol = kDegTol;
    std::string out = "mathieu_crossection.csv";
    std::string out_json;
};

int run_crossection(const CrossArgs& args) {
    const auto cs =
        mathieu::crossection(args.eps, args.omega2_max, args.curve_tol,
                             args.deg_tol);
    io::write_file_atomic(args.out, io::crossection_csv(cs));
    if (!args.out_json.empty())
        io::write_file_atomic(args.out_json, io::crossection_json(cs).dump(2));
    std::cout << "i1 sequence:";
    for (const auto& r : cs.regions) std::cout << ' ' << r.i1;
    std::cout << "\ni2 sequence:";
    for (const auto& r : cs.regions) std::cout << ' ' << r.i2;
    std::cout << "\nwrote " << cs.regions.size() << " regions to " << args.out
              << "\n";
    return 0;
}

// ---- pendulum -----------------------------------------------------------

struct PendulumArgs {
    std::string problem;
    std::string forcing_csv;
    bool demo = false;
    double beta = 0.2;
    double period = 2.0 * kPi;
    std::vector<double> forcing_cos;
    std::vector<double> forcing_sin;
    int modes = 64;
    std::string out;
};

int run_pendulum(const PendulumArgs& args) {
    pendulum::PendulumProblem problem;
    if (args.demo) {
        problem = pendulum::make_problem(0.2, 2.0 * kPi, {0.1}, {}, args.modes);
    } else if (!args.problem.empty()) {
        std::ifstream in(args.problem);
        if (!in) throw Error("cannot open problem file " + args.problem);
        json j;
        in >> j;
        problem = io::pendulum_problem_from_json(j, args.modes);
    } else if (!args.forcing_csv.empty()) {
        std::ifstream in(args.forcing_csv);
        if (!in) throw Error("cannot open forcing file " + args.forcing_csv);
        std::vector<std::pair<double, double>> samples;
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream row(line);
            double t, f;
            char comma;
            if (row >> t >> comma >> f) samples.emplace_back(t, f);
        }
        problem = pendulum::problem_from_samples(args.beta, args.period,
                                                 samples, args.modes);
    } else {
        problem = pendulum::make_problem(args.beta, args.period,
                                         args.forcing_cos, args.forcing_sin,
                                         args.modes);
    }
    SolverOptions opts;
    opts.modes = args.modes;
    const auto report = pendulum::solve(problem, opts);
    emit(io::pendulum_report_json(report).dump(2), args.out);
    return 0;
}

// ---- bott property run ----------------------------------------------------

struct BottArgs {
    std::uint64_t seed = 1;
    int trials = 100;
    std::vector<int> ms{2, 3};
    double deg_tol = kDegTol;
};

// splitmix64; fixed seeds reproduce identical trial sets byte for byte.
struct CliRng {
    std::uint64_t state;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
    }
};

int run_bott(const BottArgs& args) {
    if (args.trials < 0) throw Error("--trials must be nonnegative");
    if (args.trials == 0) {
        std::cout << "bott: 0 trials requested; vacuous pass\n";
        return 0;
    }
    CliRng rng{args.seed ? args.seed : 0x9e3779b97f4a7c15ull};
    int done = 0;
    long resampled = 0;
    int failures = 0;
    while (done < args.trials) {
        const int segs = 2 + static_cast<int>(rng.next() % 4);
        std::vector<double> ends;
        std::vector<Mat2> mats;
        double t = 0.0;
        for (int k = 0; k < segs; ++k) {
            t += rng.uniform(0.1, 0.4);
            ends.push_back(t);
            const double a = rng.uniform(-1.8, 1.8);
            const double b = rng.uniform(-1.8, 1.8);
            const double d = rng.uniform(-1.8, 1.8);
            mats.push_back(Mat2{a, b, b, d});
        }
        try {
            const auto spec = piecewise_spec(ends, mats);
            const auto one = integrate_fundamental(spec, 1);
            for (int m : args.ms) {
                const auto res = bott_check(one, m, OmegaPoint{0.0}, args.deg_tol);
                if (!res.holds) {
                    ++failures;
                    std::cout << "FAIL trial " << done << " m=" << m << ": lhs="
                              << res.lhs << " rhs=" << res.rhs << "\n";
                }
            }
        } catch (const DegenerateEndpoint&) {
            ++resampled;
            continue;
        }
        ++done;
    }
    std::cout << "bott: " << done << " trials, " << failures << " failures, "
              << resampled << " degenerate draws resampled\n";
    if (failures > 0)
        throw CrossCheckMismatch("Bott identity failed on random systems");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conley-Zehnder / omega-index toolkit for Sp(2) paths"};
    app.set_config("--config", "", "key=value config file (flags override)");
    app.require_subcommand(1);

    IndexArgs index_args;
    auto* index_cmd = app.add_subcommand(
        "index", "Indices and stability of one linear periodic system");
    index_cmd->add_option("--builtin", index_args.builtin,
                          "mathieu | pendulum-linearized | constant-S");
    index_cmd->add_option("--omega2", index_args.omega2, "Mathieu omega^2");
    index_cmd->add_option("--eps", index_args.eps, "Mathieu eps");
    index_cmd->add_option("--beta", index_args.beta, "pendulum beta");
    index_cmd->add_option("--T", index_args.period, "period");
    index_cmd->add_option("--u0", index_args.u0,
                          "equilibrium angle for pendulum-linearized");
    index_cmd->add_option("--entries", index_args.entries,
                          "constant S entries s11,s12,s21,s22")
        ->delimiter(',');
    index_cmd->add_option("--schedule", index_args.schedule,
                          "piecewise-constant schedule JSON file");
    index_cmd->add_option("--m", index_args.m, "iterate count (>=2 adds i2)");
    index_cmd->add_option("--phi", index_args.phis,
                          "extra omega angles in [0, pi]")
        ->delimiter(',');
    index_cmd->add_option("--deg-tol", index_args.deg_tol, "degeneracy tolerance");
    index_cmd->add_option("-o,--out", index_args.out, "output JSON path");

    ScanArgs scan_args;
    auto* scan_cmd =
        app.add_subcommand("mathieu-scan", "Index-annotated stability chart");
    scan_cmd->add_option("--omega2-min", scan_args.grid.omega2_min);
    scan_cmd->add_option("--omega2-max", scan_args.grid.omega2_max);
    scan_cmd->add_option("--omega2-count", scan_args.grid.omega2_count);
    scan_cmd->add_option("--eps-min", scan_args.grid.eps_min);
    scan_cmd->add_option("--eps-max", scan_args.grid.eps_max);
    scan_cmd->add_option("--eps-count", scan_args.grid.eps_count);
    scan_cmd->add_option("--deg-tol", scan_args.deg_tol);
    scan_cmd->add_option("--out-csv", scan_args.out_csv);
    scan_cmd->add_option("--out-json", scan_args.out_json);

    CurvesArgs curves_args;
    auto* curves_cmd =
        app.add_subcommand("mathieu-curves", "Trace stability transition curves");
    curves_cmd->add_option("--n-max", curves_args.n_max);
    curves_cmd->add_option("--eps-max", curves_args.eps_max);
    curves_cmd->add_option("--step", curves_args.step);
    curves_cmd->add_option("--curve-tol", curves_args.curve_tol);
    curves_cmd->add_option("-o,--out", curves_args.out);

    CrossArgs cross_args;
    auto* cross_cmd = app.add_subcommand(
        "mathieu-crossection", "Fixed-eps region sequence of the chart");
    cross_cmd->add_option("--eps", cross_args.eps);
    cross_cmd->add_option("--omega2-max", cross_args.omega2_max);
    cross_cmd->add_option("--curve-tol", cross_args.curve_tol);
    cross_cmd->add_option("--deg-tol", cross_args.deg_tol);
    cross_cmd->add_option("-o,--out", cross_args.out);
    cross_cmd->add_option("--out-json", cross_args.out_json);

    PendulumArgs pend_args;
    auto* pend_cmd =
        app.add_subcommand("pendulum", "Forced-pendulum stability pipeline");
    pend_cmd->add_option("--problem", pend_args.problem, "problem JSON file");
    pend_cmd->add_flag("--demo", pend_args.demo,
                       "builtin instance beta=0.2, T=2pi, f=0.1 cos t");
    pend_cmd->add_option("--beta", pend_args.beta);
    pend_cmd->add_option("--T", pend_args.period);
    pend_cmd->add_option("--forcing-cos", pend_args.forcing_cos,
                         "cos coefficients of f")
        ->delimiter(',');
    pend_cmd->add_option("--forcing-sin", pend_args.forcing_sin,
                         "sin coefficients of f")
        ->delimiter(',');
    pend_cmd->add_option("--forcing-csv", pend_args.forcing_csv,
                         "time series t,f to fit (zero-mean projected)");
    pend_cmd->add_option("--modes", pend_args.modes);
    pend_cmd->add_option("-o,--out", pend_args.out, "output JSON path");

    BottArgs bott_args;
    auto* bott_cmd = app.add_subcommand(
        "bott", "Randomized check of the iteration identity");
    bott_cmd->add_option("--seed", bott_args.seed);
    bott_cmd->add_option("--trials", bott_args.trials);
    bott_cmd->add_option("--m", bott_args.ms, "iterate counts")->delimiter(',');
    bott_cmd->add_option("--deg-tol", bott_args.deg_tol);

    try {
        app.parse(argc, argv);
        if (index_cmd->parsed()) return run_index(index_args);
        if (scan_cmd->parsed()) return run_scan(scan_args);
        if (curves_cmd->parsed()) return run_curves(curves_args);
        if (cross_cmd->parsed()) return run_crossection(cross_args);
        if (pend_cmd->parsed()) return run_pendulum(pend_args);
        if (bott_cmd->parsed()) return run_bott(bott_args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const DegenerateEndpoint& e) {
        std::cerr << "degenerate instance: " << e.what() << "\n";
        return 2;
    } catch (const InternalCheckFailure& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
