#include "spindex/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spindex/errors.hpp"

namespace spindex::io {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

const char* stability_name(Stability s) {
    switch (s) {
        case Stability::Elliptic: return "Elliptic";
        case Stability::HyperbolicPositive: return "HyperbolicPositive";
        case Stability::HyperbolicNegative: return "HyperbolicNegative";
        case Stability::Degenerate: return "Degenerate";
    }
    return "?";
}

namespace {

nlohmann::json complex_json(const std::complex<double>& z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

std::string opt_int(const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string("NA");
}

}  // namespace

nlohmann::json index_report_json(const IndexReport& report) {
    nlohmann::json j;
    j["i1"] = report.i1 ? nlohmann::json(*report.i1) : nlohmann::json();
    j["i2"] = report.i2 ? nlohmann::json(*report.i2) : nlohmann::json();
    nlohmann::json omegas = nlohmann::json::array();
    for (const auto& [phi, idx] : report.i_omega) {
        nlohmann::json entry;
        entry["phi"] = phi;
        entry["index"] = idx ? nlohmann::json(*idx) : nlohmann::json();
        omegas.push_back(entry);
    }
    j["i_omega"] = omegas;
    j["multipliers"] = nlohmann::json::array(
        {complex_json(report.stability.mult_a), complex_json(report.stability.mult_b)});
    j["stability"] = stability_name(report.stability.kind);
    j["degenerate_at"] = report.degenerate_at;
    j["tr1"] = report.tr1;
    j["tr2"] = report.tr2;
    return j;
}

std::string scan_csv(const std::vector<mathieu::ScanCell>& cells) {
    std::ostringstream out;
    out << "omega2,eps,tr1,tr2,i1,i2,stability,degenerate\n";
    for (const auto& c : cells) {
        const bool degenerate = !c.report.degenerate_at.empty() ||
                                c.report.stability.kind == Stability::Degenerate;
        out << g17(c.params.omega2) << ',' << g17(c.params.eps) << ','
            << g17(c.tr1) << ',' << g17(c.tr2) << ',' << opt_int(c.report.i1)
            << ',' << opt_int(c.report.i2) << ','
            << stability_name(c.report.stability.kind) << ','
            << (degenerate ? 1 : 0) << '\n';
    }
    return out.str();
}

nlohmann::json scan_json(const std::vector<mathieu::ScanCell>& cells) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : cells) {
        nlohmann::json row;
        row["omega2"] = c.params.omega2;
        row["eps"] = c.params.eps;
        row["tr1"] = c.tr1;
        row["tr2"] = c.tr2;
        row["report"] = index_report_json(c.report);
        rows.push_back(row);
    }
    return rows;
}

std::string curves_csv(const std::vector<mathieu::TransitionCurve>& curves) {
    std::ostringstream out;
    out << "n,branch,multiplier,eps,omega2\n";
    for (const auto& c : curves) {
        const char* branch = c.branch == mathieu::Branch::Left ? "left" : "right";
        for (const auto& [eps, omega2] : c.points)
            out << c.n << ',' << branch << ',' << c.multiplier << ',' << g17(eps)
                << ',' << g17(omega2) << '\n';
    }
    return out.str();
}

std::string crossection_csv(const mathieu::Crossection& cs) {
    std::ostringstream out;
    out << "region,omega2_lo,omega2_hi,omega2_sample,i1,i_minus1,i2,stability,"
           "tr1,oracle_assisted\n";
    int k = 0;
    for (const auto& r : cs.regions) {
        out << k++ << ',' << g17(r.lo) << ',' << g17(r.hi) << ','
            << g17(r.sample) << ',' << r.i1 << ',' << r.i_minus1 << ',' << r.i2
            << ',' << stability_name(r.stability) << ',' << g17(r.tr1) << ','
            << (r.oracle_assisted ? 1 : 0) << '\n';
    }
    return out.str();
}

nlohmann::json crossection_json(const mathieu::Crossection& cs) {
    nlohmann::json j;
    j["eps"] = cs.eps;
    j["boundaries"] = cs.boundaries;
    nlohmann::json regions = nlohmann::json::array();
    nlohmann::json i1_seq = nlohmann::json::array();
    nlohmann::json i2_seq = nlohmann::json::array();
    for (const auto& r : cs.regions) {
        nlohmann::json reg;
        reg["omega2_lo"] = r.lo;
        reg["omega2_hi"] = r.hi;
        reg["omega2_sample"] = r.sample;
        reg["i1"] = r.i1;
        reg["i_minus1"] = r.i_minus1;
        reg["i2"] = r.i2;
        reg["stability"] = stability_name(r.stability);
        reg["tr1"] = r.tr1;
        reg["oracle_assisted"] = r.oracle_assisted;
        regions.push_back(reg);
        i1_seq.push_back(r.i1);
        i2_seq.push_back(r.i2);
    }
    j["regions"] = regions;
    j["i1_sequence"] = i1_seq;
    j["i2_sequence"] = i2_seq;
    return j;
}

namespace {

nlohmann::json loop_json(const LoopRepr& loop) {
    nlohmann::json j;
    j["period"] = loop.period;
    j["modes"] = loop.modes;
    std::vector<double> a(loop.coeffs.data(), loop.coeffs.data() + loop.coeffs.size());
    j["coeffs"] = a;
    return j;
}

nlohmann::json rotation_bound_json(const pendulum::RotationBound& rb) {
    nlohmann::json j;
    j["k"] = rb.k_periods;
    j["bound"] = rb.bound;
    j["max_delta_theta"] = rb.max_delta_theta;
    j["margin"] = rb.bound - rb.max_delta_theta;
    j["per_direction"] = rb.per_direction;
    j["holds"] = rb.holds;
    return j;
}

nlohmann::json orbit_json(const pendulum::OrbitReport& orbit) {
    nlohmann::json j;
    j["loop"] = loop_json(orbit.point.loop);
    j["action"] = orbit.point.action;
    j["grad_norm"] = orbit.point.grad_norm;
    j["morse_index"] = orbit.point.morse_index;
    j["kind"] = orbit.point.kind == CriticalKind::Minimizer      ? "minimizer"
                : orbit.point.kind == CriticalKind::MountainPass ? "mountain-pass"
                                                                 : "other";
    if (orbit.point.mp_value) j["mp_value"] = *orbit.point.mp_value;
    j["indices"] = index_report_json(orbit.indices);
    nlohmann::json bounds = nlohmann::json::array();
    for (const auto& rb : orbit.bounds) bounds.push_back(rotation_bound_json(rb));
    j["rotation_bounds"] = bounds;
    return j;
}

}  // namespace

nlohmann::json pendulum_report_json(const pendulum::PendulumReport& report) {
    nlohmann::json j;
    j["beta"] = report.beta;
    j["T"] = report.period;
    j["ortega_condition"] = report.ortega_condition;
    j["forcing_zero"] = report.forcing_zero;
    j["assertions_checked"] = report.assertions_checked;
    j["q1"] = orbit_json(report.q1);
    j["q2"] = orbit_json(report.q2);
    return j;
}

pendulum::PendulumProblem pendulum_problem_from_json(const nlohmann::json& j,
                                                     int modes) {
    if (!j.contains("beta") || !j.contains("T"))
        throw Error("pendulum problem: need beta and T");
    const double beta = j.at("beta").get<double>();
    const double period = j.at("T").get<double>();
    std::vector<double> cosc, sinc;
    if (j.contains("forcing")) {
        const auto& f = j.at("forcing");
        if (f.contains("cos")) cosc = f.at("cos").get<std::vector<double>>();
        if (f.contains("sin")) sinc = f.at("sin").get<std::vector<double>>();
    }
    return pendulum::make_problem(beta, period, cosc, sinc, modes);
}

}  // namespace spindex::io
