#include "spindex/index.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spindex/errors.hpp"

namespace spindex {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Slack for the endpoint-membership assertions. The lift carries only
// rounding-level drift, so violations beyond this indicate a genuine
// tracking bug rather than noise.
constexpr double kMembershipSlack = 1e-6;

int index_omega_core(const SampledSymplecticPath& path, double phi,
                     bool minus_component) {
    const double theta_end = path.end_lift();
    const double k = std::floor(theta_end / kTwoPi);
    const double alpha = theta_end - kTwoPi * k;  // in [0, 2pi)

    if (minus_component) {
        // Sp(2)_omega^-: rho(end) lies on the arc through -1, so
        // alpha in (phi, 2pi - phi). Total angle closes to 2 pi k + pi.
        if (!(alpha > phi - kMembershipSlack &&
              alpha < kTwoPi - phi + kMembershipSlack)) {
            std::ostringstream msg;
            msg << "lift endpoint alpha = " << alpha
                << " incompatible with Sp- membership at phi = " << phi;
            throw InternalCheckFailure(msg.str());
        }
        return 2 * static_cast<int>(k) + 1;
    }
    // Sp(2)_omega^+: rho(end) lies on the arc through +1, alpha in
    // [0, phi) or (2pi - phi, 2pi). Snap to the nearest multiple of 2pi.
    const bool low = alpha <= kPi;
    if (low ? !(alpha < phi + kMembershipSlack)
            : !(alpha > kTwoPi - phi - kMembershipSlack)) {
        std::ostringstream msg;
        msg << "lift endpoint alpha = " << alpha
            << " incompatible with Sp+ membership at phi = " << phi;
        throw InternalCheckFailure(msg.str());
    }
    return 2 * (static_cast<int>(k) + (low ? 0 : 1));
}

int index_omega_gated(const SampledSymplecticPath& path, double phi,
                      double gate) {
    const double dval = d_omega(path.monodromy(), OmegaPoint{phi});
    if (std::abs(dval) <= gate) {
        std::ostringstream msg;
        msg << "endpoint is omega-degenerate at phi = " << phi
            << " (D = " << dval << ")";
        throw DegenerateEndpoint(phi, dval, msg.str());
    }
    return index_omega_core(path, phi, dval > 0.0);
}

}  // namespace

int index_omega(const SampledSymplecticPath& path, OmegaPoint w, double deg_tol) {
    if (w.phi < 0.0 || w.phi > kPi)
        throw Error("index_omega: phi must lie in [0, pi]");
    return index_omega_gated(path, w.phi, deg_tol);
}

int index_omega_signed(const SampledSymplecticPath& path, OmegaPoint w,
                       ComponentSign sign) {
    if (w.phi < 0.0 || w.phi > kPi)
        throw Error("index_omega_signed: phi must lie in [0, pi]");
    if (sign == ComponentSign::Degenerate)
        throw Error("index_omega_signed: sign must be Plus or Minus");
    return index_omega_core(path, w.phi, sign == ComponentSign::Minus);
}

int index_i1(const SampledSymplecticPath& path, double deg_tol) {
    return index_omega(path, OmegaPoint{0.0}, deg_tol);
}

int index_i2(const SampledSymplecticPath& one_period, double deg_tol) {
    const Mat2& end = one_period.monodromy();
    // i2 exists iff gamma(T) is nondegenerate at both +1 and -1; refuse at
    // the root level so the offending omega is named.
    const double d_plus = d_omega(end, OmegaPoint{0.0});
    const double d_minus = d_omega(end, OmegaPoint{kPi});
    if (std::abs(d_plus) <= deg_tol)
        throw DegenerateEndpoint(0.0, d_plus, "i2 undefined: monodromy degenerate at +1");
    if (std::abs(d_minus) <= deg_tol)
        throw DegenerateEndpoint(kPi, d_minus, "i2 undefined: monodromy degenerate at -1");

    const SampledSymplecticPath doubled = iterate_path(one_period, 2);
    // The double-cover endpoint has D = -D(+1) D(-1), which is nonzero here
    // but can be smaller than deg_tol; the gate already happened above.
    const double d2 = d_omega(doubled.monodromy(), OmegaPoint{0.0});
    const int via_cover = index_omega_gated(doubled, 0.0, 0.5 * std::abs(d2));

    const int via_bott = index_omega_gated(one_period, 0.0, deg_tol) +
                         index_omega_gated(one_period, kPi, deg_tol);
    if (via_cover != via_bott) {
        std::ostringstream msg;
        msg << "i2 routes disagree: double cover gives " << via_cover
            << ", Bott sum gives " << via_bott;
        throw CrossCheckMismatch(msg.str());
    }
    return via_cover;
}

BottResult bott_check(const SampledSymplecticPath& one_period, int m,
                      OmegaPoint z, double deg_tol) {
    if (m < 1) throw Error("bott_check: m must be >= 1");
    if (z.phi < 0.0 || z.phi > kPi) throw Error("bott_check: phi must lie in [0, pi]");

    BottResult res;

    // m-th roots of z: angles (phi_z + 2 pi j)/m, folded into [0, pi].
    // Folding merges conjugate pairs; each folded angle keeps its count.
    std::vector<std::pair<double, int>> roots;  // (folded phi, multiplicity)
    for (int j = 0; j < m; ++j) {
        double psi = (z.phi + kTwoPi * j) / m;
        psi = std::fmod(psi, kTwoPi);
        const double folded = psi <= kPi ? psi : kTwoPi - psi;
        bool merged = false;
        for (auto& [p, mult] : roots) {
            if (std::abs(p - folded) < 1e-12) {
                ++mult;
                merged = true;
                break;
            }
        }
        if (!merged) roots.emplace_back(folded, 1);
    }

    res.rhs = 0;
    for (const auto& [phi, mult] : roots) {
        const int idx = index_omega(one_period, OmegaPoint{phi}, deg_tol);
        res.terms.push_back({phi, mult, idx});
        res.rhs += mult * idx;
    }

    const SampledSymplecticPath iter = iterate_path(one_period, m);
    res.lhs = index_omega(iter, z, deg_tol);
    res.holds = res.lhs == res.rhs;
    return res;
}

StabilityVerdict classify_stability(const Mat2& monodromy, double deg_tol) {
    StabilityVerdict v;
    v.trace = monodromy.trace();
    const double tr = v.trace;
    if (std::abs(std::abs(tr) - 2.0) <= deg_tol) {
        v.kind = Stability::Degenerate;
        const double lam = tr > 0.0 ? 1.0 : -1.0;
        v.mult_a = v.mult_b = lam;
        return v;
    }
    const EigenClass ec = classify_eigen(monodromy, deg_tol);
    switch (ec.kind) {
        case EigKind::Elliptic: {
            v.kind = Stability::Elliptic;
            const double theta0 = std::acos(std::clamp(tr / 2.0, -1.0, 1.0));
            v.mult_a = std::polar(1.0, theta0);
            v.mult_b = std::conj(v.mult_a);
            break;
        }
        case EigKind::HyperbolicPositive:
            v.kind = Stability::HyperbolicPositive;
            v.mult_a = ec.angle_or_lambda;
            v.mult_b = 1.0 / ec.angle_or_lambda;
            break;
        case EigKind::HyperbolicNegative:
            v.kind = Stability::HyperbolicNegative;
            v.mult_a = ec.angle_or_lambda;
            v.mult_b = 1.0 / ec.angle_or_lambda;
            break;
        case EigKind::ParabolicPlus:
        case EigKind::ParabolicMinus:
            v.kind = Stability::Degenerate;
            v.mult_a = v.mult_b = ec.angle_or_lambda;
            break;
    }
    return v;
}

ParityCheck parity_stability_check(const SampledSymplecticPath& one_period,
                                   double deg_tol) {
    ParityCheck pc{};
    pc.i2 = index_i2(one_period, deg_tol);
    const StabilityVerdict v = classify_stability(one_period.monodromy(), deg_tol);
    pc.verdict = v.kind;
    if (pc.verdict == Stability::Degenerate)
        throw DegenerateEndpoint(0.0, d_omega(one_period.monodromy(), OmegaPoint{0.0}),
                                 "parity check: degenerate monodromy");
    const bool odd = (pc.i2 % 2 + 2) % 2 == 1;
    pc.consistent = odd == (pc.verdict == Stability::Elliptic);
    return pc;
}

IndexReport make_index_report(const SampledSymplecticPath& one_period,
                              const std::vector<double>& phis, double deg_tol,
                              const SampledSymplecticPath* two_periods) {
    IndexReport rep;
    rep.tr1 = one_period.monodromy().trace();
    rep.stability = classify_stability(one_period.monodromy(), deg_tol);

    auto try_omega = [&](double phi) -> std::optional<int> {
        try {
            return index_omega(one_period, OmegaPoint{phi}, deg_tol);
        } catch (const DegenerateEndpoint&) {
            bool seen = false;
            for (double d : rep.degenerate_at) seen = seen || d == phi;
            if (!seen) rep.degenerate_at.push_back(phi);
            return std::nullopt;
        }
    };

    rep.i1 = try_omega(0.0);
    const std::optional<int> i_minus = try_omega(kPi);

    if (rep.i1 && i_minus) {
        const int via_bott = *rep.i1 + *i_minus;
        int via_cover;
        if (two_periods != nullptr) {
            rep.tr2 = two_periods->monodromy().trace();
            const double d2 = d_omega(two_periods->monodromy(), OmegaPoint{0.0});
            via_cover = index_omega_gated(*two_periods, 0.0, 0.5 * std::abs(d2));
        } else {
            const SampledSymplecticPath doubled = iterate_path(one_period, 2);
            rep.tr2 = doubled.monodromy().trace();
            const double d2 = d_omega(doubled.monodromy(), OmegaPoint{0.0});
            via_cover = index_omega_gated(doubled, 0.0, 0.5 * std::abs(d2));
        }
        if (via_cover != via_bott) {
            std::ostringstream msg;
            msg << "i2 routes disagree: double cover gives " << via_cover
                << ", Bott sum gives " << via_bott;
            throw CrossCheckMismatch(msg.str());
        }
        rep.i2 = via_cover;
    } else {
        const double tr1 = rep.tr1;
        rep.tr2 = tr1 * tr1 - 2.0;
    }

    for (double phi : phis) {
        if (phi == 0.0 && rep.i1) {
            rep.i_omega.emplace_back(phi, rep.i1);
        } else {
            rep.i_omega.emplace_back(phi, try_omega(phi));
        }
    }
    return rep;
}

}  // namespace spindex
