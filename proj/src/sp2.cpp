#include "spindex/sp2.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

#include "spindex/errors.hpp"

namespace spindex {

namespace {

using cplx = std::complex<double>;

/// Eigenvector of A for the eigenvalue lam, taken from the better
/// conditioned of the two rows of (A - lam I).
void eigenvector(const Mat2& A, cplx lam, cplx& v1, cplx& v2) {
    if (std::abs(A.b) >= std::abs(A.c)) {
        v1 = cplx(A.b, 0.0);
        v2 = lam - A.a;
    } else {
        v1 = lam - A.d;
        v2 = cplx(A.c, 0.0);
    }
}

/// <Gv, v> with G = -iJ = [[0, i], [-i, 0]]. Real for any v.
double krein_form(cplx v1, cplx v2) {
    return -2.0 * std::imag(v2 * std::conj(v1));
}

}  // namespace

EigenClass classify_eigen(const Mat2& A, double eig_tol) {
    const double tr = A.trace();
    if (std::abs(tr - 2.0) <= eig_tol) {
        return {EigKind::ParabolicPlus, 1.0};
    }
    if (std::abs(tr + 2.0) <= eig_tol) {
        return {EigKind::ParabolicMinus, -1.0};
    }
    if (tr > 2.0) {
        // lambda_big = (tr + sqrt(tr^2-4))/2; report the reciprocal in (0,1).
        const double big = 0.5 * (tr + std::sqrt(tr * tr - 4.0));
        return {EigKind::HyperbolicPositive, 1.0 / big};
    }
    if (tr < -2.0) {
        const double big = 0.5 * (tr - std::sqrt(tr * tr - 4.0));
        return {EigKind::HyperbolicNegative, 1.0 / big};
    }
    // Elliptic: eigenvalues e^{+-i theta0} with theta0 in (0, pi). The
    // Krein-positive member decides whether theta(A) is theta0 or
    // 2 pi - theta0.
    const double theta0 = std::acos(std::clamp(tr / 2.0, -1.0, 1.0));
    cplx v1, v2;
    eigenvector(A, std::polar(1.0, theta0), v1, v2);
    const double s = krein_form(v1, v2);
    const double theta = s > 0.0 ? theta0 : 2.0 * std::numbers::pi - theta0;
    return {EigKind::Elliptic, theta};
}

int krein_sign(const Mat2& A, EigSelect which, double eig_tol) {
    const double tr = A.trace();
    if (std::abs(tr) >= 2.0 - eig_tol) {
        std::ostringstream msg;
        msg << "krein_sign: matrix is not elliptic (tr = " << tr << ")";
        throw NotElliptic(msg.str());
    }
    const double theta0 = std::acos(std::clamp(tr / 2.0, -1.0, 1.0));
    const cplx lam = which == EigSelect::UpperHalf ? std::polar(1.0, theta0)
                                                   : std::polar(1.0, -theta0);
    cplx v1, v2;
    eigenvector(A, lam, v1, v2);
    const double s = krein_form(v1, v2);
    return s > 0.0 ? +1 : -1;
}

std::complex<double> rotation(const Mat2& A, double eig_tol) {
    const EigenClass ec = classify_eigen(A, eig_tol);
    switch (ec.kind) {
        case EigKind::HyperbolicPositive:
        case EigKind::ParabolicPlus:
            return {1.0, 0.0};
        case EigKind::HyperbolicNegative:
        case EigKind::ParabolicMinus:
            return {-1.0, 0.0};
        case EigKind::Elliptic:
            return std::polar(1.0, ec.angle_or_lambda);
    }
    return {1.0, 0.0};  // unreachable
}

double rotation_angle(const Mat2& A, double eig_tol) {
    const EigenClass ec = classify_eigen(A, eig_tol);
    switch (ec.kind) {
        case EigKind::HyperbolicPositive:
        case EigKind::ParabolicPlus:
            return 0.0;
        case EigKind::HyperbolicNegative:
        case EigKind::ParabolicMinus:
            return std::numbers::pi;
        case EigKind::Elliptic:
            return ec.angle_or_lambda;
    }
    return 0.0;  // unreachable
}

double d_omega(const Mat2& A, OmegaPoint w) {
    // conj(w) det(A - wI) = w - tr + conj(w) on SL(2,R), i.e. 2 cos(phi) - tr.
    return 2.0 * std::cos(w.phi) - A.trace();
}

ComponentTag classify_component(const Mat2& A, OmegaPoint w, double deg_tol) {
    const double dv = d_omega(A, w);
    if (dv < -deg_tol) {
        return {ComponentSign::Plus, dv};
    }
    if (dv > deg_tol) {
        return {ComponentSign::Minus, dv};
    }
    return {ComponentSign::Degenerate, dv};
}

}  // namespace spindex
