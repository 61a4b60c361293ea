#pragma once

#include <cmath>

namespace spindex {

/// Real 2x2 matrix, row-major [[a, b], [c, d]].
///
/// Members of Sp(2) = SL(2,R) are Mat2 values with determinant 1; the
/// membership is a numerical invariant checked via is_symplectic(), not
/// a property of the type.
struct Mat2 {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    [[nodiscard]] double trace() const { return a + d; }
    [[nodiscard]] double det() const { return a * d - b * c; }

    /// Inverse assuming det == 1.
    [[nodiscard]] Mat2 symplectic_inverse() const { return {d, -b, -c, a}; }

    [[nodiscard]] Mat2 transpose() const { return {a, c, b, d}; }

    [[nodiscard]] bool is_symplectic(double tol) const {
        return std::abs(det() - 1.0) <= tol;
    }

    [[nodiscard]] double max_abs() const {
        return std::max(std::max(std::abs(a), std::abs(b)),
                        std::max(std::abs(c), std::abs(d)));
    }

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

    /// Counterclockwise rotation R(theta).
    static Mat2 rotation(double theta) {
        const double cs = std::cos(theta);
        const double sn = std::sin(theta);
        return {cs, -sn, sn, cs};
    }

    Mat2 operator*(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    Mat2 operator*(double s) const { return {a * s, b * s, c * s, d * s}; }
    Mat2 operator+(const Mat2& o) const { return {a + o.a, b + o.b, c + o.c, d + o.d}; }
    Mat2 operator-(const Mat2& o) const { return {a - o.a, b - o.b, c - o.c, d - o.d}; }

    /// Matrix-vector product, v = (x, y).
    void apply(double& x, double& y) const {
        const double nx = a * x + b * y;
        const double ny = c * x + d * y;
        x = nx;
        y = ny;
    }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

/// Standard symplectic form J = [[0,-1],[1,0]]; J^2 = -I.
inline constexpr Mat2 kJ{0.0, -1.0, 1.0, 0.0};

}  // namespace spindex
