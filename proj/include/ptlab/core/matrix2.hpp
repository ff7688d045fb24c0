#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

namespace ptlab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Dense complex 2x2 matrix, row-major entries.
struct Mat2 {
    cplx m00{}, m01{}, m10{}, m11{};

    static constexpr Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Mat2 sigma_x() { return {0.0, 1.0, 1.0, 0.0}; }
    static constexpr Mat2 sigma_y() { return {0.0, cplx{0.0, -1.0}, cplx{0.0, 1.0}, 0.0}; }
    static constexpr Mat2 sigma_z() { return {1.0, 0.0, 0.0, -1.0}; }

    cplx trace() const { return m00 + m11; }
    cplx det() const { return m00 * m11 - m01 * m10; }

    Mat2 conj() const { return {std::conj(m00), std::conj(m01), std::conj(m10), std::conj(m11)}; }
    Mat2 transpose() const { return {m00, m10, m01, m11}; }
    Mat2 adjoint() const { return conj().transpose(); }

    /// Largest entry modulus.
    double max_abs() const {
        return std::max({std::abs(m00), std::abs(m01), std::abs(m10), std::abs(m11)});
    }

    bool is_finite() const {
        auto ok = [](cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
        return ok(m00) && ok(m01) && ok(m10) && ok(m11);
    }
};

inline Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.m00 + b.m00, a.m01 + b.m01, a.m10 + b.m10, a.m11 + b.m11};
}

inline Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.m00 - b.m00, a.m01 - b.m01, a.m10 - b.m10, a.m11 - b.m11};
}

inline Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m00 * b.m00 + a.m01 * b.m10, a.m00 * b.m01 + a.m01 * b.m11,
            a.m10 * b.m00 + a.m11 * b.m10, a.m10 * b.m01 + a.m11 * b.m11};
}

inline Mat2 operator*(cplx s, const Mat2& a) { return {s * a.m00, s * a.m01, s * a.m10, s * a.m11}; }

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace ptlab
