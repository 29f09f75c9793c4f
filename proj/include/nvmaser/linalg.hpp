#pragma once

// Minimal 3-vector / 3x3 helpers: just enough for crystal rotations and the
// triplet energy matrix. Row-major matrices.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "nvmaser/errors.hpp"

namespace nvmaser {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }

    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }

    Vec3 normalized() const {
        const double n = norm();
        if (n <= 0.0 || !std::isfinite(n)) {
            throw invalid_input_error("cannot normalize a zero or non-finite vector");
        }
        return {x / n, y / n, z / n};
    }

    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
};

using Mat3 = std::array<std::array<double, 3>, 3>;

inline Vec3 apply(const Mat3& m, const Vec3& v) {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
}

inline Mat3 multiply(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

// Columns are the images of the basis vectors.
inline Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    return {{{c0.x, c1.x, c2.x}, {c0.y, c1.y, c2.y}, {c0.z, c1.z, c2.z}}};
}

// Right-handed rotation about +y: +z rotates towards +x.
inline Mat3 rotation_about_y(double angle_deg) {
    const double a = angle_deg * M_PI / 180.0;
    const double c = std::cos(a), s = std::sin(a);
    return {{{c, 0.0, s}, {0.0, 1.0, 0.0}, {-s, 0.0, c}}};
}

// Right-handed rotation about +z.
inline Mat3 rotation_about_z(double angle_deg) {
    const double a = angle_deg * M_PI / 180.0;
    const double c = std::cos(a), s = std::sin(a);
    return {{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
}

// Eigenvalues of a real symmetric 3x3 matrix by cyclic Jacobi rotations,
// returned ascending. Input is copied; only the upper triangle is trusted.
inline std::array<double, 3> eigenvalues_sym3(Mat3 a) {
    a[1][0] = a[0][1];
    a[2][0] = a[0][2];
    a[2][1] = a[1][2];
    const double scale = std::max({1.0, std::fabs(a[0][0]), std::fabs(a[1][1]), std::fabs(a[2][2]),
                                   std::fabs(a[0][1]), std::fabs(a[0][2]), std::fabs(a[1][2])});
    const double stop = std::numeric_limits<double>::epsilon() * scale;
    for (int sweep = 0; sweep < 64; ++sweep) {
        const double off = std::fabs(a[0][1]) + std::fabs(a[0][2]) + std::fabs(a[1][2]);
        if (off <= stop) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    std::array<double, 3> e{a[0][0], a[1][1], a[2][2]};
    std::sort(e.begin(), e.end());
    return e;
}

// Solves a 3x3 linear system by Gaussian elimination with partial pivoting.
// Returns false when the matrix is singular at the given relative threshold.
inline bool solve3(Mat3 m, std::array<double, 3> rhs, std::array<double, 3>& out,
                   double rel_eps = 1e-12) {
    double scale = 0.0;
    for (const auto& row : m)
        for (double v : row) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) return false;
    std::array<int, 3> idx{0, 1, 2};
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::fabs(m[idx[r]][col]) > std::fabs(m[idx[piv]][col])) piv = r;
        std::swap(idx[col], idx[piv]);
        const double d = m[idx[col]][col];
        if (std::fabs(d) <= rel_eps * scale) return false;
        for (int r = col + 1; r < 3; ++r) {
            const double f = m[idx[r]][col] / d;
            for (int c = col; c < 3; ++c) m[idx[r]][c] -= f * m[idx[col]][c];
            rhs[idx[r]] -= f * rhs[idx[col]];
        }
    }
    for (int col = 2; col >= 0; --col) {
        double s = rhs[idx[col]];
        for (int c = col + 1; c < 3; ++c) s -= m[idx[col]][c] * out[c];
        out[col] = s / m[idx[col]][col];
    }
    return true;
}

}  // namespace nvmaser
