#pragma once

#include <algorithm>
#include <cmath>

#include "natcurve/error.hpp"
#include "natcurve/vec3.hpp"

namespace natcurve {

inline constexpr double default_tol_ortho = 1e-9;

/// Moving-frame triple. Frenet use: (T, N, B); Bishop use: (T, N1, N2).
struct Frame {
    Vec3 e1{1.0, 0.0, 0.0};
    Vec3 e2{0.0, 1.0, 0.0};
    Vec3 e3{0.0, 0.0, 1.0};

    static constexpr Frame identity() { return {}; }

    friend constexpr bool operator==(const Frame&, const Frame&) = default;

    /// Maps frame-local coordinates to world coordinates: c.x e1 + c.y e2 + c.z e3.
    [[nodiscard]] constexpr Vec3 to_world(const Vec3& c) const { return c.x * e1 + c.y * e2 + c.z * e3; }
};

/// Largest deviation of the Gram matrix from the identity, combined with the
/// deviation of det(e1, e2, e3) from +1.
inline double orthonormality_error(const Frame& f) {
    const double g[] = {
        std::fabs(dot(f.e1, f.e1) - 1.0), std::fabs(dot(f.e2, f.e2) - 1.0), std::fabs(dot(f.e3, f.e3) - 1.0),
        std::fabs(dot(f.e1, f.e2)),       std::fabs(dot(f.e1, f.e3)),       std::fabs(dot(f.e2, f.e3)),
        std::fabs(dot(cross(f.e1, f.e2), f.e3) - 1.0),
    };
    return *std::max_element(std::begin(g), std::end(g));
}

inline bool is_orthonormal(const Frame& f, double tol = default_tol_ortho) {
    return orthonormality_error(f) <= tol;
}

inline double max_abs_diff(const Frame& a, const Frame& b) {
    return std::max({max_abs_diff(a.e1, b.e1), max_abs_diff(a.e2, b.e2), max_abs_diff(a.e3, b.e3)});
}

/// Gram-Schmidt in the order e1, e2; e3 is rebuilt as e1 x e2, which also repairs handedness.
inline Frame orthonormalize(const Frame& f) {
    if (norm(f.e1) < 0.5 || norm(f.e2) < 0.5 || norm(f.e3) < 0.5) {
        throw Error(ErrorCode::DegenerateFrame, "frame vector with norm below 0.5");
    }
    const Vec3 e1 = normalized(f.e1);
    const Vec3 r2 = f.e2 - dot(f.e2, e1) * e1;
    const double n2 = norm(r2);
    if (n2 < 0.5) {
        throw Error(ErrorCode::DegenerateFrame, "e2 nearly parallel to e1");
    }
    const Vec3 e2 = r2 / n2;
    return {e1, e2, cross(e1, e2)};
}

/// Rotates the normal pair by phi while keeping e1:
///   e2' = cos(phi) e2 - sin(phi) e3,  e3' = sin(phi) e2 + cos(phi) e3.
/// Under this rotation the frame coefficients transform as
///   k1' = k1 cos - k2 sin,  k2' = k1 sin + k2 cos,  k3' = k3 - phi'.
inline Frame rotate_normal_plane(const Frame& f, double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return {f.e1, c * f.e2 - s * f.e3, s * f.e2 + c * f.e3};
}

} // namespace natcurve
