#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "natcurve/error.hpp"
#include "natcurve/frame.hpp"
#include "natcurve/frenet.hpp"
#include "natcurve/scalar_field.hpp"

namespace natcurve {

inline constexpr double eps_radius_relative = 1e-10;

/// Polar form (omega cos phi, omega sin phi) of a planar development, with signed
/// radius omega and a continuous angle phi.
struct PolarDevelopment {
    ScalarField omega;
    ScalarField phi;
};

namespace detail {

inline Grid shared_grid(const ScalarField& a, const ScalarField& b, std::size_t intervals) {
    const double slack = domain_slack(a.domain());
    if (std::fabs(a.domain().lo - b.domain().lo) > slack || std::fabs(a.domain().hi - b.domain().hi) > slack) {
        throw Error(ErrorCode::DomainMismatch, "fields do not share a domain");
    }
    if (a.is_table()) return a.grid();
    if (b.is_table()) return b.grid();
    return {a.domain(), intervals};
}

inline std::vector<double> phase(const ScalarField& tau, const Grid& grid, double phi0) {
    std::vector<double> phi = cumulative_integral(tau, grid);
    for (double& p : phi) p += phi0;
    return phi;
}

} // namespace detail

/// Bishop frame from a Frenet apparatus: phi = phi0 + int tau,
/// (N1, N2) = rotation of (N, B) by phi, (k1, k2) = kappa (cos phi, sin phi).
inline BishopApparatus bishop_transform(const FrenetApparatus& app, double phi0) {
    const Grid& grid = app.grid();
    const std::vector<double> phi = detail::phase(app.tau, grid, phi0);
    BishopApparatus out;
    out.frames.grid = grid;
    out.frames.frames.reserve(grid.size());
    std::vector<double> k1(grid.size());
    std::vector<double> k2(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.frames.frames.push_back(rotate_normal_plane(app.frames[i], phi[i]));
        const double k = app.kappa(grid.node(i));
        k1[i] = k * std::cos(phi[i]);
        k2[i] = k * std::sin(phi[i]);
    }
    out.k1 = ScalarField::table(grid, std::move(k1));
    out.k2 = ScalarField::table(grid, std::move(k2));
    return out;
}

struct UnwrapConfig {
    double eps_radius = eps_radius_relative; ///< relative to the largest radius
    double max_jump = std::numbers::pi / 4;  ///< largest admissible angle change between nodes
    std::size_t intervals = 4000;            ///< grid for rule-backed inputs
};

/// Signed-radius polar form of (k1, k2) on a grid.
///
/// The angle is lifted modulo pi, so passing through the origin along a line
/// flips the sign of omega instead of the angle. Nodes with radius below
/// eps_radius carry no angle: runs of them at either end of the domain hold the
/// nearest lifted angle, interior runs are bridged by the cubic through the two
/// lifted nodes on each side (so isolated zeros leave phi smooth). The first
/// node with a nonzero radius gets omega > 0.
inline PolarDevelopment polar_unwrap(const ScalarField& k1, const ScalarField& k2, const UnwrapConfig& cfg = {}) {
    const Grid grid = detail::shared_grid(k1, k2, cfg.intervals);
    const std::vector<double> a = k1.sample(grid);
    const std::vector<double> b = k2.sample(grid);
    const std::size_t n = grid.size();

    double max_r = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_r = std::max(max_r, std::hypot(a[i], b[i]));
    const double eps = std::max(cfg.eps_radius * max_r, 1e-300);

    std::vector<double> phi(n, 0.0);
    std::vector<double> omega(n, 0.0);
    std::vector<std::size_t> lifted;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(std::hypot(a[i], b[i]) > eps)) continue;
        const double raw = std::atan2(b[i], a[i]);
        if (lifted.empty()) {
            phi[i] = raw;
        } else {
            const std::size_t j = lifted.back();
            const double d = std::remainder(raw - phi[j], std::numbers::pi);
            if (std::fabs(d) > cfg.max_jump * static_cast<double>(i - j)) {
                throw Error(ErrorCode::UnliftablePath,
                            "polar angle jumps by " + std::to_string(d) + " at s=" + std::to_string(grid.node(i)));
            }
            phi[i] = phi[j] + d;
        }
        lifted.push_back(i);
    }
    if (lifted.empty()) {
        return {ScalarField::table(grid, omega), ScalarField::table(grid, phi)};
    }
    for (std::size_t i = 0; i < lifted.front(); ++i) phi[i] = phi[lifted.front()];
    for (std::size_t i = lifted.back() + 1; i < n; ++i) phi[i] = phi[lifted.back()];
    for (std::size_t k = 0; k + 1 < lifted.size(); ++k) {
        const std::size_t lo = lifted[k];
        const std::size_t hi = lifted[k + 1];
        if (hi == lo + 1) continue;
        std::vector<std::size_t> support;
        if (k >= 1) support.push_back(lifted[k - 1]);
        support.push_back(lo);
        support.push_back(hi);
        if (k + 2 < lifted.size()) support.push_back(lifted[k + 2]);
        for (std::size_t i = lo + 1; i < hi; ++i) {
            double v = 0.0;
            for (std::size_t p : support) {
                double w = 1.0;
                for (std::size_t q : support) {
                    if (q != p) w *= (static_cast<double>(i) - static_cast<double>(q)) /
                                     (static_cast<double>(p) - static_cast<double>(q));
                }
                v += w * phi[p];
            }
            phi[i] = v;
        }
    }
    for (std::size_t i = 0; i < n; ++i) omega[i] = a[i] * std::cos(phi[i]) + b[i] * std::sin(phi[i]);
    return {ScalarField::table(grid, std::move(omega)), ScalarField::table(grid, std::move(phi))};
}

/// Frenet apparatus from a Bishop apparatus: N = cos phi N1 + sin phi N2,
/// B = -sin phi N1 + cos phi N2, kappa = omega, tau = phi'.
inline FrenetApparatus inverse_bishop(const BishopApparatus& app, UnwrapConfig cfg = {}) {
    const Grid& grid = app.grid();
    cfg.intervals = grid.intervals();
    PolarDevelopment polar = polar_unwrap(app.k1, app.k2, cfg);
    if (!(polar.phi.grid() == grid)) {
        polar = {ScalarField::table(grid, polar.omega.sample(grid)), ScalarField::table(grid, polar.phi.sample(grid))};
    }
    const std::vector<double>& phi = polar.phi.values();
    FrenetApparatus out;
    out.frames.grid = grid;
    out.frames.frames.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.frames.frames.push_back(rotate_normal_plane(app.frames[i], -phi[i]));
    }
    out.kappa = polar.omega;
    out.tau = ScalarField::table(grid, grid_derivative(phi, grid.step()));
    return out;
}

/// Successor system, whose principal normal is the input tangent:
///   T1 = -cos phi N + sin phi B,  N1 = T,  B1 = sin phi N + cos phi B,
///   (kappa1, tau1) = kappa (cos phi, sin phi),  phi = phi0 + int tau.
/// phi0 is a free constant; every value gives a distinct successor curve.
inline FrenetApparatus successor_transform(const FrenetApparatus& app, double phi0) {
    const Grid& grid = app.grid();
    const std::vector<double> phi = detail::phase(app.tau, grid, phi0);
    FrenetApparatus out;
    out.frames.grid = grid;
    out.frames.frames.reserve(grid.size());
    std::vector<double> k1(grid.size());
    std::vector<double> t1(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Frame& f = app.frames[i];
        const double c = std::cos(phi[i]);
        const double s = std::sin(phi[i]);
        out.frames.frames.push_back(Frame{-c * f.e2 + s * f.e3, f.e1, s * f.e2 + c * f.e3});
        const double k = app.kappa(grid.node(i));
        k1[i] = k * c;
        t1[i] = k * s;
    }
    out.kappa = ScalarField::table(grid, std::move(k1));
    out.tau = ScalarField::table(grid, std::move(t1));
    return out;
}

/// Strongly regular predecessor: T = N1, N = (-k1 T1 + t1 B1)/w, B = (t1 T1 + k1 B1)/w,
/// kappa = w = sqrt(k1^2 + t1^2), tau = (k1 t1' - k1' t1)/w^2.
///
/// The result depends on the input apparatus, not only on the curve it frames.
inline FrenetApparatus predecessor_transform(const FrenetApparatus& app) {
    const Grid& grid = app.grid();
    const ScalarField k1 = app.kappa;
    const ScalarField t1 = app.tau;
    std::vector<double> w(grid.size());
    double max_w = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid.node(i);
        w[i] = std::hypot(k1(s), t1(s));
        max_w = std::max(max_w, w[i]);
    }
    const double eps = eps_radius_relative * max_w;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(w[i] > eps) || max_w == 0.0) {
            throw Error(ErrorCode::VanishingLancret,
                        "Lancret curvature vanishes at s=" + std::to_string(grid.node(i)) + "; supply a polar form");
        }
    }
    FrenetApparatus out;
    out.frames.grid = grid;
    out.frames.frames.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid.node(i);
        const Frame& f = app.frames[i];
        const double a = k1(s) / w[i];
        const double b = t1(s) / w[i];
        out.frames.frames.push_back(Frame{f.e2, -a * f.e1 + b * f.e3, b * f.e1 + a * f.e3});
    }
    const bool rules = k1.is_rule() && t1.is_rule();
    out.kappa = derived_field(grid, rules, [k1, t1](double s) { return std::hypot(k1(s), t1(s)); });
    out.tau = derived_field(grid, rules, [k1, t1](double s) {
        const double a = k1(s);
        const double b = t1(s);
        return (a * t1.derivative(s) - k1.derivative(s) * b) / (a * a + b * b);
    });
    return out;
}

/// Predecessor from a caller-supplied polar form of the input development; also
/// covers inputs whose Lancret curvature vanishes. kappa = omega, tau = phi',
/// N = -cos phi T1 + sin phi B1, B = sin phi T1 + cos phi B1.
inline FrenetApparatus predecessor_transform(const FrenetApparatus& app, const PolarDevelopment& polar,
                                             double tol = 1e-8) {
    const Grid& grid = app.grid();
    FrenetApparatus out;
    out.frames.grid = grid;
    out.frames.frames.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid.node(i);
        const double w = polar.omega(s);
        const double p = polar.phi(s);
        const double c = std::cos(p);
        const double sn = std::sin(p);
        const double scale = std::max(1.0, std::fabs(w));
        if (std::fabs(w * c - app.kappa(s)) > tol * scale || std::fabs(w * sn - app.tau(s)) > tol * scale) {
            throw Error(ErrorCode::InvalidArgument,
                        "polar form does not reproduce the development at s=" + std::to_string(s));
        }
        const Frame& f = app.frames[i];
        out.frames.frames.push_back(Frame{f.e2, -c * f.e1 + sn * f.e3, sn * f.e1 + c * f.e3});
    }
    const ScalarField phi = polar.phi;
    out.kappa = polar.omega;
    out.tau = derived_field(grid, phi.is_rule(), [phi](double s) { return phi.derivative(s); });
    return out;
}

} // namespace natcurve
