#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "natcurve/error.hpp"
#include "natcurve/frame.hpp"
#include "natcurve/frenet.hpp"
#include "natcurve/scalar_field.hpp"
#include "natcurve/vec3.hpp"

namespace natcurve {

struct SolverConfig {
    /// Total RK4 steps over the domain. Unset: 10000 per unit of arclength.
    std::optional<std::size_t> steps;
    std::size_t renormalize_every = 1;
    double tol_ortho = default_tol_ortho;

    [[nodiscard]] std::size_t steps_for(const Interval& d) const {
        const std::size_t n =
            steps ? *steps : static_cast<std::size_t>(std::max(16.0, std::ceil(10000.0 * d.length())));
        if (n < 16) throw Error(ErrorCode::InvalidArgument, "solver needs at least 16 steps");
        if (renormalize_every < 1) throw Error(ErrorCode::InvalidArgument, "renormalize_every must be >= 1");
        return n;
    }
};

namespace detail {

struct FrameDelta {
    Vec3 d1, d2, d3;
};

// Skew system (T, N, M)' = K (T, N, M) with K = [[0, k1, k2], [-k1, 0, k3], [-k2, -k3, 0]].
inline FrameDelta frame_rhs(const Frame& f, double k1, double k2, double k3) {
    return {k1 * f.e2 + k2 * f.e3, -k1 * f.e1 + k3 * f.e3, -k2 * f.e1 - k3 * f.e2};
}

inline Frame advance(const Frame& f, const FrameDelta& d, double h) {
    return {f.e1 + h * d.d1, f.e2 + h * d.d2, f.e3 + h * d.d3};
}

} // namespace detail

/// Classical RK4 for a moving frame with coefficient functions (k1, k2, k3).
/// Frenet: (kappa, 0, tau). Bishop: (k1, k2, 0).
inline FrameField solve_frame_ode(const ScalarField& k1, const ScalarField& k2, const ScalarField& k3,
                                  const Frame& f0, const Interval& domain, const SolverConfig& cfg = {}) {
    for (const ScalarField* f : {&k1, &k2, &k3}) {
        const Interval fd = f->domain();
        const double slack = domain_slack(fd);
        if (domain.lo < fd.lo - slack || domain.hi > fd.hi + slack) {
            throw Error(ErrorCode::DomainMismatch, "coefficient field does not cover the solver domain");
        }
    }
    if (!is_orthonormal(f0, cfg.tol_ortho)) {
        throw Error(ErrorCode::DegenerateFrame, "initial frame is not orthonormal");
    }
    const Grid grid(domain, cfg.steps_for(domain));
    const double h = grid.step();

    FrameField out{grid, {}};
    out.frames.reserve(grid.size());
    out.frames.push_back(f0);

    auto coeffs = [&](double s) {
        return std::array<double, 3>{k1(s), k2(s), k3(s)};
    };
    std::array<double, 3> c0 = coeffs(grid.node(0));
    Frame f = f0;
    for (std::size_t i = 0; i < grid.intervals(); ++i) {
        const double s = grid.node(i);
        const double s1 = grid.node(i + 1);
        const auto cm = coeffs(0.5 * (s + s1));
        const auto c1 = coeffs(s1);
        const auto a = detail::frame_rhs(f, c0[0], c0[1], c0[2]);
        const auto b = detail::frame_rhs(detail::advance(f, a, 0.5 * h), cm[0], cm[1], cm[2]);
        const auto c = detail::frame_rhs(detail::advance(f, b, 0.5 * h), cm[0], cm[1], cm[2]);
        const auto d = detail::frame_rhs(detail::advance(f, c, h), c1[0], c1[1], c1[2]);
        const double w = h / 6.0;
        f = Frame{f.e1 + w * (a.d1 + 2.0 * b.d1 + 2.0 * c.d1 + d.d1),
                  f.e2 + w * (a.d2 + 2.0 * b.d2 + 2.0 * c.d2 + d.d2),
                  f.e3 + w * (a.d3 + 2.0 * b.d3 + 2.0 * c.d3 + d.d3)};
        if ((i + 1) % cfg.renormalize_every == 0) f = orthonormalize(f);
        if (!is_orthonormal(f, cfg.tol_ortho)) {
            throw Error(ErrorCode::DegenerateFrame, "frame drifted past tol_ortho at s=" + std::to_string(s1));
        }
        out.frames.push_back(f);
        c0 = c1;
    }
    return out;
}

/// x(s) = x0 + running integral of the tangent (frame e1) over the grid.
inline std::vector<Vec3> integrate_positions(const FrameField& frames, const Vec3& x0) {
    std::vector<Vec3> tangent(frames.size());
    for (std::size_t i = 0; i < tangent.size(); ++i) tangent[i] = frames[i].e1;
    std::vector<Vec3> x = cumulative_quadrature<Vec3>(tangent, frames.grid.step());
    for (Vec3& p : x) p += x0;
    return x;
}

/// Realizes a development as a unit-speed curve: Frenet frame ODE with
/// coefficients (kappa, 0, tau), then quadrature of the tangent.
inline CurveSamples solve_natural_equations(const Development& dev, const Frame& f0, const Vec3& x0,
                                            const SolverConfig& cfg = {}) {
    const ScalarField zero = ScalarField::constant(0.0, dev.domain);
    FrameField frames = solve_frame_ode(dev.kappa, zero, dev.tau, f0, dev.domain, cfg);
    CurveSamples out;
    out.grid = frames.grid;
    out.position = integrate_positions(frames, x0);
    out.kappa = dev.kappa.sample(out.grid);
    out.tau = dev.tau.sample(out.grid);
    out.frame = std::move(frames.frames);
    return out;
}

// ---------------------------------------------------------------------------
// Apparatus estimation from positions
// ---------------------------------------------------------------------------

struct EstimateConfig {
    double relative_eps = 1e-8; ///< inflection threshold relative to max kappa_plus
    double floor = 1e-12;
    /// Also treat kappa_plus as zero when it is below the estimator's own
    /// truncation/roundoff level at that node.
    bool resolution_aware = true;
};

struct ApparatusEstimate {
    std::vector<std::size_t> node; ///< interior node indices 1 .. n-2
    std::vector<double> kappa_plus;
    std::vector<Vec3> tangent;
    std::vector<std::optional<Vec3>> normal; ///< only at strongly regular nodes
    std::vector<bool> inflection;
    std::vector<double> threshold;
};

/// Central differences on interior nodes: T = (x+ - x-)/2h, T' = (x+ - 2x + x-)/h^2,
/// kappa_plus = |T'|, N_plus = T'/kappa_plus.
inline ApparatusEstimate estimate_apparatus(std::span<const Vec3> x, double h, const EstimateConfig& cfg = {}) {
    const std::size_t n = x.size();
    if (n < 5) throw Error(ErrorCode::GridTooSmall, "apparatus estimation needs at least 5 nodes");
    ApparatusEstimate est;
    double max_kappa = 0.0;
    double max_x = 0.0;
    for (const Vec3& p : x) max_x = std::max(max_x, norm(p));
    std::vector<Vec3> second;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Vec3 t = (x[i + 1] - x[i - 1]) / (2.0 * h);
        const Vec3 dd = (x[i + 1] - 2.0 * x[i] + x[i - 1]) / (h * h);
        est.node.push_back(i);
        est.tangent.push_back(t);
        est.kappa_plus.push_back(norm(dd));
        second.push_back(dd);
        max_kappa = std::max(max_kappa, est.kappa_plus.back());
    }
    const double eps = std::numeric_limits<double>::epsilon();
    const double base = std::max(cfg.floor, cfg.relative_eps * max_kappa);
    const double roundoff = 16.0 * eps * std::max(1.0, max_x) / (h * h);
    for (std::size_t k = 0; k < est.node.size(); ++k) {
        double thr = base;
        if (cfg.resolution_aware) {
            // Fourth difference around the node (shifted at the ends) estimates h^4 x''''
            // and so the O(h^2) error of the second difference.
            const std::size_t c = std::clamp<std::size_t>(est.node[k], 2, n - 3);
            const Vec3 d4 = x[c - 2] - 4.0 * x[c - 1] + 6.0 * x[c] - 4.0 * x[c + 1] + x[c + 2];
            const double trunc = 2.0 * norm(d4) / (12.0 * h * h);
            thr = std::max({thr, trunc, roundoff});
        }
        est.threshold.push_back(thr);
        const bool flat = est.kappa_plus[k] < thr;
        est.inflection.push_back(flat);
        est.normal.push_back(flat ? std::nullopt : std::optional<Vec3>(second[k] / est.kappa_plus[k]));
    }
    return est;
}

} // namespace natcurve
