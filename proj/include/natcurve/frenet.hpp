#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <variant>
#include <vector>

#include "natcurve/error.hpp"
#include "natcurve/frame.hpp"
#include "natcurve/scalar_field.hpp"
#include "natcurve/vec3.hpp"

namespace natcurve {

inline constexpr double eps_kappa = 1e-12;

/// Natural equations (kappa(s), tau(s)) on a shared domain.
struct Development {
    ScalarField kappa;
    ScalarField tau;
    Interval domain;

    Development() = default;
    Development(ScalarField k, ScalarField t) : Development(k, t, k.domain()) {}
    Development(ScalarField k, ScalarField t, Interval d) : kappa(std::move(k)), tau(std::move(t)), domain(d) {
        const double slack = domain_slack(d);
        for (const ScalarField* f : {&kappa, &tau}) {
            const Interval fd = f->domain();
            if (d.lo < fd.lo - slack || d.hi > fd.hi + slack) {
                throw Error(ErrorCode::DomainMismatch, "development domain exceeds a field domain");
            }
        }
    }

    [[nodiscard]] Development restricted(Interval d) const {
        if (d.lo < domain.lo || d.hi > domain.hi) {
            throw Error(ErrorCode::DomainMismatch, "restriction leaves the development domain");
        }
        return {kappa, tau, d};
    }
};

/// Frames sampled on the nodes of a uniform grid.
struct FrameField {
    Grid grid;
    std::vector<Frame> frames;

    [[nodiscard]] std::size_t size() const { return frames.size(); }
    const Frame& operator[](std::size_t i) const { return frames[i]; }
};

/// Frenet system (T, N, B, kappa, tau).
struct FrenetApparatus {
    FrameField frames;
    ScalarField kappa;
    ScalarField tau;

    [[nodiscard]] const Grid& grid() const { return frames.grid; }
    [[nodiscard]] Development development() const { return {kappa, tau, frames.grid.domain()}; }
};

/// Bishop system (T, N1, N2, k1, k2); the coefficient k3 vanishes.
struct BishopApparatus {
    FrameField frames;
    ScalarField k1;
    ScalarField k2;

    [[nodiscard]] const Grid& grid() const { return frames.grid; }
};

using Apparatus = std::variant<FrenetApparatus, BishopApparatus>;

enum class FrameKind { frenet, bishop };

/// Solver output and IO unit: positions, frames and coefficients per grid node.
/// For Bishop samples the frame is (T, N1, N2) and the coefficients are (k1, k2).
struct CurveSamples {
    Grid grid;
    std::vector<Vec3> position;
    std::vector<Frame> frame;
    std::vector<double> kappa;
    std::vector<double> tau;
    FrameKind kind = FrameKind::frenet;

    [[nodiscard]] std::size_t size() const { return position.size(); }
    [[nodiscard]] std::vector<Vec3> tangents() const {
        std::vector<Vec3> t(frame.size());
        for (std::size_t i = 0; i < t.size(); ++i) t[i] = frame[i].e1;
        return t;
    }
};

// ---------------------------------------------------------------------------
// Pointwise quantities
// ---------------------------------------------------------------------------

struct FrameRates {
    Vec3 dT;
    Vec3 dN;
    Vec3 dB;
};

/// T' = kappa N, N' = -kappa T + tau B, B' = -tau N.
inline FrameRates frenet_rhs(const Frame& f, double kappa, double tau) {
    return {kappa * f.e2, -kappa * f.e1 + tau * f.e3, -tau * f.e2};
}

/// D = tau T + kappa B; the frame's angular velocity, so each rate equals D x V.
inline Vec3 darboux_vector(const Frame& f, double kappa, double tau) { return tau * f.e1 + kappa * f.e3; }

inline double lancret_curvature(double kappa, double tau) { return std::hypot(kappa, tau); }

// ---------------------------------------------------------------------------
// Field helpers
// ---------------------------------------------------------------------------

inline ScalarField scaled(const ScalarField& f, double c) {
    if (f.is_rule()) {
        return ScalarField::rule([f, c](double s) { return c * f(s); }, f.domain(),
                                 [f, c](double s) { return c * f.derivative(s); });
    }
    std::vector<double> v = f.values();
    for (double& x : v) x *= c;
    return ScalarField::table(f.grid(), std::move(v));
}

inline FrameField map_frames(const FrameField& in, auto&& fn) {
    FrameField out{in.grid, {}};
    out.frames.reserve(in.frames.size());
    for (const Frame& f : in.frames) out.frames.push_back(fn(f));
    return out;
}

// ---------------------------------------------------------------------------
// Rearrangements
// ---------------------------------------------------------------------------

enum class Rearrangement {
    a, ///< (T, -N, -B, -kappa, tau): equivalent Frenet system
    b, ///< (-T, -N, B, kappa, -tau): reversed orientation
    c, ///< (B, -N, T, tau, kappa): curve with B as tangent
    d, ///< Frenet -> Bishop system (N, -T, B, kappa, tau)
    e, ///< Bishop -> Frenet system (-N1, T, N2, k1, k2)
};

inline Apparatus rearrange(const Apparatus& app, Rearrangement variant) {
    if (variant == Rearrangement::e) {
        const auto* bishop = std::get_if<BishopApparatus>(&app);
        if (!bishop) throw Error(ErrorCode::WrongApparatusKind, "variant e expects a Bishop apparatus");
        return FrenetApparatus{map_frames(bishop->frames, [](const Frame& f) { return Frame{-f.e2, f.e1, f.e3}; }),
                               bishop->k1, bishop->k2};
    }
    const auto* fr = std::get_if<FrenetApparatus>(&app);
    if (!fr) throw Error(ErrorCode::WrongApparatusKind, "variants a-d expect a Frenet apparatus");
    switch (variant) {
    case Rearrangement::a:
        return FrenetApparatus{map_frames(fr->frames, [](const Frame& f) { return Frame{f.e1, -f.e2, -f.e3}; }),
                               scaled(fr->kappa, -1.0), fr->tau};
    case Rearrangement::b:
        return FrenetApparatus{map_frames(fr->frames, [](const Frame& f) { return Frame{-f.e1, -f.e2, f.e3}; }),
                               fr->kappa, scaled(fr->tau, -1.0)};
    case Rearrangement::c:
        return FrenetApparatus{map_frames(fr->frames, [](const Frame& f) { return Frame{f.e3, -f.e2, f.e1}; }),
                               fr->tau, fr->kappa};
    case Rearrangement::d:
        return BishopApparatus{map_frames(fr->frames, [](const Frame& f) { return Frame{f.e2, -f.e1, f.e3}; }),
                               fr->kappa, fr->tau};
    case Rearrangement::e: break;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown rearrangement");
}

// ---------------------------------------------------------------------------
// Discrete consistency
// ---------------------------------------------------------------------------

struct ConsistencyResiduals {
    double kappa = 0.0;     ///< max |<dT/ds, N> - kappa|
    double tau = 0.0;       ///< max |<dN/ds, B> - tau|
    double tangential = 0.0; ///< max |<dB/ds, T>| (Frenet) or |<dN1/ds, N2>| (Bishop)
};

/// Central differences on interior nodes.
inline ConsistencyResiduals frenet_consistency(const FrameField& ff, std::span<const double> kappa,
                                               std::span<const double> tau) {
    ConsistencyResiduals r;
    const double h2 = 2.0 * ff.grid.step();
    for (std::size_t i = 1; i + 1 < ff.size(); ++i) {
        const Frame& f = ff[i];
        const Vec3 dT = (ff[i + 1].e1 - ff[i - 1].e1) / h2;
        const Vec3 dN = (ff[i + 1].e2 - ff[i - 1].e2) / h2;
        const Vec3 dB = (ff[i + 1].e3 - ff[i - 1].e3) / h2;
        r.kappa = std::max(r.kappa, std::fabs(dot(dT, f.e2) - kappa[i]));
        r.tau = std::max(r.tau, std::fabs(dot(dN, f.e3) - tau[i]));
        r.tangential = std::max(r.tangential, std::fabs(dot(dB, f.e1)));
    }
    return r;
}

inline ConsistencyResiduals frenet_consistency(const FrenetApparatus& app) {
    const auto k = app.kappa.sample(app.grid());
    const auto t = app.tau.sample(app.grid());
    return frenet_consistency(app.frames, k, t);
}

/// Bishop check: <dT/ds, N1> ~ k1, <dT/ds, N2> ~ k2, <dN1/ds, N2> ~ 0.
inline ConsistencyResiduals bishop_consistency(const BishopApparatus& app) {
    ConsistencyResiduals r;
    const FrameField& ff = app.frames;
    const double h2 = 2.0 * ff.grid.step();
    for (std::size_t i = 1; i + 1 < ff.size(); ++i) {
        const double s = ff.grid.node(i);
        const Vec3 dT = (ff[i + 1].e1 - ff[i - 1].e1) / h2;
        const Vec3 dN1 = (ff[i + 1].e2 - ff[i - 1].e2) / h2;
        r.kappa = std::max(r.kappa, std::fabs(dot(dT, ff[i].e2) - app.k1(s)));
        r.tau = std::max(r.tau, std::fabs(dot(dT, ff[i].e3) - app.k2(s)));
        r.tangential = std::max(r.tangential, std::fabs(dot(dN1, ff[i].e3)));
    }
    return r;
}

struct NormIdentityResiduals {
    double kappa_sq = 0.0; ///< max |kappa^2 - <T', T'>|
    double omega_sq = 0.0; ///< max |kappa^2 + tau^2 - <N', N'>|
    double tau_sq = 0.0;   ///< max |tau^2 - <B', B'>|
};

inline NormIdentityResiduals norm_identities(const FrenetApparatus& app) {
    NormIdentityResiduals r;
    const FrameField& ff = app.frames;
    const double h2 = 2.0 * ff.grid.step();
    for (std::size_t i = 1; i + 1 < ff.size(); ++i) {
        const double s = ff.grid.node(i);
        const double k = app.kappa(s);
        const double t = app.tau(s);
        const Vec3 dT = (ff[i + 1].e1 - ff[i - 1].e1) / h2;
        const Vec3 dN = (ff[i + 1].e2 - ff[i - 1].e2) / h2;
        const Vec3 dB = (ff[i + 1].e3 - ff[i - 1].e3) / h2;
        r.kappa_sq = std::max(r.kappa_sq, std::fabs(k * k - dot(dT, dT)));
        r.omega_sq = std::max(r.omega_sq, std::fabs(k * k + t * t - dot(dN, dN)));
        r.tau_sq = std::max(r.tau_sq, std::fabs(t * t - dot(dB, dB)));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Equivalence of developments and total torsion
// ---------------------------------------------------------------------------

struct EquivalenceResult {
    bool equivalent = false;
    std::optional<ScalarField> witness; ///< phi with kappa cos(phi) = kappa', phi' = tau - tau'
    double worst_violation = 0.0;
    double worst_s = 0.0;
};

namespace detail {
inline Grid comparison_grid(const Development& a, const Development& b, std::size_t intervals) {
    for (const ScalarField* f : {&a.kappa, &a.tau, &b.kappa, &b.tau}) {
        if (f->is_table() && f->domain() == a.domain) return f->grid();
    }
    return {a.domain, intervals};
}
} // namespace detail

/// Searches for phi with kappa cos(phi) = kappa', kappa sin(phi) = 0, phi' = tau - tau'.
///
/// Where either curvature exceeds max(eps_kappa, tol) the node is pinned: phi is
/// 0 or pi there, chosen by the relative sign. Between pinned nodes phi follows
/// the integral of tau - tau' and must land on the pinned value within tol, which
/// is the only freedom available along line segments.
inline EquivalenceResult developments_equivalent(const Development& a, const Development& b, double tol,
                                                 std::size_t intervals = 4000) {
    const double slack = domain_slack(a.domain);
    if (std::fabs(a.domain.lo - b.domain.lo) > slack || std::fabs(a.domain.hi - b.domain.hi) > slack) {
        throw Error(ErrorCode::DomainMismatch, "developments live on different domains");
    }
    const Grid grid = detail::comparison_grid(a, b, intervals);
    const double pin = std::max(eps_kappa, tol);
    constexpr double pi = std::numbers::pi;

    EquivalenceResult res;
    auto violate = [&](double amount, double s) {
        if (amount > res.worst_violation) {
            res.worst_violation = amount;
            res.worst_s = s;
        }
    };
    auto dtau = [&](double s) { return a.tau(s) - b.tau(s); };

    std::vector<double> phi(grid.size(), 0.0);
    bool prev_pinned = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid.node(i);
        const double ka = a.kappa(s);
        const double kb = b.kappa(s);
        const bool pinned = std::fabs(ka) > pin || std::fabs(kb) > pin;
        double predicted = 0.0;
        if (i > 0) {
            const double s0 = grid.node(i - 1);
            predicted = phi[i - 1] + (s - s0) / 6.0 * (dtau(s0) + 4.0 * dtau(0.5 * (s0 + s)) + dtau(s));
        }
        if (!pinned) {
            phi[i] = predicted;
            prev_pinned = false;
            continue;
        }
        violate(std::fabs(std::fabs(ka) - std::fabs(kb)), s);
        const double target = (ka * kb >= 0.0) ? 0.0 : pi;
        const double lift = target + 2.0 * pi * std::round((predicted - target) / (2.0 * pi));
        if (i > 0) violate(std::fabs(lift - predicted), s);
        if (i > 0 && prev_pinned) violate(std::fabs(dtau(s)), s);
        phi[i] = lift;
        prev_pinned = true;
    }
    res.equivalent = res.worst_violation <= tol;
    if (res.equivalent) res.witness = ScalarField::table(grid, std::move(phi));
    return res;
}

inline double total_torsion(const ScalarField& tau, double a, double b) { return integrate(tau, a, b); }

/// Distance between two angles modulo pi, in [0, pi/2].
inline double distance_mod_pi(double x, double y) {
    return std::fabs(std::remainder(x - y, std::numbers::pi));
}

} // namespace natcurve
