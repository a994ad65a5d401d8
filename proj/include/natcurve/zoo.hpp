#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "natcurve/error.hpp"
#include "natcurve/frame.hpp"
#include "natcurve/frenet.hpp"
#include "natcurve/quadric.hpp"
#include "natcurve/rational.hpp"
#include "natcurve/scalar_field.hpp"
#include "natcurve/vec3.hpp"

namespace natcurve {

/// Shrink factor for domains with singular endpoints.
inline constexpr double eps_domain = 1e-6;

inline void require_slope(double theta) {
    if (!(theta > 0.0 && theta < std::numbers::pi / 2)) {
        throw Error(ErrorCode::InvalidSlope, "slope angle " + std::to_string(theta) + " is outside (0, pi/2)");
    }
}

struct HelixParams {
    double theta;
    ScalarField kappa;

    HelixParams(double theta_, ScalarField kappa_) : theta(theta_), kappa(std::move(kappa_)) { require_slope(theta); }

    [[nodiscard]] double m() const { return std::cos(theta) / std::sin(theta); }
    [[nodiscard]] double n() const { return std::cos(theta); }
};

struct PrecessionParams {
    double omega;
    double mu;
    std::optional<Rational> exact_omega; ///< set when omega is known exactly
    std::optional<Rational> exact_mu;

    PrecessionParams(double omega_, double mu_)
        : omega(omega_), mu(mu_), exact_omega(exact_integer(omega_)), exact_mu(exact_integer(mu_)) {
        validate();
    }
    PrecessionParams(Rational omega_, Rational mu_)
        : omega(omega_.value()), mu(mu_.value()), exact_omega(omega_), exact_mu(mu_) {
        validate();
    }

    [[nodiscard]] double alpha() const { return std::hypot(omega, mu); }
    [[nodiscard]] double lambda1() const { return (alpha() - mu) / alpha(); }
    [[nodiscard]] double lambda2() const { return (alpha() + mu) / alpha(); }
    [[nodiscard]] double m() const { return mu / omega; }
    [[nodiscard]] double n() const { return mu / alpha(); }
    [[nodiscard]] bool exact() const { return exact_omega && exact_mu; }

private:
    void validate() const {
        if (omega == 0.0 || mu == 0.0 || !std::isfinite(omega) || !std::isfinite(mu)) {
            throw Error(ErrorCode::InvalidArgument, "constant precession needs finite nonzero omega and mu");
        }
    }
};

namespace detail {

inline Grid field_grid(const ScalarField& f, std::size_t intervals) {
    if (f.is_table()) return f.grid();
    return {f.domain(), intervals};
}

} // namespace detail

// ---------------------------------------------------------------------------
// Plane curves and general helices
// ---------------------------------------------------------------------------

/// T = (cos W, sin W, 0), N = (-sin W, cos W, 0), B = (0, 0, 1) with W the turning angle.
inline Frame plane_frame(double turning) {
    const double c = std::cos(turning);
    const double s = std::sin(turning);
    return {{c, s, 0.0}, {-s, c, 0.0}, {0.0, 0.0, 1.0}};
}

/// Closed-form Frenet apparatus of the plane curve with signed curvature kappa;
/// the turning angle is integrated from the left end of the domain.
inline FrenetApparatus plane_apparatus(const ScalarField& kappa, std::size_t intervals = 4000) {
    const Grid grid = detail::field_grid(kappa, intervals);
    const std::vector<double> turning = cumulative_integral(kappa, grid);
    FrenetApparatus out;
    out.frames.grid = grid;
    out.frames.frames.reserve(grid.size());
    for (double w : turning) out.frames.frames.push_back(plane_frame(w));
    out.kappa = kappa;
    out.tau = ScalarField::constant(0.0, kappa.domain());
    return out;
}

inline Frame helix_frame(double turning, double theta) {
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    const double sw = std::sin(turning);
    const double cw = std::cos(turning);
    return {{st * sw, -st * cw, ct}, {cw, sw, 0.0}, {-ct * sw, ct * cw, st}};
}

/// General helix about the z axis: kappa_H = sin(theta) kappa, tau_H = cot(theta) kappa_H.
inline FrenetApparatus helix_apparatus(const HelixParams& p, std::size_t intervals = 4000) {
    require_slope(p.theta);
    const Grid grid = detail::field_grid(p.kappa, intervals);
    const std::vector<double> turning = cumulative_integral(p.kappa, grid);
    FrenetApparatus out;
    out.frames.grid = grid;
    out.frames.frames.reserve(grid.size());
    for (double w : turning) out.frames.frames.push_back(helix_frame(w, p.theta));
    const double st = std::sin(p.theta);
    const double m = p.m();
    out.kappa = scaled(p.kappa, st);
    out.tau = scaled(out.kappa, m);
    return out;
}

// ---------------------------------------------------------------------------
// Slant helices
// ---------------------------------------------------------------------------

/// kappa = phi' cos(phi) / m, tau = phi' sin(phi) / m.
inline Development slant_helix_development(const ScalarField& phi, double m, std::size_t intervals = 4000) {
    if (m == 0.0) throw Error(ErrorCode::ZeroSlopeParameter, "slant helix needs m != 0");
    const Grid grid = detail::field_grid(phi, intervals);
    const bool rule = phi.is_rule();
    ScalarField kappa = derived_field(grid, rule, [phi, m](double s) { return phi.derivative(s) * std::cos(phi(s)) / m; });
    ScalarField tau = derived_field(grid, rule, [phi, m](double s) { return phi.derivative(s) * std::sin(phi(s)) / m; });
    return {std::move(kappa), std::move(tau), phi.domain()};
}

enum class SlantForm {
    reflected,     ///< first two components negated (a half turn about the slope axis)
    pre_reflection ///< direct successor of the helix frame
};

/// Closed-form slant helix frame for the phase phi: the successor of the helix
/// frame at turning angle phi / cos(theta) with the same phase.
inline Frame slant_helix_frame(double phi, double theta, SlantForm form = SlantForm::reflected) {
    require_slope(theta);
    const double n = std::cos(theta);
    const Frame h = helix_frame(phi / n, theta);
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    Frame f{-c * h.e2 + s * h.e3, h.e1, s * h.e2 + c * h.e3};
    if (form == SlantForm::reflected) {
        for (Vec3* v : {&f.e1, &f.e2, &f.e3}) {
            v->x = -v->x;
            v->y = -v->y;
        }
    }
    return f;
}

/// Slant helix tangent in the lambda form: with W = phi / n, lambda1 = 1 - n, lambda2 = 1 + n,
/// T = ((l1 cos l2 W + l2 cos l1 W) / 2, (l1 sin l2 W + l2 sin l1 W) / 2, (n / m) sin nW).
inline Vec3 slant_helix_tangent(double phi, double theta) {
    require_slope(theta);
    const double n = std::cos(theta);
    const double m = n / std::sin(theta);
    const double w = phi / n;
    const double l1 = 1.0 - n;
    const double l2 = 1.0 + n;
    return {0.5 * (l1 * std::cos(l2 * w) + l2 * std::cos(l1 * w)),
            0.5 * (l1 * std::sin(l2 * w) + l2 * std::sin(l1 * w)), n / m * std::sin(n * w)};
}

inline std::function<Vec3(double)> slant_helix_tangent(const ScalarField& phi, double theta,
                                                       SlantForm form = SlantForm::reflected) {
    require_slope(theta);
    if (form == SlantForm::reflected) {
        return [phi, theta](double s) { return slant_helix_tangent(phi(s), theta); };
    }
    return [phi, theta](double s) { return slant_helix_frame(phi(s), theta, SlantForm::pre_reflection).e1; };
}

/// Slant helix with slope angle theta: closed-form frames and the development with m = cot(theta).
inline FrenetApparatus slant_helix_apparatus(const ScalarField& phi, double theta, std::size_t intervals = 4000,
                                             SlantForm form = SlantForm::reflected) {
    require_slope(theta);
    const Development dev = slant_helix_development(phi, std::cos(theta) / std::sin(theta), intervals);
    const Grid grid = detail::field_grid(phi, intervals);
    FrenetApparatus out;
    out.frames.grid = grid;
    out.frames.frames.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.frames.frames.push_back(slant_helix_frame(phi(grid.node(i)), theta, form));
    }
    out.kappa = dev.kappa;
    out.tau = dev.tau;
    return out;
}

struct InvariantSamples {
    Grid grid;
    std::vector<double> value; ///< NaN where excluded
    std::vector<bool> valid;   ///< false where |kappa| <= eps_kappa

    [[nodiscard]] std::size_t valid_count() const {
        return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
    }
    /// Largest |value - target| over valid nodes.
    [[nodiscard]] double max_deviation(double target) const {
        double worst = 0.0;
        for (std::size_t i = 0; i < value.size(); ++i) {
            if (valid[i]) worst = std::max(worst, std::fabs(value[i] - target));
        }
        return worst;
    }
};

/// kappa^2 / (kappa^2 + tau^2)^(3/2) (tau / kappa)', evaluated as
/// (kappa tau' - kappa' tau) / (kappa^2 + tau^2)^(3/2) so the quotient's pole never
/// enters. Constant (= |m| with increasing phase) on slant helices.
inline InvariantSamples slant_invariant(const Development& dev, std::size_t intervals = 4000) {
    Grid grid{dev.domain, intervals};
    for (const ScalarField* f : {&dev.kappa, &dev.tau}) {
        if (f->is_table() && f->domain() == dev.domain) grid = f->grid();
    }
    InvariantSamples out{grid, std::vector<double>(grid.size()), std::vector<bool>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid.node(i);
        const double k = dev.kappa(s);
        const double t = dev.tau(s);
        if (!(std::fabs(k) > eps_kappa)) {
            out.value[i] = std::numeric_limits<double>::quiet_NaN();
            out.valid[i] = false;
            continue;
        }
        const double w2 = k * k + t * t;
        out.value[i] = (k * dev.tau.derivative(s) - dev.kappa.derivative(s) * t) / (w2 * std::sqrt(w2));
        out.valid[i] = true;
    }
    return out;
}

/// Checks sin(phi) - sin(phi(s0)) = m int kappa and cos(phi) - cos(phi(s0)) = -m int tau,
/// integrals from the left end s0 of the domain. Returns the largest residual.
inline double phase_circle_residual(const Development& dev, const ScalarField& phi, double m,
                                    std::size_t intervals = 4000) {
    const Grid grid{dev.domain, intervals};
    const std::vector<double> ik = cumulative_integral(dev.kappa, grid);
    const std::vector<double> it = cumulative_integral(dev.tau, grid);
    const double p0 = phi(grid.node(0));
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = phi(grid.node(i));
        worst = std::max(worst, std::fabs(std::sin(p) - std::sin(p0) - m * ik[i]));
        worst = std::max(worst, std::fabs(std::cos(p) - std::cos(p0) + m * it[i]));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Torsion from curvature, Salkowski curves
// ---------------------------------------------------------------------------

struct SlantTorsion {
    ScalarField kappa; ///< input curvature restricted to the admissible domain
    ScalarField tau;
    Interval domain;

    [[nodiscard]] Development development() const { return {kappa, tau, domain}; }
};

namespace detail {

/// K(s) = int_{s0}^s kappa, tabulated on a grid and evaluated with cubic Hermite
/// interpolation using kappa itself as the slope.
class RunningIntegral {
public:
    RunningIntegral(ScalarField kappa, const Grid& grid, double s0)
        : kappa_(std::move(kappa)), grid_(grid), values_(cumulative_integral(kappa_, grid_)) {
        const double k0 = (*this)(s0);
        for (double& v : values_) v -= k0;
    }

    double operator()(double s) const {
        const double h = grid_.step();
        const double u = (s - grid_.domain().lo) / h;
        const double base = std::clamp(std::floor(u), 0.0, static_cast<double>(grid_.intervals() - 1));
        const auto i = static_cast<std::size_t>(base);
        const double t = u - base;
        const double t2 = t * t;
        const double t3 = t2 * t;
        const double m0 = kappa_(grid_.node(i)) * h;
        const double m1 = kappa_(grid_.node(i + 1)) * h;
        return (2 * t3 - 3 * t2 + 1) * values_[i] + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * values_[i + 1] +
               (t3 - t2) * m1;
    }

    [[nodiscard]] const std::vector<double>& values() const { return values_; }

private:
    ScalarField kappa_;
    Grid grid_;
    std::vector<double> values_;
};

} // namespace detail

/// tau = kappa m K / sqrt(1 - m^2 K^2) with K the integral of kappa from s0 (default:
/// the left end). The domain is the maximal run of grid nodes around s0 with
/// m^2 K^2 < 1 - eps_domain.
inline SlantTorsion torsion_from_curvature(const ScalarField& kappa, double m, std::optional<double> s0 = {},
                                           std::size_t intervals = 20000) {
    if (m == 0.0) throw Error(ErrorCode::ZeroSlopeParameter, "torsion_from_curvature needs m != 0");
    const Interval d = kappa.domain();
    const double start = s0.value_or(d.lo);
    if (start < d.lo || start > d.hi) {
        throw Error(ErrorCode::EmptyDomain, "base point lies outside the curvature domain");
    }
    const Grid grid = detail::field_grid(kappa, intervals);
    const detail::RunningIntegral K(kappa, grid, start);
    const std::vector<double>& kv = K.values();
    auto admissible = [&](std::size_t i) { return m * m * kv[i] * kv[i] < 1.0 - eps_domain; };

    const auto centre = static_cast<std::size_t>(
        std::clamp(std::round((start - d.lo) / grid.step()), 0.0, static_cast<double>(grid.intervals())));
    if (!admissible(centre)) throw Error(ErrorCode::EmptyDomain, "no admissible interval around the base point");
    std::size_t lo = centre;
    std::size_t hi = centre;
    while (lo > 0 && admissible(lo - 1)) --lo;
    while (hi + 1 < grid.size() && admissible(hi + 1)) ++hi;
    if (hi == lo) throw Error(ErrorCode::EmptyDomain, "admissible interval is a single node");
    const Interval dom{grid.node(lo), grid.node(hi)};

    SlantTorsion out;
    out.domain = dom;
    if (kappa.is_rule()) {
        out.kappa = kappa.restricted(dom);
        out.tau = ScalarField::rule(
            [kappa, K, m](double s) {
                const double mk = m * K(s);
                return kappa(s) * mk / std::sqrt(1.0 - mk * mk);
            },
            dom);
        return out;
    }
    const Grid sub(dom, hi - lo);
    std::vector<double> kv_sub(kappa.values().begin() + static_cast<std::ptrdiff_t>(lo),
                               kappa.values().begin() + static_cast<std::ptrdiff_t>(hi) + 1);
    std::vector<double> tv(kv_sub.size());
    for (std::size_t i = 0; i < tv.size(); ++i) {
        const double mk = m * kv[lo + i];
        tv[i] = kv_sub[i] * mk / std::sqrt(1.0 - mk * mk);
    }
    out.kappa = ScalarField::table(sub, std::move(kv_sub));
    out.tau = ScalarField::table(sub, std::move(tv));
    return out;
}

struct Salkowski {
    Development curve;  ///< kappa = 1, tau = m s / sqrt(1 - m^2 s^2)
    Development helix;  ///< predecessor: kappa_H = 1 / sqrt(1 - m^2 s^2), tau_H = m kappa_H
    ScalarField phase;  ///< phi = arcsin(m s)
};

/// Salkowski curve on (-1/|m|, 1/|m|) shrunk by eps_domain.
inline Salkowski salkowski_development(double m) {
    if (m == 0.0) throw Error(ErrorCode::ZeroSlopeParameter, "Salkowski curve needs m != 0");
    const double r = (1.0 - eps_domain) / std::fabs(m);
    const Interval d{-r, r};
    Salkowski out;
    out.curve = {ScalarField::constant(1.0, d),
                 ScalarField::rule([m](double s) { return m * s / std::sqrt(1.0 - m * m * s * s); }, d), d};
    const ScalarField kh = ScalarField::rule([m](double s) { return 1.0 / std::sqrt(1.0 - m * m * s * s); }, d);
    out.helix = {kh, scaled(kh, m), d};
    out.phase = ScalarField::rule([m](double s) { return std::asin(m * s); }, d);
    return out;
}

// ---------------------------------------------------------------------------
// Curves of constant precession
// ---------------------------------------------------------------------------

struct ClosureVerdict {
    bool closed = false;
    bool exact = false;              ///< decided by exact rational arithmetic
    std::optional<Rational> ratio;   ///< mu / alpha when rational
    std::optional<double> period;    ///< arclength of one closed period
    std::string method;
};

/// Closed iff mu / alpha is rational. Exact inputs test alpha^2 = omega^2 + mu^2 for a
/// rational square root; floating inputs use a continued-fraction search with
/// denominator <= 10^6 and window 1e-12 ("numerically rational").
inline ClosureVerdict closure_verdict(const PrecessionParams& p) {
    ClosureVerdict v;
    const double two_pi = 2.0 * std::numbers::pi;
    if (p.exact()) {
        v.exact = true;
        const auto alpha = rational_hypot(*p.exact_omega, *p.exact_mu);
        if (!alpha) {
            v.method = "exact: alpha irrational";
            return v;
        }
        const Rational ratio(p.exact_mu->num * alpha->den, p.exact_mu->den * alpha->num);
        v.closed = true;
        v.ratio = ratio;
        v.period = two_pi * static_cast<double>(ratio.den) / p.alpha();
        v.method = "exact";
        return v;
    }
    v.method = "numerically rational";
    const auto ratio = rational_approximation(p.mu / p.alpha());
    if (!ratio) {
        v.method = "no rational within denominator 1e6 and window 1e-12";
        return v;
    }
    v.closed = true;
    v.ratio = *ratio;
    v.period = two_pi * static_cast<double>(ratio->den) / p.alpha();
    return v;
}

struct ConstantPrecession {
    PrecessionParams params;
    Development development;
    ClosureVerdict closure;

    /// T = (1/2a) ((a-mu) cos(a+mu)s + (a+mu) cos(a-mu)s, (a-mu) sin(a+mu)s + (a+mu) sin(a-mu)s, 2 w sin mu s).
    [[nodiscard]] Vec3 tangent(double s) const {
        const double a = params.alpha();
        const double mu = params.mu;
        return {((a - mu) * std::cos((a + mu) * s) + (a + mu) * std::cos((a - mu) * s)) / (2.0 * a),
                ((a - mu) * std::sin((a + mu) * s) + (a + mu) * std::sin((a - mu) * s)) / (2.0 * a),
                params.omega * std::sin(mu * s) / a};
    }
    /// N = (-w sin as, w cos as, mu) / a, B = T x N.
    [[nodiscard]] Frame frame(double s) const {
        const double a = params.alpha();
        const Vec3 t = tangent(s);
        const Vec3 n{-params.omega * std::sin(a * s) / a, params.omega * std::cos(a * s) / a, params.mu / a};
        return {t, n, cross(t, n)};
    }
};

/// kappa = omega cos(mu s), tau = omega sin(mu s) on `domain` (default [0, 2 pi]).
inline ConstantPrecession constant_precession(const PrecessionParams& p,
                                              Interval domain = {0.0, 2.0 * std::numbers::pi}) {
    const double w = p.omega;
    const double mu = p.mu;
    Development dev{ScalarField::rule([w, mu](double s) { return w * std::cos(mu * s); }, domain),
                    ScalarField::rule([w, mu](double s) { return w * std::sin(mu * s); }, domain), domain};
    return {p, std::move(dev), closure_verdict(p)};
}

struct TangentArc {
    double s_begin = 0.0;
    double s_end = 0.0;
    int sign = 0;                  ///< sign of kappa on the arc
    double curvature_integral = 0; ///< int |kappa| by trapezoids
    double chord_length = 0;       ///< polyline length of the tangent image
    bool complete = false;         ///< bounded by inflections on both ends
};

struct CurvatureBalance {
    double total_curvature = 0.0;
    double total_torsion = 0.0;
    std::vector<TangentArc> arcs;
    double max_pair_mismatch = 0.0;   ///< between consecutive complete arcs
    double max_length_discrepancy = 0.0; ///< quadrature vs chord sum
};

/// Splits one closed period at the sign changes of kappa and measures each arc of
/// the tangent image both as int |kappa| and as a polyline.
inline CurvatureBalance total_curvature_balance(const CurveSamples& samples, const ClosureVerdict& verdict) {
    if (!verdict.closed || !verdict.period) throw Error(ErrorCode::NotClosed, "closure verdict is negative");
    const std::size_t n = samples.size();
    if (n < 4 || samples.kappa.size() != n || samples.tau.size() != n || samples.frame.size() != n) {
        throw Error(ErrorCode::GridTooSmall, "curvature balance needs complete samples with at least 4 nodes");
    }
    const double periods = samples.grid.domain().length() / *verdict.period;
    if (std::round(periods) < 1.0 || std::fabs(periods - std::round(periods)) > 1e-6) {
        throw Error(ErrorCode::InvalidArgument, "samples do not cover a whole number of periods");
    }
    const double h = samples.grid.step();
    CurvatureBalance out;
    out.total_curvature = cumulative_quadrature<double>(samples.kappa, h).back();
    out.total_torsion = cumulative_quadrature<double>(samples.tau, h).back();

    const std::vector<double>& k = samples.kappa;
    const std::vector<Vec3> t = samples.tangents();
    TangentArc arc;
    arc.s_begin = samples.grid.node(0);
    Vec3 prev_t = t[0];
    double prev_k = k[0];
    double prev_s = arc.s_begin;
    auto sign_of = [](double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); };
    arc.sign = sign_of(k[0]);
    for (std::size_t i = 1; i < n; ++i) {
        const double s = samples.grid.node(i);
        const int sg = sign_of(k[i]);
        if (sg != 0 && arc.sign != 0 && sg != arc.sign) {
            // Inflection between prev and i: close the arc at the linear zero of kappa.
            const double frac = prev_k / (prev_k - k[i]);
            const double sc = prev_s + frac * (s - prev_s);
            const Vec3 tc = prev_t + frac * (t[i] - prev_t);
            arc.curvature_integral += 0.5 * std::fabs(prev_k) * (sc - prev_s);
            arc.chord_length += norm(tc - prev_t);
            arc.s_end = sc;
            out.arcs.push_back(arc);
            arc = TangentArc{sc, sc, sg, 0.5 * std::fabs(k[i]) * (s - sc), norm(t[i] - tc), true};
        } else {
            if (arc.sign == 0) arc.sign = sg;
            arc.curvature_integral += 0.5 * (std::fabs(prev_k) + std::fabs(k[i])) * (s - prev_s);
            arc.chord_length += norm(t[i] - prev_t);
        }
        prev_t = t[i];
        prev_k = k[i];
        prev_s = s;
    }
    arc.s_end = prev_s;
    arc.complete = false;
    out.arcs.push_back(arc);
    // The first arc starts at the domain end, so it is incomplete as well.
    if (!out.arcs.empty()) out.arcs.front().complete = false;

    for (std::size_t j = 0; j < out.arcs.size(); ++j) {
        const TangentArc& a = out.arcs[j];
        if (!a.complete) continue;
        out.max_length_discrepancy =
            std::max(out.max_length_discrepancy, std::fabs(a.curvature_integral - a.chord_length));
        if (j + 1 < out.arcs.size() && out.arcs[j + 1].complete) {
            out.max_pair_mismatch =
                std::max(out.max_pair_mismatch, std::fabs(a.curvature_integral - out.arcs[j + 1].curvature_integral));
        }
    }
    return out;
}

/// Quadric fit through the positions of a constant-precession run.
inline QuadricFit hyperboloid_residual(const CurveSamples& samples, const QuadricConfig& cfg = {}) {
    return fit_quadric(samples.position, cfg);
}

} // namespace natcurve
