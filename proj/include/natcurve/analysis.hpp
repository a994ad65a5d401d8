#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "natcurve/error.hpp"
#include "natcurve/frame.hpp"
#include "natcurve/frenet.hpp"
#include "natcurve/rational.hpp"
#include "natcurve/scalar_field.hpp"
#include "natcurve/zoo.hpp"

namespace natcurve {

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

enum class Family { plane, general_helix, slant_helix, none };

inline std::string to_string(Family f) {
    switch (f) {
    case Family::plane: return "plane";
    case Family::general_helix: return "general_helix";
    case Family::slant_helix: return "slant_helix";
    case Family::none: return "none";
    }
    return "none";
}

struct Classification {
    Family family = Family::none;
    std::optional<double> theta; ///< slope angle in (0, pi/2)
    std::optional<double> slope; ///< tau/kappa for helices, the slant invariant for slant helices
};

struct ClassifyConfig {
    double tol = 1e-6;
    std::size_t intervals = 4000;
    std::size_t min_nodes = 16; ///< nodes with |kappa| > eps_kappa needed for a verdict
};

/// Plane, then general helix, then slant helix. Each class is a degenerate case of
/// the next, so the first matching test wins. The sign of tau/kappa and of the slant
/// invariant is dropped; it flips under equivalent developments.
inline Classification classify(const Development& dev, const ClassifyConfig& cfg = {}) {
    const InvariantSamples inv = slant_invariant(dev, cfg.intervals);
    const Grid& grid = inv.grid;
    std::vector<double> ratio;
    double max_tau = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!inv.valid[i]) continue;
        const double s = grid.node(i);
        const double k = dev.kappa(s);
        const double t = dev.tau(s);
        max_tau = std::max(max_tau, std::fabs(t));
        ratio.push_back(t / k);
    }
    if (ratio.size() < cfg.min_nodes) {
        throw Error(ErrorCode::Inconclusive, "only " + std::to_string(ratio.size()) + " nodes with nonzero curvature");
    }
    Classification out;
    if (max_tau < cfg.tol) {
        out.family = Family::plane;
        return out;
    }
    auto spread = [](const std::vector<double>& v) {
        const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
        return std::pair{*hi - *lo, 0.5 * (*hi + *lo)};
    };
    const auto [ratio_spread, c] = spread(ratio);
    if (ratio_spread < cfg.tol) {
        out.family = Family::general_helix;
        out.slope = std::fabs(c);
        out.theta = std::atan(1.0 / std::fabs(c));
        return out;
    }
    std::vector<double> values;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (inv.valid[i]) values.push_back(inv.value[i]);
    }
    const auto [inv_spread, m] = spread(values);
    if (inv_spread < cfg.tol && std::fabs(m) > cfg.tol) {
        out.family = Family::slant_helix;
        out.slope = std::fabs(m);
        out.theta = std::atan(1.0 / std::fabs(m));
        return out;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Periodicity
// ---------------------------------------------------------------------------

struct PeriodicityReport {
    bool periodic = false;
    double max_deviation = 0.0;        ///< max |f(s + P) - f(s)| over kappa and tau
    double total_torsion = 0.0;        ///< int tau over one period from the left end
    double torsion_angle_mod_pi = 0.0; ///< total torsion reduced to [0, pi)
    bool successor_periodic = false;   ///< total torsion is a rational multiple of pi
    std::optional<Rational> torsion_ratio;
};

struct PeriodicityConfig {
    double tol = 1e-6;
    std::size_t intervals = 4000;
    std::int64_t max_den = 1'000'000;
    /// Same policy as the closure verdict. A wider window would be vacuous: every real
    /// number has p/q with q <= 10^6 within 1e-10.
    double window = 1e-12;
};

inline PeriodicityReport periodicity_report(const Development& dev, double period, const PeriodicityConfig& cfg = {}) {
    if (!(period > 0.0)) throw Error(ErrorCode::InvalidArgument, "candidate period must be positive");
    const Grid grid{dev.domain, cfg.intervals};
    const double length = dev.domain.length();
    const double k = std::round(length / period);
    if (k < 1.0 || std::fabs(length - k * period) > grid.step()) {
        throw Error(ErrorCode::GridMismatch, "candidate period does not divide the domain length");
    }
    PeriodicityReport out;
    const double lo = dev.domain.lo;
    const double last = dev.domain.hi - period;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = grid.node(i);
        if (s > last + domain_slack(dev.domain)) break;
        const double sp = std::min(s + period, dev.domain.hi);
        out.max_deviation = std::max({out.max_deviation, std::fabs(dev.kappa(sp) - dev.kappa(s)),
                                      std::fabs(dev.tau(sp) - dev.tau(s))});
    }
    out.periodic = out.max_deviation <= cfg.tol;
    out.total_torsion = integrate(dev.tau, lo, std::min(lo + period, dev.domain.hi));
    constexpr double pi = std::numbers::pi;
    out.torsion_angle_mod_pi = out.total_torsion - pi * std::floor(out.total_torsion / pi);
    if (out.torsion_angle_mod_pi > pi - cfg.window) out.torsion_angle_mod_pi = 0.0;
    out.torsion_ratio = rational_approximation(out.total_torsion / pi, cfg.max_den, cfg.window);
    out.successor_periodic = out.periodic && out.torsion_ratio.has_value();
    return out;
}

// ---------------------------------------------------------------------------
// Verification of sampled curves
// ---------------------------------------------------------------------------

/// Default tolerances for every check; reports echo the value used.
struct VerifyConfig {
    double orthonormality = 1e-9;
    double unit_speed = 1e-6;
    double tangent_consistency = 1e-6;
    double frenet_equations = 1e-4;
    double closure = 1e-5;
};

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::size_t worst_node = 0;
    double worst_s = 0.0;
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    [[nodiscard]] bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
    }
};

inline const std::vector<std::string>& verification_checks() {
    static const std::vector<std::string> names{"orthonormality", "unit_speed", "tangent_consistency",
                                                "frenet_equations", "closure"};
    return names;
}

namespace detail {

struct Worst {
    double value = 0.0;
    std::size_t node = 0;
    void update(double v, std::size_t i) {
        if (v > value || std::isnan(v)) {
            value = v;
            node = i;
        }
    }
};

inline std::vector<Vec3> vector_derivative(const std::vector<Vec3>& v, double h) {
    std::vector<double> x(v.size()), y(v.size()), z(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        x[i] = v[i].x;
        y[i] = v[i].y;
        z[i] = v[i].z;
    }
    const auto dx = grid_derivative(x, h);
    const auto dy = grid_derivative(y, h);
    const auto dz = grid_derivative(z, h);
    std::vector<Vec3> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = {dx[i], dy[i], dz[i]};
    return out;
}

} // namespace detail

/// Runs the named checks (all of verification_checks() when empty) over sampled data.
/// Derivatives use fourth-order node stencils.
inline VerificationReport verify(const CurveSamples& samples, std::vector<std::string> checks = {},
                                 const VerifyConfig& cfg = {}) {
    if (checks.empty()) checks = verification_checks();
    const std::size_t n = samples.size();
    if (n < 5) throw Error(ErrorCode::GridTooSmall, "verification needs at least 5 nodes");
    const double h = samples.grid.step();
    VerificationReport report;
    std::vector<Vec3> velocity;
    auto velocity_once = [&]() -> const std::vector<Vec3>& {
        if (velocity.empty()) velocity = detail::vector_derivative(samples.position, h);
        return velocity;
    };
    for (const std::string& name : checks) {
        if (std::count(checks.begin(), checks.end(), name) > 1) {
            throw Error(ErrorCode::InvalidArgument, "check '" + name + "' requested twice");
        }
        detail::Worst w;
        double tol = 0.0;
        if (name == "orthonormality") {
            tol = cfg.orthonormality;
            for (std::size_t i = 0; i < n; ++i) w.update(orthonormality_error(samples.frame[i]), i);
        } else if (name == "unit_speed") {
            tol = cfg.unit_speed;
            const auto& v = velocity_once();
            for (std::size_t i = 0; i < n; ++i) w.update(std::fabs(norm(v[i]) - 1.0), i);
        } else if (name == "tangent_consistency") {
            tol = cfg.tangent_consistency;
            const auto& v = velocity_once();
            for (std::size_t i = 0; i < n; ++i) w.update(norm(v[i] - samples.frame[i].e1), i);
        } else if (name == "frenet_equations") {
            tol = cfg.frenet_equations;
            std::vector<Vec3> e1(n), e2(n), e3(n);
            for (std::size_t i = 0; i < n; ++i) {
                e1[i] = samples.frame[i].e1;
                e2[i] = samples.frame[i].e2;
                e3[i] = samples.frame[i].e3;
            }
            const auto d1 = detail::vector_derivative(e1, h);
            const auto d2 = detail::vector_derivative(e2, h);
            const auto d3 = detail::vector_derivative(e3, h);
            for (std::size_t i = 0; i < n; ++i) {
                double r = 0.0;
                if (samples.kind == FrameKind::frenet) {
                    r = std::max({std::fabs(dot(d1[i], e2[i]) - samples.kappa[i]),
                                  std::fabs(dot(d2[i], e3[i]) - samples.tau[i]), std::fabs(dot(d3[i], e1[i]))});
                } else {
                    r = std::max({std::fabs(dot(d1[i], e2[i]) - samples.kappa[i]),
                                  std::fabs(dot(d1[i], e3[i]) - samples.tau[i]), std::fabs(dot(d2[i], e3[i]))});
                }
                w.update(r, i);
            }
        } else if (name == "closure") {
            tol = cfg.closure;
            w.update(norm(samples.position.back() - samples.position.front()), n - 1);
        } else {
            throw Error(ErrorCode::InvalidArgument, "unknown check '" + name + "'");
        }
        report.checks.push_back({name, w.value <= tol, w.value, tol, w.node, samples.grid.node(w.node)});
    }
    return report;
}

} // namespace natcurve
