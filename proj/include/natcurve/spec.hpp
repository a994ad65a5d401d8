#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "natcurve/error.hpp"
#include "natcurve/expression.hpp"
#include "natcurve/frenet.hpp"
#include "natcurve/rational.hpp"
#include "natcurve/solver.hpp"
#include "natcurve/zoo.hpp"

namespace natcurve {

/// Input description of a curve: a family with parameters, or raw natural equations.
struct CurveSpec {
    std::string family;
    nlohmann::json params = nlohmann::json::object();
    std::optional<Interval> domain;
    std::size_t samples = 10000;
    std::optional<Frame> initial_frame;
    std::optional<Vec3> initial_position;
    SolverConfig solver;
};

/// A spec turned into a development plus initial conditions.
struct RealizedSpec {
    Development development;
    Frame initial_frame;
    Vec3 initial_position;
    SolverConfig solver;
};

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::Parse, "field '" + field + "': " + what);
}

inline void reject_unknown(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
    if (!obj.is_object()) field_error(prefix.empty() ? "<root>" : prefix, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) field_error(prefix.empty() ? key : prefix + "." + key, "unknown field");
    }
}

inline double number_at(const nlohmann::json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) field_error(path, "missing");
    const auto& v = obj.at(key);
    if (!v.is_number()) field_error(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) field_error(path, "must be finite");
    return x;
}

inline std::vector<double> numbers_at(const nlohmann::json& v, std::size_t count, const std::string& path) {
    if (!v.is_array() || v.size() != count) field_error(path, "expected " + std::to_string(count) + " numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) {
        if (!v[i].is_number()) field_error(path + "[" + std::to_string(i) + "]", "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

/// Number, integer string "p" or fraction string "p/q".
inline Rational parse_rational(const std::string& text, const std::string& path) {
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        const long long p = std::stoll(text.substr(0, slash), &used);
        if (used != (slash == std::string::npos ? text.size() : slash)) field_error(path, "malformed fraction");
        long long q = 1;
        if (slash != std::string::npos) {
            const std::string den = text.substr(slash + 1);
            q = std::stoll(den, &used);
            if (used != den.size()) field_error(path, "malformed fraction");
        }
        if (q == 0) field_error(path, "zero denominator");
        return Rational(p, q);
    } catch (const std::logic_error&) {
        field_error(path, "malformed fraction '" + text + "'");
    }
}

struct ExactNumber {
    double value;
    std::optional<Rational> exact;
};

inline ExactNumber exact_number_at(const nlohmann::json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) field_error(path, "missing");
    const auto& v = obj.at(key);
    if (v.is_string()) {
        const Rational r = parse_rational(v.get<std::string>(), path);
        return {r.value(), r};
    }
    const double x = number_at(obj, key, path);
    return {x, exact_integer(x)};
}

inline std::map<std::string, double> numeric_constants(const nlohmann::json& params) {
    std::map<std::string, double> out;
    for (const auto& [key, value] : params.items()) {
        if (value.is_number()) out[key] = value.get<double>();
    }
    return out;
}

/// Expression string or {"table": [...]} sampled uniformly over the domain.
inline ScalarField field_at(const nlohmann::json& obj, const std::string& key, const std::string& path,
                            const Interval& domain, const std::map<std::string, double>& constants) {
    if (!obj.contains(key)) field_error(path, "missing");
    const auto& v = obj.at(key);
    if (v.is_string()) {
        Expression e = [&] {
            try {
                return Expression::parse(v.get<std::string>(), constants);
            } catch (const Error& err) {
                field_error(path, err.what());
            }
        }();
        return ScalarField::rule(e.function(), domain);
    }
    if (v.is_number()) return ScalarField::constant(v.get<double>(), domain);
    if (v.is_object()) {
        reject_unknown(v, {"table"}, path);
        if (!v.contains("table") || !v["table"].is_array() || v["table"].size() < 2) {
            field_error(path + ".table", "expected an array of at least 2 numbers");
        }
        const auto values = numbers_at(v["table"], v["table"].size(), path + ".table");
        return ScalarField::table(Grid(domain, values.size() - 1), values);
    }
    field_error(path, "expected an expression string, a number or {\"table\": [...]}");
}

inline Interval domain_of(const CurveSpec& spec) {
    if (!spec.domain) field_error("domain", "missing (required for family '" + spec.family + "')");
    return *spec.domain;
}

} // namespace detail

inline const std::set<std::string>& curve_families() {
    static const std::set<std::string> f{"plane", "helix", "slant_helix", "salkowski", "constant_precession",
                                         "custom_development"};
    return f;
}

/// Structural validation of a CurveSpec document; family parameters are checked
/// when the CurveSpec is realized.
inline CurveSpec parse_curve_spec(const nlohmann::json& j) {
    detail::reject_unknown(j, {"family", "params", "domain", "samples", "initial_frame", "initial_position", "solver"},
                           "");
    CurveSpec spec;
    if (!j.contains("family") || !j["family"].is_string()) detail::field_error("family", "expected a string");
    spec.family = j["family"].get<std::string>();
    if (!curve_families().count(spec.family)) detail::field_error("family", "unknown family '" + spec.family + "'");
    if (j.contains("params")) {
        if (!j["params"].is_object()) detail::field_error("params", "expected an object");
        spec.params = j["params"];
    }
    if (j.contains("domain")) {
        const auto d = detail::numbers_at(j["domain"], 2, "domain");
        if (!(d[1] > d[0])) detail::field_error("domain", "expected s_min < s_max");
        spec.domain = Interval{d[0], d[1]};
    }
    if (!j.contains("samples")) detail::field_error("samples", "missing");
    if (!j["samples"].is_number_integer()) detail::field_error("samples", "expected an integer");
    const auto samples = j["samples"].get<long long>();
    if (samples < 16) detail::field_error("samples", "must be at least 16");
    spec.samples = static_cast<std::size_t>(samples);
    if (j.contains("initial_frame")) {
        const auto v = detail::numbers_at(j["initial_frame"], 9, "initial_frame");
        spec.initial_frame = Frame{{v[0], v[1], v[2]}, {v[3], v[4], v[5]}, {v[6], v[7], v[8]}};
        if (!is_orthonormal(*spec.initial_frame, default_tol_ortho)) {
            detail::field_error("initial_frame", "rows T, N, B are not orthonormal and right-handed");
        }
    }
    if (j.contains("initial_position")) {
        const auto v = detail::numbers_at(j["initial_position"], 3, "initial_position");
        spec.initial_position = Vec3{v[0], v[1], v[2]};
    }
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        detail::reject_unknown(s, {"renormalize_every", "tol_ortho"}, "solver");
        if (s.contains("renormalize_every")) {
            if (!s["renormalize_every"].is_number_integer() || s["renormalize_every"].get<long long>() < 1) {
                detail::field_error("solver.renormalize_every", "expected a positive integer");
            }
            spec.solver.renormalize_every = s["renormalize_every"].get<std::size_t>();
        }
        if (s.contains("tol_ortho")) {
            const double t = detail::number_at(s, "tol_ortho", "solver.tol_ortho");
            if (!(t > 0.0)) detail::field_error("solver.tol_ortho", "must be positive");
            spec.solver.tol_ortho = t;
        }
    }
    spec.solver.steps = spec.samples;
    return spec;
}

/// Raw natural equations: {"kappa", "tau", "domain", "samples"?, "initial_frame"?,
/// "initial_position"?, "solver"?}. Shares the CurveSpec plumbing as family
/// custom_development.
inline CurveSpec parse_development_spec(const nlohmann::json& j) {
    detail::reject_unknown(j, {"kappa", "tau", "domain", "samples", "initial_frame", "initial_position", "solver"}, "");
    nlohmann::json spec{{"family", "custom_development"}, {"samples", 10000}};
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [key, value] : j.items()) {
        if (key == "kappa" || key == "tau") params[key] = value;
        else spec[key] = value;
    }
    spec["params"] = params;
    return parse_curve_spec(spec);
}

inline RealizedSpec realize(const CurveSpec& spec) {
    const nlohmann::json& p = spec.params;
    const auto constants = detail::numeric_constants(p);
    RealizedSpec out;
    out.solver = spec.solver;
    out.initial_position = spec.initial_position.value_or(Vec3{0, 0, 0});
    Frame closed_form = Frame::identity();

    auto guarded = [](const std::string& field, auto&& fn) {
        try {
            return fn();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Parse) throw;
            detail::field_error(field, e.what());
        }
    };

    if (spec.family == "plane") {
        detail::reject_unknown(p, {"kappa"}, "params");
        const Interval d = detail::domain_of(spec);
        const ScalarField k = detail::field_at(p, "kappa", "params.kappa", d, constants);
        out.development = {k, ScalarField::constant(0.0, d), d};
        closed_form = plane_frame(0.0);
    } else if (spec.family == "helix") {
        detail::reject_unknown(p, {"theta", "kappa"}, "params");
        const Interval d = detail::domain_of(spec);
        const double theta = detail::number_at(p, "theta", "params.theta");
        const ScalarField k = detail::field_at(p, "kappa", "params.kappa", d, constants);
        const HelixParams hp = guarded("params.theta", [&] { return HelixParams(theta, k); });
        out.development = {scaled(hp.kappa, std::sin(theta)), scaled(scaled(hp.kappa, std::sin(theta)), hp.m()), d};
        closed_form = helix_frame(0.0, theta);
    } else if (spec.family == "slant_helix") {
        detail::reject_unknown(p, {"theta", "m", "phi"}, "params");
        const Interval d = detail::domain_of(spec);
        if (p.contains("theta") == p.contains("m")) detail::field_error("params.theta", "give exactly one of theta, m");
        const double theta = p.contains("theta") ? detail::number_at(p, "theta", "params.theta")
                                                 : std::atan(1.0 / detail::number_at(p, "m", "params.m"));
        guarded(p.contains("theta") ? "params.theta" : "params.m", [&] {
            require_slope(theta);
            return 0;
        });
        const ScalarField phi = detail::field_at(p, "phi", "params.phi", d, constants);
        out.development = slant_helix_development(phi, std::cos(theta) / std::sin(theta));
        closed_form = slant_helix_frame(phi(d.lo), theta);
    } else if (spec.family == "salkowski") {
        detail::reject_unknown(p, {"m"}, "params");
        const double m = detail::number_at(p, "m", "params.m");
        const Salkowski sk = guarded("params.m", [&] { return salkowski_development(m); });
        const Interval d = spec.domain.value_or(sk.curve.domain);
        out.development = guarded("domain", [&] { return sk.curve.restricted(d); });
    } else if (spec.family == "constant_precession") {
        detail::reject_unknown(p, {"omega", "mu"}, "params");
        const auto w = detail::exact_number_at(p, "omega", "params.omega");
        const auto mu = detail::exact_number_at(p, "mu", "params.mu");
        const PrecessionParams pp = guarded("params.omega", [&] {
            if (w.exact && mu.exact) return PrecessionParams(*w.exact, *mu.exact);
            PrecessionParams q(w.value, mu.value);
            q.exact_omega = w.exact;
            q.exact_mu = mu.exact;
            return q;
        });
        const ClosureVerdict v = closure_verdict(pp);
        const Interval d = spec.domain.value_or(Interval{0.0, v.period.value_or(2.0 * std::numbers::pi)});
        const ConstantPrecession cp = constant_precession(pp, d);
        out.development = cp.development;
        closed_form = cp.frame(d.lo);
    } else {
        detail::reject_unknown(p, {"kappa", "tau"}, "params");
        const Interval d = detail::domain_of(spec);
        out.development = {detail::field_at(p, "kappa", "params.kappa", d, constants),
                           detail::field_at(p, "tau", "params.tau", d, constants), d};
    }
    out.initial_frame = spec.initial_frame.value_or(closed_form);
    return out;
}

inline CurveSamples generate(const CurveSpec& spec) {
    const RealizedSpec r = realize(spec);
    return solve_natural_equations(r.development, r.initial_frame, r.initial_position, r.solver);
}

} // namespace natcurve
