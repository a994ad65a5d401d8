#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "natcurve/error.hpp"

namespace natcurve {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] constexpr double length() const { return hi - lo; }
    [[nodiscard]] constexpr bool contains(const Interval& o) const { return o.lo >= lo && o.hi <= hi; }
    friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

/// Slack used for domain membership tests so that grid nodes computed in floating
/// point never fall outside the interval they were generated from.
inline double domain_slack(const Interval& d) {
    return 1e-12 * std::max({1.0, std::fabs(d.lo), std::fabs(d.hi)});
}

/// Uniform grid with `intervals` steps; nodes lo + i h, last node pinned to hi.
class Grid {
public:
    Grid() = default;
    Grid(Interval domain, std::size_t intervals) : domain_(domain), intervals_(intervals) {
        if (intervals_ < 1) {
            throw Error(ErrorCode::GridTooSmall, "grid needs at least one interval");
        }
        if (!(domain_.hi > domain_.lo)) {
            throw Error(ErrorCode::DomainMismatch, "grid domain must satisfy lo < hi");
        }
    }

    [[nodiscard]] Interval domain() const { return domain_; }
    [[nodiscard]] std::size_t intervals() const { return intervals_; }
    [[nodiscard]] std::size_t size() const { return intervals_ + 1; }
    [[nodiscard]] double step() const { return domain_.length() / static_cast<double>(intervals_); }
    [[nodiscard]] double node(std::size_t i) const {
        return i == intervals_ ? domain_.hi : domain_.lo + static_cast<double>(i) * step();
    }
    [[nodiscard]] std::vector<double> nodes() const {
        std::vector<double> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = node(i);
        return out;
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    Interval domain_{0.0, 1.0};
    std::size_t intervals_ = 1;
};

// ---------------------------------------------------------------------------
// Finite differences and quadrature on node data
// ---------------------------------------------------------------------------

/// Fourth-order finite-difference derivative at every node of a uniform grid.
/// Central five-point stencil in the interior, shifted five-point stencils at the
/// two nodes nearest each end. Falls back to second order when fewer than 5 nodes.
inline std::vector<double> grid_derivative(std::span<const double> v, double h) {
    const std::size_t n = v.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    if (n < 5) {
        for (std::size_t i = 0; i < n; ++i) {
            if (i == 0) d[i] = (v[1] - v[0]) / h;
            else if (i == n - 1) d[i] = (v[n - 1] - v[n - 2]) / h;
            else d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
        }
        return d;
    }
    for (std::size_t i = 2; i + 2 < n; ++i) {
        d[i] = (v[i - 2] - 8.0 * v[i - 1] + 8.0 * v[i + 1] - v[i + 2]) / (12.0 * h);
    }
    d[0] = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h);
    d[1] = (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h);
    const std::size_t m = n - 1;
    d[m] = (25.0 * v[m] - 48.0 * v[m - 1] + 36.0 * v[m - 2] - 16.0 * v[m - 3] + 3.0 * v[m - 4]) / (12.0 * h);
    d[m - 1] = (3.0 * v[m] + 10.0 * v[m - 1] - 18.0 * v[m - 2] + 6.0 * v[m - 3] - v[m - 4]) / (12.0 * h);
    return d;
}

/// Running integral of node samples, value 0 at the first node.
///
/// Each interval is integrated with the cubic through the four surrounding nodes
/// (h/24 [-1, 13, 13, -1]); the first and last intervals use one-sided cubics.
/// Every interval carries an O(h^5) error with a smoothly varying constant, so the
/// running sum is O(h^4) and free of the even/odd node pattern that alternating
/// Simpson/trapezoid steps would leave behind. Needs at least 4 nodes for the cubic
/// rule; shorter inputs fall back to trapezoids.
template <class T>
std::vector<T> cumulative_quadrature(std::span<const T> f, double h) {
    const std::size_t n = f.size();
    std::vector<T> out(n, T{});
    if (n < 2) return out;
    if (n < 4) {
        for (std::size_t i = 1; i < n; ++i) out[i] = out[i - 1] + (f[i - 1] + f[i]) * (0.5 * h);
        return out;
    }
    const double c = h / 24.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        T piece;
        if (i == 0) {
            piece = (f[0] * 9.0 + f[1] * 19.0 - f[2] * 5.0 + f[3]) * c;
        } else if (i + 2 == n) {
            piece = (f[n - 1] * 9.0 + f[n - 2] * 19.0 - f[n - 3] * 5.0 + f[n - 4]) * c;
        } else {
            piece = ((f[i] + f[i + 1]) * 13.0 - f[i - 1] - f[i + 2]) * c;
        }
        out[i + 1] = out[i] + piece;
    }
    return out;
}

// ---------------------------------------------------------------------------
// ScalarField
// ---------------------------------------------------------------------------

/// Scalar function of arclength: either a closed-form rule or a uniform sample
/// table with linear interpolation. Evaluation outside the domain throws.
class ScalarField {
public:
    using Rule = std::function<double(double)>;

    ScalarField() : ScalarField(constant(0.0, {0.0, 1.0})) {}

    static ScalarField rule(Rule f, Interval domain) {
        if (!(domain.hi > domain.lo)) {
            throw Error(ErrorCode::DomainMismatch, "field domain must satisfy lo < hi");
        }
        ScalarField out(domain);
        out.rule_ = std::make_shared<const Rule>(std::move(f));
        return out;
    }

    /// Rule with a known derivative, used instead of the difference quotient.
    static ScalarField rule(Rule f, Interval domain, Rule derivative) {
        ScalarField out = rule(std::move(f), domain);
        out.rule_derivative_ = std::make_shared<const Rule>(std::move(derivative));
        return out;
    }

    static ScalarField constant(double c, Interval domain) {
        return rule([c](double) { return c; }, domain, [](double) { return 0.0; });
    }

    static ScalarField table(const Grid& grid, std::vector<double> values) {
        if (values.size() != grid.size()) {
            throw Error(ErrorCode::GridMismatch, "table has " + std::to_string(values.size()) +
                                                     " values for a grid of " + std::to_string(grid.size()) +
                                                     " nodes");
        }
        ScalarField out(grid.domain());
        auto data = std::make_shared<TableData>();
        data->grid = grid;
        data->derivative = grid_derivative(values, grid.step());
        data->values = std::move(values);
        out.table_ = std::move(data);
        return out;
    }

    [[nodiscard]] bool is_rule() const { return rule_ != nullptr; }
    [[nodiscard]] bool is_table() const { return table_ != nullptr; }
    [[nodiscard]] Interval domain() const { return domain_; }

    /// Grid of a table-backed field; throws for rules.
    [[nodiscard]] const Grid& grid() const {
        require_table();
        return table_->grid;
    }
    [[nodiscard]] const std::vector<double>& values() const {
        require_table();
        return table_->values;
    }

    double operator()(double s) const {
        s = checked(s);
        if (rule_) return (*rule_)(s);
        return interpolate(table_->values, s);
    }

    /// First derivative. Rules: the supplied derivative if any, else a five-point
    /// difference quotient (one-sided near the domain ends). Tables: fourth-order
    /// node derivatives, linearly interpolated.
    [[nodiscard]] double derivative(double s) const {
        s = checked(s);
        if (table_) return interpolate(table_->derivative, s);
        if (rule_derivative_) return (*rule_derivative_)(s);
        const Rule& f = *rule_;
        double h = 2e-4 * std::max(1.0, std::fabs(s));
        h = std::min(h, domain_.length() / 8.0);
        if (s - 2.0 * h >= domain_.lo && s + 2.0 * h <= domain_.hi) {
            return (f(s - 2.0 * h) - 8.0 * f(s - h) + 8.0 * f(s + h) - f(s + 2.0 * h)) / (12.0 * h);
        }
        if (s - 2.0 * h < domain_.lo) {
            const double a = std::max(s, domain_.lo);
            return (-25.0 * f(a) + 48.0 * f(a + h) - 36.0 * f(a + 2 * h) + 16.0 * f(a + 3 * h) - 3.0 * f(a + 4 * h)) /
                   (12.0 * h);
        }
        const double b = std::min(s, domain_.hi);
        return (25.0 * f(b) - 48.0 * f(b - h) + 36.0 * f(b - 2 * h) - 16.0 * f(b - 3 * h) + 3.0 * f(b - 4 * h)) /
               (12.0 * h);
    }

    [[nodiscard]] std::vector<double> sample(const Grid& grid) const {
        std::vector<double> out(grid.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(grid.node(i));
        return out;
    }

    /// Narrows the domain of a rule-backed field. Tables cannot be narrowed without
    /// resampling, so only their own domain is accepted.
    [[nodiscard]] ScalarField restricted(Interval d) const {
        if (!domain_.contains(d) && !(std::fabs(d.lo - domain_.lo) <= domain_slack(domain_) &&
                                      std::fabs(d.hi - domain_.hi) <= domain_slack(domain_))) {
            throw Error(ErrorCode::DomainMismatch, "restriction leaves the field domain");
        }
        if (table_) {
            if (d == domain_) return *this;
            throw Error(ErrorCode::DomainMismatch, "table-backed fields cannot be restricted");
        }
        ScalarField out = *this;
        out.domain_ = d;
        return out;
    }

private:
    struct TableData {
        Grid grid;
        std::vector<double> values;
        std::vector<double> derivative;
    };

    explicit ScalarField(Interval d) : domain_(d) {}

    void require_table() const {
        if (!table_) throw Error(ErrorCode::InvalidArgument, "field is not table-backed");
    }

    double checked(double s) const {
        const double slack = domain_slack(domain_);
        if (!(s >= domain_.lo - slack && s <= domain_.hi + slack)) {
            throw Error(ErrorCode::DomainMismatch, "evaluation at s=" + std::to_string(s) + " outside [" +
                                                       std::to_string(domain_.lo) + ", " +
                                                       std::to_string(domain_.hi) + "]");
        }
        return std::clamp(s, domain_.lo, domain_.hi);
    }

    double interpolate(const std::vector<double>& v, double s) const {
        const Grid& g = table_->grid;
        const double u = (s - domain_.lo) / g.step();
        const auto last = static_cast<double>(g.intervals() - 1);
        const double base = std::clamp(std::floor(u), 0.0, last);
        const auto i = static_cast<std::size_t>(base);
        const double t = u - base;
        return v[i] + t * (v[i + 1] - v[i]);
    }

    Interval domain_;
    std::shared_ptr<const Rule> rule_;
    std::shared_ptr<const Rule> rule_derivative_;
    std::shared_ptr<const TableData> table_;
};

/// Builds a field from a pointwise formula over other fields: a rule when every
/// input is rule-backed (`as_rule`), otherwise a table sampled on `grid`.
inline ScalarField derived_field(const Grid& grid, bool as_rule, ScalarField::Rule f) {
    if (as_rule) return ScalarField::rule(std::move(f), grid.domain());
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.node(i));
    return ScalarField::table(grid, std::move(v));
}

/// Composite Simpson over [a, b]. Rules use `panels` subintervals (rounded up to even).
/// Tables use the fourth-order node rule of cumulative_quadrature between grid nodes and
/// integrate the interpolant exactly over partial intervals at unaligned bounds.
inline double integrate(const ScalarField& f, double a, double b, std::size_t panels = 8192) {
    const Interval d = f.domain();
    const double slack = domain_slack(d);
    if (a < d.lo - slack || b > d.hi + slack || a > b) {
        throw Error(ErrorCode::DomainMismatch, "integration bounds outside the field domain");
    }
    if (a == b) return 0.0;
    if (f.is_table()) {
        const Grid& g = f.grid();
        const double h = g.step();
        const auto first = static_cast<std::size_t>(std::ceil((a - d.lo) / h - 1e-9));
        const auto last = std::min(static_cast<std::size_t>(std::floor((b - d.lo) / h + 1e-9)), g.intervals());
        if (first >= last) return 0.5 * (f(a) + f(b)) * (b - a);
        const std::vector<double>& v = f.values();
        const std::vector<double> run = cumulative_quadrature<double>(
            std::span<const double>(v.data() + first, last - first + 1), h);
        const double head = 0.5 * (f(a) + v[first]) * (g.node(first) - a);
        const double tail = 0.5 * (v[last] + f(b)) * (b - g.node(last));
        return head + run.back() + tail;
    }
    panels += panels % 2;
    const double h = (b - a) / static_cast<double>(panels);
    double sum = f(a) + f(b);
    for (std::size_t i = 1; i < panels; ++i) {
        sum += f(a + static_cast<double>(i) * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

/// Running integral of a field on a grid, 0 at the first node. Each grid interval
/// is one Simpson panel evaluated at its endpoints and midpoint; a table sampled on
/// its own grid uses the node rule instead, since its midpoints are interpolated.
inline std::vector<double> cumulative_integral(const ScalarField& f, const Grid& grid) {
    if (f.is_table() && f.grid() == grid) return cumulative_quadrature<double>(f.values(), grid.step());
    std::vector<double> out(grid.size(), 0.0);
    double prev_s = grid.node(0);
    double prev_v = f(prev_s);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double s = grid.node(i);
        const double v = f(s);
        out[i] = out[i - 1] + (s - prev_s) / 6.0 * (prev_v + 4.0 * f(0.5 * (prev_s + s)) + v);
        prev_s = s;
        prev_v = v;
    }
    return out;
}

} // namespace natcurve
