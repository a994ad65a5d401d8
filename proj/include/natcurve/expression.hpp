#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>

#include "natcurve/error.hpp"

namespace natcurve {

/// Compiled real function of the arclength variable `s`.
///
/// Grammar: sums and products of numbers, `s`, `pi`, named constants, `^` (right
/// associative), unary signs, parentheses, and the functions sin cos tan asin acos
/// atan sinh cosh tanh exp log sqrt abs (one argument) and atan2 pow min max (two).
class Expression {
public:
    using Fn = std::function<double(double)>;

    static Expression parse(std::string_view text, const std::map<std::string, double>& constants = {}) {
        Parser p{text, constants};
        Fn f = p.expr();
        p.skip();
        if (p.pos != text.size()) p.fail("unexpected '" + std::string(1, text[p.pos]) + "'");
        return Expression(std::string(text), std::move(f));
    }

    double operator()(double s) const { return fn_(s); }
    [[nodiscard]] const std::string& text() const { return text_; }
    [[nodiscard]] Fn function() const { return fn_; }

private:
    Expression(std::string text, Fn fn) : text_(std::move(text)), fn_(std::move(fn)) {}

    struct Parser {
        std::string_view src;
        const std::map<std::string, double>& constants;
        std::size_t pos = 0;

        [[noreturn]] void fail(const std::string& what) const {
            throw Error(ErrorCode::Parse, "expression '" + std::string(src) + "' at offset " + std::to_string(pos) +
                                              ": " + what);
        }
        void skip() {
            while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
        }
        bool eat(char c) {
            skip();
            if (pos < src.size() && src[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        void expect(char c) {
            if (!eat(c)) fail(std::string("expected '") + c + "'");
        }

        Fn expr() {
            Fn lhs = term();
            for (;;) {
                if (eat('+')) {
                    lhs = [a = std::move(lhs), b = term()](double s) { return a(s) + b(s); };
                } else if (eat('-')) {
                    lhs = [a = std::move(lhs), b = term()](double s) { return a(s) - b(s); };
                } else {
                    return lhs;
                }
            }
        }
        Fn term() {
            Fn lhs = unary();
            for (;;) {
                if (eat('*')) {
                    lhs = [a = std::move(lhs), b = unary()](double s) { return a(s) * b(s); };
                } else if (eat('/')) {
                    lhs = [a = std::move(lhs), b = unary()](double s) { return a(s) / b(s); };
                } else {
                    return lhs;
                }
            }
        }
        Fn unary() {
            if (eat('-')) return [a = unary()](double s) { return -a(s); };
            if (eat('+')) return unary();
            return power();
        }
        Fn power() {
            Fn base = primary();
            if (eat('^')) return [a = std::move(base), b = unary()](double s) { return std::pow(a(s), b(s)); };
            return base;
        }
        Fn primary() {
            skip();
            if (pos >= src.size()) fail("unexpected end of input");
            const char c = src[pos];
            if (eat('(')) {
                Fn inner = expr();
                expect(')');
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
                const std::string rest(src.substr(pos));
                char* end = nullptr;
                const double v = std::strtod(rest.c_str(), &end);
                if (end == rest.c_str()) fail("malformed number");
                pos += static_cast<std::size_t>(end - rest.c_str());
                return [v](double) { return v; };
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                const std::size_t start = pos;
                while (pos < src.size() &&
                       (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
                    ++pos;
                }
                const std::string name(src.substr(start, pos - start));
                skip();
                if (pos < src.size() && src[pos] == '(') return call(name);
                if (name == "s") return [](double s) { return s; };
                if (name == "pi") return [](double) { return std::numbers::pi; };
                if (auto it = constants.find(name); it != constants.end()) {
                    const double v = it->second;
                    return [v](double) { return v; };
                }
                pos = start;
                fail("unknown identifier '" + name + "'");
            }
            fail("unexpected '" + std::string(1, c) + "'");
        }
        Fn call(const std::string& name) {
            static const std::map<std::string, double (*)(double)> unary_fns{
                {"sin", [](double x) { return std::sin(x); }},   {"cos", [](double x) { return std::cos(x); }},
                {"tan", [](double x) { return std::tan(x); }},   {"asin", [](double x) { return std::asin(x); }},
                {"acos", [](double x) { return std::acos(x); }}, {"atan", [](double x) { return std::atan(x); }},
                {"sinh", [](double x) { return std::sinh(x); }}, {"cosh", [](double x) { return std::cosh(x); }},
                {"tanh", [](double x) { return std::tanh(x); }}, {"exp", [](double x) { return std::exp(x); }},
                {"log", [](double x) { return std::log(x); }},   {"sqrt", [](double x) { return std::sqrt(x); }},
                {"abs", [](double x) { return std::fabs(x); }},
            };
            static const std::map<std::string, double (*)(double, double)> binary_fns{
                {"atan2", [](double y, double x) { return std::atan2(y, x); }},
                {"pow", [](double x, double y) { return std::pow(x, y); }},
                {"min", [](double x, double y) { return std::fmin(x, y); }},
                {"max", [](double x, double y) { return std::fmax(x, y); }},
            };
            expect('(');
            Fn a = expr();
            if (auto it = unary_fns.find(name); it != unary_fns.end()) {
                expect(')');
                return [f = it->second, a = std::move(a)](double s) { return f(a(s)); };
            }
            if (auto it = binary_fns.find(name); it != binary_fns.end()) {
                expect(',');
                Fn b = expr();
                expect(')');
                return [f = it->second, a = std::move(a), b = std::move(b)](double s) { return f(a(s), b(s)); };
            }
            fail("unknown function '" + name + "'");
        }
    };

    std::string text_;
    Fn fn_;
};

} // namespace natcurve
