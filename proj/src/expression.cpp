#include "ptcs/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>

#include "ptcs/physical_model.hpp"

namespace ptcs {

namespace {

using Fn = std::function<double(double)>;

class Parser {
public:
    Parser(const std::string& text, double nu) : s_(text), nu_(nu) {}

    Fn parse() {
        Fn f = sum();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ValidationError("expression '" + s_ + "', column " + std::to_string(pos_ + 1) + ": " + what);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Fn sum() {
        Fn lhs = product();
        for (;;) {
            if (eat('+')) {
                Fn rhs = product();
                lhs = [lhs, rhs](double q) { return lhs(q) + rhs(q); };
            } else if (eat('-')) {
                Fn rhs = product();
                lhs = [lhs, rhs](double q) { return lhs(q) - rhs(q); };
            } else {
                return lhs;
            }
        }
    }

    Fn product() {
        Fn lhs = unary();
        for (;;) {
            if (eat('*')) {
                Fn rhs = unary();
                lhs = [lhs, rhs](double q) { return lhs(q) * rhs(q); };
            } else if (eat('/')) {
                Fn rhs = unary();
                lhs = [lhs, rhs](double q) { return lhs(q) / rhs(q); };
            } else {
                return lhs;
            }
        }
    }

    // Unary minus binds looser than ^, so -q^2 is -(q^2).
    Fn unary() {
        if (eat('-')) {
            Fn f = unary();
            return [f](double q) { return -f(q); };
        }
        if (eat('+')) return unary();
        return power();
    }

    Fn power() {
        Fn base = atom();
        if (eat('^')) {
            Fn ex = unary();
            return [base, ex](double q) { return std::pow(base(q), ex(q)); };
        }
        return base;
    }

    Fn atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[pos_];
        if (eat('(')) {
            Fn f = sum();
            if (!eat(')')) fail("expected ')'");
            return f;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = s_.c_str() + pos_;
            char* end = nullptr;
            const double v = std::strtod(begin, &end);
            if (end == begin) fail("bad number");
            pos_ += static_cast<std::size_t>(end - begin);
            return [v](double) { return v; };
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string name = s_.substr(start, pos_ - start);
            if (name == "q") return [](double q) { return q; };
            if (name == "pi") return [](double) { return std::numbers::pi; };
            if (name == "nu") return [nu = nu_](double) { return nu; };
            double (*fn)(double) = nullptr;
            if (name == "sin") fn = [](double x) { return std::sin(x); };
            else if (name == "cos") fn = [](double x) { return std::cos(x); };
            else if (name == "tan") fn = [](double x) { return std::tan(x); };
            else if (name == "cot") fn = [](double x) { return std::cos(x) / std::sin(x); };
            else if (name == "exp") fn = [](double x) { return std::exp(x); };
            else if (name == "log") fn = [](double x) { return std::log(x); };
            else if (name == "sqrt") fn = [](double x) { return std::sqrt(x); };
            else if (name == "abs") fn = [](double x) { return std::abs(x); };
            if (!fn) {
                pos_ = start;
                fail("unknown name '" + name + "'");
            }
            if (!eat('(')) fail("expected '(' after " + name);
            Fn arg = sum();
            if (!eat(')')) fail("expected ')'");
            return [fn, arg](double q) { return fn(arg(q)); };
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string s_;
    double nu_;
    std::size_t pos_ = 0;
};

}  // namespace

std::function<double(double)> compile_expression(const std::string& text, double nu) {
    return Parser(text, nu).parse();
}

ClassicalSymbol parse_symbol(const std::string& spec, double nu) {
    const auto colon = spec.rfind(':');
    if (colon == std::string::npos) return symbols::by_name(spec, nu);
    const std::string expr = spec.substr(0, colon);
    const std::string deg = spec.substr(colon + 1);
    if (deg.size() != 1 || deg[0] < '0' || deg[0] > '9')
        throw ValidationError("symbol '" + spec + "': expected u-expr:degree with a single-digit degree");
    const int degree = deg[0] - '0';
    if (degree > 2) throw ValidationError("symbol '" + spec + "': only degree 0, 1 or 2 in p can be quantized");
    ClassicalSymbol s;
    s.name = expr + (degree == 0 ? "" : degree == 1 ? " * p" : " * p^2");
    s.terms.push_back({compile_expression(expr, nu), degree});
    return s;
}

}  // namespace ptcs
