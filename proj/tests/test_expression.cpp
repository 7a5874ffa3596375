#include <doctest.h>

#include <cmath>
#include <string>

#include "ptcs/expression.hpp"
#include "ptcs/physical_model.hpp"

using namespace ptcs;

namespace {

double eval(const std::string& s, double q = 0.7, double nu = 1.5) { return compile_expression(s, nu)(q); }

}  // namespace

TEST_CASE("precedence and associativity") {
    CHECK(eval("1 + 2 * 3") == 7.0);
    CHECK(eval("(1 + 2) * 3") == 9.0);
    CHECK(eval("2^3^2") == 512.0);
    CHECK(eval("-q^2", 3.0) == -9.0);
    CHECK(eval("8 / 4 / 2") == 1.0);
    CHECK(eval("2 - 3 - 4") == -5.0);
    CHECK(eval("--2") == 2.0);
    CHECK(eval("1e-3 * 1000") == doctest::Approx(1.0));
}

TEST_CASE("variables, constants and functions") {
    const double q = 0.7;
    CHECK(eval("q") == q);
    CHECK(eval("pi") == std::numbers::pi);
    CHECK(eval("nu") == 1.5);
    CHECK(eval("cot(q)") == doctest::Approx(1.0 / std::tan(q)));
    CHECK(eval("1/sin(q)^2") == doctest::Approx(1.0 / std::pow(std::sin(q), 2)));
    CHECK(eval("sqrt(abs(-4)) + exp(0) + log(1) + cos(0) + tan(0)") == doctest::Approx(4.0));
    CHECK(eval("-(nu+1)*cot(q)") == doctest::Approx(-2.5 / std::tan(q)));
}

TEST_CASE("syntax errors name the column") {
    auto msg = [](const std::string& s) {
        try {
            compile_expression(s, 0.0);
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(msg("sin(q").find("column 6") != std::string::npos);
    CHECK(msg("1 +").find("end of input") != std::string::npos);
    CHECK(msg("foo(q)").find("unknown name 'foo'") != std::string::npos);
    CHECK(msg("q q").find("column 3") != std::string::npos);
    CHECK(msg("sin q").find("expected '('") != std::string::npos);
}

TEST_CASE("symbol specifications") {
    const auto s = parse_symbol("cos(q):1", 0.0);
    REQUIRE(s.terms.size() == 1);
    CHECK(s.terms[0].p_degree == 1);
    CHECK(s.terms[0].u(0.0) == 1.0);
    CHECK(parse_symbol("hamiltonian", 0.0).terms.size() == 2);
    CHECK_THROWS_AS(parse_symbol("q:3", 0.0), ValidationError);
    CHECK_THROWS_AS(parse_symbol("q:x", 0.0), ValidationError);
    CHECK_THROWS_AS(parse_symbol("q:", 0.0), ValidationError);
    CHECK_THROWS_AS(parse_symbol("nothing", 0.0), ValidationError);
}
