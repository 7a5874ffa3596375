#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ptcs/cs_quantization.hpp"
#include "ptcs/expression.hpp"
#include "ptcs/physical_model.hpp"

using namespace ptcs;
using oracle::pi;

TEST_CASE("identity weight against the a-substitution integral (nu = 0)") {
    // With a = -cot q the weight becomes sin^2 x int 4 a e^{2ax} / (e^{2 pi a} - 1) da.
    for (double x : {0.6, 1.3, 2.2}) {
        auto f = [x](double a) {
            if (a == 0.0) return 4.0 / (2 * pi);
            return 4 * a * std::exp(2 * a * x) / std::expm1(2 * pi * a);
        };
        const double g = std::pow(std::sin(x), 2) * oracle::simpson(f, -80.0, 80.0, 400000);
        CHECK(g == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(identity_weight(0.0, x) == doctest::Approx(g).epsilon(1e-9));
    }
}

TEST_CASE("identity weight near the walls and for other nu") {
    for (double nu : {0.5, 1.0, 3.0})
        for (double x : {1e-4, 0.05, 1.0, pi - 1e-4}) CHECK(identity_weight(nu, x) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK_THROWS_AS(identity_weight(0.0, 1e-9), NumericalError);
}

TEST_CASE("q-mesh is mirrored") {
    const auto mesh = q_mesh(0.0);
    const auto& m = *mesh;
    REQUIRE(m.q.size() == m.weight.size());
    const std::size_t n = m.q.size();
    for (std::size_t i = 0; i < n; i += 97) CHECK(m.q[i] + m.q[n - 1 - i] == doctest::Approx(pi).epsilon(1e-15));
}

TEST_CASE("multiplier rows") {
    for (double nu : {0.0, 1.0}) {
        const auto v = quantize(symbols::inverse_sin_squared(), nu);
        const auto w = quantize(symbols::superpotential(nu), nu);
        const auto one = quantize(symbols::unit(), nu);
        for (double x : {0.2, 1.0, 2.5}) {
            CHECK(v.multiplier(x) == doctest::Approx((2 * nu + 3) / (2 * nu + 2) / std::pow(std::sin(x), 2)).epsilon(1e-9));
            CHECK(w.multiplier(x) == doctest::Approx(superpotential(nu, x)).epsilon(1e-9));
            CHECK(one.multiplier(x) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("position quantization is an odd-symmetric increasing multiplier") {
    const auto f = quantize_position(0.0);
    CHECK(f.multiplier(0.5 * pi) == doctest::Approx(0.5 * pi).epsilon(1e-12));
    double prev = 0.0;
    for (int j = 1; j < 40; ++j) {
        const double x = pi * j / 40;
        CHECK(f.multiplier(x) + f.multiplier(pi - x) == doctest::Approx(pi).epsilon(1e-12));
        CHECK(f.multiplier(x) > prev);
        prev = f.multiplier(x);
    }
}

TEST_CASE("Hamiltonian symbol quantizes to the diagonal spectrum") {
    const auto h = quantize(symbols::classical_hamiltonian(0.5), 0.5, 8);
    REQUIRE(h.kind == QuantizedOperator::Kind::EigenbasisMatrix);
    for (int n = 0; n <= 8; ++n) CHECK(h.matrix(n, n).real() == doctest::Approx(energy(n, 0.5)).epsilon(1e-10));
    CHECK(hermiticity_defect(h.matrix) < 1e-12);
}

TEST_CASE("momentum symbol quantizes to P") {
    const auto p = quantize(symbols::momentum(), 0.0, 6);
    CHECK(p.matrix(0, 1).imag() == doctest::Approx(8.0 / (3.0 * pi)).epsilon(1e-12));
    CHECK((p.matrix - momentum_matrix(0.0, 6)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("quantization is linear") {
    const auto a = parse_symbol("cos(q):1", 1.0);
    const auto b = parse_symbol("1/sin(q)^2:2", 1.0);
    const auto ab = quantize(a.scaled(2.0) + b.scaled(-0.5), 1.0, 6);
    const Eigen::MatrixXcd sep = 2.0 * quantize(a, 1.0, 6).matrix - 0.5 * quantize(b, 1.0, 6).matrix;
    CHECK((ab.matrix - sep).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("lower symbols") {
    const double nu = 1.0, q = 0.9, p = 2.5;
    CHECK(lower_symbol(operators::momentum(nu), q, p).value.real() == doctest::Approx(p).epsilon(1e-12));
    CHECK(lower_symbol(operators::inverse_sin_squared(nu), q, p).value.real() ==
          doctest::Approx(4.0 / 3.0 / std::pow(std::sin(q), 2)).epsilon(1e-10));
    const double kin = p * p + 4.0 / 3.0 / std::pow(std::sin(q), 2);
    CHECK(lower_symbol(operators::kinetic(nu), q, p).value.real() == doctest::Approx(kin).epsilon(1e-10));
    // contraction with the eigenbasis matrix converges to the same value
    const auto direct = lower_symbol(quantize(symbols::momentum_squared(), nu), q, p);
    const auto via_matrix = lower_symbol_by_contraction(quantize(symbols::momentum_squared(), nu, 256), q, p);
    CHECK(std::abs(via_matrix.value.real() - direct.value.real()) <= via_matrix.error_bar);
    CHECK(via_matrix.value.real() == doctest::Approx(direct.value.real()).epsilon(1e-6));
    CHECK(lower_symbols::kinetic(nu, q, p) == doctest::Approx(kin));
}

TEST_CASE("lower symbol of the quantized position depends on q only") {
    const auto f = quantize_position(0.0);
    const double a = lower_symbol(f, 1.2, 0.0).value.real();
    CHECK(lower_symbol(f, 1.2, 6.0).value.real() == doctest::Approx(a).epsilon(1e-12));
}

TEST_CASE("resolution matrix is the identity") {
    const auto m = resolution_matrix(0.5, 8);
    CHECK((m - Eigen::MatrixXd::Identity(9, 9)).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("symbols by name") {
    CHECK_NOTHROW(symbols::by_name("hamiltonian", 0.0));
    CHECK_NOTHROW(symbols::by_name("position", 0.0));
    CHECK_THROWS_AS(symbols::by_name("spin", 0.0), ValidationError);
    CHECK_THROWS_AS(quantize(symbols::unit(), -1.0), ValidationError);
}
