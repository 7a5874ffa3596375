#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ptcs/coherent_states.hpp"
#include "ptcs/physical_model.hpp"

using namespace ptcs;
using oracle::pi;

namespace {

// 1/N^2 = int e^{2 a x} sin^{2nu+2} x dx by Simpson.
double inverse_norm_sq(double nu, double q) {
    const double a = -(nu + 1) / std::tan(q);
    return oracle::simpson([&](double x) { return std::exp(2 * a * x) * std::pow(std::sin(x), 2 * nu + 2); }, 0.0, pi,
                           40000);
}

}  // namespace

TEST_CASE("normalization against direct integration") {
    for (double nu : {0.0, 1.0, 2.5})
        for (double q : {0.4, 1.0, 1.5707963267948966, 2.3}) {
            const double n = cs_normalization(nu, q);
            CHECK(1.0 / (n * n) == doctest::Approx(inverse_norm_sq(nu, q)).epsilon(1e-10));
            CHECK(std::exp(-0.5 * cs_log_inverse_norm_sq_closed_form(nu, q)) == doctest::Approx(n).epsilon(1e-12));
        }
    CHECK(cs_normalization(0.0, 0.5 * pi) == doctest::Approx(std::sqrt(2.0 / pi)).epsilon(1e-14));
}

TEST_CASE("normalization under reflection q -> pi - q") {
    // a(pi - q) = -a(q), so 1/N^2(pi - q) = e^{-2 a pi} / N^2(q)
    for (double nu : {0.0, 1.0})
        for (double q : {0.05, 0.3, 1.1}) {
            const double a = superpotential(nu, q);
            const double lhs = cs_normalization_integral(nu, pi - q).log_inverse_norm_sq;
            const double rhs = cs_normalization_integral(nu, q).log_inverse_norm_sq - 2 * a * pi;
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
        }
}

TEST_CASE("normalization close to the walls") {
    // nu = 0: 1/N^2 = e^{a pi} sinh(pi a) / (2 a (1 + a^2)); for a < 0 in logs
    // log((1 - e^{-2 pi |a|}) / 2) - log(2 |a| (1 + a^2)).
    for (double q : {1e-8, 1e-6, 1e-3, 0.1}) {
        const double a = std::abs(superpotential(0.0, q));
        const double expect = std::log(-std::expm1(-2 * pi * a) / 2) - std::log(2 * a * (1 + a * a));
        const double lg = cs_normalization_integral(0.0, q).log_inverse_norm_sq;
        CHECK(lg == doctest::Approx(expect).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("printed normalization display equals N") {
    for (double q : {0.5, 1.2, 2.0}) CHECK(cs_normalization_printed_form(1.0, q) == doctest::Approx(cs_normalization(1.0, q)).epsilon(1e-12));
}

TEST_CASE("wavefunction shape") {
    const CoherentState cs({1.0, 3.0, 0.5});
    CHECK(std::abs(cs.value(0.0)) == 0.0);
    CHECK(std::abs(cs.value(pi)) < 1e-300);
    // modulus ignores p
    const CoherentState other({1.0, -7.0, 0.5});
    for (double x : {0.2, 1.0, 2.0}) {
        CHECK(cs.modulus(x) == doctest::Approx(other.modulus(x)).epsilon(1e-15));
        CHECK(std::abs(cs.value(x)) == doctest::Approx(cs.modulus(x)).epsilon(1e-14));
        const auto direct = cs_normalization(0.5, 1.0) * cs_profile(0.5, 1.0, 3.0, x);
        CHECK(std::abs(cs.value(x) - direct) < 1e-13 * std::abs(direct) + 1e-300);
    }
}

TEST_CASE("modulus peaks at q") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.05 * pi, 0.95 * pi);
    const int points = 4096;
    const double step = pi / (points - 1);
    for (int k = 0; k < 10; ++k) {
        const double q = u(rng);
        const CoherentState cs({q, 0.0, 1.0});
        int best = 0;
        for (int j = 1; j < points; ++j)
            if (cs.modulus(j * step) > cs.modulus(best * step)) best = j;
        CHECK(std::abs(best * step - q) <= step);
    }
}

TEST_CASE("eigenvector of the lowering operator") {
    const CoherentState cs({0.8, 2.0, 1.0});
    const auto z = cs.label().eigenvalue();
    CHECK(z.real() == doctest::Approx(superpotential(1.0, 0.8)));
    CHECK(z.imag() == 2.0);
    const auto f = cs.as_function();
    // (W + d/dx) eta = z eta pointwise
    for (double x : {0.3, 0.8, 2.0}) {
        const auto j = f(x);
        const auto lhs = superpotential(1.0, x) * j.value + j.d1;
        CHECK(std::abs(lhs - z * j.value) < 1e-12 * std::abs(z * j.value));
    }
    CHECK(cs_eigenvector_defect(cs, 10) < 1e-10);
}

TEST_CASE("moments") {
    const auto m = cs_moments(1.0, 1.1, -4.5);
    CHECK(m.norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.mean_p == doctest::Approx(-4.5).epsilon(1e-12));
    CHECK(m.mean_w == doctest::Approx(superpotential(1.0, 1.1)).epsilon(1e-12));
    CHECK(std::abs(m.saturation_defect) < 1e-10 * m.mean_dw);
}

TEST_CASE("eigenbasis coefficients") {
    const auto c = cs_coefficients(0.0, 0.5 * pi, 0.0, 64);
    CHECK(c.truncation_mass < 1e-10);
    CHECK(c.norm_squared() == doctest::Approx(1.0).epsilon(1e-10));
    // at q = pi/2, p = 0 the state is phi_0 for nu = 0
    CHECK(std::abs(c.coeffs[0]) == doctest::Approx(1.0).epsilon(1e-12));
    // basis of another nu
    const auto c2 = cs_coefficients(CoherentState({1.0, 1.0, 0.0}), 200, 1.0);
    CHECK(c2.nu == 1.0);
    CHECK(c2.norm_squared() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("truncation warning names the label") {
    std::vector<std::string> seen;
    set_warning_handler([&](const std::string& m) { seen.push_back(m); });
    (void)cs_coefficients(0.0, 0.05, 10.0, 8);
    CHECK(seen.size() == 1);
    CHECK(seen.at(0).find("p = 10") != std::string::npos);
    seen.clear();
    (void)cs_coefficients(CoherentState({0.05, 10.0, 0.0}), 8, 0.0, false);
    CHECK(seen.empty());
    set_warning_handler(nullptr);
}

TEST_CASE("invalid labels") {
    CHECK_THROWS_AS(CoherentState({0.0, 1.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(CoherentState({pi, 1.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(CoherentState({1.0, std::nan(""), 0.0}), ValidationError);
    CHECK_THROWS_AS(CoherentState({1.0, 1.0, -0.5}), ValidationError);
    CHECK_THROWS_AS(cs_coefficients(0.0, 1.0, 0.0, -1), ValidationError);
}
