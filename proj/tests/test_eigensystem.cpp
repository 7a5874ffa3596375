#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ptcs/eigensystem.hpp"

using namespace ptcs;
using oracle::pi;

TEST_CASE("spectrum") {
    CHECK(energy(0, 0.0) == 1.0);
    CHECK(energy(3, 0.0) == 16.0);
    CHECK(energy(2, 0.5) == doctest::Approx(12.25));
    for (int n = 0; n < 50; ++n) CHECK(energy(n + 1, 1.3) > energy(n, 1.3));
}

TEST_CASE("nu = 0 reduces to the infinite well") {
    for (int n = 0; n <= 20; ++n) {
        CHECK(norm_constant(n, 0.0) == doctest::Approx(std::sqrt(2.0 / pi)).epsilon(1e-14));
        for (double x : {0.0, 0.01, 0.7, 1.9, pi - 1e-3, pi})
            CHECK(std::abs(eigenfunction(n, 0.0, x) - oracle::box(n, x)) < 1e-13);
    }
}

TEST_CASE("orthonormality by Simpson quadrature") {
    for (double nu : {0.5, 2.7}) {
        for (int m : {0, 3, 7})
            for (int n : {0, 3, 8}) {
                const double ip = oracle::simpson(
                    [&](double x) { return eigenfunction(m, nu, x) * eigenfunction(n, nu, x); }, 0.0, pi, 20000);
                CHECK(ip == doctest::Approx(m == n ? 1.0 : 0.0).epsilon(1e-9));
            }
    }
}

TEST_CASE("Schrodinger equation by finite differences") {
    for (double nu : {0.0, 1.0, 2.7}) {
        for (int n : {0, 2, 6}) {
            auto f = [&](double x) { return eigenfunction(n, nu, x); };
            for (double x : {0.4, 1.3, 2.5}) {
                const double h_phi = -oracle::second_difference(f, x, 1e-4) + nu * (nu + 1) / std::pow(std::sin(x), 2) * f(x);
                CHECK(h_phi == doctest::Approx(energy(n, nu) * f(x)).epsilon(1e-5).scale(energy(n, nu)));
            }
        }
    }
}

TEST_CASE("analytic derivatives match finite differences") {
    for (double nu : {0.0, 0.5, 2.0})
        for (int n : {0, 1, 5})
            for (double x : {0.3, 1.1, 2.8}) {
                auto f = [&](double t) { return eigenfunction(n, nu, t); };
                const auto j = eigenfunction_jet(n, nu, x);
                CHECK(j.value == doctest::Approx(f(x)).epsilon(1e-14));
                CHECK(j.d1 == doctest::Approx(oracle::first_difference(f, x, 1e-3)).epsilon(1e-8).scale(1.0));
                CHECK(j.d2 == doctest::Approx(oracle::second_difference(f, x, 1e-4)).epsilon(1e-5).scale(10.0));
            }
}

TEST_CASE("Dirichlet walls") {
    for (double nu : {0.0, 0.5, 2.7})
        for (int n = 0; n <= 20; ++n) {
            CHECK(std::abs(eigenfunction(n, nu, 0.0)) < 1e-12);
            CHECK(std::abs(eigenfunction(n, nu, pi)) < 1e-12);
        }
}

TEST_CASE("large n stays finite") {
    const double z = norm_constant(2000, 1.5);
    CHECK(std::isfinite(z));
    double s = 0.0;
    const auto r = gauss_legendre(5000, 0.0, pi);
    for (std::size_t j = 0; j < r.size(); ++j) s += r.weights[j] * std::pow(eigenfunction(2000, 1.5, r.nodes[j]), 2);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("momentum matrix element in the infinite well") {
    // <phi_0| -i d/dx |phi_1> = -i (2/pi) int sin x * 2 cos 2x dx = 8i / (3 pi)
    const auto el = momentum_matrix_element(0, 1, 0.0);
    CHECK(std::abs(el.real()) < 1e-14);
    CHECK(el.imag() == doctest::Approx(8.0 / (3.0 * pi)).epsilon(1e-13));
    const auto m = momentum_matrix(0.7, 10);
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-13);
    // same parity gives zero
    CHECK(std::abs(m(2, 4)) < 1e-13);
}

TEST_CASE("library defect measures") {
    CHECK(orthonormality_defect(1.0, 20) < 1e-12);
    CHECK(schrodinger_residual(10, 0.5, 1e-6 * pi) < 1e-10);
}

TEST_CASE("spectral state utilities") {
    SpectralState s;
    s.nu = 0.0;
    s.coeffs = {{0.6, 0.0}, {0.0, 0.8}};
    CHECK(s.norm_squared() == doctest::Approx(1.0));
    CHECK(std::abs(overlap(s, s) - 1.0) < 1e-15);
    s.coeffs = {{3.0, 0.0}, {0.0, 4.0}};
    CHECK(s.normalized().norm_squared() == doctest::Approx(1.0));
}
