#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "ptcs/dynamics.hpp"

using namespace ptcs;
using oracle::pi;

namespace {

GridSpec small_grid() {
    GridSpec g = default_phase_grid();
    g.q_count = 24;
    g.p_count = 20;
    return g;
}

}  // namespace

TEST_CASE("evolution phases") {
    const auto s = cs_coefficients(0.0, 1.0, 2.0, 32);
    const auto e = evolve(s, 0.37);
    for (int n = 0; n <= 32; ++n) {
        const auto expect = std::polar(1.0, -energy(n, 0.0) * 0.37) * s.coeffs[n];
        CHECK(std::abs(e.coeffs[n] - expect) < 1e-15);
    }
    CHECK(e.norm_squared() == doctest::Approx(s.norm_squared()).epsilon(1e-15));
    CHECK_THROWS_AS(evolve(s, 1.0, 0.5), ValidationError);
    CHECK_THROWS_AS(evolve(s, std::nan(""), 0.0), ValidationError);
}

TEST_CASE("revival and autocorrelation") {
    const auto s = cs_coefficients(0.0, pi / 5, 4.0, 256);
    CHECK(std::abs(autocorrelation(s, 0.0) - s.norm_squared()) < 1e-15);
    CHECK(std::abs(std::abs(autocorrelation(s, 2 * pi)) - s.norm_squared()) < 1e-12);
    // a large time is reduced exactly
    CHECK(std::abs(std::abs(autocorrelation(s, 2 * pi * 1e6)) - s.norm_squared()) < 1e-9);
    // nu = 1 spectrum (n+2)^2 is also integer, so 2 pi is a revival there as well
    const auto s1 = cs_coefficients(1.0, 1.0, 1.0, 128);
    CHECK(std::abs(std::abs(autocorrelation(s1, 2 * pi, 1.0)) - s1.norm_squared()) < 1e-12);
}

TEST_CASE("mean energy by hand at the electron-well label") {
    // p^2 + 1/sin^2 q at nu = 0
    const double hand = 16.0 + 1.0 / std::pow(std::sin(pi / 5), 2);
    CHECK(closed_form_mean_energy(0.0, pi / 5, 4.0) == doctest::Approx(hand).epsilon(1e-15));
    const auto me = mean_energy(0.0, pi / 5, 4.0);
    CHECK(me.relative_difference < 1e-6);
    CHECK_FALSE(me.truncation_dominated);
    // symmetric point gives the ground energy
    CHECK(closed_form_mean_energy(0.0, 0.5 * pi, 0.0) == doctest::Approx(1.0));
    CHECK(mean_energy(0.0, 0.5 * pi, 0.0).coefficient_sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mean energy with a different evolving parameter") {
    // <P^2> + nu'(nu'+1) <1/sin^2> with both moments from quadrature
    const double nu = 1.0, q = 1.2, p = -1.5, nue = 2.0;
    const CoherentState cs({q, p, nu});
    const double inv = oracle::simpson(
        [&](double x) { return x == 0.0 || x == pi ? 0.0 : std::pow(cs.modulus(x) / std::sin(x), 2); }, 0.0, pi, 20000);
    const double kin = p * p + (nu + 1) * (nu + 1) / ((2 * nu + 1) * std::pow(std::sin(q), 2));
    CHECK(closed_form_mean_energy(nu, q, p, nue) == doctest::Approx(kin + nue * (nue + 1) * inv).epsilon(1e-9));
    CHECK(mean_energy(nu, q, p, nue).relative_difference < 1e-6);
}

TEST_CASE("energy conservation") {
    const auto s = cs_coefficients(1.0, 0.7, 3.0, 128);
    const double e0 = spectral_mean_energy(s);
    for (double t : {0.1, 3.3, 41.0}) CHECK(spectral_mean_energy(evolve(s, t, 1.0)) == doctest::Approx(e0).epsilon(1e-13));
}

TEST_CASE("Husimi of an eigenstate by direct quadrature") {
    SpectralState s;
    s.nu = 0.0;
    s.coeffs.assign(4, 0.0);
    s.coeffs[2] = 1.0;
    const auto g = small_grid();
    const auto rho = husimi(s, 0.0, g);
    for (std::size_t i : {3u, 11u, 20u})
        for (std::size_t k : {0u, 7u, 13u}) {
            const CoherentState cs({rho.q[i], rho.p[k], 0.0});
            const auto ov = oracle::simpson([&](double x) { return std::conj(cs.value(x)) * oracle::box(2, x); }, 0.0,
                                            pi, 20000);
            CHECK(rho.at(i, k) == doctest::Approx(std::norm(ov) / (2 * pi)).epsilon(1e-8).scale(1e-12));
        }
}

TEST_CASE("Husimi peak, positivity and mass") {
    const auto s = cs_coefficients(0.0, 1.1, -3.0, 64);
    const auto rho = husimi(s, 0.0, default_phase_grid());
    const auto [i, k] = rho.argmax();
    CHECK(std::abs(rho.q[i] - 1.1) <= rho.grid.dq());
    CHECK(std::abs(rho.p[k] + 3.0) <= rho.grid.dp());
    for (double v : rho.values) CHECK(v >= 0.0);
    CHECK(rho.mass() == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("diagonal time average against sampled averages") {
    const auto s = cs_coefficients(CoherentState({0.9, 2.0, 0.0}), 24, 0.0, false);
    const auto g = small_grid();
    const auto diag = time_averaged_husimi(s, 0.0, g);
    auto sup = [&](int samples) {
        const auto sampled = sampled_time_average(s, 0.0, g, samples);
        double d = 0.0;
        for (std::size_t j = 0; j < diag.values.size(); ++j) d = std::max(d, std::abs(diag.values[j] - sampled.values[j]));
        return d;
    };
    // gaps E_m - E_n stay below 25^2, so 1024 samples see no aliased pair
    CHECK(sup(1024) < 1e-13);
    CHECK(sup(512) < 1e-4);
    CHECK_THROWS_AS(sampled_time_average(s, 0.0, g, 0), ValidationError);
}

TEST_CASE("grid outside the supported envelope is flagged") {
    std::vector<std::string> seen;
    set_warning_handler([&](const std::string& m) { seen.push_back(m); });
    GridSpec g = small_grid();
    g.p_max = 30.0;
    (void)husimi(cs_coefficients(0.0, 1.0, 0.0, 8), 0.0, g);
    CHECK_FALSE(seen.empty());
    set_warning_handler(nullptr);
}

TEST_CASE("classical trajectory lies on the energy shell") {
    const double e = 18.0;
    const auto pts = classical_trajectory(e, 0.0, 100);
    REQUIRE(pts.size() >= 198);
    for (const auto& pt : pts) CHECK(classical_energy(0.0, pt.q, pt.p) == doctest::Approx(e).epsilon(1e-10));
    // starts at the left turning point, upper branch first
    CHECK(pts.front().p == doctest::Approx(0.0));
    CHECK(pts[50].p > 0.0);
    CHECK(pts[150].p < 0.0);
    CHECK(pts.back().q == doctest::Approx(pts.front().q));
    CHECK_THROWS_AS(classical_trajectory(1.0, 0.0, 10), ValidationError);
    CHECK_THROWS_AS(classical_trajectory(0.5, 1.0, 10), ValidationError);
}

TEST_CASE("band ratio of a synthetic distribution") {
    PhaseSpaceDistribution rho;
    rho.grid = small_grid();
    for (int i = 0; i < rho.grid.q_count; ++i) rho.q.push_back(rho.grid.q_at(i));
    for (int k = 0; k < rho.grid.p_count; ++k) rho.p.push_back(rho.grid.p_at(k));
    const double e = 20.0;
    for (double q : rho.q)
        for (double p : rho.p) rho.values.push_back(std::abs(classical_energy(0.0, q, p) - e) < 0.15 * e ? 1.0 : 0.1);
    const auto b = trajectory_band_ratio(rho, e, 0.0);
    CHECK(b.inside_cells > 0);
    CHECK(b.ratio == doctest::Approx(10.0));
}
