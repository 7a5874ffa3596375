#include <doctest.h>

#include <cmath>
#include <limits>

#include "ptcs/physical_model.hpp"

using namespace ptcs;

TEST_CASE("dimensionless frame is the identity") {
    const auto c = dimensionless_config(0.5);
    CHECK(c.E0() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.position_to_dimensionless(1.3) == doctest::Approx(1.3));
    CHECK(c.momentum_to_dimensionless(-4.0) == doctest::Approx(-4.0));
    CHECK(c.energy_to_dimensionless(9.0) == doctest::Approx(9.0));
    CHECK(c.time_to_dimensionless(2.0) == doctest::Approx(2.0));
    CHECK(c.nu() == 0.5);
}

TEST_CASE("electron in a 20 Angstrom well") {
    const double L = 20e-10, m = 9.1093837015e-31, hbar = 1.054571817e-34;
    const auto c = make_config(L, m, hbar, 0.0, UnitSystem::SI);
    const double e0 = hbar * hbar * std::numbers::pi * std::numbers::pi / (2 * m * L * L);
    CHECK(c.E0() == doctest::Approx(e0).epsilon(1e-14));
    CHECK(c.E0() / 1.602176634e-19 == doctest::Approx(0.0940).epsilon(1e-3));
    CHECK(c.position_from_dimensionless(std::numbers::pi) == doctest::Approx(L));
    CHECK(c.momentum_from_dimensionless(4.0) == doctest::Approx(4 * std::numbers::pi * hbar / L));
    CHECK(c.momentum_unit() == doctest::Approx(std::numbers::pi * hbar / L));
    // revival time 2 pi hbar / E0
    CHECK(c.time_from_dimensionless(2 * std::numbers::pi) == doctest::Approx(2 * std::numbers::pi * hbar / e0));
    for (double v : {0.1, 1.0, 3.0}) {
        CHECK(c.position_to_dimensionless(c.position_from_dimensionless(v)) == doctest::Approx(v).epsilon(1e-15));
        CHECK(c.energy_to_dimensionless(c.energy_from_dimensionless(v)) == doctest::Approx(v).epsilon(1e-15));
        CHECK(c.time_to_dimensionless(c.time_from_dimensionless(v)) == doctest::Approx(v).epsilon(1e-15));
    }
    // wavefunction normalized on [0, pi] rescales to [0, L]
    CHECK(c.wavefunction_scale() == doctest::Approx(std::sqrt(std::numbers::pi / L)));
}

TEST_CASE("invalid parameters are rejected") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(make_config(0.0, 1.0, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(make_config(1.0, -1.0, 1.0, 0.0), ValidationError);
    CHECK_THROWS_AS(make_config(1.0, 1.0, nan, 0.0), ValidationError);
    CHECK_THROWS_AS(make_config(1.0, 1.0, 1.0, -0.1), ValidationError);
    CHECK_THROWS_AS(dimensionless_config(0.0).with_nu(-1.0), ValidationError);
    CHECK_THROWS_AS(unit_system_from_string("cgs"), ValidationError);
}

TEST_CASE("config documents") {
    const auto c = config_from_json(R"({"L": 2e-9, "particle": "electron", "nu": 1, "units": "SI"})");
    CHECK(c.units() == UnitSystem::SI);
    CHECK(c.nu() == 1.0);
    CHECK(c.mass() == doctest::Approx(9.1093837015e-31));
    CHECK(c.L() == doctest::Approx(2e-9));
    CHECK_THROWS_AS(config_from_json("{not json"), ValidationError);
    CHECK_THROWS_AS(config_from_json(R"({"L": "wide"})"), ValidationError);
    CHECK_THROWS_AS(config_from_json(R"({"particle": "muon"})"), ValidationError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/config.json"), ValidationError);
}

TEST_CASE("grid specification") {
    GridSpec g;
    g.q_count = 5;
    g.p_count = 3;
    g.p_max = 2.0;
    g.q_margin = 0.1;
    g.validate();
    CHECK(g.q_at(0) == doctest::Approx(0.1));
    CHECK(g.q_at(4) == doctest::Approx(std::numbers::pi - 0.1));
    CHECK(g.p_at(0) == doctest::Approx(-2.0));
    CHECK(g.p_at(2) == doctest::Approx(2.0));
    CHECK(g.dp() == doctest::Approx(2.0));
    g.q_count = 1;
    CHECK_THROWS_AS(g.validate(), ValidationError);
    g.q_count = 5;
    g.p_max = -1.0;
    CHECK_THROWS_AS(g.validate(), ValidationError);
}
