#include <doctest.h>

#include <algorithm>

#include "ptcs/checks.hpp"

using namespace ptcs;

TEST_CASE("tolerance arguments") {
    CheckOptions o;
    apply_tolerance_argument(o, "1e-6");
    REQUIRE(o.tol);
    CHECK(*o.tol == 1e-6);
    apply_tolerance_argument(o, "identity=2e-7");
    CHECK(o.overrides.at("identity") == 2e-7);
    CHECK_THROWS_AS(apply_tolerance_argument(o, "abc"), ValidationError);
    CHECK_THROWS_AS(apply_tolerance_argument(o, "=1e-3"), ValidationError);
    CHECK_THROWS_AS(apply_tolerance_argument(o, "key=-1"), ValidationError);
    CHECK_THROWS_AS(apply_tolerance_argument(o, "runtime=1"), ValidationError);
    CHECK_THROWS_AS(apply_tolerance_argument(o, "1e-3x"), ValidationError);
}

TEST_CASE("unknown suite") {
    CHECK_THROWS_AS(run_suite("everything"), ValidationError);
    CHECK(std::find(suite_names().begin(), suite_names().end(), "table2") != suite_names().end());
}

TEST_CASE("a suite passes at default bounds and fails at impossible ones") {
    const auto r = run_suite("normalization");
    CHECK(r.pass());
    CHECK_FALSE(r.notes.empty());
    CheckOptions strict;
    strict.tol = 1e-300;
    const auto s = run_suite("normalization", strict);
    CHECK_FALSE(s.pass());
    REQUIRE(s.worst() != nullptr);
    CHECK_FALSE(s.worst()->pass);
    // runtime budget is not a numeric tolerance
    CHECK(std::find_if(s.cases.begin(), s.cases.end(), [](const CheckCase& c) { return c.key == "runtime"; })->pass);
}

TEST_CASE("per-key overrides touch only their cases") {
    CheckOptions o;
    o.overrides["normalization"] = 1e-300;
    const auto r = run_suite("normalization", o);
    for (const auto& c : r.cases) {
        if (c.key == "normalization") CHECK(c.bound == 1e-300);
    }
}

TEST_CASE("JSON reports are deterministic without timing") {
    const auto a = report_to_json(run_suite("eigen"));
    const auto b = report_to_json(run_suite("eigen"));
    CHECK(a == b);
    CHECK(a.find("wall_time") == std::string::npos);
    CHECK(report_to_json(run_suite("eigen"), true).find("wall_time") != std::string::npos);
}

TEST_CASE("text report has one line per case") {
    const auto r = run_suite("eigen");
    const auto text = format_report(r);
    CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == r.cases.size() + 1 + r.notes.size());
    CHECK(text.rfind("suite eigen: PASS", 0) == 0);
}
