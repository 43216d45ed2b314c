#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "habitat/scenario.hpp"
#include "habitat/scenario_library.hpp"

using namespace habitat;

namespace {

const char* kValidConfig = R"({
  "d": 1.0, "r": 15.0, "T": 6.283185307179586, "horizon": 2.0,
  "alpha": {"mean": 4.0, "harmonics": [{"amp": 1.0, "k": 1}]},
  "beta": {"mean": 1.5, "harmonics": [{"amp": -0.5, "k": 1}]},
  "motion": {"kind": "fixed", "L0": 1.0},
  "initial": {"kind": "sine"}
})";

} // namespace

TEST_CASE("valid config parses with expected fields") {
    const Scenario s = parse_scenario(kValidConfig);
    CHECK(s.d == 1.0);
    CHECK(s.r == 15.0);
    CHECK(s.alpha(0.0) == doctest::Approx(4.0));
    CHECK(s.alpha(std::numbers::pi / 2.0) == doctest::Approx(5.0));
    CHECK(s.beta(0.0) == doctest::Approx(1.5));
    CHECK(s.motion.is_fixed());
    CHECK(s.x_opt(0.0) == doctest::Approx(1.5));
    // Growth term at the optimum equals r.
    CHECK(s.growth(0.0, s.x_opt(0.0)) == doctest::Approx(15.0));
    CHECK(s.resolved_c_shift() == doctest::Approx(16.0));
}

TEST_CASE("periodic means match hand-computed values") {
    // alpha = 4 + sin t, beta = 1.5 - 0.5 sin t over one 2*pi period:
    // <alpha beta> = 5.75, <alpha beta^2> = 8.75.
    const Scenario s = parse_scenario(kValidConfig);
    const double T = s.T;
    CHECK(periodic_mean([&](double t) { return s.alpha(t); }, T) == doctest::Approx(4.0));
    CHECK(periodic_mean([&](double t) { return s.alpha(t) * s.beta(t); }, T) ==
          doctest::Approx(5.75).epsilon(1e-9));
    const double ab2 =
        periodic_mean([&](double t) { return s.alpha(t) * s.beta(t) * s.beta(t); }, T);
    CHECK(ab2 == doctest::Approx(8.75).epsilon(1e-9));
}

TEST_CASE("validation failures carry the field path") {
    CHECK_THROWS_AS(parse_scenario("{"), ScenarioError);
    CHECK_THROWS_WITH_AS(
        parse_scenario(R"({"d":1,"r":1,"T":1,"horizon":1,
            "alpha":{"mean":0.0},"beta":{"mean":0.5},
            "motion":{"kind":"fixed","L0":1}})"),
        "alpha: alpha must be positive", ScenarioError);
    CHECK_THROWS_WITH_AS(
        parse_scenario(R"({"d":1,"r":1,"T":1,"horizon":1,
            "alpha":{"mean":1.0,"harmonics":[{"amp":0.1,"k":0}]},"beta":{"mean":0.5},
            "motion":{"kind":"fixed","L0":1}})"),
        "alpha.harmonics[0].k: multiple must be >= 1", ScenarioError);
    try {
        parse_scenario(R"({"d":1,"r":1,"T":1,"horizon":1,
            "alpha":{"mean":1.0},"beta":{"mean":0.5},
            "motion":{"kind":"fixed","L0":-2}})");
        CHECK(false);
    } catch (const ScenarioError& e) {
        CHECK(e.field() == "motion.L0");
        CHECK(std::string(e.what()).find("nonpositive length") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_scenario(R"({"d":1,"r":1,"T":1,"horizon":1,
            "alpha":{"mean":1.0},"beta":{"mean":0.5},
            "motion":{"kind":"warp","L0":1}})"),
                    ScenarioError);
}

TEST_CASE("initial datum evaluation") {
    InitialDatum sine;
    CHECK(sine(1.0, 2.0) == doctest::Approx(1.0));
    CHECK(sine(0.0, 2.0) == doctest::Approx(0.0));
    InitialDatum tab;
    tab.kind = InitialDatum::Kind::Tabulated;
    tab.y = {0.0, 1.0, 2.0};
    tab.v = {0.0, 3.0, 0.0};
    CHECK(tab(0.5, 2.0) == doctest::Approx(1.5));
    CHECK(tab(2.5, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("motion families: values and derivatives") {
    const auto fixed = DomainMotion::fixed(2.0);
    CHECK(fixed.A(1.7) == 0.0);
    CHECK(fixed.L(1.7) == 2.0);
    CHECK(fixed.Lddot(1.7) == 0.0);

    // Power shift A = c((1+t)^a - 1): A(0) = 0, derivatives of c(1+t)^a.
    const auto shift = DomainMotion::power_shift(2.0, 1.35, 3.0);
    CHECK(shift.A(0.0) == doctest::Approx(0.0));
    CHECK(shift.A(1.0) == doctest::Approx(2.0 * (std::pow(2.0, 1.35) - 1.0)));
    const double eps = 1e-6, t0 = 0.8;
    CHECK(shift.Adot(t0) ==
          doctest::Approx((shift.A(t0 + eps) - shift.A(t0 - eps)) / (2 * eps)).epsilon(1e-6));
    CHECK(shift.Addot(t0) ==
          doctest::Approx((shift.Adot(t0 + eps) - shift.Adot(t0 - eps)) / (2 * eps)).epsilon(1e-6));

    const auto growth = DomainMotion::linear_growth(1.0, 0.3);
    CHECK(growth.L(10.0) == doctest::Approx(4.0));
    CHECK(growth.Ldot(5.0) == doctest::Approx(0.3));
    CHECK(growth.A(5.0) == 0.0);

    // Custom motion interpolates its nodes.
    std::vector<double> t{0.0, 0.5, 1.0, 1.5, 2.0};
    std::vector<double> A{0.0, 0.2, 0.3, 0.2, 0.0};
    std::vector<double> L{1.0, 1.2, 1.5, 1.2, 1.0};
    const auto custom = DomainMotion::custom(t, A, L);
    for (std::size_t i = 0; i < t.size(); ++i) {
        CHECK(custom.A(t[i]) == doctest::Approx(A[i]));
        CHECK(custom.L(t[i]) == doctest::Approx(L[i]));
    }
}

TEST_CASE("manifest serialization round-trips") {
    const Scenario s = parse_scenario(kValidConfig);
    const Scenario again = parse_scenario(scenario_to_json(s));
    CHECK(again.d == s.d);
    CHECK(again.r == s.r);
    CHECK(again.alpha(1.3) == doctest::Approx(s.alpha(1.3)));
    CHECK(again.beta(0.4) == doctest::Approx(s.beta(0.4)));
    CHECK(again.motion.L0() == doctest::Approx(s.motion.L0()));
}

TEST_CASE("library scenarios are valid") {
    for (const auto& entry : scenario_library()) {
        if (entry.name == "benchmark-no-selection") continue; // alpha = 0 on purpose
        CAPTURE(entry.name);
        CHECK_NOTHROW(entry.scenario.validate());
    }
    CHECK_NOTHROW(scenario_by_name("seasonal-optimum"));
    CHECK_THROWS_AS(scenario_by_name("nope"), std::invalid_argument);
}
