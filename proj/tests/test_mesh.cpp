#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "habitat/mesh.hpp"
#include "habitat/scenario.hpp"

using namespace habitat;

namespace {

Scenario unit_scenario(DomainMotion motion, double horizon) {
    Scenario s;
    s.d = 1.0;
    s.r = 1.0;
    s.T = 1.0;
    s.horizon = horizon;
    s.alpha = PeriodicCoefficient::constant(1.0, 1.0);
    s.beta = PeriodicCoefficient::constant(0.5, 1.0);
    s.motion = std::move(motion);
    return s;
}

} // namespace

TEST_CASE("unit square, single cell") {
    const auto s = unit_scenario(DomainMotion::fixed(1.0), 1.0);
    const auto m = build_mesh(s, 1, 1);
    CHECK(m.vertices.size() == 4);
    CHECK(m.triangles.size() == 2);
    CHECK(m.facets.size() == 1);
    int lateral = 0, bottom = 0, top = 0;
    for (const auto& b : m.boundary) {
        if (b.tag == BoundaryTag::Lateral) ++lateral;
        if (b.tag == BoundaryTag::Bottom) ++bottom;
        if (b.tag == BoundaryTag::Top) ++top;
    }
    CHECK(lateral == 2);
    CHECK(bottom == 1);
    CHECK(top == 1);
    CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("shifted slab mesh: counts, normals, areas") {
    // A = 2t (linear shift), L = 3, nt=4, nx=6.
    const auto s = unit_scenario(DomainMotion::power_shift(2.0, 1.0, 3.0), 1.0);
    const auto m = build_mesh(s, 4, 6);
    CHECK(m.vertices.size() == 35);
    CHECK(m.triangles.size() == 48);
    for (const auto& f : m.facets) {
        CHECK(f.nx * f.nx + f.nt * f.nt == doctest::Approx(1.0).epsilon(1e-12));
        // Normal points away from the opposite vertex of tri_i.
        const auto& tri = m.triangles[f.tri_i];
        const int opp = tri.v[0] + tri.v[1] + tri.v[2] - f.v0 - f.v1;
        const auto& O = m.vertices[opp];
        const auto& P = m.vertices[f.v0];
        CHECK(f.nx * (O.x - P.x) + f.nt * (O.t - P.t) < 0.0);
    }
    // For constant L the space-time volume is L * horizon exactly.
    CHECK(m.total_area() == doctest::Approx(3.0 * 1.0).epsilon(1e-12));
    CHECK(m.quasi_uniformity <= 4.0);
}

TEST_CASE("area matches the piecewise-linear boundary for growing domains") {
    const auto s = unit_scenario(DomainMotion::linear_growth(1.0, 0.5), 2.0);
    const auto m = build_mesh(s, 8, 5);
    // L interpolated linearly between slab levels integrates exactly.
    double expect = 0.0;
    for (int k = 0; k < 8; ++k) {
        const double t0 = 2.0 * k / 8, t1 = 2.0 * (k + 1) / 8;
        expect += 0.5 * (s.motion.L(t0) + s.motion.L(t1)) * (t1 - t0);
    }
    CHECK(m.total_area() == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("refinement halves the mesh size") {
    const auto s = unit_scenario(DomainMotion::fixed(2.0), 1.0);
    const auto coarse = build_mesh(s, 8, 8);
    const auto fine = build_mesh(s, 16, 16);
    CHECK(fine.h == doctest::Approx(0.5 * coarse.h).epsilon(0.1));
}

TEST_CASE("degenerate requests are rejected") {
    const auto s = unit_scenario(DomainMotion::fixed(1.0), 1.0);
    CHECK_THROWS(build_mesh(s, 0, 4));
    CHECK_THROWS(build_mesh(s, 4, 0));
}

TEST_CASE("jump calculus identities") {
    // Worked example: v_i=2, v_j=1, n_i=(0,1).
    const auto f = facet_calculus(2.0, 1.0, 0.0, 1.0);
    CHECK(f.upwind == 2.0);
    CHECK(f.jump_t == 1.0);
    const auto f2 = facet_calculus(4.0, 1.0, 0.0, 1.0); // traces of v^2
    CHECK(f.upwind * f.jump_t - 0.5 * f2.jump_t ==
          doctest::Approx(0.5 * std::abs(1.0) * f.jump_t * f.jump_t));

    CHECK(facet_calculus(3.0, 3.0, 0.6, 0.8).jump_x == doctest::Approx(0.0));
    CHECK(facet_calculus(3.0, 3.0, 0.6, 0.8).average == doctest::Approx(3.0));

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 10000; ++trial) {
        const double ui = u(rng), uj = u(rng), vi = u(rng), vj = u(rng);
        double ang = u(rng);
        const double nx = std::cos(ang), nt = std::sin(ang);
        const auto fu = facet_calculus(ui, uj, nx, nt);
        const auto fv = facet_calculus(vi, vj, nx, nt);
        const auto fuv = facet_calculus(ui * vi, uj * vj, nx, nt);
        // Product rules in both directions.
        CHECK(fuv.jump_x ==
              doctest::Approx(fu.average * fv.jump_x + fv.average * fu.jump_x).epsilon(1e-13).scale(1.0));
        CHECK(fuv.jump_t ==
              doctest::Approx(fu.upwind * fv.jump_t + fv.downwind * fu.jump_t).epsilon(1e-13).scale(1.0));
        // Upwind square identity.
        const auto fv2 = facet_calculus(vi * vi, vj * vj, nx, nt);
        const double jump_norm2 = fv.jump_x * fv.jump_x + fv.jump_t * fv.jump_t;
        CHECK(fv.upwind * fv.jump_t - 0.5 * fv2.jump_t ==
              doctest::Approx(0.5 * std::abs(nt) * jump_norm2).epsilon(1e-13).scale(1.0));
    }
}

TEST_CASE("dump is stable and parseable-ish") {
    const auto s = unit_scenario(DomainMotion::fixed(1.0), 1.0);
    const auto m = build_mesh(s, 1, 1);
    const auto text = m.dump();
    CHECK(text.find("vertices 4") != std::string::npos);
    CHECK(text.find("triangles 2") != std::string::npos);
    CHECK(text.find("facets 1") != std::string::npos);
}
