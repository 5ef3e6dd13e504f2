#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chernlab/connection.hpp"
#include "chernlab/errors.hpp"
#include "chernlab/zoo.hpp"
#include "oracles.hpp"

using namespace chernlab;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_SUITE("surface-zoo") {

TEST_CASE("builtin kinds and their ground truth") {
    CHECK(builtin_kinds() == std::vector<std::string>{"sphere", "torus_revolution", "flat_torus", "poincare_octagon"});
    const Surface sphere = make_surface("sphere");
    CHECK(sphere.expected_chern == 2);
    CHECK(sphere.analytic_K({1.0, 2.0}) == 1.0);
    CHECK(sphere.domain().rect().periodic_v);
    CHECK_FALSE(sphere.domain().rect().periodic_u);

    const Surface torus = make_surface("torus_revolution", {{"R", "2"}, {"r", "1"}});
    CHECK(torus.expected_chern == 0);
    CHECK(torus.analytic_K({0.4, 0.0}) == doctest::Approx(oracle::torus_K(2, 1, 0.4)));
    CHECK(torus.domain().fully_periodic());

    CHECK(make_surface("flat_torus").expected_chern == 0);
    const Surface oct = make_surface("poincare_octagon");
    CHECK(oct.expected_chern == -2);
    CHECK(oct.domain().is_polygon());
    CHECK(oct.domain().poly().edges == PolygonEdges::poincare_geodesic);
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(make_surface("sphere", {{"R", "0"}}), InvalidArgument);
    CHECK_THROWS_AS(make_surface("sphere", {{"radius", "1"}}), InvalidArgument);
    CHECK_THROWS_AS(make_surface("torus_revolution", {{"R", "1"}, {"r", "2"}}), InvalidArgument);
    CHECK_THROWS_AS(make_surface("flat_torus", {{"a", "-1"}}), InvalidArgument);
    CHECK_THROWS_AS(make_surface("poincare_octagon", {{"R", "1"}}), InvalidArgument);
    CHECK_THROWS_AS(make_surface("klein_bottle"), InvalidArgument);
    CHECK_THROWS_AS(make_surface("sphere", {{"R", "1+"}}), InvalidArgument);
    CHECK_THROWS_AS(make_surface("conformal", {{"base", "sphere"}}), InvalidArgument);
    CHECK_THROWS_AS(make_surface("twist", {{"base", "sphere"}}), InvalidArgument);
    CHECK_THROWS_AS(make_surface("perturbed", {{"seed", "1"}}), InvalidArgument);
    CHECK_NOTHROW(make_surface("sphere", {{"R", "2*pi"}}));
}

TEST_CASE("derived kinds") {
    const Surface c = make_surface("conformal", {{"base", "torus_revolution"}, {"R", "3"}, {"factor", "exp(0.6*sin(u))"}});
    CHECK(c.field.provenance() == Provenance::conformal);
    CHECK(c.expected_chern == 0);
    CHECK(c.field.value({0.0, 0.0}).g22 == doctest::Approx(16.0));
    const Surface p = make_surface("perturbed", {{"base", "flat_torus"}, {"seed", "3"}, {"amplitude", "0.05"}});
    CHECK(p.field.provenance() == Provenance::perturbed);
    const Surface t = make_surface("twist", {{"base", "flat_torus"}});
    CHECK(t.field.provenance() == Provenance::pullback);
}

TEST_CASE("analytic curvature agrees with the computed curvature at 100 random points") {
    std::mt19937_64 rng(8);
    for (const auto& kind : builtin_kinds()) {
        const Surface s = make_surface(kind);
        REQUIRE(s.analytic_K);
        const RectangleShape b = s.domain().bounding_box();
        for (int n = 0; n < 100;) {
            const Point2 p{oracle::uniform(rng, b.u_min, b.u_max), oracle::uniform(rng, b.v_min, b.v_max)};
            if (!s.domain().contains(p) || p.u == b.u_min) continue;
            ++n;
            CHECK(oracle::rel_err(gauss_curvature(s.field, p), s.analytic_K(p)) < 1e-6);
        }
    }
}

TEST_CASE("octagon vertices") {
    const std::vector<Point2> v = octagon_vertices();
    REQUIRE(v.size() == 8);
    const double r = std::hypot(v[0].u, v[0].v);
    SUBCASE("rotations of one vertex by k pi / 4") {
        for (int k = 0; k < 8; ++k) {
            CHECK(v[k].u == doctest::Approx(r * std::cos(k * kPi / 4)).epsilon(1e-15));
            CHECK(v[k].v == doctest::Approx(r * std::sin(k * kPi / 4)).epsilon(1e-15));
        }
    }
    SUBCASE("interior angles sum to 2 pi") {
        double sum = 0.0;
        for (std::size_t k = 0; k < 8; ++k) sum += hyperbolic_interior_angle(v, k);
        CHECK(std::fabs(sum - 2 * kPi) < 1e-10);
        CHECK(std::fabs((6 * kPi - sum) - 4 * kPi) < 1e-9);
    }
    SUBCASE("radius matches hyperbolic trigonometry") {
        CHECK(std::fabs(r - oracle::regular_polygon_disk_radius(8, kPi / 4)) < 1e-12);
        CHECK(std::fabs(r - std::pow(2.0, -0.25)) < 1e-12);
    }
}

TEST_CASE("interior angle of a hyperbolic triangle") {
    // Triangle with a vertex at the origin: its angle there is Euclidean.
    const std::vector<Point2> tri{{0, 0}, {0.5, 0}, {0, 0.5}};
    CHECK(hyperbolic_interior_angle(tri, 0) == doctest::Approx(kPi / 2).epsilon(1e-14));
}

}
