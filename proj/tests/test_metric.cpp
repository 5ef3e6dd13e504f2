#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "chernlab/errors.hpp"
#include "chernlab/quadrature.hpp"
#include "chernlab/zoo.hpp"
#include "oracles.hpp"

using namespace chernlab;

namespace {

constexpr double kPi = std::numbers::pi;

ParamDomain torus_chart() { return ParamDomain::rectangle(0, 2 * kPi, 0, 2 * kPi, true, true); }

void check_same_jet(const MetricJet& a, const MetricJet& b, double tol) {
    for (const auto [x, y] : {std::pair{a.g11, b.g11}, std::pair{a.g12, b.g12}, std::pair{a.g22, b.g22}}) {
        CHECK(std::fabs(x.val - y.val) <= tol);
        CHECK(std::fabs(x.d_u - y.d_u) <= tol);
        CHECK(std::fabs(x.d_v - y.d_v) <= tol);
        CHECK(std::fabs(x.d_uu - y.d_uu) <= tol);
        CHECK(std::fabs(x.d_uv - y.d_uv) <= tol);
        CHECK(std::fabs(x.d_vv - y.d_vv) <= tol);
    }
}

// Every jet channel against central differences of the value channel.
void check_jets_by_fd(const MetricField& field, const std::vector<Point2>& points) {
    for (const Point2 p : points) {
        const MetricJet j = field.jet(p);
        const std::array<std::pair<Jet2, double MetricTensor::*>, 3> comps{
            {{j.g11, &MetricTensor::g11}, {j.g12, &MetricTensor::g12}, {j.g22, &MetricTensor::g22}}};
        for (const auto& [jet, member] : comps) {
            const auto fd = oracle::central_differences(
                [&, m = member](double u, double v) { return field.value({u, v}).*m; }, p.u, p.v);
            const double scale = std::max(1.0, std::fabs(jet.val));
            CHECK(std::fabs(jet.d_u - fd.d_u) <= 1e-5 * std::max(scale, std::fabs(fd.d_u)));
            CHECK(std::fabs(jet.d_v - fd.d_v) <= 1e-5 * std::max(scale, std::fabs(fd.d_v)));
            CHECK(std::fabs(jet.d_uu - fd.d_uu) <= 1e-5 * std::max(scale, std::fabs(fd.d_uu)));
            CHECK(std::fabs(jet.d_uv - fd.d_uv) <= 1e-5 * std::max(scale, std::fabs(fd.d_uv)));
            CHECK(std::fabs(jet.d_vv - fd.d_vv) <= 1e-5 * std::max(scale, std::fabs(fd.d_vv)));
        }
    }
}

std::vector<Point2> random_points(const ParamDomain& d, std::uint64_t seed, int n, double margin) {
    std::mt19937_64 rng(seed);
    const RectangleShape b = d.bounding_box();
    std::vector<Point2> out;
    while (static_cast<int>(out.size()) < n) {
        const Point2 p{oracle::uniform(rng, b.u_min + margin, b.u_max - margin),
                       oracle::uniform(rng, b.v_min + margin, b.v_max - margin)};
        if (d.contains(p)) out.push_back(p);
    }
    return out;
}

// (u, v) -> (u + 0.2 sin v, v), written out by hand.
ParamMap shear_map(const ParamDomain& d) {
    return ParamMap(
        d,
        [](Point2 p) {
            const double s = std::sin(p.v), c = std::cos(p.v);
            return MapJet{Jet2(p.u + 0.2 * s, 1.0, 0.2 * c, 0.0, 0.0, -0.2 * s),
                          Jet2::variable_v(p.v),
                          Jet2(1.0),
                          Jet2(0.2 * c, 0.0, -0.2 * s, 0.0, 0.0, -0.2 * c),
                          Jet2(0.0),
                          Jet2(1.0)};
        },
        true);
}

}  // namespace

TEST_SUITE("metric-core") {

TEST_CASE("Euclidean field: identity value, zero derivatives") {
    const MetricField e = euclidean_metric(ParamDomain::rectangle(-1, 1, -1, 1, false, false));
    const MetricJet j = e.jet({0.3, -0.4});
    CHECK(j.value().g11 == 1.0);
    CHECK(j.value().g12 == 0.0);
    CHECK(j.value().g22 == 1.0);
    check_same_jet(j, MetricJet{Jet2(1.0), Jet2(0.0), Jet2(1.0)}, 0.0);
}

TEST_CASE("unit sphere is the identity on the equator") {
    const MetricTensor g = make_surface("sphere").field.value({kPi / 2, 1.0});
    CHECK(g.g11 == 1.0);
    CHECK(g.g12 == 0.0);
    CHECK(g.g22 == 1.0);
}

TEST_CASE("Poincare field at the origin is diag(4, 4)") {
    const MetricTensor g = make_surface("poincare_octagon").field.value({0.0, 0.0});
    CHECK(g.g11 == 4.0);
    CHECK(g.g12 == 0.0);
    CHECK(g.g22 == 4.0);
}

TEST_CASE("evaluation errors") {
    const MetricField e = euclidean_metric(ParamDomain::rectangle(0, 1, 0, 1, false, false));
    CHECK_THROWS_AS(e.jet({1.5, 0.5}), OutsideDomainError);
    CHECK_THROWS_AS(e.jet({std::nan(""), 0.5}), OutsideDomainError);
    const MetricField bad = expression_metric(ParamDomain::rectangle(-1, 1, -1, 1, false, false), Expr::parse("u"),
                                              Expr::parse("0"), Expr::parse("1"));
    CHECK_THROWS_AS(bad.jet({-0.5, 0.0}), SpdError);
    CHECK_NOTHROW(bad.jet({0.5, 0.0}));
}

TEST_CASE("repeated evaluation is identical") {
    const MetricField f = perturb_metric(make_surface("torus_revolution").field, 3, 0.1);
    const MetricJet a = f.jet({1.1, 2.2}), b = f.jet({1.1, 2.2});
    check_same_jet(a, b, 0.0);
}

TEST_CASE("periodic coordinates wrap") {
    const MetricField t = make_surface("torus_revolution").field;
    check_same_jet(t.jet({0.5 + 2 * kPi, -1.0}), t.jet({0.5, 2 * kPi - 1.0}), 1e-12);
    CHECK_THROWS_AS(make_surface("sphere").field.jet({-0.1, 7.0}), OutsideDomainError);
}

TEST_CASE("builtin jets match finite differences") {
    for (const auto& kind : builtin_kinds()) {
        CAPTURE(kind);
        const Surface s = make_surface(kind);
        check_jets_by_fd(s.field, random_points(s.domain(), 5, 40, 1e-3));
    }
}

TEST_CASE("expression metric jets match finite differences") {
    const MetricField f = expression_metric(ParamDomain::rectangle(-1, 1, -1, 1, false, false),
                                            Expr::parse("2+sin(u*v)"), Expr::parse("0.3*cos(u+v)"),
                                            Expr::parse("exp(u)/(1+v^2)"));
    check_jets_by_fd(f, random_points(f.domain(), 6, 40, 0.01));
}

TEST_CASE("derived metric jets match finite differences") {
    const MetricField t = make_surface("torus_revolution").field;
    check_jets_by_fd(perturb_metric(t, 1, 0.1), random_points(t.domain(), 7, 30, 0.0));
    check_jets_by_fd(pullback_metric(ParamMap::twist(t.domain(), 0.3), t), random_points(t.domain(), 8, 30, 0.0));
    check_jets_by_fd(conformal_scale(t, expression_scalar(Expr::parse("exp(0.6*sin(u))"))),
                     random_points(t.domain(), 9, 30, 0.0));
}

TEST_CASE("pullback by the identity is the identity") {
    const Surface s = make_surface("torus_revolution");
    const MetricField p = pullback_metric(ParamMap::identity(s.domain()), s.field);
    CHECK(p.provenance() == Provenance::pullback);
    for (const Point2 q : random_points(s.domain(), 10, 20, 0.0)) check_same_jet(p.jet(q), s.field.jet(q), 0.0);
}

TEST_CASE("linear pullback of Euclidean is constant diag(4, 1)") {
    const ParamDomain big = ParamDomain::rectangle(-10, 10, -10, 10, false, false);
    const ParamDomain small = ParamDomain::rectangle(-1, 1, -1, 1, false, false);
    const MetricField p = pullback_metric(ParamMap::linear(small, 2, 0, 0, 1), euclidean_metric(big));
    check_same_jet(p.jet({0.3, 0.7}), MetricJet{Jet2(4.0), Jet2(0.0), Jet2(1.0)}, 0.0);
}

TEST_CASE("pullback composes contravariantly") {
    const Surface s = make_surface("torus_revolution");
    const ParamMap phi = ParamMap::twist(s.domain(), 0.3);
    const ParamMap psi = shear_map(s.domain());
    const MetricField once = pullback_metric(ParamMap::compose(phi, psi), s.field);
    const MetricField twice = pullback_metric(psi, pullback_metric(phi, s.field));
    for (const Point2 q : random_points(s.domain(), 11, 50, 0.0)) {
        const MetricTensor a = once.value(q), b = twice.value(q);
        CHECK(std::fabs(a.g11 - b.g11) <= 1e-12 * std::max(1.0, std::fabs(b.g11)));
        CHECK(std::fabs(a.g12 - b.g12) <= 1e-12 * std::max(1.0, std::fabs(b.g12)));
        CHECK(std::fabs(a.g22 - b.g22) <= 1e-12 * std::max(1.0, std::fabs(b.g22)));
        check_same_jet(once.jet(q), twice.jet(q), 1e-10);
    }
}

TEST_CASE("singular or orientation-reversing maps are rejected at evaluation") {
    const ParamDomain d = ParamDomain::rectangle(-1, 1, -1, 1, false, false);
    const MetricField e = euclidean_metric(ParamDomain::rectangle(-5, 5, -5, 5, false, false));
    CHECK_THROWS_AS(pullback_metric(ParamMap::linear(d, 1, 2, 2, 4), e).jet({0, 0}), InvalidArgument);
    CHECK_NOTHROW(ParamMap::linear(d, 0, 1, 1, 0).jet({0, 0}));  // swap, declared orientation-reversing
    const ParamMap swap_claimed(
        d, [](Point2 p) { return MapJet{Jet2(p.v, 0, 1, 0, 0, 0), Jet2(p.u, 1, 0, 0, 0, 0), Jet2(0.0), Jet2(1.0), Jet2(1.0), Jet2(0.0)}; },
        true);
    CHECK_THROWS_AS(swap_claimed.jet({0, 0}), InvalidArgument);
}

TEST_CASE("twist pullback keeps the flat torus Chern number at 0") {
    const Surface flat = make_surface("flat_torus");
    const MetricField t = pullback_metric(ParamMap::twist(flat.domain(), 0.3), flat.field);
    const ChernResult r = chern_number(t, QuadratureSpec::for_domain(t.domain(), 128, 128));
    CHECK(r.rounded == 0);
    CHECK(std::fabs(r.raw) < 1e-10);
}

TEST_CASE("conformal scaling") {
    const Surface s = make_surface("torus_revolution");
    const MetricField one = conformal_scale(s.field, expression_scalar(Expr::parse("1")));
    CHECK(one.provenance() == Provenance::conformal);
    for (const Point2 q : random_points(s.domain(), 12, 20, 0.0)) check_same_jet(one.jet(q), s.field.jet(q), 0.0);

    const ParamDomain d = ParamDomain::rectangle(-1, 1, -1, 1, false, false);
    const MetricField nine = conformal_scale(euclidean_metric(d), expression_scalar(Expr::parse("9")));
    check_same_jet(nine.jet({0.1, 0.2}), MetricJet{Jet2(9.0), Jet2(0.0), Jet2(9.0)}, 0.0);

    CHECK_THROWS_AS(conformal_scale(euclidean_metric(d), expression_scalar(Expr::parse("u"))), InvalidArgument);
}

TEST_CASE("conformal factor exp(0.6 sin u) keeps the flat torus Chern number at 0") {
    const Surface flat = make_surface("flat_torus");
    const MetricField f = conformal_scale(flat.field, expression_scalar(Expr::parse("exp(0.6*sin(u))")));
    const ChernResult r = chern_number(f, QuadratureSpec::for_domain(f.domain(), 128, 128));
    CHECK(r.rounded == 0);
    CHECK(std::fabs(r.raw) < 1e-10);
}

TEST_CASE("perturbation") {
    const Surface t = make_surface("torus_revolution");
    SUBCASE("zero amplitude is the identity") {
        const MetricField p = perturb_metric(t.field, 5, 0.0);
        for (const Point2 q : random_points(t.domain(), 13, 20, 0.0)) check_same_jet(p.jet(q), t.field.jet(q), 0.0);
    }
    SUBCASE("seed 1, amplitude 0.1 stays SPD on the probe grid and keeps Chern 0") {
        const MetricField p = perturb_metric(t.field, 1, 0.1);
        for (const Point2 q : probe_grid(p.domain(), 64)) CHECK(p.value(q).is_spd());
        const ChernResult r = chern_number(p, QuadratureSpec::for_domain(p.domain(), 128, 128));
        CHECK(r.rounded == 0);
        CHECK(std::fabs(r.raw) < 1e-8);
    }
    SUBCASE("deterministic per seed, different across seeds") {
        const MetricField a = perturb_metric(t.field, 1, 0.1), b = perturb_metric(t.field, 1, 0.1);
        const MetricField c = perturb_metric(t.field, 2, 0.1);
        CHECK(a.value({1.0, 2.0}).g12 == b.value({1.0, 2.0}).g12);
        CHECK(a.value({1.0, 2.0}).g12 != c.value({1.0, 2.0}).g12);
    }
    SUBCASE("large amplitudes are rejected") {
        CHECK_THROWS_AS(perturb_metric(t.field, 1, 50.0), SpdError);
    }
}

TEST_CASE("rectangle domains") {
    CHECK_THROWS_AS(ParamDomain::rectangle(1, 0, 0, 1, false, false), InvalidArgument);
    CHECK_THROWS_AS(ParamDomain::rectangle(0, 1, 0, 0, false, false), InvalidArgument);
    const ParamDomain d = ParamDomain::rectangle(0, 2, 0, 1, true, false);
    CHECK(d.contains({2.5, 0.5}));
    CHECK_FALSE(d.contains({0.5, 1.5}));
    CHECK(d.wrap({2.5, 0.5}).u == doctest::Approx(0.5));
    CHECK(d.wrap({-0.5, 0.5}).u == doctest::Approx(1.5));
    CHECK(d.measure() == 2.0);
    CHECK_FALSE(d.fully_periodic());
    CHECK(torus_chart().fully_periodic());
}

TEST_CASE("straight polygon domains") {
    CHECK_THROWS_AS(ParamDomain::polygon({{0, 0}, {0.5, 0}}), InvalidArgument);
    CHECK_THROWS_AS(ParamDomain::polygon({{0, 0}, {1.2, 0}, {0, 0.5}}), InvalidArgument);
    // bow tie
    CHECK_THROWS_AS(ParamDomain::polygon({{-0.5, -0.5}, {0.5, 0.5}, {0.5, -0.5}, {-0.5, 0.5}}), InvalidArgument);
    const std::vector<Point2> cw{{-0.5, -0.5}, {-0.5, 0.5}, {0.5, 0.5}, {0.5, -0.5}};
    const ParamDomain sq = ParamDomain::polygon(cw);
    CHECK(sq.measure() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(sq.contains({0.1, 0.2}));
    CHECK_FALSE(sq.contains({0.6, 0.0}));
    // stored counter-clockwise
    const auto& v = sq.poly().vertices;
    double twice_area = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) twice_area += v[i].u * v[(i + 1) % v.size()].v - v[(i + 1) % v.size()].u * v[i].v;
    CHECK(twice_area > 0.0);
}

TEST_CASE("geodesic polygon domains") {
    const std::vector<Point2> oct = octagon_vertices();
    const ParamDomain g = ParamDomain::geodesic_polygon(oct);
    const ParamDomain s = ParamDomain::polygon(oct);
    CHECK_FALSE(g == s);
    // arcs bow toward the origin, so the geodesic octagon lies inside the straight one
    const double r = std::hypot(oct[0].u, oct[0].v);
    const Point2 mid_chord{0.5 * (oct[0].u + oct[1].u), 0.5 * (oct[0].v + oct[1].v)};
    CHECK(s.contains({mid_chord.u * 0.999, mid_chord.v * 0.999}));
    CHECK_FALSE(g.contains({mid_chord.u * 0.999, mid_chord.v * 0.999}));
    CHECK(g.contains({0.0, 0.0}));
    CHECK(g.contains({0.95 * oct[3].u, 0.95 * oct[3].v}));
    CHECK_FALSE(g.contains({0.0, 1.001 * r}));
    CHECK(g.measure() == doctest::Approx(oracle::geodesic_ngon_euclidean_area(8, r)).epsilon(1e-12));
    // edges end at the vertices and the arcs are orthogonal to the unit circle
    const PolygonShape& shape = g.poly();
    for (std::size_t k = 0; k < 8; ++k) {
        const Point2 a = shape.edge_point(k, 0.0), b = shape.edge_point(k, 1.0);
        CHECK(a.u == doctest::Approx(shape.vertices[k].u).epsilon(1e-14));
        CHECK(b.v == doctest::Approx(shape.vertices[(k + 1) % 8].v).epsilon(1e-14));
    }
}

}
