#include "chernlab/zoo.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <set>

#include "chernlab/errors.hpp"

namespace chernlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double param(const SurfaceParams& params, const std::string& key, double fallback) {
    const auto it = params.find(key);
    if (it == params.end()) return fallback;
    try {
        return Expr::parse(it->second).eval(0.0, 0.0);
    } catch (const Error& e) {
        throw InvalidArgument("parameter " + key + " = '" + it->second + "': " + e.what());
    }
}

void reject_unknown(const std::string& kind, const SurfaceParams& params, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : params)
        if (!allowed.contains(key)) throw InvalidArgument("unknown parameter '" + key + "' for surface kind " + kind);
}

ParamDomain torus_chart() { return ParamDomain::rectangle(0.0, kTwoPi, 0.0, kTwoPi, true, true); }

Surface sphere(const SurfaceParams& params) {
    reject_unknown("sphere", params, {"R"});
    const double R = param(params, "R", 1.0);
    if (!(R > 0.0)) throw InvalidArgument("sphere needs R > 0");
    const double R2 = R * R;
    MetricField field(
        ParamDomain::rectangle(0.0, std::numbers::pi, 0.0, kTwoPi, false, true),
        [R2](Point2 p) {
            const double s = std::sin(p.u), c = std::cos(p.u);
            return MetricJet{Jet2(R2), Jet2(0.0),
                             Jet2(R2 * s * s, 2.0 * R2 * s * c, 0.0, 2.0 * R2 * (c * c - s * s), 0.0, 0.0)};
        },
        Provenance::builtin);
    Surface out{"sphere", std::move(field), 2, [R2](Point2) { return 1.0 / R2; }, {}};
    out.reference = QuadratureSpec::for_domain(out.domain(), 64, 128);
    return out;
}

Surface torus_revolution(const SurfaceParams& params) {
    reject_unknown("torus_revolution", params, {"R", "r"});
    const double R = param(params, "R", 2.0);
    const double r = param(params, "r", 1.0);
    if (!(R > r && r > 0.0)) throw InvalidArgument("torus_revolution needs R > r > 0");
    MetricField field(
        torus_chart(),
        [R, r](Point2 p) {
            const double s = std::sin(p.u), c = std::cos(p.u);
            const double w = R + r * c;
            return MetricJet{Jet2(r * r), Jet2(0.0),
                             Jet2(w * w, -2.0 * w * r * s, 0.0, 2.0 * r * r * s * s - 2.0 * w * r * c, 0.0, 0.0)};
        },
        Provenance::builtin);
    Surface out{"torus_revolution", std::move(field), 0,
                [R, r](Point2 p) { return std::cos(p.u) / (r * (R + r * std::cos(p.u))); }, {}};
    out.reference = QuadratureSpec::for_domain(out.domain(), 128, 128);
    return out;
}

Surface flat_torus(const SurfaceParams& params) {
    reject_unknown("flat_torus", params, {"a", "b"});
    const double a = param(params, "a", 1.0);
    const double b = param(params, "b", 1.0);
    if (!(a > 0.0 && b > 0.0)) throw InvalidArgument("flat_torus needs a > 0 and b > 0");
    MetricField field(
        torus_chart(), [a, b](Point2) { return MetricJet{Jet2(a * a), Jet2(0.0), Jet2(b * b)}; },
        Provenance::builtin);
    Surface out{"flat_torus", std::move(field), 0, [](Point2) { return 0.0; }, {}};
    out.reference = QuadratureSpec::for_domain(out.domain(), 64, 64);
    return out;
}

Surface poincare_octagon(const SurfaceParams& params) {
    reject_unknown("poincare_octagon", params, {});
    MetricField field(
        ParamDomain::geodesic_polygon(octagon_vertices()),
        [](Point2 p) {
            // 4 / q^2 with q = 1 - u^2 - v^2
            const double q = 1.0 - p.u * p.u - p.v * p.v;
            const double q3 = q * q * q, q4 = q3 * q;
            const Jet2 f(4.0 / (q * q), 16.0 * p.u / q3, 16.0 * p.v / q3, 16.0 / q3 + 96.0 * p.u * p.u / q4,
                         96.0 * p.u * p.v / q4, 16.0 / q3 + 96.0 * p.v * p.v / q4);
            return MetricJet{f, Jet2(0.0), f};
        },
        Provenance::builtin);
    Surface out{"poincare_octagon", std::move(field), -2, [](Point2) { return -1.0; }, {}};
    out.reference = QuadratureSpec::for_domain(out.domain(), 16, 16);
    return out;
}

Surface make_builtin(const std::string& kind, const SurfaceParams& params) {
    if (kind == "sphere") return sphere(params);
    if (kind == "torus_revolution") return torus_revolution(params);
    if (kind == "flat_torus") return flat_torus(params);
    if (kind == "poincare_octagon") return poincare_octagon(params);
    throw InvalidArgument("unknown surface kind '" + kind + "'");
}

// Splits derived-kind keys from the base surface's parameters.
Surface derived_base(const SurfaceParams& params, const std::set<std::string>& own, SurfaceParams& mine) {
    SurfaceParams base_params;
    std::string base;
    for (const auto& [key, value] : params) {
        if (key == "base")
            base = value;
        else if (own.contains(key))
            mine[key] = value;
        else
            base_params[key] = value;
    }
    if (base.empty()) throw InvalidArgument("derived surface kinds need a 'base' parameter");
    return make_builtin(base, base_params);
}

}  // namespace

const std::vector<std::string>& builtin_kinds() {
    static const std::vector<std::string> kinds{"sphere", "torus_revolution", "flat_torus", "poincare_octagon"};
    return kinds;
}

Surface make_surface(const std::string& kind, const SurfaceParams& params) {
    if (kind == "conformal") {
        SurfaceParams mine;
        Surface s = derived_base(params, {"factor"}, mine);
        if (!mine.contains("factor")) throw InvalidArgument("conformal surface needs a 'factor' expression");
        Expr factor;
        try {
            factor = Expr::parse(mine["factor"]);
        } catch (const ParseError& e) {
            throw InvalidArgument(std::string("conformal factor: ") + e.what());
        }
        s.field = conformal_scale(s.field, expression_scalar(std::move(factor)));
        s.name = "conformal(" + s.name + ")";
        s.analytic_K = nullptr;
        return s;
    }
    if (kind == "perturbed") {
        SurfaceParams mine;
        Surface s = derived_base(params, {"seed", "amplitude"}, mine);
        const double seed = param(mine, "seed", 1.0);
        if (!(seed >= 0.0) || seed != std::floor(seed)) throw InvalidArgument("perturbation seed must be a nonnegative integer");
        s.field = perturb_metric(s.field, static_cast<std::uint64_t>(seed), param(mine, "amplitude", 0.1));
        s.name = "perturbed(" + s.name + ")";
        s.analytic_K = nullptr;
        return s;
    }
    if (kind == "twist") {
        SurfaceParams mine;
        Surface s = derived_base(params, {"amplitude"}, mine);
        if (!s.domain().fully_periodic()) throw InvalidArgument("twist pullback needs a fully periodic base surface");
        s.field = pullback_metric(ParamMap::twist(s.domain(), param(mine, "amplitude", 0.3)), s.field);
        s.name = "twist(" + s.name + ")";
        s.analytic_K = nullptr;
        return s;
    }
    return make_builtin(kind, params);
}

double hyperbolic_interior_angle(const std::vector<Point2>& vertices, std::size_t k) {
    const std::size_t n = vertices.size();
    const std::complex<double> p(vertices[k].u, vertices[k].v);
    const std::complex<double> prev(vertices[(k + n - 1) % n].u, vertices[(k + n - 1) % n].v);
    const std::complex<double> next(vertices[(k + 1) % n].u, vertices[(k + 1) % n].v);
    // Disk automorphism sending p to 0; geodesics through 0 are diameters and
    // the map is conformal, so the angle is read off as an argument.
    auto to_origin = [&](std::complex<double> z) { return (z - p) / (1.0 - std::conj(p) * z); };
    return std::fabs(std::arg(to_origin(next) / to_origin(prev)));
}

std::vector<Point2> octagon_vertices() {
    constexpr int kSides = 8;
    constexpr double kTarget = std::numbers::pi / 4.0;
    auto ring = [](double r) {
        std::vector<Point2> vs(kSides);
        for (int k = 0; k < kSides; ++k) {
            const double t = k * std::numbers::pi / 4.0;
            vs[k] = {r * std::cos(t), r * std::sin(t)};
        }
        return vs;
    };
    // The interior angle falls monotonically from 3pi/4 (r -> 0) to 0 (r -> 1).
    double lo = 1e-3, hi = 1.0 - 1e-9;
    for (int iter = 0; iter < 200 && hi - lo > 1e-16; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (hyperbolic_interior_angle(ring(mid), 0) > kTarget)
            lo = mid;
        else
            hi = mid;
    }
    const double r = 0.5 * (lo + hi);
    if (!(std::fabs(hyperbolic_interior_angle(ring(r), 0) - kTarget) < 1e-12))
        throw Error("octagon vertex radius bisection did not converge");
    return ring(r);
}

}  // namespace chernlab
