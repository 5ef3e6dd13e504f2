#include "chernlab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <sstream>

#include "chernlab/errors.hpp"
#include "chernlab/quadrature.hpp"

namespace chernlab {

namespace {

double cross(Point2 o, Point2 a, Point2 b) { return (a.u - o.u) * (b.v - o.v) - (a.v - o.v) * (b.u - o.u); }

bool segments_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
    const double d1 = cross(q1, q2, p1);
    const double d2 = cross(q1, q2, p2);
    const double d3 = cross(p1, p2, q1);
    const double d4 = cross(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    auto on_segment = [](Point2 a, Point2 b, Point2 c) {
        return std::min(a.u, b.u) <= c.u && c.u <= std::max(a.u, b.u) && std::min(a.v, b.v) <= c.v &&
               c.v <= std::max(a.v, b.v);
    };
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

double signed_area(const std::vector<Point2>& vs) {
    double a = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const Point2& p = vs[i];
        const Point2& q = vs[(i + 1) % vs.size()];
        a += p.u * q.v - q.u * p.v;
    }
    return 0.5 * a;
}

double wrap_coord(double x, double lo, double hi) {
    const double period = hi - lo;
    double r = std::fmod(x - lo, period);
    if (r < 0.0) r += period;
    if (r >= period) r = 0.0;
    return lo + r;
}

std::string describe(Point2 p) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << p.u << ", " << p.v << ")";
    return os.str();
}

}  // namespace

ParamDomain ParamDomain::rectangle(double u_min, double u_max, double v_min, double v_max, bool periodic_u,
                                   bool periodic_v) {
    if (!(u_min < u_max) || !(v_min < v_max) || !std::isfinite(u_max - u_min) || !std::isfinite(v_max - v_min))
        throw InvalidArgument("rectangle bounds must be finite and strictly ordered");
    ParamDomain d;
    d.shape_ = RectangleShape{u_min, u_max, v_min, v_max, periodic_u, periodic_v};
    return d;
}

namespace {

std::complex<double> as_complex(Point2 p) { return {p.u, p.v}; }

double edge_cross(Point2 a, Point2 b) { return a.u * b.v - a.v * b.u; }

std::vector<Point2> validated_ccw_vertices(std::vector<Point2> vertices) {
    const std::size_t n = vertices.size();
    if (n < 3) throw InvalidArgument("polygon needs at least three vertices");
    for (const Point2& p : vertices) {
        if (!(std::hypot(p.u, p.v) < 1.0)) throw InvalidArgument("polygon vertex " + describe(p) + " not inside the unit disk");
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]))
                throw InvalidArgument("polygon is not simple");
        }
    }
    const double area = signed_area(vertices);
    if (area == 0.0) throw InvalidArgument("polygon has zero area");
    if (area < 0.0) std::reverse(vertices.begin(), vertices.end());
    return vertices;
}

}  // namespace

Point2 PolygonShape::center() const {
    Point2 c{0.0, 0.0};
    for (const Point2& p : vertices) {
        c.u += p.u;
        c.v += p.v;
    }
    c.u /= static_cast<double>(vertices.size());
    c.v /= static_cast<double>(vertices.size());
    return c;
}

// A geodesic edge is the image of the segment [0, T(B)] under the inverse of
// the disk automorphism T(z) = (z - A) / (1 - conj(A) z).
namespace {

// Geodesic through a and b: the circle orthogonal to the unit circle, or the
// chord when a and b are collinear with the origin. Parametrised by angle so
// the fan Jacobian is a low-degree trigonometric polynomial in t.
struct GeodesicArc {
    bool straight = false;
    std::complex<double> centre{};
    double radius = 0.0;
    double phi0 = 0.0;
    double sweep = 0.0;
};

GeodesicArc geodesic_arc(Point2 a, Point2 b) {
    GeodesicArc arc;
    const double det = edge_cross(a, b);
    if (std::fabs(det) < 1e-14) {
        arc.straight = true;
        return arc;
    }
    // c.a = (1 + |a|^2) / 2 and c.b = (1 + |b|^2) / 2
    const double ra = 0.5 * (1.0 + a.u * a.u + a.v * a.v), rb = 0.5 * (1.0 + b.u * b.u + b.v * b.v);
    arc.centre = {(ra * b.v - rb * a.v) / det, (a.u * rb - b.u * ra) / det};
    arc.radius = std::sqrt(std::norm(arc.centre) - 1.0);
    arc.phi0 = std::arg(as_complex(a) - arc.centre);
    arc.sweep = std::remainder(std::arg(as_complex(b) - arc.centre) - arc.phi0, 2.0 * std::numbers::pi);
    return arc;
}

}  // namespace

Point2 PolygonShape::edge_point(std::size_t k, double t) const {
    const Point2 a = vertices[k], b = vertices[(k + 1) % vertices.size()];
    const GeodesicArc arc = edges == PolygonEdges::straight ? GeodesicArc{.straight = true} : geodesic_arc(a, b);
    if (arc.straight) return {a.u + t * (b.u - a.u), a.v + t * (b.v - a.v)};
    const std::complex<double> z = arc.centre + std::polar(arc.radius, arc.phi0 + t * arc.sweep);
    return {z.real(), z.imag()};
}

Point2 PolygonShape::edge_tangent(std::size_t k, double t) const {
    const Point2 a = vertices[k], b = vertices[(k + 1) % vertices.size()];
    const GeodesicArc arc = edges == PolygonEdges::straight ? GeodesicArc{.straight = true} : geodesic_arc(a, b);
    if (arc.straight) return {b.u - a.u, b.v - a.v};
    const std::complex<double> dz =
        std::complex<double>(0.0, arc.sweep) * std::polar(arc.radius, arc.phi0 + t * arc.sweep);
    return {dz.real(), dz.imag()};
}

ParamDomain ParamDomain::polygon(std::vector<Point2> vertices) {
    ParamDomain d;
    d.shape_ = PolygonShape{validated_ccw_vertices(std::move(vertices)), PolygonEdges::straight};
    return d;
}

ParamDomain ParamDomain::geodesic_polygon(std::vector<Point2> vertices) {
    PolygonShape shape{validated_ccw_vertices(std::move(vertices)), PolygonEdges::poincare_geodesic};
    const Point2 c = shape.center();
    constexpr int kSamples = 64;
    for (std::size_t k = 0; k < shape.vertices.size(); ++k) {
        for (int i = 0; i <= kSamples; ++i) {
            const double t = static_cast<double>(i) / kSamples;
            const Point2 p = shape.edge_point(k, t);
            const Point2 dp = shape.edge_tangent(k, t);
            if (!(edge_cross({p.u - c.u, p.v - c.v}, dp) > 0.0))
                throw InvalidArgument("geodesic polygon must be star-shaped about its vertex mean");
        }
    }
    ParamDomain d;
    d.shape_ = std::move(shape);
    return d;
}

bool ParamDomain::fully_periodic() const { return is_rectangle() && rect().periodic_u && rect().periodic_v; }

Point2 ParamDomain::wrap(Point2 p) const {
    if (!is_rectangle()) return p;
    const RectangleShape& r = rect();
    if (r.periodic_u) p.u = wrap_coord(p.u, r.u_min, r.u_max);
    if (r.periodic_v) p.v = wrap_coord(p.v, r.v_min, r.v_max);
    return p;
}

bool ParamDomain::contains(Point2 p) const {
    if (!std::isfinite(p.u) || !std::isfinite(p.v)) return false;
    if (is_rectangle()) {
        p = wrap(p);
        const RectangleShape& r = rect();
        const double tu = 1e-12 * (r.u_max - r.u_min);
        const double tv = 1e-12 * (r.v_max - r.v_min);
        return p.u >= r.u_min - tu && p.u <= r.u_max + tu && p.v >= r.v_min - tv && p.v <= r.v_max + tv;
    }
    const PolygonShape& shape = poly();
    const auto& vs = shape.vertices;
    if (shape.edges == PolygonEdges::straight) {
        bool inside = false;
        for (std::size_t i = 0, j = vs.size() - 1; i < vs.size(); j = i++) {
            if ((vs[i].v > p.v) != (vs[j].v > p.v)) {
                const double x = vs[j].u + (p.v - vs[j].v) * (vs[i].u - vs[j].u) / (vs[i].v - vs[j].v);
                if (p.u < x) inside = !inside;
            }
        }
        return inside;
    }
    // Star-shaped about the centre: find the fan sector holding p, then the
    // edge parameter whose ray passes through p, and compare radii.
    const Point2 c = shape.center();
    const Point2 d{p.u - c.u, p.v - c.v};
    if (d.u == 0.0 && d.v == 0.0) return true;
    for (std::size_t k = 0; k < vs.size(); ++k) {
        const Point2 a = vs[k], b = vs[(k + 1) % vs.size()];
        const Point2 ca{a.u - c.u, a.v - c.v}, cb{b.u - c.u, b.v - c.v};
        if (!(edge_cross(ca, d) >= 0.0 && edge_cross(d, cb) > 0.0)) continue;
        double lo = 0.0, hi = 1.0;
        for (int iter = 0; iter < 60; ++iter) {
            const double mid = 0.5 * (lo + hi);
            const Point2 q = shape.edge_point(k, mid);
            if (edge_cross({q.u - c.u, q.v - c.v}, d) >= 0.0)
                lo = mid;
            else
                hi = mid;
        }
        const Point2 q = shape.edge_point(k, 0.5 * (lo + hi));
        return std::hypot(d.u, d.v) <= std::hypot(q.u - c.u, q.v - c.v);
    }
    return false;
}

double ParamDomain::measure() const {
    if (is_rectangle()) {
        const RectangleShape& r = rect();
        return (r.u_max - r.u_min) * (r.v_max - r.v_min);
    }
    const PolygonShape& shape = poly();
    if (shape.edges == PolygonEdges::straight) return signed_area(shape.vertices);
    // Green's theorem along the arcs.
    const auto [t, w] = gauss_legendre(48, 0.0, 1.0);
    std::vector<double> terms;
    for (std::size_t k = 0; k < shape.vertices.size(); ++k) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            const Point2 p = shape.edge_point(k, t[i]);
            const Point2 dp = shape.edge_tangent(k, t[i]);
            terms.push_back(0.5 * w[i] * edge_cross(p, dp));
        }
    }
    return compensated_sum(terms);
}

RectangleShape ParamDomain::bounding_box() const {
    if (is_rectangle()) return rect();
    RectangleShape b{1.0, -1.0, 1.0, -1.0, false, false};
    const PolygonShape& shape = poly();
    const int samples = shape.edges == PolygonEdges::straight ? 1 : 64;
    for (std::size_t k = 0; k < shape.vertices.size(); ++k) {
        for (int i = 0; i < samples; ++i) {
            const Point2 p = shape.edge_point(k, static_cast<double>(i) / samples);
            b.u_min = std::min(b.u_min, p.u);
            b.u_max = std::max(b.u_max, p.u);
            b.v_min = std::min(b.v_min, p.v);
            b.v_max = std::max(b.v_max, p.v);
        }
    }
    return b;
}

bool operator==(const ParamDomain& a, const ParamDomain& b) {
    if (a.is_rectangle() != b.is_rectangle()) return false;
    if (a.is_rectangle()) {
        const auto& x = a.rect();
        const auto& y = b.rect();
        return x.u_min == y.u_min && x.u_max == y.u_max && x.v_min == y.v_min && x.v_max == y.v_max &&
               x.periodic_u == y.periodic_u && x.periodic_v == y.periodic_v;
    }
    if (a.poly().edges != b.poly().edges) return false;
    const auto& x = a.poly().vertices;
    const auto& y = b.poly().vertices;
    return std::equal(x.begin(), x.end(), y.begin(), y.end(),
                      [](Point2 p, Point2 q) { return p.u == q.u && p.v == q.v; });
}

std::string_view provenance_name(Provenance p) {
    switch (p) {
        case Provenance::builtin: return "builtin";
        case Provenance::expression: return "expression";
        case Provenance::pullback: return "pullback";
        case Provenance::conformal: return "conformal";
        case Provenance::perturbed: return "perturbed";
    }
    return "?";
}

MetricField::MetricField(ParamDomain domain, Evaluator evaluator, Provenance provenance)
    : domain_(std::move(domain)),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      provenance_(provenance) {}

MetricJet MetricField::jet(Point2 p) const {
    if (!domain_.contains(p)) throw OutsideDomainError("point " + describe(p) + " outside the metric domain");
    const Point2 q = domain_.wrap(p);
    MetricJet j = (*evaluator_)(q);
    const MetricTensor g = j.value();
    if (!std::isfinite(g.g11) || !std::isfinite(g.g12) || !std::isfinite(g.g22) || !g.is_spd())
        throw SpdError("metric not positive definite at " + describe(p));
    return j;
}

MetricField euclidean_metric(const ParamDomain& domain) {
    return MetricField(
        domain, [](Point2) { return MetricJet{Jet2(1.0), Jet2(0.0), Jet2(1.0)}; }, Provenance::builtin);
}

MetricField expression_metric(const ParamDomain& domain, Expr g11, Expr g12, Expr g22) {
    return MetricField(
        domain,
        [g11 = std::move(g11), g12 = std::move(g12), g22 = std::move(g22)](Point2 p) {
            return MetricJet{g11.eval_jet(p.u, p.v), g12.eval_jet(p.u, p.v), g22.eval_jet(p.u, p.v)};
        },
        Provenance::expression);
}

ParamMap::ParamMap(ParamDomain source, Evaluator evaluator, bool orientation_preserving)
    : source_(std::move(source)),
      evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))),
      orientation_preserving_(orientation_preserving) {}

ParamMap ParamMap::identity(const ParamDomain& domain) {
    return ParamMap(
        domain,
        [](Point2 p) {
            return MapJet{Jet2::variable_u(p.u), Jet2::variable_v(p.v), Jet2(1.0), Jet2(0.0), Jet2(0.0), Jet2(1.0)};
        },
        true);
}

ParamMap ParamMap::linear(const ParamDomain& source, double a, double b, double c, double d) {
    return ParamMap(
        source,
        [a, b, c, d](Point2 p) {
            return MapJet{Jet2(a * p.u + b * p.v, a, b, 0.0, 0.0, 0.0),
                          Jet2(c * p.u + d * p.v, c, d, 0.0, 0.0, 0.0),
                          Jet2(a), Jet2(b), Jet2(c), Jet2(d)};
        },
        a * d - b * c > 0.0);
}

ParamMap ParamMap::twist(const ParamDomain& source, double amplitude) {
    return ParamMap(
        source,
        [amplitude](Point2 p) {
            const double s = std::sin(p.u), c = std::cos(p.u);
            return MapJet{Jet2::variable_u(p.u),
                          Jet2(p.v + amplitude * s, amplitude * c, 1.0, -amplitude * s, 0.0, 0.0),
                          Jet2(1.0),
                          Jet2(0.0),
                          Jet2(amplitude * c, -amplitude * s, 0.0, -amplitude * c, 0.0, 0.0),
                          Jet2(1.0)};
        },
        true);
}

ParamMap ParamMap::compose(const ParamMap& outer, const ParamMap& inner) {
    return ParamMap(
        inner.source(),
        [outer, inner](Point2 p) {
            const MapJet mi = inner.jet(p);
            const MapJet mo = outer.jet({mi.x.val, mi.y.val});
            auto at = [&](const Jet2& f) { return chernlab::compose(f, mi.x, mi.y); };
            const Jet2 ox_u = at(mo.x_u), ox_v = at(mo.x_v), oy_u = at(mo.y_u), oy_v = at(mo.y_v);
            return MapJet{at(mo.x),
                          at(mo.y),
                          ox_u * mi.x_u + ox_v * mi.y_u,
                          ox_u * mi.x_v + ox_v * mi.y_v,
                          oy_u * mi.x_u + oy_v * mi.y_u,
                          oy_u * mi.x_v + oy_v * mi.y_v};
        },
        outer.orientation_preserving() == inner.orientation_preserving());
}

MapJet ParamMap::jet(Point2 p) const {
    if (!source_.contains(p)) throw OutsideDomainError("point " + describe(p) + " outside the map's source domain");
    const MapJet m = (*evaluator_)(source_.wrap(p));
    const double det = m.jacobian_det();
    if (!(std::fabs(det) > 1e-10)) throw InvalidArgument("singular Jacobian at " + describe(p));
    if (orientation_preserving_ && det <= 0.0)
        throw InvalidArgument("orientation-preserving map has negative Jacobian at " + describe(p));
    return m;
}

MetricField pullback_metric(const ParamMap& map, const MetricField& field) {
    return MetricField(
        map.source(),
        [map, field](Point2 p) {
            const MapJet m = map.jet(p);
            const MetricJet t = field.jet({m.x.val, m.y.val});
            const Jet2 g11 = compose(t.g11, m.x, m.y);
            const Jet2 g12 = compose(t.g12, m.x, m.y);
            const Jet2 g22 = compose(t.g22, m.x, m.y);
            return MetricJet{
                m.x_u * m.x_u * g11 + 2.0 * m.x_u * m.y_u * g12 + m.y_u * m.y_u * g22,
                m.x_u * m.x_v * g11 + (m.x_u * m.y_v + m.y_u * m.x_v) * g12 + m.y_u * m.y_v * g22,
                m.x_v * m.x_v * g11 + 2.0 * m.x_v * m.y_v * g12 + m.y_v * m.y_v * g22,
            };
        },
        Provenance::pullback);
}

std::vector<Point2> probe_grid(const ParamDomain& domain, int n) {
    const RectangleShape b = domain.bounding_box();
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Point2 p{b.u_min + (i + 0.5) * (b.u_max - b.u_min) / n, b.v_min + (j + 0.5) * (b.v_max - b.v_min) / n};
            if (domain.contains(p)) pts.push_back(p);
        }
    }
    return pts;
}

MetricField conformal_scale(const MetricField& field, ScalarField factor) {
    for (const Point2& p : probe_grid(field.domain(), 64)) {
        const double f = factor(p).val;
        if (!(f > 0.0)) throw InvalidArgument("conformal factor is nonpositive at " + describe(p));
    }
    return MetricField(
        field.domain(),
        [field, factor = std::move(factor)](Point2 p) {
            const Jet2 f = factor(p);
            if (!(f.val > 0.0)) throw InvalidArgument("conformal factor is nonpositive at " + describe(p));
            const MetricJet g = field.jet(p);
            return MetricJet{f * g.g11, f * g.g12, f * g.g22};
        },
        Provenance::conformal);
}

ScalarField expression_scalar(Expr e) {
    return [e = std::move(e)](Point2 p) { return e.eval_jet(p.u, p.v); };
}

namespace {

struct TrigMode {
    int k;
    int l;
    double cos_coeff;
    double sin_coeff;
};

// Portable draw in [-1, 1); std distributions are implementation-defined.
double unit_symmetric(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0; }

std::vector<TrigMode> draw_modes(std::mt19937_64& rng) {
    std::vector<TrigMode> modes;
    for (int k = 0; k <= 2; ++k) {
        for (int l = -2; l <= 2; ++l) {
            if (k == 0 && l <= 0) continue;
            const double a = unit_symmetric(rng);
            const double b = unit_symmetric(rng);
            modes.push_back({k, l, a, b});
        }
    }
    double total = 0.0;
    for (const auto& m : modes) total += std::fabs(m.cos_coeff) + std::fabs(m.sin_coeff);
    for (auto& m : modes) {
        m.cos_coeff /= total;
        m.sin_coeff /= total;
    }
    return modes;
}

Jet2 eval_modes(const std::vector<TrigMode>& modes, const RectangleShape& box, Point2 p) {
    const double su = 2.0 * std::numbers::pi / (box.u_max - box.u_min);
    const double sv = 2.0 * std::numbers::pi / (box.v_max - box.v_min);
    Jet2 out;
    for (const auto& m : modes) {
        const double ku = m.k * su, lv = m.l * sv;
        const Jet2 phase(ku * (p.u - box.u_min) + lv * (p.v - box.v_min), ku, lv, 0.0, 0.0, 0.0);
        out += m.cos_coeff * cos(phase) + m.sin_coeff * sin(phase);
    }
    return out;
}

}  // namespace

MetricField perturb_metric(const MetricField& field, std::uint64_t seed, double amplitude) {
    if (!std::isfinite(amplitude)) throw InvalidArgument("perturbation amplitude must be finite");
    std::mt19937_64 rng(seed);
    const auto psi_modes = draw_modes(rng);
    const auto tau_modes = draw_modes(rng);
    const RectangleShape box = field.domain().bounding_box();
    MetricField out(
        field.domain(),
        [field, psi_modes, tau_modes, box, amplitude](Point2 p) {
            const MetricJet g = field.jet(p);
            const Jet2 scale = exp(amplitude * eval_modes(psi_modes, box, p));
            const Jet2 off = (0.5 * amplitude) * eval_modes(tau_modes, box, p) * sqrt(g.g11 * g.g22);
            return MetricJet{scale * g.g11, scale * g.g12 + off, scale * g.g22};
        },
        Provenance::perturbed);
    for (const Point2& p : probe_grid(field.domain(), 64)) {
        try {
            (void)out.jet(p);
        } catch (const SpdError&) {
            std::ostringstream os;
            os << "perturbation (seed " << seed << ", amplitude " << amplitude
               << ") breaks positive definiteness at " << describe(p);
            throw SpdError(os.str());
        }
    }
    return out;
}

}  // namespace chernlab
