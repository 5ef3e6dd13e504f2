#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "chernlab/expr.hpp"
#include "chernlab/jet.hpp"

namespace chernlab {

struct Point2 {
    double u = 0.0;
    double v = 0.0;
};

struct RectangleShape {
    double u_min = 0.0;
    double u_max = 0.0;
    double v_min = 0.0;
    double v_max = 0.0;
    bool periodic_u = false;
    bool periodic_v = false;
};

enum class PolygonEdges { straight, poincare_geodesic };

struct PolygonShape {
    std::vector<Point2> vertices;  // counter-clockwise, inside the unit disk
    PolygonEdges edges = PolygonEdges::straight;

    /// Mean of the vertices; fan quadrature and membership work about it.
    Point2 center() const;
    /// Point at parameter t in [0, 1] along edge k (vertex k to k + 1).
    Point2 edge_point(std::size_t k, double t) const;
    /// Derivative of edge_point with respect to t.
    Point2 edge_tangent(std::size_t k, double t) const;
};

/// One chart realizing the surface: a rectangle whose sides may be
/// periodically identified, or a simple polygon inside the unit disk.
class ParamDomain {
public:
    /// Throws InvalidArgument unless u_min < u_max and v_min < v_max.
    static ParamDomain rectangle(double u_min, double u_max, double v_min, double v_max, bool periodic_u,
                                 bool periodic_v);
    /// Throws InvalidArgument unless the polygon is simple, has at least three
    /// vertices and every vertex has radius < 1. Clockwise input is reversed.
    static ParamDomain polygon(std::vector<Point2> vertices);
    /// Polygon whose edges are geodesics of the Poincare disk metric. Must be
    /// star-shaped about its vertex mean; throws InvalidArgument otherwise.
    static ParamDomain geodesic_polygon(std::vector<Point2> vertices);

    bool is_rectangle() const { return std::holds_alternative<RectangleShape>(shape_); }
    bool is_polygon() const { return std::holds_alternative<PolygonShape>(shape_); }
    const RectangleShape& rect() const { return std::get<RectangleShape>(shape_); }
    const PolygonShape& poly() const { return std::get<PolygonShape>(shape_); }

    /// Rectangle with both sides identified (a torus chart).
    bool fully_periodic() const;

    /// Maps periodic coordinates into their fundamental interval.
    Point2 wrap(Point2 p) const;
    /// Membership after wrapping; rectangle bounds are closed.
    bool contains(Point2 p) const;
    /// Euclidean chart measure of the domain.
    double measure() const;

    /// Axis-aligned bounding box {u_min, u_max, v_min, v_max}.
    RectangleShape bounding_box() const;

    friend bool operator==(const ParamDomain& a, const ParamDomain& b);

private:
    std::variant<RectangleShape, PolygonShape> shape_;
};

/// Symmetric 2x2 metric tensor in the chart basis.
struct MetricTensor {
    double g11 = 1.0;
    double g12 = 0.0;
    double g22 = 1.0;

    double det() const { return g11 * g22 - g12 * g12; }
    bool is_spd(double tol = 1e-12) const { return g11 > tol && det() > tol; }
    MetricTensor scaled(double f) const { return {f * g11, f * g12, f * g22}; }
};

/// Metric components as second-order jets in (u, v).
struct MetricJet {
    Jet2 g11;
    Jet2 g12;
    Jet2 g22;

    MetricTensor value() const { return {g11.val, g12.val, g22.val}; }
};

enum class Provenance { builtin, expression, pullback, conformal, perturbed };

std::string_view provenance_name(Provenance p);

/// A positive scalar field with second-order jets, e.g. a conformal factor.
using ScalarField = std::function<Jet2(Point2)>;

/// Immutable riemannian metric on a chart domain. Evaluation is pure and
/// may be called concurrently.
class MetricField {
public:
    using Evaluator = std::function<MetricJet(Point2)>;

    MetricField(ParamDomain domain, Evaluator evaluator, Provenance provenance);

    const ParamDomain& domain() const { return domain_; }
    Provenance provenance() const { return provenance_; }

    /// Throws OutsideDomainError or SpdError.
    MetricJet jet(Point2 p) const;
    MetricTensor value(Point2 p) const { return jet(p).value(); }

private:
    ParamDomain domain_;
    std::shared_ptr<const Evaluator> evaluator_;
    Provenance provenance_;
};

inline MetricJet eval_metric_jet(const MetricField& field, Point2 p) { return field.jet(p); }

/// Constant identity metric on `domain`.
MetricField euclidean_metric(const ParamDomain& domain);

/// Metric whose components are parsed expressions; jets come from forward
/// Taylor arithmetic.
MetricField expression_metric(const ParamDomain& domain, Expr g11, Expr g12, Expr g22);

/// Jets of a chart map p -> (x(p), y(p)). The Jacobian entries carry their own
/// jets because pulling back a metric to second order needs third
/// derivatives of the map.
struct MapJet {
    Jet2 x;
    Jet2 y;
    Jet2 x_u;
    Jet2 x_v;
    Jet2 y_u;
    Jet2 y_v;

    double jacobian_det() const { return x_u.val * y_v.val - x_v.val * y_u.val; }
};

/// Diffeomorphism from `source` onto (part of) a target chart.
class ParamMap {
public:
    using Evaluator = std::function<MapJet(Point2)>;

    ParamMap(ParamDomain source, Evaluator evaluator, bool orientation_preserving);

    static ParamMap identity(const ParamDomain& domain);
    /// (u, v) -> (a u + b v, c u + d v).
    static ParamMap linear(const ParamDomain& source, double a, double b, double c, double d);
    /// (u, v) -> (u, v + amplitude * sin(u)).
    static ParamMap twist(const ParamDomain& source, double amplitude);
    /// outer o inner; the source is inner's source.
    static ParamMap compose(const ParamMap& outer, const ParamMap& inner);

    const ParamDomain& source() const { return source_; }
    bool orientation_preserving() const { return orientation_preserving_; }

    /// Throws OutsideDomainError, or InvalidArgument when |det Dphi| <= 1e-10
    /// (or det <= 0 for orientation-preserving maps).
    MapJet jet(Point2 p) const;

private:
    ParamDomain source_;
    std::shared_ptr<const Evaluator> evaluator_;
    bool orientation_preserving_;
};

/// (Dphi)^T g(phi(p)) (Dphi), jets carried to second order by the chain rule.
MetricField pullback_metric(const ParamMap& map, const MetricField& field);

/// f g. Throws InvalidArgument if the factor is nonpositive on a 64x64 probe
/// grid; evaluation also rejects nonpositive samples.
MetricField conformal_scale(const MetricField& field, ScalarField factor);

/// Scalar field backed by an expression.
ScalarField expression_scalar(Expr e);

/// Seeded perturbation exp(a psi) g + a tau sqrt(g11 g22)/2 on the
/// off-diagonal, where psi and tau are low-frequency trigonometric
/// polynomials bounded by 1 and periodic on the domain's bounding box.
/// Throws SpdError when SPD fails anywhere on a 64x64 probe grid.
MetricField perturb_metric(const MetricField& field, std::uint64_t seed, double amplitude);

/// Uniform probe points inside the domain (cell centres of an n x n grid on
/// the bounding box, filtered by membership).
std::vector<Point2> probe_grid(const ParamDomain& domain, int n);

}  // namespace chernlab
