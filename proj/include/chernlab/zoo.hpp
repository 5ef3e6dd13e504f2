#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chernlab/metric.hpp"
#include "chernlab/quadrature.hpp"

namespace chernlab {

/// A closed surface realized on one chart, with whatever analytic ground
/// truth is known for it.
struct Surface {
    std::string name;
    MetricField field;
    std::optional<long> expected_chern;
    std::function<double(Point2)> analytic_K;  // empty when unknown
    QuadratureSpec reference;                  // resolution at which expected_chern is reproduced

    const ParamDomain& domain() const { return field.domain(); }
};

/// Parameters by name, as they appear in config files ("R" -> "2").
using SurfaceParams = std::map<std::string, std::string>;

/// Builtin kinds:
///   sphere           {R > 0}                      (0, pi) x [0, 2pi), periodic in v
///   torus_revolution {R > r > 0}                  [0, 2pi)^2
///   flat_torus       {a > 0, b > 0}               [0, 2pi)^2, g = diag(a^2, b^2)
///   poincare_octagon {}                           regular octagon in the unit disk
/// Derived kinds wrap a builtin named by `base` (whose parameters share the
/// map):
///   conformal {base, factor = expression}
///   perturbed {base, seed, amplitude}
///   twist     {base, amplitude}                   pullback by (u, v + a sin u)
/// Throws InvalidArgument on unknown kinds or invalid parameters.
Surface make_surface(const std::string& kind, const SurfaceParams& params = {});

/// Names of the builtin kinds, in listing order.
const std::vector<std::string>& builtin_kinds();

/// Vertices of the regular hyperbolic octagon centred at 0 with all interior
/// angles pi/4; the vertex radius is found by bisection on the angle.
std::vector<Point2> octagon_vertices();

/// Hyperbolic interior angle at vertex k of the polygon (edges are Poincare
/// geodesics).
double hyperbolic_interior_angle(const std::vector<Point2>& vertices, std::size_t k);

}  // namespace chernlab
