#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "chernlab/connection.hpp"
#include "chernlab/metric.hpp"

namespace chernlab {

enum class AxisRule { trapezoid_periodic, gauss_legendre };

/// Node counts and per-axis rules. For polygon domains the same counts give
/// the number of radial and angular cells per fan triangle, each cell carrying
/// a fixed 3x3 Gauss rule.
struct QuadratureSpec {
    int n_u = 64;
    int n_v = 64;
    AxisRule rule_u = AxisRule::gauss_legendre;
    AxisRule rule_v = AxisRule::gauss_legendre;

    /// Trapezoid on periodic axes, Gauss-Legendre elsewhere.
    static QuadratureSpec for_domain(const ParamDomain& domain, int n_u, int n_v);
};

struct QuadratureNode {
    Point2 p;
    double weight = 0.0;
};

/// Gauss-Legendre nodes and weights on [a, b].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b);

/// Throws InvalidArgument for counts below 8, or for a polygon that is not
/// star-shaped about its vertex mean.
std::vector<QuadratureNode> quadrature_nodes(const ParamDomain& domain, const QuadratureSpec& spec);

/// Neumaier-compensated sum in index order.
double compensated_sum(std::span<const double> values);

double integrate_scalar(const std::function<double(Point2)>& f, const ParamDomain& domain,
                        const QuadratureSpec& spec);

/// First Chern number (1/2pi) * integral of i curv, computed twice: from the
/// curl of the connection form and from K sqrt(det g).
struct ChernResult {
    double raw = 0.0;            // via the curvature 2-form
    double raw_via_gauss = 0.0;  // via K sqrt(det g)
    long rounded = 0;
    double residual = 0.0;  // |raw - rounded|
    int n_u = 0;
    int n_v = 0;
    bool converged = false;  // residual < kChernAcceptResidual
    double max_lemma1_residual = 0.0;

    double two_path_gap() const;
};

inline constexpr double kChernAcceptResidual = 0.01;

/// Non-convergence is reported through `converged`, never thrown.
ChernResult chern_number(const MetricField& field, const QuadratureSpec& spec);

/// |integral of d(eta)| over the torus with the trapezoid rule on eta's grid.
/// Throws InvalidArgument for a grid that is not fully periodic.
double stokes_residual(const OneForm& eta);

}  // namespace chernlab
