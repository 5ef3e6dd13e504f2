#include "chernlab/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "chernlab/errors.hpp"
#include "chernlab/parallel.hpp"

namespace chernlab {

QuadratureSpec QuadratureSpec::for_domain(const ParamDomain& domain, int n_u, int n_v) {
    QuadratureSpec s;
    s.n_u = n_u;
    s.n_v = n_v;
    if (domain.is_rectangle()) {
        s.rule_u = domain.rect().periodic_u ? AxisRule::trapezoid_periodic : AxisRule::gauss_legendre;
        s.rule_v = domain.rect().periodic_v ? AxisRule::trapezoid_periodic : AxisRule::gauss_legendre;
    }
    return s;
}

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b) {
    if (n < 1) throw InvalidArgument("Gauss-Legendre needs at least one node");
    std::vector<double> x(n), w(n);
    const int m = (n + 1) / 2;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            dp = n * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::fabs(dz) < 1e-16) break;
        }
        // Recompute the derivative at the converged root for the weight.
        double p1 = 1.0, p2 = 0.0;
        for (int j = 0; j < n; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
        }
        dp = n * (z * p1 - p2) / (z * z - 1.0);
        x[i] = mid - half * z;
        x[n - 1 - i] = mid + half * z;
        w[i] = 2.0 * half / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    return {std::move(x), std::move(w)};
}

namespace {

std::pair<std::vector<double>, std::vector<double>> axis_rule(AxisRule rule, int n, double a, double b) {
    if (rule == AxisRule::gauss_legendre) return gauss_legendre(n, a, b);
    const double h = (b - a) / n;
    std::vector<double> x(n), w(n, h);
    for (int i = 0; i < n; ++i) x[i] = a + i * h;
    return {std::move(x), std::move(w)};
}

std::vector<QuadratureNode> rectangle_nodes(const RectangleShape& r, const QuadratureSpec& spec) {
    const auto [xu, wu] = axis_rule(spec.rule_u, spec.n_u, r.u_min, r.u_max);
    const auto [xv, wv] = axis_rule(spec.rule_v, spec.n_v, r.v_min, r.v_max);
    std::vector<QuadratureNode> nodes;
    nodes.reserve(xu.size() * xv.size());
    for (std::size_t i = 0; i < xu.size(); ++i)
        for (std::size_t j = 0; j < xv.size(); ++j) nodes.push_back({{xu[i], xv[j]}, wu[i] * wv[j]});
    return nodes;
}

// Fan about the vertex mean; the fan triangle over edge k is parametrised by
// x(s, t) = C + s (e_k(t) - C) with area element s (e_k(t) - C) x e_k'(t),
// and split into n_u x n_v cells in (s, t), each with a 3x3 Gauss rule.
std::vector<QuadratureNode> polygon_nodes(const PolygonShape& poly, const QuadratureSpec& spec) {
    const Point2 c = poly.center();
    const auto [gx, gw] = gauss_legendre(3, 0.0, 1.0);
    std::vector<QuadratureNode> nodes;
    nodes.reserve(poly.vertices.size() * spec.n_u * spec.n_v * 9);
    const double cell = 1.0 / (static_cast<double>(spec.n_u) * spec.n_v);
    for (std::size_t k = 0; k < poly.vertices.size(); ++k) {
        for (int it = 0; it < spec.n_v; ++it) {
            for (int qt = 0; qt < 3; ++qt) {
                const double t = (it + gx[qt]) / spec.n_v;
                const Point2 e = poly.edge_point(k, t);
                const Point2 de = poly.edge_tangent(k, t);
                const double ru = e.u - c.u, rv = e.v - c.v;
                const double jac = ru * de.v - rv * de.u;
                if (!(jac > 0.0))
                    throw InvalidArgument("polygon quadrature needs a domain star-shaped about its vertex mean");
                for (int is = 0; is < spec.n_u; ++is) {
                    for (int qs = 0; qs < 3; ++qs) {
                        const double s = (is + gx[qs]) / spec.n_u;
                        nodes.push_back({{c.u + s * ru, c.v + s * rv}, gw[qs] * gw[qt] * cell * s * jac});
                    }
                }
            }
        }
    }
    return nodes;
}

}  // namespace

std::vector<QuadratureNode> quadrature_nodes(const ParamDomain& domain, const QuadratureSpec& spec) {
    if (spec.n_u < 8 || spec.n_v < 8) throw InvalidArgument("quadrature node counts must be at least 8");
    if (domain.is_rectangle()) return rectangle_nodes(domain.rect(), spec);
    return polygon_nodes(domain.poly(), spec);
}

double compensated_sum(std::span<const double> values) {
    double sum = 0.0, comp = 0.0;
    for (const double x : values) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

double integrate_scalar(const std::function<double(Point2)>& f, const ParamDomain& domain,
                        const QuadratureSpec& spec) {
    const auto nodes = quadrature_nodes(domain, spec);
    std::vector<double> terms(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) { terms[i] = nodes[i].weight * f(nodes[i].p); });
    return compensated_sum(terms);
}

double ChernResult::two_path_gap() const { return std::fabs(raw - raw_via_gauss); }

ChernResult chern_number(const MetricField& field, const QuadratureSpec& spec) {
    const auto nodes = quadrature_nodes(field.domain(), spec);
    std::vector<double> curv(nodes.size()), gauss(nodes.size()), lemma1(nodes.size());
    parallel_for(nodes.size(), [&](std::size_t i) {
        const CurvatureReport r = curvature_two_form(field, nodes[i].p);
        curv[i] = nodes[i].weight * r.two_form_coeff;
        gauss[i] = nodes[i].weight * r.K * r.area_coeff;
        lemma1[i] = r.lemma1_residual();
    });
    ChernResult out;
    out.n_u = spec.n_u;
    out.n_v = spec.n_v;
    out.raw = compensated_sum(curv) / (2.0 * std::numbers::pi);
    out.raw_via_gauss = compensated_sum(gauss) / (2.0 * std::numbers::pi);
    out.rounded = std::lround(out.raw);
    out.residual = std::fabs(out.raw - static_cast<double>(out.rounded));
    out.converged = out.residual < kChernAcceptResidual;
    for (const double r : lemma1) out.max_lemma1_residual = std::max(out.max_lemma1_residual, r);
    return out;
}

double stokes_residual(const OneForm& eta) {
    const RectangleShape& g = eta.grid;
    if (!(g.periodic_u && g.periodic_v)) throw InvalidArgument("Stokes residual needs a closed (fully periodic) surface");
    const std::vector<double> d_eta = exterior_derivative(eta);
    const double cell = eta.h_u() * eta.h_v();
    std::vector<double> terms(d_eta.size());
    for (std::size_t i = 0; i < d_eta.size(); ++i) terms[i] = cell * d_eta[i];
    return std::fabs(compensated_sum(terms));
}

}  // namespace chernlab
