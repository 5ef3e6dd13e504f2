#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's differentiation, curvature or quadrature code.

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "chernlab/metric.hpp"

namespace oracle {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

// Value and derivatives from central differences of a scalar function.
struct FdJet {
    double val, d_u, d_v, d_uu, d_uv, d_vv;
};

inline FdJet central_differences(const std::function<double(double, double)>& f, double u, double v,
                                 double h = 1e-4) {
    const double f0 = f(u, v);
    return {f0,
            (f(u + h, v) - f(u - h, v)) / (2 * h),
            (f(u, v + h) - f(u, v - h)) / (2 * h),
            (f(u + h, v) - 2 * f0 + f(u - h, v)) / (h * h),
            (f(u + h, v + h) - f(u + h, v - h) - f(u - h, v + h) + f(u - h, v - h)) / (4 * h * h),
            (f(u, v + h) - 2 * f0 + f(u, v - h)) / (h * h)};
}

// |got - want| scaled by max(1, |want|).
inline double rel_err(double got, double want) { return std::fabs(got - want) / std::max(1.0, std::fabs(want)); }

// SPD tensor from a rotation and two eigenvalues (a different construction
// from the Cholesky-style generator in the verify suites).
inline chernlab::MetricTensor random_spd(std::mt19937_64& rng) {
    const double t = uniform(rng, 0.0, std::numbers::pi);
    const double l1 = std::exp(uniform(rng, -2.0, 2.0));
    const double l2 = std::exp(uniform(rng, -2.0, 2.0));
    const double c = std::cos(t), s = std::sin(t);
    return {l1 * c * c + l2 * s * s, (l1 - l2) * c * s, l1 * s * s + l2 * c * c};
}

inline double shoelace(const std::vector<chernlab::Point2>& vs) {
    double a = 0.0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const auto& p = vs[i];
        const auto& q = vs[(i + 1) % vs.size()];
        a += p.u * q.v - q.u * p.v;
    }
    return 0.5 * std::fabs(a);
}

// Regular hyperbolic n-gon with interior angle alpha: cosh R = cot(pi/n) cot(alpha/2)
// for the circumradius R; the Poincare-disk radius is tanh(R/2).
inline double regular_polygon_disk_radius(int n, double alpha) {
    const double cosh_r = 1.0 / (std::tan(std::numbers::pi / n) * std::tan(alpha / 2.0));
    return std::tanh(std::acosh(cosh_r) / 2.0);
}

// Euclidean area of the regular geodesic n-gon with vertex radius r: the
// straight polygon minus n circular segments cut by circles orthogonal to
// the unit circle.
inline double geodesic_ngon_euclidean_area(int n, double r) {
    const double half = std::numbers::pi / n;
    const double d = (1.0 + r * r) / (2.0 * r * std::cos(half));  // distance of the arc centre from 0
    const double rho = std::sqrt(d * d - 1.0);
    const double chord = 2.0 * r * std::sin(half);
    const double phi = 2.0 * std::asin(chord / (2.0 * rho));
    const double segment = 0.5 * rho * rho * (phi - std::sin(phi));
    const double straight = 0.5 * n * r * r * std::sin(2.0 * half);
    return straight - n * segment;
}

// Closed forms.
inline double torus_K(double R, double r, double theta) { return std::cos(theta) / (r * (R + r * std::cos(theta))); }

}  // namespace oracle
