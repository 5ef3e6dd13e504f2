#pragma once

#include <complex>
#include <vector>

#include "chernlab/complex_structure.hpp"
#include "chernlab/metric.hpp"

namespace chernlab {

/// Orientation sign of the connection 1-form, fixed so that the round sphere
/// has first Chern number +2.
inline constexpr double kConnectionSign = 1.0;

/// Levi-Civita connection coefficients Gamma^k_ij, stored as gamma[k][i][j].
struct Christoffels {
    double gamma[2][2][2] = {};

    double operator()(int k, int i, int j) const { return gamma[k][i][j]; }
};

Christoffels christoffels(const MetricJet& jet);

/// R(X,Y)Z = grad_X grad_Y Z - grad_Y grad_X Z - grad_[X,Y] Z. The derivatives
/// of the Christoffel symbols come from the metric jets, not from differencing.
TangentVector curvature_operator(const MetricJet& jet, TangentVector x, TangentVector y, TangentVector z);
TangentVector curvature_operator(const MetricField& field, Point2 p, TangentVector x, TangentVector y,
                                 TangentVector z);

/// g(R(X,Y)Y, X) / (g(X,X) g(Y,Y) - g(X,Y)^2) with X = d/du, Y = d/dv.
/// Throws SpdError when the denominator is below 1e-14.
double gauss_curvature(const MetricJet& jet);
double gauss_curvature(const MetricField& field, Point2 p);

/// Brioschi's formula in E, F, G and their partials. Independent of the
/// Christoffel route above.
double gauss_curvature_brioschi(const MetricJet& jet);
double gauss_curvature_brioschi(const MetricField& field, Point2 p);

/// Connection 1-form of the Levi-Civita connection on the tangent line bundle
/// in the unitary frame e1 = d/du / |d/du|, e2 = J e1. The form is purely
/// imaginary; only the imaginary parts are stored.
struct ConnectionForm {
    double im_u = 0.0;
    double im_v = 0.0;

    std::complex<double> omega_u() const { return {0.0, im_u}; }
    std::complex<double> omega_v() const { return {0.0, im_v}; }
};

ConnectionForm connection_form(const MetricJet& jet);
ConnectionForm connection_form(const MetricField& field, Point2 p);

/// Pointwise curvature data. `two_form_coeff` is c in i curv = c du^dv and is
/// computed as the exact curl of the connection form; `K` and `area_coeff`
/// come from gauss_curvature and the area form.
struct CurvatureReport {
    double K = 0.0;
    double area_coeff = 0.0;
    double two_form_coeff = 0.0;

    /// |c - K a| / (1 + |K a|).
    double lemma1_residual() const;
};

CurvatureReport curvature_two_form(const MetricJet& jet);
CurvatureReport curvature_two_form(const MetricField& field, Point2 p);

/// Real 1-form sampled on the uniform periodic grid u_i = u_min + i h_u,
/// v_j = v_min + j h_v of a fully periodic rectangle; samples are stored at
/// index i * n_v + j.
struct OneForm {
    RectangleShape grid;
    int n_u = 0;
    int n_v = 0;
    std::vector<double> eta_u;
    std::vector<double> eta_v;
    double imag_residual = 0.0;  // max |Im| seen while forming the samples

    double h_u() const { return (grid.u_max - grid.u_min) / n_u; }
    double h_v() const { return (grid.v_max - grid.v_min) / n_v; }
    Point2 node(int i, int j) const { return {grid.u_min + i * h_u(), grid.v_min + j * h_v()}; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n_v + j; }
};

/// eta = -i (omega - omega') sampled on an n_u x n_v grid, so that
/// curv - curv' = i d(eta). Both fields must share one fully periodic domain.
/// Throws InvalidArgument otherwise.
OneForm connection_difference(const MetricField& g, const MetricField& g_prime, int n_u, int n_v);

/// Coefficient of d(eta) = (d_u eta_v - d_v eta_u) du^dv at every grid node,
/// by fourth-order central differences with step equal to the grid spacing
/// and periodic wrap.
std::vector<double> exterior_derivative(const OneForm& eta);

/// two_form_coeff of `field` on the same grid layout as OneForm.
std::vector<double> sample_two_form(const MetricField& field, const RectangleShape& grid, int n_u, int n_v);

}  // namespace chernlab
