#pragma once

#include <complex>

#include "chernlab/metric.hpp"

namespace chernlab {

/// Tangent vector in the chart coordinate basis at a point.
struct TangentVector {
    double x1 = 0.0;
    double x2 = 0.0;

    friend TangentVector operator+(TangentVector a, TangentVector b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
    friend TangentVector operator-(TangentVector a, TangentVector b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
    friend TangentVector operator*(double s, TangentVector a) { return {s * a.x1, s * a.x2}; }
};

/// Row-major 2x2 real matrix.
struct Mat2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a21 = 0.0;
    double a22 = 0.0;

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 of(const MetricTensor& g) { return {g.g11, g.g12, g.g12, g.g22}; }

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }
    Mat2 transpose() const { return {a11, a21, a12, a22}; }
    TangentVector operator*(TangentVector x) const { return {a11 * x.x1 + a12 * x.x2, a21 * x.x1 + a22 * x.x2}; }

    friend Mat2 operator*(const Mat2& a, const Mat2& b) {
        return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
                a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
    }
    friend Mat2 operator+(const Mat2& a, const Mat2& b) {
        return {a.a11 + b.a11, a.a12 + b.a12, a.a21 + b.a21, a.a22 + b.a22};
    }
    friend Mat2 operator-(const Mat2& a, const Mat2& b) {
        return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
    }
    friend Mat2 operator*(double s, const Mat2& a) { return {s * a.a11, s * a.a12, s * a.a21, s * a.a22}; }
};

/// Largest absolute entry.
double max_abs(const Mat2& m);

/// The area form at a point: coefficient sqrt(det g) of du^dv.
struct AreaFormAtPoint {
    double coefficient = 0.0;

    Mat2 matrix() const { return {0.0, coefficient, -coefficient, 0.0}; }
    double operator()(TangentVector x, TangentVector y) const { return coefficient * (x.x1 * y.x2 - x.x2 * y.x1); }
};

/// Compatible complex structure J at a point: J^2 = -I, J^T g J = g and
/// g(JX, Y) equals the area form on (X, Y).
struct ComplexStructureTensor {
    Mat2 matrix;

    TangentVector operator()(TangentVector x) const { return matrix * x; }
};

/// g(X, Y) + i area(X, Y).
struct HermitianValue {
    double re = 0.0;
    double im = 0.0;
};

double inner(const MetricTensor& g, TangentVector x, TangentVector y);

/// Throws SpdError unless g is positive definite.
AreaFormAtPoint area_form(const MetricTensor& g);

/// J = -g^{-1} A where A is the area-form matrix. Throws SpdError.
ComplexStructureTensor complex_structure(const MetricTensor& g);

HermitianValue hermitian_product(const MetricTensor& g, TangentVector x, TangentVector y);

/// Re(c) X + Im(c) J X.
TangentVector complex_scale(const ComplexStructureTensor& j, std::complex<double> c, TangentVector x);

/// |area(X,Y)^2 - (g(X,X) g(Y,Y) - g(X,Y)^2)|.
double parallelogram_residual(const MetricTensor& g, TangentVector x, TangentVector y);

/// Complex-linear isomorphism (TS, J) -> (TS, J'): Phi = (I - J' J)/2, which
/// satisfies Phi J = J' Phi and det Phi = (2 - tr(J' J))/4 >= 1 when both
/// structures induce the same orientation. Throws InvalidArgument on an
/// orientation mismatch (det Phi <= 1e-12).
Mat2 bundle_isomorphism(const ComplexStructureTensor& j, const ComplexStructureTensor& j_prime);

}  // namespace chernlab
