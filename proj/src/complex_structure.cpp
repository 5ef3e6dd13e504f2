#include "chernlab/complex_structure.hpp"

#include <algorithm>
#include <cmath>

#include "chernlab/errors.hpp"

namespace chernlab {

double max_abs(const Mat2& m) {
    return std::max({std::fabs(m.a11), std::fabs(m.a12), std::fabs(m.a21), std::fabs(m.a22)});
}

double inner(const MetricTensor& g, TangentVector x, TangentVector y) {
    return g.g11 * x.x1 * y.x1 + g.g12 * (x.x1 * y.x2 + x.x2 * y.x1) + g.g22 * x.x2 * y.x2;
}

AreaFormAtPoint area_form(const MetricTensor& g) {
    if (!g.is_spd()) throw SpdError("area form of a metric that is not positive definite");
    return {std::sqrt(g.det())};
}

ComplexStructureTensor complex_structure(const MetricTensor& g) {
    const double a = area_form(g).coefficient;
    // -g^{-1} [[0, a], [-a, 0]] with g^{-1} = [[g22, -g12], [-g12, g11]] / a^2.
    return {Mat2{-g.g12 / a, -g.g22 / a, g.g11 / a, g.g12 / a}};
}

HermitianValue hermitian_product(const MetricTensor& g, TangentVector x, TangentVector y) {
    return {inner(g, x, y), area_form(g)(x, y)};
}

TangentVector complex_scale(const ComplexStructureTensor& j, std::complex<double> c, TangentVector x) {
    return c.real() * x + c.imag() * j(x);
}

double parallelogram_residual(const MetricTensor& g, TangentVector x, TangentVector y) {
    const double area = area_form(g)(x, y);
    const double gxy = inner(g, x, y);
    return std::fabs(area * area - (inner(g, x, x) * inner(g, y, y) - gxy * gxy));
}

Mat2 bundle_isomorphism(const ComplexStructureTensor& j, const ComplexStructureTensor& j_prime) {
    const Mat2 phi = 0.5 * (Mat2::identity() - j_prime.matrix * j.matrix);
    if (!(phi.det() > 1e-12))
        throw InvalidArgument("complex structures induce opposite orientations; no complex-linear isomorphism of this form");
    return phi;
}

}  // namespace chernlab
