#include "chernlab/connection.hpp"

#include <algorithm>
#include <cmath>

#include "chernlab/errors.hpp"
#include "chernlab/parallel.hpp"

namespace chernlab {

namespace {

// Metric components and first partials with a common scalar type. With
// T = double this is pointwise data; with T = Jet2 built by `lift` each entry
// also carries its first derivatives, so every quantity computed from it
// comes with its exact gradient.
template <class T>
struct LocalMetric {
    T g[2][2];
    T dg[2][2][2];  // dg[a][i][j] = d_a g_ij
};

LocalMetric<double> plain(const MetricJet& j) {
    LocalMetric<double> m{};
    const Jet2* comp[2][2] = {{&j.g11, &j.g12}, {&j.g12, &j.g22}};
    for (int i = 0; i < 2; ++i) {
        for (int k = 0; k < 2; ++k) {
            m.g[i][k] = comp[i][k]->val;
            m.dg[0][i][k] = comp[i][k]->d_u;
            m.dg[1][i][k] = comp[i][k]->d_v;
        }
    }
    return m;
}

// Only the first-order channels of the lifted jets are meaningful.
LocalMetric<Jet2> lift(const MetricJet& j) {
    LocalMetric<Jet2> m{};
    const Jet2* comp[2][2] = {{&j.g11, &j.g12}, {&j.g12, &j.g22}};
    for (int i = 0; i < 2; ++i) {
        for (int k = 0; k < 2; ++k) {
            const Jet2& c = *comp[i][k];
            m.g[i][k] = Jet2(c.val, c.d_u, c.d_v, 0.0, 0.0, 0.0);
            m.dg[0][i][k] = Jet2(c.d_u, c.d_uu, c.d_uv, 0.0, 0.0, 0.0);
            m.dg[1][i][k] = Jet2(c.d_v, c.d_uv, c.d_vv, 0.0, 0.0, 0.0);
        }
    }
    return m;
}

template <class T>
void inverse_metric(const LocalMetric<T>& m, T inv[2][2]) {
    const T det = m.g[0][0] * m.g[1][1] - m.g[0][1] * m.g[1][0];
    inv[0][0] = m.g[1][1] / det;
    inv[0][1] = -m.g[0][1] / det;
    inv[1][0] = -m.g[1][0] / det;
    inv[1][1] = m.g[0][0] / det;
}

template <class T>
void christoffel_table(const LocalMetric<T>& m, T gamma[2][2][2]) {
    T inv[2][2];
    inverse_metric(m, inv);
    for (int k = 0; k < 2; ++k) {
        for (int i = 0; i < 2; ++i) {
            for (int j = i; j < 2; ++j) {
                T acc(0.0);
                for (int l = 0; l < 2; ++l) acc += inv[k][l] * (m.dg[i][j][l] + m.dg[j][i][l] - m.dg[l][i][j]);
                gamma[k][i][j] = 0.5 * acc;
                gamma[k][j][i] = gamma[k][i][j];
            }
        }
    }
}

// theta_a = g(grad_a e1, e2) for the unitary frame e1 = d_u/|d_u|, e2 = J e1.
template <class T>
void frame_connection(const LocalMetric<T>& m, T theta[2]) {
    using std::sqrt;
    T gamma[2][2][2];
    christoffel_table(m, gamma);
    const T& E = m.g[0][0];
    const T& F = m.g[0][1];
    const T& G = m.g[1][1];
    const T a = sqrt(E * G - F * F);
    const T inv_len = 1.0 / sqrt(E);
    const T e1[2] = {inv_len, T(0.0)};
    // J = [[-F, -G], [E, F]] / a applied to e1.
    const T e2[2] = {-F * inv_len / a, E * inv_len / a};
    for (int dir = 0; dir < 2; ++dir) {
        // d_dir (E^{-1/2}) = -E^{-3/2} d_dir E / 2
        T de1[2] = {-0.5 * inv_len * inv_len * inv_len * m.dg[dir][0][0], T(0.0)};
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j) de1[k] += gamma[k][dir][j] * e1[j];
        T acc(0.0);
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k) acc += m.g[i][k] * de1[i] * e2[k];
        theta[dir] = acc;
    }
}

struct RiemannTensor {
    double r[2][2][2][2] = {};  // r[l][i][j][k] = R^l_ijk
};

RiemannTensor riemann(const MetricJet& jet) {
    Jet2 gamma[2][2][2];
    christoffel_table(lift(jet), gamma);
    RiemannTensor out;
    auto d = [&](int a, const Jet2& x) { return a == 0 ? x.d_u : x.d_v; };
    for (int l = 0; l < 2; ++l) {
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                for (int k = 0; k < 2; ++k) {
                    double acc = d(i, gamma[l][j][k]) - d(j, gamma[l][i][k]);
                    for (int s = 0; s < 2; ++s)
                        acc += gamma[l][i][s].val * gamma[s][j][k].val - gamma[l][j][s].val * gamma[s][i][k].val;
                    out.r[l][i][j][k] = acc;
                }
            }
        }
    }
    return out;
}

void require_spd(const MetricJet& jet) {
    if (!jet.value().is_spd()) throw SpdError("metric jet is not positive definite");
}

}  // namespace

Christoffels christoffels(const MetricJet& jet) {
    require_spd(jet);
    Christoffels c;
    christoffel_table(plain(jet), c.gamma);
    return c;
}

TangentVector curvature_operator(const MetricJet& jet, TangentVector x, TangentVector y, TangentVector z) {
    require_spd(jet);
    const RiemannTensor rt = riemann(jet);
    const double xs[2] = {x.x1, x.x2}, ys[2] = {y.x1, y.x2}, zs[2] = {z.x1, z.x2};
    double out[2] = {0.0, 0.0};
    for (int l = 0; l < 2; ++l)
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) out[l] += xs[i] * ys[j] * zs[k] * rt.r[l][i][j][k];
    return {out[0], out[1]};
}

TangentVector curvature_operator(const MetricField& field, Point2 p, TangentVector x, TangentVector y,
                                 TangentVector z) {
    return curvature_operator(field.jet(p), x, y, z);
}

double gauss_curvature(const MetricJet& jet) {
    const MetricTensor g = jet.value();
    const double denom = g.det();  // |d_u|^2 |d_v|^2 - g(d_u, d_v)^2
    if (!(denom >= 1e-14)) throw SpdError("degenerate metric in sectional curvature");
    const TangentVector ryy = curvature_operator(jet, {1.0, 0.0}, {0.0, 1.0}, {0.0, 1.0});
    return inner(g, ryy, {1.0, 0.0}) / denom;
}

double gauss_curvature(const MetricField& field, Point2 p) { return gauss_curvature(field.jet(p)); }

double gauss_curvature_brioschi(const MetricJet& jet) {
    const MetricTensor g = jet.value();
    const double D = g.det();
    if (!(D >= 1e-14)) throw SpdError("degenerate metric in Brioschi formula");
    const double E = jet.g11.val, F = jet.g12.val, G = jet.g22.val;
    const double Eu = jet.g11.d_u, Ev = jet.g11.d_v, Evv = jet.g11.d_vv;
    const double Fu = jet.g12.d_u, Fv = jet.g12.d_v, Fuv = jet.g12.d_uv;
    const double Gu = jet.g22.d_u, Gv = jet.g22.d_v, Guu = jet.g22.d_uu;
    auto det3 = [](double a, double b, double c, double d, double e, double f, double g2, double h, double i) {
        return a * (e * i - f * h) - b * (d * i - f * g2) + c * (d * h - e * g2);
    };
    const double m1 = det3(-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev,
                           Fv - 0.5 * Gu, E, F,
                           0.5 * Gv, F, G);
    const double m2 = det3(0.0, 0.5 * Ev, 0.5 * Gu,
                           0.5 * Ev, E, F,
                           0.5 * Gu, F, G);
    return (m1 - m2) / (D * D);
}

double gauss_curvature_brioschi(const MetricField& field, Point2 p) { return gauss_curvature_brioschi(field.jet(p)); }

ConnectionForm connection_form(const MetricJet& jet) {
    require_spd(jet);
    double theta[2];
    frame_connection(plain(jet), theta);
    return {kConnectionSign * theta[0], kConnectionSign * theta[1]};
}

ConnectionForm connection_form(const MetricField& field, Point2 p) { return connection_form(field.jet(p)); }

double CurvatureReport::lemma1_residual() const {
    const double ka = K * area_coeff;
    return std::fabs(two_form_coeff - ka) / (1.0 + std::fabs(ka));
}

CurvatureReport curvature_two_form(const MetricJet& jet) {
    require_spd(jet);
    Jet2 theta[2];
    frame_connection(lift(jet), theta);
    // i (d_u omega_v - d_v omega_u) with omega = i sigma theta.
    const double curl = theta[1].d_u - theta[0].d_v;
    CurvatureReport r;
    r.two_form_coeff = -kConnectionSign * curl;
    r.K = gauss_curvature(jet);
    r.area_coeff = area_form(jet.value()).coefficient;
    return r;
}

CurvatureReport curvature_two_form(const MetricField& field, Point2 p) { return curvature_two_form(field.jet(p)); }

OneForm connection_difference(const MetricField& g, const MetricField& g_prime, int n_u, int n_v) {
    if (!(g.domain() == g_prime.domain())) throw InvalidArgument("connection difference needs a shared domain");
    if (!g.domain().fully_periodic())
        throw InvalidArgument("connection difference needs a fully periodic domain (global frame)");
    if (n_u < 8 || n_v < 8) throw InvalidArgument("connection difference grid needs at least 8x8 nodes");
    OneForm eta;
    eta.grid = g.domain().rect();
    eta.n_u = n_u;
    eta.n_v = n_v;
    const std::size_t n = static_cast<std::size_t>(n_u) * n_v;
    eta.eta_u.assign(n, 0.0);
    eta.eta_v.assign(n, 0.0);
    std::vector<double> imag(n, 0.0);
    const std::complex<double> minus_i(0.0, -1.0);
    parallel_for(n, [&](std::size_t k) {
        const int i = static_cast<int>(k / n_v), j = static_cast<int>(k % n_v);
        const Point2 p = eta.node(i, j);
        const ConnectionForm w = connection_form(g, p);
        const ConnectionForm wp = connection_form(g_prime, p);
        const std::complex<double> eu = minus_i * (w.omega_u() - wp.omega_u());
        const std::complex<double> ev = minus_i * (w.omega_v() - wp.omega_v());
        eta.eta_u[k] = eu.real();
        eta.eta_v[k] = ev.real();
        imag[k] = std::max(std::fabs(eu.imag()), std::fabs(ev.imag()));
    });
    eta.imag_residual = *std::max_element(imag.begin(), imag.end());
    return eta;
}

std::vector<double> exterior_derivative(const OneForm& eta) {
    const int nu = eta.n_u, nv = eta.n_v;
    const double hu = eta.h_u(), hv = eta.h_v();
    auto wrap = [](int i, int n) { return ((i % n) + n) % n; };
    std::vector<double> out(static_cast<std::size_t>(nu) * nv);
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            auto ev = [&](int di) { return eta.eta_v[eta.index(wrap(i + di, nu), j)]; };
            auto eu = [&](int dj) { return eta.eta_u[eta.index(i, wrap(j + dj, nv))]; };
            const double du_ev = (ev(-2) - 8.0 * ev(-1) + 8.0 * ev(1) - ev(2)) / (12.0 * hu);
            const double dv_eu = (eu(-2) - 8.0 * eu(-1) + 8.0 * eu(1) - eu(2)) / (12.0 * hv);
            out[eta.index(i, j)] = du_ev - dv_eu;
        }
    }
    return out;
}

std::vector<double> sample_two_form(const MetricField& field, const RectangleShape& grid, int n_u, int n_v) {
    const std::size_t n = static_cast<std::size_t>(n_u) * n_v;
    std::vector<double> out(n);
    const double hu = (grid.u_max - grid.u_min) / n_u, hv = (grid.v_max - grid.v_min) / n_v;
    parallel_for(n, [&](std::size_t k) {
        const int i = static_cast<int>(k / n_v), j = static_cast<int>(k % n_v);
        out[k] = curvature_two_form(field, {grid.u_min + i * hu, grid.v_min + j * hv}).two_form_coeff;
    });
    return out;
}

}  // namespace chernlab
