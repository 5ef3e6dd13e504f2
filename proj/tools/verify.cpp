#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "chernlab/complex_structure.hpp"
#include "chernlab/connection.hpp"
#include "chernlab/errors.hpp"
#include "chernlab/expr.hpp"
#include "chernlab/quadrature.hpp"
#include "chernlab/zoo.hpp"

namespace chernlab::cli {

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

MetricTensor random_spd(std::mt19937_64& rng) {
    const double l11 = std::exp(uniform(rng, -1.5, 1.5));
    const double l22 = std::exp(uniform(rng, -1.5, 1.5));
    const double l21 = uniform(rng, -2.0, 2.0);
    return {l11 * l11, l11 * l21, l21 * l21 + l22 * l22};
}

TangentVector random_vector(std::mt19937_64& rng) { return {uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)}; }

std::vector<Point2> interior_points(const ParamDomain& domain, std::mt19937_64& rng, int n) {
    const RectangleShape box = domain.bounding_box();
    std::vector<Point2> out;
    while (static_cast<int>(out.size()) < n) {
        const Point2 p{uniform(rng, box.u_min, box.u_max), uniform(rng, box.v_min, box.v_max)};
        const bool open_rect = !domain.is_rectangle() || (p.u > box.u_min && p.v > box.v_min);
        if (open_rect && domain.contains(p)) out.push_back(p);
    }
    return out;
}

class Suite {
public:
    Suite(std::string name, double tolerance) : result_{std::move(name), true, 0.0, {}}, tolerance_(tolerance) {}
    void observe(double error) { observe(error, tolerance_); }
    void observe(double error, double tolerance) {
        const double ratio = error / tolerance;
        if (!(ratio <= result_.worst_ratio)) result_.worst_ratio = std::isnan(ratio) ? INFINITY : ratio;
    }
    SuiteResult finish() {
        result_.passed = result_.worst_ratio <= 1.0;
        return result_;
    }
    SuiteResult fail(const std::string& why) {
        result_.passed = false;
        result_.detail = why;
        return result_;
    }

private:
    SuiteResult result_;
    double tolerance_;
};

template <class F>
SuiteResult guarded(const std::string& name, double tol, F body) {
    Suite s(name, tol);
    try {
        body(s);
    } catch (const std::exception& e) {
        return s.fail(e.what());
    }
    return s.finish();
}

double rel(double got, double want) { return std::fabs(got - want) / std::max(1.0, std::fabs(want)); }

SuiteResult expr_jets(const VerifyOptions& o) {
    return guarded("expr-jet finite-difference oracle", 1e-5, [&](Suite& s) {
        std::mt19937_64 rng(o.seed);
        constexpr double h = 1e-4;
        for (int n = 0; n < o.expressions; ++n) {
            const Expr e = random_expression(rng, 3);
            const double u = uniform(rng, -0.9, 0.9), v = uniform(rng, -0.9, 0.9);
            const Jet2 j = e.eval_jet(u, v);
            auto f = [&](double du, double dv) { return e.eval(u + du, v + dv); };
            const double f0 = f(0, 0);
            s.observe(rel(j.val, f0));
            s.observe(rel(j.d_u, (f(h, 0) - f(-h, 0)) / (2 * h)));
            s.observe(rel(j.d_v, (f(0, h) - f(0, -h)) / (2 * h)));
            s.observe(rel(j.d_uu, (f(h, 0) - 2 * f0 + f(-h, 0)) / (h * h)));
            s.observe(rel(j.d_vv, (f(0, h) - 2 * f0 + f(0, -h)) / (h * h)));
            s.observe(rel(j.d_uv, (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h)));
        }
    });
}

SuiteResult proposition1(const VerifyOptions& o) {
    return guarded("complex structure (defining relation, J^2, isometry, skew, parallelogram)", 1e-10, [&](Suite& s) {
        std::mt19937_64 rng(o.seed + 1);
        for (int n = 0; n < o.samples; ++n) {
            const MetricTensor g = random_spd(rng);
            const ComplexStructureTensor j = complex_structure(g);
            const AreaFormAtPoint a = area_form(g);
            const Mat2 G = Mat2::of(g), J = j.matrix;
            const TangentVector x = random_vector(rng), y = random_vector(rng);
            s.observe(std::fabs(inner(g, j(x), y) - a(x, y)));
            s.observe(max_abs(J * J + Mat2::identity()));
            s.observe(max_abs(J.transpose() * G * J - G));
            const Mat2 gj = G * J;
            s.observe(max_abs(gj + gj.transpose()));
            s.observe(parallelogram_residual(g, x, y));
            if (!(a(x, j(x)) > 0.0) && (x.x1 != 0.0 || x.x2 != 0.0)) s.observe(INFINITY);
        }
    });
}

SuiteResult proposition2(const VerifyOptions& o) {
    return guarded("bundle isomorphism (complex linearity, det >= 1)", 1e-12, [&](Suite& s) {
        std::mt19937_64 rng(o.seed + 2);
        for (int n = 0; n < o.samples; ++n) {
            const ComplexStructureTensor j = complex_structure(random_spd(rng));
            const ComplexStructureTensor jp = complex_structure(random_spd(rng));
            const Mat2 phi = bundle_isomorphism(j, jp);
            s.observe(max_abs(phi * j.matrix - jp.matrix * phi));
            s.observe(std::max(0.0, 1.0 - phi.det()));
        }
    });
}

SuiteResult conformal_invariance(const VerifyOptions& o) {
    return guarded("conformal invariance of J", 1e-12, [&](Suite& s) {
        std::mt19937_64 rng(o.seed + 3);
        for (int n = 0; n < o.samples; ++n) {
            const MetricTensor g = random_spd(rng);
            const double f = std::exp(uniform(rng, -3.0, 3.0));
            s.observe(max_abs(complex_structure(g.scaled(f)).matrix - complex_structure(g).matrix));
        }
    });
}

std::vector<Surface> zoo() {
    std::vector<Surface> out;
    for (const auto& kind : builtin_kinds()) out.push_back(make_surface(kind));
    return out;
}

SuiteResult curvature_oracles(const VerifyOptions& o) {
    return guarded("curvature: Christoffel route vs Brioschi vs analytic", 1e-6, [&](Suite& s) {
        std::mt19937_64 rng(o.seed + 4);
        for (const Surface& surf : zoo()) {
            for (const Point2 p : interior_points(surf.domain(), rng, o.points)) {
                const double k = gauss_curvature(surf.field, p);
                const double kb = gauss_curvature_brioschi(surf.field, p);
                s.observe(rel(k, kb));
                if (surf.analytic_K) {
                    s.observe(rel(k, surf.analytic_K(p)));
                    s.observe(rel(kb, surf.analytic_K(p)));
                }
            }
        }
    });
}

SuiteResult lemma1(const VerifyOptions& o) {
    return guarded("curvature 2-form equals K times the area form", 1e-5, [&](Suite& s) {
        std::mt19937_64 rng(o.seed + 5);
        for (const Surface& surf : zoo())
            for (const Point2 p : interior_points(surf.domain(), rng, o.points))
                s.observe(curvature_two_form(surf.field, p).lemma1_residual());
    });
}

SuiteResult integrality(const VerifyOptions&) {
    return guarded("Chern integrality and expected values at reference resolution", 1e-3, [&](Suite& s) {
        for (const Surface& surf : zoo()) {
            const ChernResult r = chern_number(surf.field, surf.reference);
            s.observe(r.residual);
            if (surf.expected_chern && r.rounded != *surf.expected_chern) s.observe(INFINITY);
            s.observe(r.two_path_gap(), 1e-6);
        }
    });
}

SuiteResult metric_independence(const VerifyOptions&) {
    return guarded("metric independence on the torus (conformal, perturbed, twist)", 1e-5, [&](Suite& s) {
        const Surface torus = make_surface("torus_revolution");
        const ChernResult base = chern_number(torus.field, torus.reference);
        const std::vector<MetricField> others{
            conformal_scale(torus.field, expression_scalar(Expr::parse("exp(0.6*sin(u))"))),
            perturb_metric(torus.field, 1, 0.1),
            pullback_metric(ParamMap::twist(torus.domain(), 0.3), torus.field)};
        for (const MetricField& g : others) {
            const ChernResult r = chern_number(g, torus.reference);
            s.observe(std::fabs(r.raw - base.raw));
            if (r.rounded != base.rounded) s.observe(INFINITY);
            const OneForm eta = connection_difference(torus.field, g, 128, 128);
            s.observe(stokes_residual(eta), 1e-6);
            s.observe(eta.imag_residual, 1e-10);
        }
    });
}

}  // namespace

std::vector<SuiteResult> run_verify_suites(const VerifyOptions& options) {
    return {expr_jets(options),    proposition1(options),      proposition2(options), conformal_invariance(options),
            curvature_oracles(options), lemma1(options), integrality(options), metric_independence(options)};
}

}  // namespace chernlab::cli
