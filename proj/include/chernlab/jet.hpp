#pragma once

#include <cmath>

namespace chernlab {

/// Second-order Taylor jet of a scalar function of the chart coordinates
/// (u, v): the value together with every first and second partial.
///
/// Arithmetic propagates the product, quotient and chain rules exactly, so a
/// computation written once on doubles yields its derivatives when run on
/// jets. The mixed partial is stored once, which makes Clairaut symmetry hold
/// by construction.
struct Jet2 {
    double val = 0.0;
    double d_u = 0.0;
    double d_v = 0.0;
    double d_uu = 0.0;
    double d_uv = 0.0;
    double d_vv = 0.0;

    constexpr Jet2() = default;
    constexpr Jet2(double value) : val(value) {}  // NOLINT: implicit constants are intended
    constexpr Jet2(double value, double du, double dv, double duu, double duv, double dvv)
        : val(value), d_u(du), d_v(dv), d_uu(duu), d_uv(duv), d_vv(dvv) {}

    static constexpr Jet2 constant(double c) { return Jet2(c); }
    static constexpr Jet2 variable_u(double u) { return {u, 1.0, 0.0, 0.0, 0.0, 0.0}; }
    static constexpr Jet2 variable_v(double v) { return {v, 0.0, 1.0, 0.0, 0.0, 0.0}; }

    /// Applies a univariate function given its value and first two
    /// derivatives at `val`.
    constexpr Jet2 apply(double f0, double f1, double f2) const {
        return {f0,
                f1 * d_u,
                f1 * d_v,
                f2 * d_u * d_u + f1 * d_uu,
                f2 * d_u * d_v + f1 * d_uv,
                f2 * d_v * d_v + f1 * d_vv};
    }

    constexpr Jet2 operator-() const { return {-val, -d_u, -d_v, -d_uu, -d_uv, -d_vv}; }

    constexpr Jet2& operator+=(const Jet2& o) {
        val += o.val;
        d_u += o.d_u;
        d_v += o.d_v;
        d_uu += o.d_uu;
        d_uv += o.d_uv;
        d_vv += o.d_vv;
        return *this;
    }
    constexpr Jet2& operator-=(const Jet2& o) { return *this += -o; }
    constexpr Jet2& operator*=(const Jet2& o) {
        *this = Jet2{val * o.val,
                     d_u * o.val + val * o.d_u,
                     d_v * o.val + val * o.d_v,
                     d_uu * o.val + 2.0 * d_u * o.d_u + val * o.d_uu,
                     d_uv * o.val + d_u * o.d_v + d_v * o.d_u + val * o.d_uv,
                     d_vv * o.val + 2.0 * d_v * o.d_v + val * o.d_vv};
        return *this;
    }
    constexpr Jet2& operator/=(const Jet2& o) { return *this *= o.reciprocal(); }

    constexpr Jet2 reciprocal() const {
        const double r = 1.0 / val;
        return apply(r, -r * r, 2.0 * r * r * r);
    }

    friend constexpr Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend constexpr Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend constexpr Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
    friend constexpr Jet2 operator/(Jet2 a, const Jet2& b) { return a /= b; }

    friend constexpr bool operator==(const Jet2&, const Jet2&) = default;
};

inline Jet2 sin(const Jet2& x) {
    const double s = std::sin(x.val), c = std::cos(x.val);
    return x.apply(s, c, -s);
}
inline Jet2 cos(const Jet2& x) {
    const double s = std::sin(x.val), c = std::cos(x.val);
    return x.apply(c, -s, -c);
}
inline Jet2 tan(const Jet2& x) {
    const double t = std::tan(x.val);
    const double sec2 = 1.0 + t * t;
    return x.apply(t, sec2, 2.0 * t * sec2);
}
inline Jet2 exp(const Jet2& x) {
    const double e = std::exp(x.val);
    return x.apply(e, e, e);
}
inline Jet2 log(const Jet2& x) {
    const double r = 1.0 / x.val;
    return x.apply(std::log(x.val), r, -r * r);
}
inline Jet2 sqrt(const Jet2& x) {
    const double s = std::sqrt(x.val);
    return x.apply(s, 0.5 / s, -0.25 / (s * x.val));
}
inline Jet2 sinh(const Jet2& x) {
    const double s = std::sinh(x.val), c = std::cosh(x.val);
    return x.apply(s, c, s);
}
inline Jet2 cosh(const Jet2& x) {
    const double s = std::sinh(x.val), c = std::cosh(x.val);
    return x.apply(c, s, c);
}

/// x^n for integer n; valid for any sign of x (n < 0 needs x != 0).
inline Jet2 pow_int(const Jet2& x, int n) {
    if (n == 0) return Jet2(1.0);
    if (n == 1) return x;
    const double p2 = std::pow(x.val, n - 2);
    const double p1 = p2 * x.val;
    return x.apply(p1 * x.val, n * p1, static_cast<double>(n) * (n - 1) * p2);
}

/// x^e for real e; requires x > 0.
inline Jet2 pow_real(const Jet2& x, double e) {
    const double p2 = std::pow(x.val, e - 2.0);
    const double p1 = p2 * x.val;
    return x.apply(p1 * x.val, e * p1, e * (e - 1.0) * p2);
}

/// Composition f(x(u,v), y(u,v)) where `f` is a jet in the coordinates
/// (x, y) and `x`, `y` are jets in (u, v). Second-order chain rule.
inline Jet2 compose(const Jet2& f, const Jet2& x, const Jet2& y) {
    Jet2 out;
    out.val = f.val;
    out.d_u = f.d_u * x.d_u + f.d_v * y.d_u;
    out.d_v = f.d_u * x.d_v + f.d_v * y.d_v;
    out.d_uu = f.d_uu * x.d_u * x.d_u + 2.0 * f.d_uv * x.d_u * y.d_u + f.d_vv * y.d_u * y.d_u +
               f.d_u * x.d_uu + f.d_v * y.d_uu;
    out.d_uv = f.d_uu * x.d_u * x.d_v + f.d_uv * (x.d_u * y.d_v + x.d_v * y.d_u) +
               f.d_vv * y.d_u * y.d_v + f.d_u * x.d_uv + f.d_v * y.d_uv;
    out.d_vv = f.d_uu * x.d_v * x.d_v + 2.0 * f.d_uv * x.d_v * y.d_v + f.d_vv * y.d_v * y.d_v +
               f.d_u * x.d_vv + f.d_v * y.d_vv;
    return out;
}

}  // namespace chernlab
