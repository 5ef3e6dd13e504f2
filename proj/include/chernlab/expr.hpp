#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>

#include "chernlab/jet.hpp"

namespace chernlab {

enum class Func { sin, cos, tan, exp, log, sqrt, sinh, cosh };

/// Immutable syntax-tree node of a metric-component expression.
struct ExprNode {
    enum class Kind { number, var_u, var_v, pi, neg, add, sub, mul, div, pow, call };

    Kind kind = Kind::number;
    double number = 0.0;
    Func func = Func::sin;
    std::size_t offset = 0;  // byte offset in the source text
    std::shared_ptr<const ExprNode> lhs;  // operand of neg/call, left operand of binaries
    std::shared_ptr<const ExprNode> rhs;
};

/// A parsed expression in the chart coordinates u, v.
///
/// Grammar (whitespace insignificant):
///
///     expr   := term (('+' | '-') term)*
///     term   := factor (('*' | '/') factor)*
///     factor := '-' factor | base ('^' factor)?
///     base   := number | 'u' | 'v' | 'pi' | func '(' expr ')' | '(' expr ')'
///     func   := sin | cos | tan | exp | log | sqrt | sinh | cosh
///
/// '+', '-', '*', '/' associate left, '^' associates right and binds tighter
/// than unary minus, so "-u^2" is -(u^2).
class Expr {
public:
    Expr() = default;

    /// Throws ParseError (with byte offset) on malformed text or unknown
    /// identifiers.
    static Expr parse(std::string_view text);

    /// Value and all first and second partials at (u, v). Throws DomainError
    /// when any node leaves its domain.
    Jet2 eval_jet(double u, double v) const;
    double eval(double u, double v) const { return eval_jet(u, v).val; }

    /// Canonical fully parenthesised form; parse(print()) reproduces the tree.
    std::string print() const;

    const ExprNode* root() const { return root_.get(); }
    bool empty() const { return !root_; }

    /// Structural equality (source offsets ignored).
    friend bool operator==(const Expr& a, const Expr& b);

private:
    explicit Expr(std::shared_ptr<const ExprNode> root) : root_(std::move(root)) {}
    friend Expr random_expression(std::mt19937_64& rng, int depth);

    std::shared_ptr<const ExprNode> root_;
};

inline Expr parse(std::string_view text) { return Expr::parse(text); }
inline Jet2 eval_jet(const Expr& e, double u, double v) { return e.eval_jet(u, v); }

/// Random expression over u, v that is smooth and finite on [-1, 1]^2.
/// Used by the self-verification suites.
Expr random_expression(std::mt19937_64& rng, int depth);

std::string_view func_name(Func f);

}  // namespace chernlab
