#include "chernlab/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

#include "chernlab/errors.hpp"

namespace chernlab {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;
using Kind = ExprNode::Kind;

constexpr std::array<std::pair<std::string_view, Func>, 8> kFuncs{{
    {"sin", Func::sin},
    {"cos", Func::cos},
    {"tan", Func::tan},
    {"exp", Func::exp},
    {"log", Func::log},
    {"sqrt", Func::sqrt},
    {"sinh", Func::sinh},
    {"cosh", Func::cosh},
}};

NodePtr make_leaf(Kind kind, std::size_t offset, double number = 0.0) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->number = number;
    n->offset = offset;
    return n;
}

NodePtr make_unary(Kind kind, std::size_t offset, NodePtr operand, Func f = Func::sin) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->func = f;
    n->offset = offset;
    n->lhs = std::move(operand);
    return n;
}

NodePtr make_binary(Kind kind, std::size_t offset, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<ExprNode>();
    n->kind = kind;
    n->offset = offset;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("empty expression", pos_);
        NodePtr e = expr();
        skip_ws();
        if (pos_ < text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                                       text_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size())
                throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            skip_ws();
            const std::size_t at = pos_;
            if (accept('+'))
                lhs = make_binary(Kind::add, at, lhs, term());
            else if (accept('-'))
                lhs = make_binary(Kind::sub, at, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            skip_ws();
            const std::size_t at = pos_;
            if (accept('*'))
                lhs = make_binary(Kind::mul, at, lhs, factor());
            else if (accept('/'))
                lhs = make_binary(Kind::div, at, lhs, factor());
            else
                return lhs;
        }
    }

    NodePtr factor() {
        skip_ws();
        const std::size_t at = pos_;
        if (accept('-')) return make_unary(Kind::neg, at, factor());
        NodePtr b = base();
        skip_ws();
        const std::size_t caret = pos_;
        if (accept('^')) return make_binary(Kind::pow, caret, b, factor());
        return b;
    }

    NodePtr base() {
        skip_ws();
        const std::size_t at = pos_;
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (is_digit(c) || c == '.') return number();
        if (is_ident_start(c)) {
            std::size_t end = pos_;
            while (end < text_.size() && is_ident_char(text_[end])) ++end;
            const std::string_view ident = text_.substr(pos_, end - pos_);
            pos_ = end;
            if (ident == "u") return make_leaf(Kind::var_u, at);
            if (ident == "v") return make_leaf(Kind::var_v, at);
            if (ident == "pi") return make_leaf(Kind::pi, at);
            for (const auto& [name, f] : kFuncs) {
                if (ident == name) {
                    expect('(');
                    NodePtr arg = expr();
                    expect(')');
                    return make_unary(Kind::call, at, arg, f);
                }
            }
            throw ParseError("unknown identifier '" + std::string(ident) + "'", at);
        }
        throw ParseError(std::string("unexpected '") + c + "'", at);
    }

    NodePtr number() {
        const std::size_t start = pos_;
        std::size_t end = pos_;
        while (end < text_.size() && is_digit(text_[end])) ++end;
        if (end < text_.size() && text_[end] == '.') {
            ++end;
            while (end < text_.size() && is_digit(text_[end])) ++end;
        }
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t exp_end = end + 1;
            if (exp_end < text_.size() && (text_[exp_end] == '+' || text_[exp_end] == '-')) ++exp_end;
            if (exp_end < text_.size() && is_digit(text_[exp_end])) {
                while (exp_end < text_.size() && is_digit(text_[exp_end])) ++exp_end;
                end = exp_end;
            }
        }
        double value = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + end;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr != last) throw ParseError("malformed number", start);
        pos_ = end;
        return make_leaf(Kind::number, start, value);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

// An exponent written as an integer literal (optionally negated) selects the
// integer power, valid for bases of any sign.
bool integer_exponent(const ExprNode& n, int& out) {
    double value = 0.0;
    if (n.kind == Kind::number) {
        value = n.number;
    } else if (n.kind == Kind::neg && n.lhs->kind == Kind::number) {
        value = -n.lhs->number;
    } else {
        return false;
    }
    if (value != std::floor(value) || std::fabs(value) > 64.0) return false;
    out = static_cast<int>(value);
    return true;
}

void check_finite(const Jet2& j, const ExprNode& n) {
    if (!std::isfinite(j.val) || !std::isfinite(j.d_u) || !std::isfinite(j.d_v) || !std::isfinite(j.d_uu) ||
        !std::isfinite(j.d_uv) || !std::isfinite(j.d_vv))
        throw DomainError("non-finite result", n.offset);
}

Jet2 eval_node(const ExprNode& n, double u, double v) {
    switch (n.kind) {
        case Kind::number:
            return Jet2(n.number);
        case Kind::var_u:
            return Jet2::variable_u(u);
        case Kind::var_v:
            return Jet2::variable_v(v);
        case Kind::pi:
            return Jet2(std::numbers::pi);
        case Kind::neg:
            return -eval_node(*n.lhs, u, v);
        case Kind::add:
            return eval_node(*n.lhs, u, v) + eval_node(*n.rhs, u, v);
        case Kind::sub:
            return eval_node(*n.lhs, u, v) - eval_node(*n.rhs, u, v);
        case Kind::mul:
            return eval_node(*n.lhs, u, v) * eval_node(*n.rhs, u, v);
        case Kind::div: {
            const Jet2 den = eval_node(*n.rhs, u, v);
            if (den.val == 0.0) throw DomainError("division by zero", n.offset);
            Jet2 out = eval_node(*n.lhs, u, v) / den;
            check_finite(out, n);
            return out;
        }
        case Kind::pow: {
            const Jet2 b = eval_node(*n.lhs, u, v);
            int k = 0;
            Jet2 out;
            if (integer_exponent(*n.rhs, k)) {
                if (k < 0 && b.val == 0.0) throw DomainError("zero raised to a negative power", n.offset);
                out = pow_int(b, k);
            } else {
                if (b.val <= 0.0) throw DomainError("non-integer power of a nonpositive base", n.offset);
                const Jet2 e = eval_node(*n.rhs, u, v);
                if (e.d_u == 0.0 && e.d_v == 0.0 && e.d_uu == 0.0 && e.d_uv == 0.0 && e.d_vv == 0.0)
                    out = pow_real(b, e.val);
                else
                    out = exp(e * log(b));
            }
            check_finite(out, n);
            return out;
        }
        case Kind::call: {
            const Jet2 a = eval_node(*n.lhs, u, v);
            Jet2 out;
            switch (n.func) {
                case Func::sin: out = sin(a); break;
                case Func::cos: out = cos(a); break;
                case Func::tan: out = tan(a); break;
                case Func::exp: out = exp(a); break;
                case Func::log:
                    if (a.val <= 0.0) throw DomainError("log of a nonpositive value", n.offset);
                    out = log(a);
                    break;
                case Func::sqrt:
                    if (a.val <= 0.0) throw DomainError("sqrt of a nonpositive value", n.offset);
                    out = sqrt(a);
                    break;
                case Func::sinh: out = sinh(a); break;
                case Func::cosh: out = cosh(a); break;
            }
            check_finite(out, n);
            return out;
        }
    }
    return {};
}

void print_node(const ExprNode& n, std::string& out) {
    switch (n.kind) {
        case Kind::number: {
            std::array<char, 64> buf{};
            const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), n.number);
            out.append(buf.data(), res.ptr);
            return;
        }
        case Kind::var_u: out += 'u'; return;
        case Kind::var_v: out += 'v'; return;
        case Kind::pi: out += "pi"; return;
        case Kind::neg:
            out += "(-";
            print_node(*n.lhs, out);
            out += ')';
            return;
        case Kind::call:
            out += func_name(n.func);
            out += '(';
            print_node(*n.lhs, out);
            out += ')';
            return;
        default: break;
    }
    char op = '+';
    switch (n.kind) {
        case Kind::add: op = '+'; break;
        case Kind::sub: op = '-'; break;
        case Kind::mul: op = '*'; break;
        case Kind::div: op = '/'; break;
        case Kind::pow: op = '^'; break;
        default: break;
    }
    out += '(';
    print_node(*n.lhs, out);
    out += op;
    print_node(*n.rhs, out);
    out += ')';
}

bool equal_nodes(const ExprNode* a, const ExprNode* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    if (a->kind == Kind::number && a->number != b->number) return false;
    if (a->kind == Kind::call && a->func != b->func) return false;
    return equal_nodes(a->lhs.get(), b->lhs.get()) && equal_nodes(a->rhs.get(), b->rhs.get());
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
}

// Every generated subtree is bounded by a small constant on [-1, 1]^2, and
// every function argument stays inside its domain.
NodePtr random_node(std::mt19937_64& rng, int depth) {
    auto leaf = [&]() -> NodePtr {
        switch (rng() % 4) {
            case 0: return make_leaf(Kind::var_u, 0);
            case 1: return make_leaf(Kind::var_v, 0);
            case 2: return make_leaf(Kind::number, 0, std::round(uniform(rng, 0.1, 2.0) * 100.0) / 100.0);
            default: return make_binary(Kind::mul, 0, make_leaf(Kind::var_u, 0), make_leaf(Kind::var_v, 0));
        }
    };
    if (depth <= 0) return leaf();
    auto sub = [&]() { return random_node(rng, depth - 1); };
    // Squash a subtree into [-1, 1] so nested exponentials stay tame.
    auto squashed = [&]() { return make_unary(Kind::call, 0, sub(), Func::sin); };
    auto num = [](double x) { return make_leaf(Kind::number, 0, x); };
    switch (rng() % 12) {
        case 0: return make_binary(Kind::add, 0, sub(), sub());
        case 1: return make_binary(Kind::sub, 0, sub(), sub());
        case 2: return make_binary(Kind::mul, 0, sub(), sub());
        case 3:
            return make_binary(Kind::div, 0, sub(),
                               make_binary(Kind::add, 0, num(2.0), make_unary(Kind::call, 0, sub(), Func::cos)));
        case 4: return make_unary(Kind::call, 0, sub(), Func::sin);
        case 5: return make_unary(Kind::call, 0, sub(), Func::cos);
        case 6: return make_unary(Kind::call, 0, squashed(), Func::exp);
        case 7:
            return make_unary(Kind::call, 0,
                              make_binary(Kind::add, 0, num(2.0), make_unary(Kind::call, 0, sub(), Func::cos)),
                              Func::log);
        case 8:
            return make_unary(Kind::call, 0,
                              make_binary(Kind::add, 0, num(1.0), make_binary(Kind::pow, 0, sub(), num(2.0))),
                              Func::sqrt);
        case 9:
            return make_unary(Kind::call, 0, make_binary(Kind::mul, 0, num(0.5), squashed()), Func::tan);
        case 10: return make_unary(Kind::call, 0, squashed(), (rng() % 2) ? Func::sinh : Func::cosh);
        default: {
            if (rng() % 2) return make_binary(Kind::pow, 0, sub(), num(static_cast<double>(2 + rng() % 2)));
            return make_binary(Kind::pow, 0, make_binary(Kind::add, 0, num(1.5), squashed()), num(0.5));
        }
    }
}

}  // namespace

std::string_view func_name(Func f) {
    for (const auto& [name, fn] : kFuncs)
        if (fn == f) return name;
    return "?";
}

Expr Expr::parse(std::string_view text) { return Expr(Parser(text).parse()); }

Jet2 Expr::eval_jet(double u, double v) const {
    if (!root_) throw InvalidArgument("evaluating an empty expression");
    return eval_node(*root_, u, v);
}

std::string Expr::print() const {
    std::string out;
    if (root_) print_node(*root_, out);
    return out;
}

bool operator==(const Expr& a, const Expr& b) { return equal_nodes(a.root_.get(), b.root_.get()); }

Expr random_expression(std::mt19937_64& rng, int depth) { return Expr(random_node(rng, depth)); }

}  // namespace chernlab
