#pragma once

/// Small expression language for orbit mean-curvature functions h(s).
///
/// Grammar (whitespace is insignificant):
///
///     expr  := term (('+' | '-') term)*
///     term  := unary (('*' | '/') unary)*
///     unary := '-' unary | power
///     power := atom ('^' unary)?
///     atom  := number | 's' | 'pi' | identifier
///            | function '(' expr ')' | '(' expr ')'
///
/// '^' is right-associative and binds tighter than unary minus, so -2^2 = -4
/// and 2^-1 = 0.5. The Unicode minus sign U+2212 is accepted wherever '-' is.
/// Identifiers other than s and pi are parameters; n is always admissible,
/// others must be declared when parsing.

#include "tsol/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace tsol::expr {

enum class Func { sin, cos, tan, ln, exp, sqrt, abs, atan, sinh, cosh, tanh, coth };

inline constexpr std::array<std::pair<std::string_view, Func>, 12> kFunctions{{
    {"sin", Func::sin},
    {"cos", Func::cos},
    {"tan", Func::tan},
    {"ln", Func::ln},
    {"exp", Func::exp},
    {"sqrt", Func::sqrt},
    {"abs", Func::abs},
    {"atan", Func::atan},
    {"sinh", Func::sinh},
    {"cosh", Func::cosh},
    {"tanh", Func::tanh},
    {"coth", Func::coth},
}};

inline std::optional<Func> find_function(std::string_view name) {
    for (const auto& [key, f] : kFunctions)
        if (key == name) return f;
    return std::nullopt;
}

inline std::string_view function_name(Func f) {
    for (const auto& [key, g] : kFunctions)
        if (g == f) return key;
    return "?";
}

enum class Op { constant, variable, parameter, negate, add, sub, mul, div, pow, call };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::constant;
    double value = 0.0;  // constant
    std::string name;    // parameter name; "pi" for the named constant
    Func func = Func::sin;
    NodePtr lhs;  // unary operand / call argument / left operand
    NodePtr rhs;
};

inline bool structurally_equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op || a->name != b->name) return false;
    if (a->op == Op::constant && a->value != b->value) return false;
    if (a->op == Op::call && a->func != b->func) return false;
    return structurally_equal(a->lhs.get(), b->lhs.get()) &&
           structurally_equal(a->rhs.get(), b->rhs.get());
}

struct EvalContext {
    double s = 0.0;
    std::map<std::string, double, std::less<>> params;
};

namespace detail {

inline std::string format_number(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

inline double checked(double v, std::string_view what) {
    if (std::isnan(v))
        throw EvalError(EvalError::Kind::domain, std::string(what) + ": result is not a number");
    if (!std::isfinite(v))
        throw EvalError(EvalError::Kind::non_finite, std::string(what) + ": non-finite result");
    return v;
}

inline double apply(Func f, double x) {
    using K = EvalError::Kind;
    switch (f) {
    case Func::sin: return std::sin(x);
    case Func::cos: return std::cos(x);
    case Func::tan: return checked(std::tan(x), "tan");
    case Func::ln:
        if (x <= 0.0) throw EvalError(K::domain, "ln of non-positive value " + format_number(x));
        return std::log(x);
    case Func::exp: return checked(std::exp(x), "exp");
    case Func::sqrt:
        if (x < 0.0) throw EvalError(K::domain, "sqrt of negative value " + format_number(x));
        return std::sqrt(x);
    case Func::abs: return std::fabs(x);
    case Func::atan: return std::atan(x);
    case Func::sinh: return checked(std::sinh(x), "sinh");
    case Func::cosh: return checked(std::cosh(x), "cosh");
    case Func::tanh: return std::tanh(x);
    case Func::coth:
        if (x == 0.0) throw EvalError(K::domain, "coth(0)");
        return checked(std::cosh(x) / std::sinh(x), "coth");
    }
    return 0.0;
}

inline double eval_node(const Node& node, const EvalContext& ctx) {
    using K = EvalError::Kind;
    switch (node.op) {
    case Op::constant: return node.value;
    case Op::variable: return ctx.s;
    case Op::parameter: {
        auto it = ctx.params.find(node.name);
        if (it == ctx.params.end())
            throw EvalError(K::unbound_identifier, "unbound identifier '" + node.name + "'");
        return it->second;
    }
    case Op::negate: return -eval_node(*node.lhs, ctx);
    case Op::add: return checked(eval_node(*node.lhs, ctx) + eval_node(*node.rhs, ctx), "+");
    case Op::sub: return checked(eval_node(*node.lhs, ctx) - eval_node(*node.rhs, ctx), "-");
    case Op::mul: return checked(eval_node(*node.lhs, ctx) * eval_node(*node.rhs, ctx), "*");
    case Op::div: {
        const double num = eval_node(*node.lhs, ctx);
        const double den = eval_node(*node.rhs, ctx);
        if (den == 0.0) throw EvalError(K::domain, "division by zero");
        return checked(num / den, "/");
    }
    case Op::pow: {
        const double base = eval_node(*node.lhs, ctx);
        const double ex = eval_node(*node.rhs, ctx);
        if (base == 0.0 && ex < 0.0) throw EvalError(K::domain, "zero to a negative power");
        return checked(std::pow(base, ex), "^");
    }
    case Op::call: return apply(node.func, eval_node(*node.lhs, ctx));
    }
    return 0.0;
}

inline void print_node(const Node& node, std::string& out) {
    auto binary = [&](std::string_view sym) {
        out += '(';
        print_node(*node.lhs, out);
        out += ' ';
        out += sym;
        out += ' ';
        print_node(*node.rhs, out);
        out += ')';
    };
    switch (node.op) {
    case Op::constant:
        if (!node.name.empty())
            out += node.name;
        else if (node.value < 0.0)
            out += "(-" + format_number(-node.value) + ")";
        else
            out += format_number(node.value);
        break;
    case Op::variable: out += 's'; break;
    case Op::parameter: out += node.name; break;
    case Op::negate:
        out += "(-";
        print_node(*node.lhs, out);
        out += ')';
        break;
    case Op::add: binary("+"); break;
    case Op::sub: binary("-"); break;
    case Op::mul: binary("*"); break;
    case Op::div: binary("/"); break;
    case Op::pow: binary("^"); break;
    case Op::call:
        out += function_name(node.func);
        out += '(';
        print_node(*node.lhs, out);
        out += ')';
        break;
    }
}

inline void collect_parameters(const Node* node, std::set<std::string>& out) {
    if (!node) return;
    if (node->op == Op::parameter) out.insert(node->name);
    collect_parameters(node->lhs.get(), out);
    collect_parameters(node->rhs.get(), out);
}

inline NodePtr substitute(const NodePtr& node, const std::map<std::string, double, std::less<>>& values) {
    if (!node) return node;
    if (node->op == Op::parameter) {
        auto it = values.find(node->name);
        if (it == values.end()) return node;
        auto c = std::make_shared<Node>();
        c->op = Op::constant;
        c->value = it->second;
        return c;
    }
    NodePtr l = substitute(node->lhs, values);
    NodePtr r = substitute(node->rhs, values);
    if (l == node->lhs && r == node->rhs) return node;
    auto copy = std::make_shared<Node>(*node);
    copy->lhs = std::move(l);
    copy->rhs = std::move(r);
    return copy;
}

class Parser {
public:
    Parser(std::string_view text, const std::set<std::string, std::less<>>& params)
        : text_(text), params_(params) {}

    NodePtr parse() {
        skip_space();
        if (at_end()) syntax("empty expression");
        NodePtr root = parse_expr();
        skip_space();
        if (!at_end()) syntax("unexpected character '" + std::string(1, text_[pos_]) + "'");
        return root;
    }

private:
    std::string_view text_;
    const std::set<std::string, std::less<>>& params_;
    std::size_t pos_ = 0;

    static constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";

    [[noreturn]] void syntax(const std::string& msg) const {
        throw ParseError(ParseError::Kind::syntax, pos_, "syntax error: " + msg);
    }

    bool at_end() const { return pos_ >= text_.size(); }

    void skip_space() {
        while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' ||
                             text_[pos_] == '\r'))
            ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (!at_end() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool accept_minus() {
        skip_space();
        if (accept('-')) return true;
        if (text_.substr(pos_, kUnicodeMinus.size()) == kUnicodeMinus) {
            pos_ += kUnicodeMinus.size();
            return true;
        }
        return false;
    }

    static NodePtr make_binary(Op op, NodePtr l, NodePtr r) {
        auto n = std::make_shared<Node>();
        n->op = op;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = make_binary(Op::add, lhs, parse_term());
            else if (accept_minus())
                lhs = make_binary(Op::sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*'))
                lhs = make_binary(Op::mul, lhs, parse_unary());
            else if (accept('/'))
                lhs = make_binary(Op::div, lhs, parse_unary());
            else
                return lhs;
        }
    }

    NodePtr parse_unary() {
        if (accept_minus()) {
            auto n = std::make_shared<Node>();
            n->op = Op::negate;
            n->lhs = parse_unary();
            return n;
        }
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (accept('^')) return make_binary(Op::pow, base, parse_unary());
        return base;
    }

    static bool ident_start(char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
    }
    static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

    NodePtr parse_atom() {
        skip_space();
        if (at_end()) syntax("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_expr();
            if (!accept(')')) syntax("expected ')'");
            return inner;
        }
        if ((c >= '0' && c <= '9') || c == '.') return parse_number();
        if (ident_start(c)) return parse_identifier();
        syntax("unexpected character '" + std::string(1, c) + "'");
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (!at_end() && ((text_[pos_] >= '0' && text_[pos_] <= '9') || text_[pos_] == '.')) ++pos_;
        if (!at_end() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
            if (p < text_.size() && text_[p] >= '0' && text_[p] <= '9') {
                pos_ = p;
                while (!at_end() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
            }
        }
        double v = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || ptr != last) {
            pos_ = start;
            syntax("malformed number");
        }
        auto n = std::make_shared<Node>();
        n->op = Op::constant;
        n->value = v;
        return n;
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (!at_end() && ident_char(text_[pos_])) ++pos_;
        const std::string name(text_.substr(start, pos_ - start));

        skip_space();
        const bool is_call = !at_end() && text_[pos_] == '(';
        if (is_call) {
            auto f = find_function(name);
            if (!f)
                throw ParseError(ParseError::Kind::unknown_function, start,
                                 "unknown function '" + name + "'");
            ++pos_;
            auto n = std::make_shared<Node>();
            n->op = Op::call;
            n->func = *f;
            n->lhs = parse_expr();
            if (!accept(')')) syntax("expected ')'");
            return n;
        }
        if (find_function(name)) {
            pos_ = start + name.size();
            syntax("expected '(' after function '" + name + "'");
        }

        auto n = std::make_shared<Node>();
        if (name == "s") {
            n->op = Op::variable;
        } else if (name == "pi") {
            n->op = Op::constant;
            n->name = "pi";
            n->value = 3.14159265358979323846;
        } else if (name == "n" || params_.count(name)) {
            n->op = Op::parameter;
            n->name = name;
        } else {
            throw ParseError(ParseError::Kind::unknown_identifier, start,
                             "unknown identifier '" + name + "'");
        }
        return n;
    }
};

} // namespace detail

/// Immutable parsed expression; cheap to copy and safe to share across threads.
class Expression {
public:
    Expression() = default;

    static Expression parse(std::string_view text, const std::set<std::string, std::less<>>& extra_params = {}) {
        detail::Parser p(text, extra_params);
        Expression e;
        e.root_ = p.parse();
        e.source_ = std::string(text);
        return e;
    }

    double eval(const EvalContext& ctx) const { return detail::eval_node(*root_, ctx); }

    /// Evaluates with only s bound; parameters must already be substituted.
    double operator()(double s) const {
        EvalContext ctx;
        ctx.s = s;
        return eval(ctx);
    }

    /// Fully parenthesized canonical form; re-parses to a structurally equal tree.
    std::string print() const {
        std::string out;
        detail::print_node(*root_, out);
        return out;
    }

    /// Replaces parameters by constants.
    Expression bind(const std::map<std::string, double, std::less<>>& values) const {
        Expression e;
        e.root_ = detail::substitute(root_, values);
        e.source_ = source_;
        return e;
    }

    std::set<std::string> parameters() const {
        std::set<std::string> out;
        detail::collect_parameters(root_.get(), out);
        return out;
    }

    const std::string& source() const noexcept { return source_; }
    const Node& root() const noexcept { return *root_; }

    friend bool operator==(const Expression& a, const Expression& b) {
        return structurally_equal(a.root_.get(), b.root_.get());
    }

private:
    NodePtr root_;
    std::string source_;
};

inline Expression parse(std::string_view text, const std::set<std::string, std::less<>>& extra_params = {}) {
    return Expression::parse(text, extra_params);
}

inline double eval(const Expression& e, const EvalContext& ctx) { return e.eval(ctx); }

enum class Stencil { central, forward, backward };

/// Finite-difference step cbrt(machine epsilon) * max(1, |s|).
inline double fd_step(double s) {
    return std::cbrt(std::numeric_limits<double>::epsilon()) * std::max(1.0, std::fabs(s));
}

/// Numerical derivative of a scalar function. The one-sided stencils are
/// open (they never evaluate at s) and exact for quadratics.
template <class Fn>
double derivative(Fn&& fn, double s, Stencil stencil = Stencil::central) {
    const double d = fd_step(s);
    switch (stencil) {
    case Stencil::central: return (fn(s + d) - fn(s - d)) / (2.0 * d);
    case Stencil::forward: return (-5.0 * fn(s + d) + 8.0 * fn(s + 2.0 * d) - 3.0 * fn(s + 3.0 * d)) / (2.0 * d);
    case Stencil::backward: return (5.0 * fn(s - d) - 8.0 * fn(s - 2.0 * d) + 3.0 * fn(s - 3.0 * d)) / (2.0 * d);
    }
    return 0.0;
}

inline double derivative_num(const Expression& e, const EvalContext& ctx, Stencil stencil = Stencil::central) {
    EvalContext local = ctx;
    return derivative(
        [&](double x) {
            local.s = x;
            return e.eval(local);
        },
        ctx.s, stencil);
}

} // namespace tsol::expr
