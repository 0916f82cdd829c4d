#include "ikg/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <utility>

#include "ikg/error.hpp"

namespace ikg {

namespace {

enum class Kind { Const, Coord, Neg, Add, Sub, Mul, Div, Pow, Func };

const char* func_name(Expr::Func f) {
    switch (f) {
        case Expr::Func::Exp: return "exp";
        case Expr::Func::Log: return "log";
        case Expr::Func::Sin: return "sin";
        case Expr::Func::Cos: return "cos";
        case Expr::Func::Sinh: return "sinh";
        case Expr::Func::Cosh: return "cosh";
        case Expr::Func::Sqrt: return "sqrt";
    }
    return "?";
}

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace

struct Expr::Node {
    Kind kind;
    double value = 0.0;  // Const payload; for Pow, the exponent
    int coord = -1;
    std::string name;  // coordinate name, kept for rendering
    Expr::Func func = Expr::Func::Exp;
    Expr a, b;
};

// ---- factories with constant folding --------------------------------------

Expr Expr::constant(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->value = v;
    return Expr(std::move(n));
}

Expr Expr::coord(std::string name, int index) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Coord;
    n->coord = index;
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr Expr::add(Expr a, Expr b) {
    double ca, cb;
    const bool fa = a.is_constant(&ca), fb = b.is_constant(&cb);
    if (fa && fb) return constant(ca + cb);
    if (fa && ca == 0.0) return b;
    if (fb && cb == 0.0) return a;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Add;
    n->a = std::move(a);
    n->b = std::move(b);
    return Expr(std::move(n));
}

Expr Expr::sub(Expr a, Expr b) {
    double ca, cb;
    const bool fa = a.is_constant(&ca), fb = b.is_constant(&cb);
    if (fa && fb) return constant(ca - cb);
    if (fb && cb == 0.0) return a;
    if (fa && ca == 0.0) return neg(std::move(b));
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sub;
    n->a = std::move(a);
    n->b = std::move(b);
    return Expr(std::move(n));
}

Expr Expr::mul(Expr a, Expr b) {
    double ca, cb;
    const bool fa = a.is_constant(&ca), fb = b.is_constant(&cb);
    if (fa && fb) return constant(ca * cb);
    if ((fa && ca == 0.0) || (fb && cb == 0.0)) return constant(0.0);
    if (fa && ca == 1.0) return b;
    if (fb && cb == 1.0) return a;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Mul;
    n->a = std::move(a);
    n->b = std::move(b);
    return Expr(std::move(n));
}

Expr Expr::div(Expr a, Expr b) {
    double ca, cb;
    const bool fa = a.is_constant(&ca), fb = b.is_constant(&cb);
    if (fb && cb != 0.0) {
        if (fa) return constant(ca / cb);
        if (cb == 1.0) return a;
    }
    if (fa && ca == 0.0 && !(fb && cb == 0.0)) return constant(0.0);
    auto n = std::make_shared<Node>();
    n->kind = Kind::Div;
    n->a = std::move(a);
    n->b = std::move(b);
    return Expr(std::move(n));
}

Expr Expr::neg(Expr a) {
    double ca;
    if (a.is_constant(&ca)) return constant(-ca);
    if (a.node_ && a.node_->kind == Kind::Neg) return a.node_->a;
    auto n = std::make_shared<Node>();
    n->kind = Kind::Neg;
    n->a = std::move(a);
    return Expr(std::move(n));
}

Expr Expr::pow(Expr base, double exponent) {
    double cb;
    if (exponent == 0.0) return constant(1.0);
    if (exponent == 1.0) return base;
    if (base.is_constant(&cb)) {
        const double v = std::pow(cb, exponent);
        if (std::isfinite(v)) return constant(v);
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->value = exponent;
    n->a = std::move(base);
    return Expr(std::move(n));
}

Expr Expr::apply(Func f, Expr arg) {
    double ca;
    if (arg.is_constant(&ca)) {
        double v = 0.0;
        switch (f) {
            case Func::Exp: v = std::exp(ca); break;
            case Func::Log: v = std::log(ca); break;
            case Func::Sin: v = std::sin(ca); break;
            case Func::Cos: v = std::cos(ca); break;
            case Func::Sinh: v = std::sinh(ca); break;
            case Func::Cosh: v = std::cosh(ca); break;
            case Func::Sqrt: v = std::sqrt(ca); break;
        }
        if (std::isfinite(v)) return constant(v);
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Func;
    n->func = f;
    n->a = std::move(arg);
    return Expr(std::move(n));
}

bool Expr::is_constant(double* value) const {
    if (!node_ || node_->kind != Kind::Const) return false;
    if (value) *value = node_->value;
    return true;
}

// ---- evaluation ------------------------------------------------------------

namespace {

[[noreturn]] void domain_error(const Expr& e, const std::string& what) {
    throw NumericError("domain violation: " + what + " in '" + e.render() + "'");
}

}  // namespace

double Expr::eval(std::span<const double> point) const {
    if (!node_) throw Error("eval of empty expression");
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::Const: return n.value;
        case Kind::Coord:
            if (n.coord < 0 || static_cast<size_t>(n.coord) >= point.size())
                throw Error("coordinate index out of range in eval");
            return point[static_cast<size_t>(n.coord)];
        case Kind::Neg: return -n.a.eval(point);
        case Kind::Add: return n.a.eval(point) + n.b.eval(point);
        case Kind::Sub: return n.a.eval(point) - n.b.eval(point);
        case Kind::Mul: return n.a.eval(point) * n.b.eval(point);
        case Kind::Div: {
            const double d = n.b.eval(point);
            if (d == 0.0) domain_error(*this, "division by zero");
            return n.a.eval(point) / d;
        }
        case Kind::Pow: {
            const double b = n.a.eval(point);
            const double c = n.value;
            if (b == 0.0 && c < 0.0) domain_error(*this, "zero base with negative exponent");
            if (b < 0.0 && c != std::floor(c)) domain_error(*this, "negative base with non-integer exponent");
            return std::pow(b, c);
        }
        case Kind::Func: {
            const double x = n.a.eval(point);
            switch (n.func) {
                case Func::Exp: return std::exp(x);
                case Func::Log:
                    if (x <= 0.0) domain_error(*this, "log of non-positive value");
                    return std::log(x);
                case Func::Sin: return std::sin(x);
                case Func::Cos: return std::cos(x);
                case Func::Sinh: return std::sinh(x);
                case Func::Cosh: return std::cosh(x);
                case Func::Sqrt:
                    if (x < 0.0) domain_error(*this, "sqrt of negative value");
                    return std::sqrt(x);
            }
        }
    }
    throw Error("corrupt expression node");
}

// ---- differentiation -------------------------------------------------------

Expr Expr::diff(int coord_index) const {
    if (!node_) throw Error("diff of empty expression");
    const Node& n = *node_;
    switch (n.kind) {
        case Kind::Const: return constant(0.0);
        case Kind::Coord: return constant(n.coord == coord_index ? 1.0 : 0.0);
        case Kind::Neg: return neg(n.a.diff(coord_index));
        case Kind::Add: return add(n.a.diff(coord_index), n.b.diff(coord_index));
        case Kind::Sub: return sub(n.a.diff(coord_index), n.b.diff(coord_index));
        case Kind::Mul:
            return add(mul(n.a.diff(coord_index), n.b), mul(n.a, n.b.diff(coord_index)));
        case Kind::Div:
            // (u/v)' = (u'v - uv') / v^2
            return div(sub(mul(n.a.diff(coord_index), n.b), mul(n.a, n.b.diff(coord_index))),
                       pow(n.b, 2.0));
        case Kind::Pow:
            // (u^c)' = c u^(c-1) u'
            return mul(mul(constant(n.value), pow(n.a, n.value - 1.0)), n.a.diff(coord_index));
        case Kind::Func: {
            const Expr da = n.a.diff(coord_index);
            switch (n.func) {
                case Func::Exp: return mul(apply(Func::Exp, n.a), da);
                case Func::Log: return div(da, n.a);
                case Func::Sin: return mul(apply(Func::Cos, n.a), da);
                case Func::Cos: return neg(mul(apply(Func::Sin, n.a), da));
                case Func::Sinh: return mul(apply(Func::Cosh, n.a), da);
                case Func::Cosh: return mul(apply(Func::Sinh, n.a), da);
                case Func::Sqrt: return div(da, mul(constant(2.0), apply(Func::Sqrt, n.a)));
            }
        }
    }
    throw Error("corrupt expression node");
}

// ---- rendering -------------------------------------------------------------

namespace {

// Precedence levels for parenthesization: higher binds tighter.
int precedence(const Expr::Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        case Kind::Const: return n.value < 0.0 ? 0 : 5;  // "-1.5" reparses as a negation
        case Kind::Coord:
        case Kind::Func: return 5;
    }
    return 5;
}

}  // namespace

std::string Expr::render() const {
    if (!node_) return "";
    const Node& n = *node_;
    auto child = [](const Expr& e, int min_prec, bool strict) {
        // Access the child's node through its own render recursion; we only
        // need its precedence, exposed via a second walk.
        const std::string s = e.render();
        const Node* cn = e.node_.get();
        const int p = cn ? precedence(*cn) : 5;
        if (p < min_prec || (strict && p == min_prec)) return "(" + s + ")";
        return s;
    };
    switch (n.kind) {
        case Kind::Const: return format_double(n.value);
        case Kind::Coord: return n.name;
        case Kind::Neg: return "-" + child(n.a, 3, false);
        case Kind::Add: return child(n.a, 1, false) + " + " + child(n.b, 1, true);
        case Kind::Sub: return child(n.a, 1, false) + " - " + child(n.b, 1, true);
        case Kind::Mul: return child(n.a, 2, false) + "*" + child(n.b, 2, true);
        case Kind::Div: return child(n.a, 2, false) + "/" + child(n.b, 2, true);
        case Kind::Pow: return child(n.a, 4, true) + "^" + format_double(n.value);
        case Kind::Func: return std::string(func_name(n.func)) + "(" + n.a.render() + ")";
    }
    return "";
}

bool Expr::same_structure(const Expr& other) const {
    const Node* x = node_.get();
    const Node* y = other.node_.get();
    if (!x || !y) return x == y;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case Kind::Const: return x->value == y->value;
        case Kind::Coord: return x->coord == y->coord && x->name == y->name;
        case Kind::Neg:
        case Kind::Func:
            return x->func == y->func && x->a.same_structure(y->a);
        case Kind::Pow: return x->value == y->value && x->a.same_structure(y->a);
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div:
            return x->a.same_structure(y->a) && x->b.same_structure(y->b);
    }
    return false;
}

// ---- parser ----------------------------------------------------------------

namespace {

class Parser {
  public:
    Parser(std::string_view text, std::span<const std::string> coords)
        : text_(text), coords_(coords) {}

    Expr run() {
        Expr e = expression();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return e;
    }

  private:
    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("syntax error at offset " + std::to_string(pos_) + ": " + what);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Expr expression() {
        Expr e = term();
        for (;;) {
            if (eat('+')) e = Expr::add(std::move(e), term());
            else if (eat('-')) e = Expr::sub(std::move(e), term());
            else return e;
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            if (eat('*')) e = Expr::mul(std::move(e), unary());
            else if (eat('/')) e = Expr::div(std::move(e), unary());
            else return e;
        }
    }

    Expr unary() {
        if (eat('-')) return Expr::neg(unary());
        return power();
    }

    Expr power() {
        Expr e = primary();
        while (eat('^')) {
            const size_t at = pos_;
            Expr ex = exponent_operand();
            double c;
            if (!ex.is_constant(&c)) {
                pos_ = at;
                fail("non-constant exponent");
            }
            e = Expr::pow(std::move(e), c);
        }
        return e;
    }

    // '^' accepts a literal, an optionally negated literal, or a
    // parenthesized expression that folds to a constant.
    Expr exponent_operand() {
        if (eat('-')) return Expr::neg(exponent_operand());
        const char c = peek();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            fail("non-constant exponent");
        if (c == '(') {
            eat('(');
            Expr e = expression();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        return number();
    }

    Expr number() {
        skip_ws();
        const size_t start = pos_;
        if (pos_ >= text_.size() || (!std::isdigit(static_cast<unsigned char>(text_[pos_])) &&
                                     text_[pos_] != '.'))
            fail("expected a number");
        double v = 0.0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        auto [end, ec] = std::from_chars(first, last, v);
        if (ec != std::errc()) {
            pos_ = start;
            fail("malformed number");
        }
        pos_ += static_cast<size_t>(end - first);
        return Expr::constant(v);
    }

    Expr primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expression();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            const std::string ident(text_.substr(start, pos_ - start));
            if (peek() == '(') {
                const Expr::Func f = lookup_func(ident, start);
                eat('(');
                Expr arg = expression();
                if (!eat(')')) fail("expected ')'");
                return Expr::apply(f, std::move(arg));
            }
            for (size_t i = 0; i < coords_.size(); ++i)
                if (coords_[i] == ident) return Expr::coord(ident, static_cast<int>(i));
            pos_ = start;
            fail("unknown identifier '" + ident + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr::Func lookup_func(const std::string& ident, size_t at) {
        if (ident == "exp") return Expr::Func::Exp;
        if (ident == "log") return Expr::Func::Log;
        if (ident == "sin") return Expr::Func::Sin;
        if (ident == "cos") return Expr::Func::Cos;
        if (ident == "sinh") return Expr::Func::Sinh;
        if (ident == "cosh") return Expr::Func::Cosh;
        if (ident == "sqrt") return Expr::Func::Sqrt;
        pos_ = at;
        fail("unknown function '" + ident + "'");
    }

    std::string_view text_;
    std::span<const std::string> coords_;
    size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, std::span<const std::string> coords) {
    return Parser(text, coords).run();
}

}  // namespace ikg
