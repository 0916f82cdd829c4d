#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ikg {

/// Immutable scalar expression tree over named chart coordinates.
///
/// Grammar (usual precedence, left-associative binaries):
///   expr   := term (('+'|'-') term)*
///   term   := unary (('*'|'/') unary)*
///   unary  := '-' unary | power
///   power  := primary ('^' exponent)*
///   primary:= number | ident | ident '(' expr ')' | '(' expr ')'
/// The exponent must fold to a numeric constant, so differentiation stays
/// closed over the grammar. Functions: exp log sin cos sinh cosh sqrt.
class Expr {
  public:
    enum class Func { Exp, Log, Sin, Cos, Sinh, Cosh, Sqrt };

    Expr() = default;  // empty; only assignment is valid on a default value

    static Expr constant(double v);
    static Expr coord(std::string name, int index);
    static Expr add(Expr a, Expr b);
    static Expr sub(Expr a, Expr b);
    static Expr mul(Expr a, Expr b);
    static Expr div(Expr a, Expr b);
    static Expr neg(Expr a);
    static Expr pow(Expr base, double exponent);
    static Expr apply(Func f, Expr arg);

    bool empty() const { return node_ == nullptr; }

    /// IEEE double value at the given coordinate values. Throws NumericError
    /// on domain violations (log of non-positive, division by zero, ...),
    /// naming the offending subexpression.
    double eval(std::span<const double> point) const;

    /// Exact symbolic partial derivative with respect to coordinate index.
    /// Constant-folded, no further simplification.
    Expr diff(int coord_index) const;

    /// Text form; parse(render(e)) is structurally equal to e.
    std::string render() const;

    bool same_structure(const Expr& other) const;

    /// True when the tree is a bare constant; optionally reports its value.
    bool is_constant(double* value = nullptr) const;

    struct Node;

  private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// Parse expression text over the given coordinate names. Throws InputError
/// with a byte offset on syntax errors, unknown identifiers, and
/// non-constant exponents.
Expr parse_expr(std::string_view text, std::span<const std::string> coords);

}  // namespace ikg
