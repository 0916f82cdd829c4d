#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "ikg/error.hpp"
#include "ikg/expr.hpp"
#include "ikg/rng.hpp"

using ikg::Expr;
using ikg::Rng;

namespace {

const std::vector<std::string> kTX{"t", "x1"};
const std::vector<std::string> kQP{"q", "p"};

double ev(const Expr& e, std::vector<double> p) { return e.eval(p); }

// Random expression generator confined to the grammar, biased toward
// compositions that stay well inside every function's domain.
Expr random_expr(Rng& rng, const std::vector<std::string>& coords, int depth) {
    const auto leaf = [&]() {
        if (rng.uniform() < 0.4) return Expr::constant(rng.uniform(-2.0, 2.0));
        const int i = static_cast<int>(rng.uniform() * coords.size()) % coords.size();
        return Expr::coord(coords[static_cast<size_t>(i)], i);
    };
    if (depth == 0) return leaf();
    const double r = rng.uniform();
    auto sub = [&]() { return random_expr(rng, coords, depth - 1); };
    if (r < 0.15) return Expr::add(sub(), sub());
    if (r < 0.30) return Expr::sub(sub(), sub());
    if (r < 0.45) return Expr::mul(sub(), sub());
    if (r < 0.55)  // keep the denominator away from zero
        return Expr::div(sub(), Expr::add(Expr::constant(3.0),
                                          Expr::apply(Expr::Func::Sin, sub())));
    if (r < 0.65) return Expr::pow(Expr::apply(Expr::Func::Cosh, sub()), 2.0);
    if (r < 0.72) return Expr::apply(Expr::Func::Sin, sub());
    if (r < 0.79) return Expr::apply(Expr::Func::Cos, sub());
    if (r < 0.86)
        return Expr::apply(Expr::Func::Exp,
                           Expr::mul(Expr::constant(0.3), Expr::apply(Expr::Func::Sin, sub())));
    if (r < 0.93)
        return Expr::apply(Expr::Func::Log,
                           Expr::add(Expr::constant(2.0), Expr::apply(Expr::Func::Cos, sub())));
    return Expr::apply(Expr::Func::Sqrt,
                       Expr::add(Expr::constant(2.0), Expr::apply(Expr::Func::Sin, sub())));
}

}  // namespace

TEST_CASE("parse: grammar examples") {
    const Expr e = ikg::parse_expr("x1^2 - t^2", kTX);
    CHECK(ev(e, {1.0, 2.0}) == doctest::Approx(3.0).epsilon(1e-14));

    const Expr prod = ikg::parse_expr("sin(q)*sin(q)", kQP);
    CHECK(ev(prod, {0.7, 0.0}) == doctest::Approx(std::sin(0.7) * std::sin(0.7)));

    // precedence: ^ over unary minus over * over +
    const Expr prec = ikg::parse_expr("-t^2 + 2*x1", kTX);
    CHECK(ev(prec, {3.0, 1.0}) == doctest::Approx(-7.0));
}

TEST_CASE("parse: errors carry byte offsets") {
    CHECK_THROWS_WITH_AS(ikg::parse_expr("x1 + ", kTX),
                         doctest::Contains("offset 5"), ikg::InputError);
    CHECK_THROWS_AS(ikg::parse_expr("x1 + zz", kTX), ikg::InputError);
    CHECK_THROWS_WITH_AS(ikg::parse_expr("t^x1", kTX),
                         doctest::Contains("non-constant exponent"), ikg::InputError);
    CHECK_THROWS_AS(ikg::parse_expr("foo(t)", kTX), ikg::InputError);
    // a parenthesized constant exponent is fine
    CHECK(ev(ikg::parse_expr("t^(-2)", kTX), {2.0, 0.0}) == doctest::Approx(0.25));
}

TEST_CASE("eval: identities and domain errors") {
    CHECK(ev(ikg::parse_expr("exp(0*q)", kQP), {5.0, -3.0}) == doctest::Approx(1.0));
    CHECK_THROWS_AS(ev(ikg::parse_expr("1/t", kTX), {0.0, 1.0}), ikg::NumericError);
    CHECK_THROWS_AS(ev(ikg::parse_expr("log(t)", kTX), {-1.0, 0.0}), ikg::NumericError);
    CHECK_THROWS_AS(ev(ikg::parse_expr("sqrt(t)", kTX), {-1.0, 0.0}), ikg::NumericError);
}

TEST_CASE("diff: chain rule and repeated differentiation") {
    const Expr e = ikg::parse_expr("sin(q)^2", kQP);
    const Expr d = e.diff(0);
    for (double q : {0.0, 0.3, 1.2, -0.8})
        CHECK(ev(d, {q, 0.0}) == doctest::Approx(2.0 * std::sin(q) * std::cos(q)).epsilon(1e-12));

    double c;
    CHECK(ikg::parse_expr("x1^2", kTX).diff(0).is_constant(&c));
    CHECK(c == 0.0);

    const Expr third = ikg::parse_expr("q^3", kQP).diff(0).diff(0).diff(0);
    CHECK(third.is_constant(&c));
    CHECK(c == doctest::Approx(6.0));
}

TEST_CASE("property: symbolic derivative matches central finite differences") {
    Rng rng(20260823);
    int checked = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Rng sub = rng.split(static_cast<std::uint64_t>(trial));
        const Expr e = random_expr(sub, kQP, 3);
        for (int c = 0; c < 2; ++c) {
            const Expr d = e.diff(c);
            std::vector<double> p{sub.uniform(-1.0, 1.0), sub.uniform(-1.0, 1.0)};
            const double h = 1e-5;
            std::vector<double> pp = p, pm = p;
            pp[static_cast<size_t>(c)] += h;
            pm[static_cast<size_t>(c)] -= h;
            const double fd = (e.eval(pp) - e.eval(pm)) / (2.0 * h);
            const double sym = d.eval(p);
            CHECK(std::abs(sym - fd) <= 1e-6 * (1.0 + std::abs(sym)));
            ++checked;
        }
    }
    CHECK(checked == 200);
}

TEST_CASE("property: diff is linear") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        Rng sub = rng.split(static_cast<std::uint64_t>(trial));
        const Expr e1 = random_expr(sub, kQP, 3);
        const Expr e2 = random_expr(sub, kQP, 3);
        const double a = sub.uniform(-3.0, 3.0);
        const Expr combo = Expr::add(Expr::mul(Expr::constant(a), e1), e2);
        const Expr lhs = combo.diff(0);
        std::vector<double> p{sub.uniform(-1.0, 1.0), sub.uniform(-1.0, 1.0)};
        const double rhs = a * e1.diff(0).eval(p) + e2.diff(0).eval(p);
        CHECK(lhs.eval(p) == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("property: parse(render(e)) is structurally equal to e") {
    Rng rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        Rng sub = rng.split(static_cast<std::uint64_t>(trial));
        const Expr e = random_expr(sub, kQP, 4);
        const Expr back = ikg::parse_expr(e.render(), kQP);
        CHECK(back.same_structure(e));
    }
    // also survive a differentiation pass (negative folded constants etc.)
    for (int trial = 0; trial < 100; ++trial) {
        Rng sub = rng.split(1000 + static_cast<std::uint64_t>(trial));
        const Expr e = random_expr(sub, kQP, 3).diff(0);
        CHECK(ikg::parse_expr(e.render(), kQP).same_structure(e));
    }
}
