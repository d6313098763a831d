#include "doctest.h"

#include <cmath>
#include <cstring>

#include "qcx/expr.hpp"
#include "qcx/field.hpp"
#include "qcx/rng.hpp"

using namespace qcx;

TEST_CASE("parse and evaluate basic expressions") {
    Expr e = parse_expr("x1^2 - 2*x1*x2", 2);
    CHECK(eval_expr(e, {1.0, 2.0}) == doctest::Approx(-3.0));
    CHECK(eval_expr(e, {0.0, 5.0}) == doctest::Approx(0.0));

    Expr m = parse_expr("min(1-x1, x1)", 1);
    CHECK(eval_expr(m, {0.25}) == doctest::Approx(0.25));
    CHECK(eval_expr(m, {0.9}) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("precedence: power binds tighter than unary minus") {
    Expr e = parse_expr("-x1^2", 1);
    CHECK(eval_expr(e, {2.0}) == doctest::Approx(-4.0));
    Expr f = parse_expr("2^3^2", 1);
    CHECK(eval_expr(f, {0.0}) == doctest::Approx(64.0));  // left associative
    Expr g = parse_expr("6 - 2 - 1", 1);
    CHECK(eval_expr(g, {0.0}) == doctest::Approx(3.0));
    Expr h = parse_expr("12 / 2 / 3", 1);
    CHECK(eval_expr(h, {0.0}) == doctest::Approx(2.0));
}

TEST_CASE("minus infinity is a legal value, NaN and +inf are errors") {
    Expr lg = parse_expr("ln(x1)", 1);
    CHECK(eval_expr(lg, {0.0}) == -kInf);
    CHECK_THROWS_AS(eval_expr(lg, {-1.0}), EvalError);
    Expr sq = parse_expr("sqrt(-1 - x1^2)", 1);
    CHECK_THROWS_AS(eval_expr(sq, {0.5}), EvalError);
    Expr dv = parse_expr("1 / x1", 1);
    CHECK_THROWS_AS(eval_expr(dv, {0.0}), EvalError);  // +inf
    Expr mn = parse_expr("min(ln(x1), 4)", 1);
    CHECK(eval_expr(mn, {0.0}) == -kInf);
}

TEST_CASE("parse errors carry a byte offset") {
    CHECK_THROWS_AS(parse_expr("x3 + 1", 2), ParseError);
    try {
        parse_expr("1 + x3", 2);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.offset == 4);
    }
    CHECK_THROWS_AS(parse_expr("x1 +", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("foo(x1)", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("exp(x1, x1)", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("(x1", 1), ParseError);
    CHECK_THROWS_AS(parse_expr("x1 ) ", 1), ParseError);
}

TEST_CASE("numbers with exponents and decimals") {
    Expr e = parse_expr("1.5e2 + 2.5E-1 + .5", 1);
    CHECK(eval_expr(e, {0.0}) == doctest::Approx(150.75));
}

namespace {

ExprPtr random_ast(Rng& rng, int dim, int depth) {
    auto node = std::make_shared<ExprAst>();
    int pick = depth <= 0 ? static_cast<int>(rng.next_u64() % 2)
                          : static_cast<int>(rng.next_u64() % 12);
    switch (pick) {
        case 0:
            node->op = ExprOp::Num;
            node->value = std::floor(rng.uniform(0.0, 100.0)) / 8.0;
            break;
        case 1:
            node->op = ExprOp::Var;
            node->var = static_cast<int>(rng.next_u64() % dim);
            break;
        case 2: case 3: case 4: case 5: {
            static const ExprOp bin[] = {ExprOp::Add, ExprOp::Sub, ExprOp::Mul, ExprOp::Div};
            node->op = bin[pick - 2];
            node->kids = {random_ast(rng, dim, depth - 1), random_ast(rng, dim, depth - 1)};
            break;
        }
        case 6:
            node->op = ExprOp::Pow;
            node->kids = {random_ast(rng, dim, depth - 1), random_ast(rng, dim, depth - 1)};
            break;
        case 7:
            node->op = ExprOp::Neg;
            node->kids = {random_ast(rng, dim, depth - 1)};
            break;
        case 8: case 9: {
            static const ExprOp un[] = {ExprOp::Exp, ExprOp::Abs};
            node->op = un[pick - 8];
            node->kids = {random_ast(rng, dim, depth - 1)};
            break;
        }
        default: {
            static const ExprOp vn[] = {ExprOp::Min, ExprOp::Max, ExprOp::Norm2};
            node->op = vn[pick - 10];
            size_t n_args = 1 + rng.next_u64() % 3;
            for (size_t i = 0; i < n_args; ++i)
                node->kids.push_back(random_ast(rng, dim, depth - 1));
            break;
        }
    }
    return node;
}

}  // namespace

TEST_CASE("print/parse round trip on random trees") {
    Rng rng(20260819);
    for (int trial = 0; trial < 300; ++trial) {
        Expr e;
        e.dim = 3;
        e.names = default_var_names(3);
        e.root = random_ast(rng, 3, 4);
        std::string printed = print_expr(e);
        Expr back = parse_expr(printed, 3);
        CAPTURE(printed);
        CHECK(expr_equal(e.root, back.root));
        CHECK(print_expr(back) == printed);
    }
}

TEST_CASE("evaluation is pure: repeated calls bitwise identical") {
    Expr e = parse_expr("exp(x1) * min(x2, 2 - x2) - x1/3", 2);
    Point p{0.37, 1.21};
    double a = eval_expr(e, p);
    double b = eval_expr(e, p);
    CHECK(std::memcmp(&a, &b, sizeof a) == 0);
}

TEST_CASE("fd_gradient matches analytic derivative of exp at 0") {
    ScalarField f = field_from_expr("exp(x1)", 1, unit_sym_box(1, 4.0), Smoothness::CInf);
    Point g = fd_gradient(f, {0.0});
    CHECK(std::fabs(g[0] - 1.0) <= 1e-8);
}

TEST_CASE("fd_gradient of a constant is zero within 1e-9") {
    ScalarField f = field_from_expr("7", 1, unit_sym_box(1), Smoothness::CInf);
    CHECK(std::fabs(fd_gradient(f, {0.3})[0]) <= 1e-9);
}

TEST_CASE("fd_hessian reproduces quadratic coefficients within 1e-6 relative") {
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + static_cast<int>(trial % 2);
        std::vector<double> a(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                double v = rng.uniform(-2.0, 2.0);
                a[static_cast<size_t>(i) * n + j] = v;
                a[static_cast<size_t>(j) * n + i] = v;
            }
        ScalarField f;
        f.dim = n;
        f.box = unit_sym_box(n, 3.0);
        f.smooth = Smoothness::CInf;
        f.eval = [a, n](const Point& p) {
            double s = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    s += 0.5 * a[static_cast<size_t>(i) * n + j] * p[static_cast<size_t>(i)] *
                         p[static_cast<size_t>(j)];
            return s;
        };
        Point p(static_cast<size_t>(n));
        for (auto& x : p) x = rng.uniform(-1.0, 1.0);
        auto est = fd_hessian(f, p);
        double scale = 0;
        for (double v : a) scale = std::max(scale, std::fabs(v));
        for (size_t i = 0; i < a.size(); ++i)
            CHECK(std::fabs(est.matrix[i] - a[i]) <= 1e-6 * std::max(1.0, scale));
    }
}

TEST_CASE("fd_hessian of an affine function vanishes to rounding accuracy") {
    // the rounding floor of the second difference at step 1e-4 is about
    // 4*eps*|f|/h^2 ~ 4e-8, so 1e-7 is the honest bound here
    ScalarField f = field_from_expr("3*x1 - 2*x2 + 1", 2, unit_sym_box(2), Smoothness::CInf);
    auto est = fd_hessian(f, {0.1, -0.2});
    for (double v : est.matrix) CHECK(std::fabs(v) <= 1e-7);
}

TEST_CASE("fd_hessian rejects points too close to the domain edge") {
    ScalarField f = field_from_expr("x1^2", 1, Box{{0.0, 1.0}}, Smoothness::CInf);
    CHECK_THROWS_AS(fd_hessian(f, {1e-6}), EvalError);
    CHECK_NOTHROW(fd_hessian(f, {0.5}));
}

TEST_CASE("field JSON round trip") {
    ScalarField f = field_from_expr("x1^2 - 2*x1*x2", 2, unit_sym_box(2), Smoothness::C2);
    std::string j = field_to_json(f);
    ScalarField g = field_from_json(j);
    CHECK(g.dim == 2);
    CHECK(g.smooth == Smoothness::C2);
    CHECK(g({0.5, 0.25}) == doctest::Approx(f({0.5, 0.25})));
    CHECK(field_to_json(g) == j);
}

TEST_CASE("field evaluation outside the domain box errors") {
    ScalarField f = field_from_expr("x1", 1, Box{{0.0, 1.0}}, Smoothness::CInf);
    CHECK_THROWS_AS(f({2.0}), EvalError);
}
