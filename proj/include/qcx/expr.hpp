#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qcx/common.hpp"

namespace qcx {

enum class ExprOp { Num, Var, Add, Sub, Mul, Div, Pow, Neg, Exp, Ln, Abs, Sqrt, Min, Max, Norm2 };

struct ExprAst;
using ExprPtr = std::shared_ptr<const ExprAst>;

struct ExprAst {
    ExprOp op;
    double value = 0;
    int var = -1;
    std::vector<ExprPtr> kids;
};

// Parsed expression over a fixed variable table; names[i] evaluates to p[i].
struct Expr {
    ExprPtr root;
    int dim = 0;
    std::vector<std::string> names;
    std::string source;
};

// Default variable table x1..xdim.
std::vector<std::string> default_var_names(int dim);
// Complex table x1..xn, y1..yn over 2n real coordinates.
std::vector<std::string> complex_var_names(int n);

Expr parse_expr(const std::string& src, int dim);
Expr parse_expr(const std::string& src, std::vector<std::string> names);

std::string print_expr(const Expr& e);

// Extended-real evaluation: -inf is legal, NaN or +inf raise EvalError.
double eval_expr(const Expr& e, const Point& p);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

}  // namespace qcx
