#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcx/common.hpp"
#include "qcx/expr.hpp"

namespace qcx {

enum class Smoothness { C0, C2, CInf };

std::string smoothness_name(Smoothness s);
Smoothness smoothness_from_name(const std::string& name);

// Scalar function on an open box, valued in [-inf, +inf). Evaluators built
// from expressions are the public format; raw callables are the internal
// oracle hook used by tests.
struct ScalarField {
    int dim = 0;
    Box box;
    Smoothness smooth = Smoothness::C2;
    std::function<double(const Point&)> eval;
    // Optional exact Hessian, row-major dim*dim; when present fd_hessian uses it.
    std::function<std::vector<double>(const Point&)> exact_hessian;
    std::string label;

    double operator()(const Point& p) const;
};

ScalarField field_from_expr(const Expr& e, Box box, Smoothness smooth);
ScalarField field_from_expr(const std::string& src, int dim, Box box,
                            Smoothness smooth = Smoothness::C2);

// Pointwise combinators; the result's box is the intersection, smoothness the minimum.
ScalarField field_add(const ScalarField& a, const ScalarField& b);
ScalarField field_max(const ScalarField& a, const ScalarField& b);
ScalarField field_scale_shift(const ScalarField& a, double scale, double shift);

struct HessianEstimate {
    Point point;
    std::vector<double> matrix;  // row-major dim*dim, symmetric
    std::vector<double> steps;
    double err_scale = 0;  // order-of-magnitude truncation estimate
};

// Central differences with per-axis relative steps.
Point fd_gradient(const ScalarField& f, const Point& p, double h0 = 1e-6);
HessianEstimate fd_hessian(const ScalarField& f, const Point& p, double h1 = 1e-4);

std::string field_to_json(const ScalarField& f);
ScalarField field_from_json(const std::string& text);

}  // namespace qcx
