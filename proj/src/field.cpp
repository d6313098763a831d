#include "qcx/field.hpp"

#include <cmath>

#include "json.hpp"
#include "json_util.hpp"

namespace qcx {

std::string smoothness_name(Smoothness s) {
    switch (s) {
        case Smoothness::C0: return "C0";
        case Smoothness::C2: return "C2";
        case Smoothness::CInf: return "Cinf";
    }
    return "C2";
}

Smoothness smoothness_from_name(const std::string& name) {
    if (name == "C0") return Smoothness::C0;
    if (name == "C2") return Smoothness::C2;
    if (name == "Cinf" || name == "CInf" || name == "Coo") return Smoothness::CInf;
    throw std::invalid_argument("unknown smoothness tag '" + name + "'");
}

double ScalarField::operator()(const Point& p) const {
    if (static_cast<int>(p.size()) != dim) throw EvalError("point dimension mismatch");
    if (!box.empty() && !box_contains(box, p)) throw EvalError("point outside domain box");
    double v = eval(p);
    if (!is_extended_real(v)) throw EvalError("field value is not an extended real");
    return v;
}

ScalarField field_from_expr(const Expr& e, Box box, Smoothness smooth) {
    if (static_cast<int>(box.size()) != e.dim)
        throw std::invalid_argument("box dimension does not match expression");
    ScalarField f;
    f.dim = e.dim;
    f.box = std::move(box);
    f.smooth = smooth;
    f.label = e.source.empty() ? print_expr(e) : e.source;
    f.eval = [e](const Point& p) { return eval_expr(e, p); };
    return f;
}

ScalarField field_from_expr(const std::string& src, int dim, Box box, Smoothness smooth) {
    return field_from_expr(parse_expr(src, dim), std::move(box), smooth);
}

namespace {

Box intersect_boxes(const Box& a, const Box& b) {
    if (a.size() != b.size()) throw std::invalid_argument("field dimension mismatch");
    Box out(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        out[i].lo = std::max(a[i].lo, b[i].lo);
        out[i].hi = std::min(a[i].hi, b[i].hi);
        if (!(out[i].lo < out[i].hi)) throw std::invalid_argument("field boxes do not overlap");
    }
    return out;
}

Smoothness min_smooth(Smoothness a, Smoothness b) {
    return static_cast<Smoothness>(std::min(static_cast<int>(a), static_cast<int>(b)));
}

}  // namespace

ScalarField field_add(const ScalarField& a, const ScalarField& b) {
    ScalarField f;
    f.dim = a.dim;
    f.box = intersect_boxes(a.box, b.box);
    f.smooth = min_smooth(a.smooth, b.smooth);
    f.label = "(" + a.label + ") + (" + b.label + ")";
    auto ea = a.eval, eb = b.eval;
    f.eval = [ea, eb](const Point& p) {
        double v = ea(p) + eb(p);
        if (std::isnan(v)) throw EvalError("non-real value in field sum");
        return v;
    };
    if (a.exact_hessian && b.exact_hessian) {
        auto ha = a.exact_hessian, hb = b.exact_hessian;
        f.exact_hessian = [ha, hb](const Point& p) {
            auto m = ha(p);
            auto n = hb(p);
            for (size_t i = 0; i < m.size(); ++i) m[i] += n[i];
            return m;
        };
    }
    return f;
}

ScalarField field_max(const ScalarField& a, const ScalarField& b) {
    ScalarField f;
    f.dim = a.dim;
    f.box = intersect_boxes(a.box, b.box);
    f.smooth = Smoothness::C0;
    f.label = "max(" + a.label + ", " + b.label + ")";
    auto ea = a.eval, eb = b.eval;
    f.eval = [ea, eb](const Point& p) { return std::fmax(ea(p), eb(p)); };
    return f;
}

ScalarField field_scale_shift(const ScalarField& a, double scale, double shift) {
    ScalarField f = a;
    f.label = std::to_string(scale) + "*(" + a.label + ") + " + std::to_string(shift);
    auto ea = a.eval;
    f.eval = [ea, scale, shift](const Point& p) {
        double v = scale * ea(p) + shift;
        if (std::isnan(v)) throw EvalError("non-real value in scaled field");
        return v;
    };
    f.exact_hessian = nullptr;
    if (a.exact_hessian) {
        auto ha = a.exact_hessian;
        f.exact_hessian = [ha, scale](const Point& p) {
            auto m = ha(p);
            for (auto& v : m) v *= scale;
            return m;
        };
    }
    return f;
}

Point fd_gradient(const ScalarField& f, const Point& p, double h0) {
    size_t n = p.size();
    Point g(n);
    Point q = p;
    for (size_t i = 0; i < n; ++i) {
        double h = h0 * std::max(1.0, std::fabs(p[i]));
        q[i] = p[i] + h;
        double fp = f(q);
        q[i] = p[i] - h;
        double fm = f(q);
        q[i] = p[i];
        g[i] = (fp - fm) / (2 * h);
        if (!std::isfinite(g[i])) throw EvalError("non-finite gradient entry");
    }
    return g;
}

HessianEstimate fd_hessian(const ScalarField& f, const Point& p, double h1) {
    size_t n = p.size();
    HessianEstimate est;
    est.point = p;
    est.steps.resize(n);
    for (size_t i = 0; i < n; ++i) est.steps[i] = h1 * std::max(1.0, std::fabs(p[i]));

    if (f.exact_hessian) {
        est.matrix = f.exact_hessian(p);
        est.err_scale = 0;
        return est;
    }

    double margin_needed = 0;
    for (size_t i = 0; i < n; ++i) margin_needed = std::max(margin_needed, 2 * est.steps[i]);
    if (!f.box.empty() && box_margin(f.box, p) < margin_needed)
        throw EvalError("point too close to the domain box for the Hessian stencil");

    est.matrix.assign(n * n, 0.0);
    Point q = p;
    double f0 = f(p);
    for (size_t i = 0; i < n; ++i) {
        double hi = est.steps[i];
        q[i] = p[i] + hi;
        double fp = f(q);
        q[i] = p[i] - hi;
        double fm = f(q);
        q[i] = p[i];
        est.matrix[i * n + i] = (fp - 2 * f0 + fm) / (hi * hi);
        for (size_t j = i + 1; j < n; ++j) {
            double hj = est.steps[j];
            q[i] = p[i] + hi; q[j] = p[j] + hj;
            double fpp = f(q);
            q[j] = p[j] - hj;
            double fpm = f(q);
            q[i] = p[i] - hi; q[j] = p[j] + hj;
            double fmp = f(q);
            q[j] = p[j] - hj;
            double fmm = f(q);
            q[i] = p[i]; q[j] = p[j];
            // The cross stencil is symmetric in (i, j), so mirroring the
            // entry is the same as averaging with the transpose.
            double v = (fpp - fpm - fmp + fmm) / (4 * hi * hj);
            est.matrix[i * n + j] = v;
            est.matrix[j * n + i] = v;
        }
    }
    for (double v : est.matrix)
        if (!std::isfinite(v)) throw EvalError("non-finite Hessian entry");
    double hmax = 0;
    for (double h : est.steps) hmax = std::max(hmax, h);
    est.err_scale = hmax * hmax * std::max(1.0, std::fabs(f0));
    return est;
}

std::string field_to_json(const ScalarField& f) {
    nlohmann::ordered_json j;
    j["dim"] = f.dim;
    j["expr"] = f.label;
    j["box"] = box_to_json(f.box);
    j["smooth"] = smoothness_name(f.smooth);
    return j.dump();
}

ScalarField field_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    int dim = j.at("dim").get<int>();
    std::string expr = j.at("expr").get<std::string>();
    Box box = j.contains("box") ? box_from_json_value(j.at("box")) : unit_sym_box(dim);
    Smoothness sm =
        j.contains("smooth") ? smoothness_from_name(j.at("smooth").get<std::string>()) : Smoothness::C2;
    return field_from_expr(expr, dim, std::move(box), sm);
}

}  // namespace qcx
