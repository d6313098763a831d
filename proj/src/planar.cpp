#include "qcx/planar.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qcx {

namespace {

std::string point_text(const Point& p) {
    std::ostringstream out;
    out << "(";
    for (size_t i = 0; i < p.size(); ++i) out << (i ? ", " : "") << p[i];
    out << ")";
    return out.str();
}

void validate_family(const PlanarFamily& fam) {
    if (fam.k < 1 || static_cast<int>(fam.param_box.size()) != fam.k)
        throw std::invalid_argument("planar family needs a parameter box of its slice dim");
    for (const auto& iv : fam.param_box)
        if (!iv.bounded()) throw std::invalid_argument("planar family needs bounded parameters");
    if (!fam.map) throw std::invalid_argument("planar family needs a parametrization");
}

// Lattice over the closed parameter box, s_steps intervals per axis.
std::vector<std::pair<Point, bool>> parameter_grid(const Box& box, int s_steps) {
    std::vector<std::pair<Point, bool>> nodes;  // point, on-rim flag
    std::vector<int> idx(box.size(), 0);
    for (;;) {
        Point p(box.size());
        bool rim = false;
        for (size_t i = 0; i < box.size(); ++i) {
            p[i] = box[i].lo + box[i].extent() * idx[i] / s_steps;
            rim |= idx[i] == 0 || idx[i] == s_steps;
        }
        nodes.emplace_back(std::move(p), rim);
        size_t ax = 0;
        while (ax < box.size() && ++idx[ax] > s_steps) idx[ax++] = 0;
        if (ax == box.size()) break;
    }
    return nodes;
}

}  // namespace

ContinuityVerdict continuity_principle_test(const OpenSetModel& s, const PlanarFamily& fam,
                                            int t_steps, int s_steps) {
    validate_family(fam);
    if (t_steps < 2 || s_steps < 2)
        throw std::invalid_argument("continuity test needs t_steps >= 2 and s_steps >= 2");

    ContinuityVerdict v;
    auto nodes = parameter_grid(fam.param_box, s_steps);

    // hypotheses: closure of A_t inside the set for sampled t < 1
    for (int it = 0; it < t_steps; ++it) {
        double t = static_cast<double>(it) / t_steps;
        for (const auto& [sp, rim] : nodes) {
            Point p = fam.map(t, sp);
            if (!member(s, p)) {
                v.status = ContinuityVerdict::Status::Inapplicable;
                v.note = "a slice leaves the set before time 1, the principle does not apply";
                v.trace.push_back("t=" + std::to_string(t) + ": " + point_text(p) +
                                  " is outside");
                return v;
            }
        }
    }
    // hypotheses: boundary of A_1 inside the set
    for (const auto& [sp, rim] : nodes) {
        if (!rim) continue;
        Point p = fam.map(1.0, sp);
        if (!member(s, p)) {
            v.status = ContinuityVerdict::Status::Inapplicable;
            v.note = "the boundary of the final slice is not inside the set";
            v.trace.push_back("t=1 rim: " + point_text(p) + " is outside");
            return v;
        }
    }
    v.trace.push_back("closure samples inside the set for " + std::to_string(t_steps) +
                      " times below 1 and the final rim, " + std::to_string(nodes.size()) +
                      " parameter nodes each");

    // conclusion: the final slice itself
    for (const auto& [sp, rim] : nodes) {
        Point p = fam.map(1.0, sp);
        if (!member(s, p)) {
            v.status = ContinuityVerdict::Status::Violated;
            v.t_star = 1.0;
            v.offending = p;
            v.note = "final slice contains a point outside the set";
            v.trace.push_back("t=1: " + point_text(p) + " is outside");
            return v;
        }
    }
    v.status = ContinuityVerdict::Status::Holds;
    v.note = "holds at this sampling resolution";
    return v;
}

GraphFamilyResult graph_complement_family(const OpenSetModel& graph_set, const Point& x1,
                                          const Point& x2, double t0) {
    if (graph_set.kind != SetKind::GraphComplement)
        throw std::invalid_argument("touching families are built over graph complements");
    size_t n = static_cast<size_t>(graph_set.graph_n);
    size_t k = graph_set.graph_f.size();
    if (x1.size() != n || x2.size() != n)
        throw std::invalid_argument("chord endpoints must live in the base space");
    if (!(std::fabs(t0) < 1))
        throw std::invalid_argument("the probe parameter must be interior, |t0| < 1");

    auto chord = [&](double c) {
        Point p(n);
        for (size_t i = 0; i < n; ++i) p[i] = 0.5 * (1 - c) * x1[i] + 0.5 * (1 + c) * x2[i];
        return p;
    };
    const ScalarField& f1 = graph_set.graph_f[0];
    double f1a = f1(x1), f1b = f1(x2);
    Point x0 = chord(t0);
    double mid = f1(x0);
    double gap = mid - (0.5 * (1 - t0) * f1a + 0.5 * (1 + t0) * f1b);
    double scale = std::max({1.0, std::fabs(mid), std::fabs(f1a), std::fabs(f1b)});
    if (std::fabs(gap) <= 1e-9 * scale)
        throw std::invalid_argument(
            "the leading component shows no strict mid-convexity violation at this data");

    double sign = gap > 0 ? 1.0 : -1.0;
    double r0 = std::fabs(gap);
    Point y0(k > 1 ? k - 1 : 0);
    for (size_t j = 1; j < k; ++j) {
        Point arg = x0;
        y0[j - 1] = graph_set.graph_f[j](arg);
    }

    GraphFamilyResult out;
    out.r0 = r0;
    out.x0 = x0;
    out.flipped = sign < 0;
    out.family.k = static_cast<int>(k);
    out.family.param_box = Box{Interval{-1, 1}};
    for (size_t j = 1; j < k; ++j) out.family.param_box.push_back(Interval{-r0 / 2, r0 / 2});
    out.family.label = "touching family over " +
                       (graph_set.label.empty() ? std::string("a graph complement")
                                                : graph_set.label);
    out.family.map = [x1, x2, f1a, f1b, y0, sign, r0, n](double t, const Point& sp) {
        double c = sp[0];
        Point p(n);
        for (size_t i = 0; i < n; ++i) p[i] = 0.5 * (1 - c) * x1[i] + 0.5 * (1 + c) * x2[i];
        double lift = 0.5 * (1 - c) * f1a + 0.5 * (1 + c) * f1b + sign * (2 - t) * r0;
        p.push_back(lift);
        for (size_t j = 0; j < y0.size(); ++j) p.push_back(y0[j] + sp[j + 1]);
        return p;
    };
    return out;
}

ScalarField graph_complement_exhaustion(const OpenSetModel& graph_set) {
    if (graph_set.kind != SetKind::GraphComplement)
        throw std::invalid_argument("graph exhaustions are built over graph complements");
    size_t n = static_cast<size_t>(graph_set.graph_n);

    // affinity probes: second differences of each component must vanish
    Point p1(n, 0.0), p2(n);
    for (size_t i = 0; i < n; ++i) p2[i] = 0.4 - 0.15 * static_cast<double>(i);
    for (const auto& comp : graph_set.graph_f) {
        for (const Point& probe : {p1, p2}) {
            HessianEstimate h = fd_hessian(comp, probe);
            double scale = std::max(1.0, std::fabs(comp(probe)));
            for (double entry : h.matrix)
                if (std::fabs(entry) > 1e-5 * scale)
                    throw std::invalid_argument(
                        "graph exhaustion needs an affine map, second differences do not vanish");
        }
    }

    OpenSetModel s = graph_set;
    ScalarField f;
    f.dim = s.dim;
    f.box = Box(static_cast<size_t>(s.dim));
    f.smooth = Smoothness::CInf;
    f.label = "-ln|f - y| + |x|^2 off " +
              (s.label.empty() ? std::string("the graph") : s.label);
    f.eval = [s](const Point& p) {
        Point arg(p.begin(), p.begin() + s.graph_n);
        double d2 = 0;
        for (size_t j = 0; j < s.graph_f.size(); ++j) {
            double w = s.graph_f[j](arg) - p[static_cast<size_t>(s.graph_n) + j];
            d2 += w * w;
        }
        if (d2 == 0) throw EvalError("point lies on the graph");
        return -0.5 * std::log(d2) + dot(p, p);
    };
    return f;
}

}  // namespace qcx
