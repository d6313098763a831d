#include "qcx/complex.hpp"

#include <algorithm>
#include <cmath>

#include "qcx/parallel.hpp"

namespace qcx {

namespace {

int half_dim(const ScalarField& psi) {
    if (psi.dim <= 0 || psi.dim % 2 != 0)
        throw std::invalid_argument("complex analysis needs an even real dimension, got " +
                                    std::to_string(psi.dim));
    return psi.dim / 2;
}

// One smooth branch of a distance min-decomposition: its value and how far
// the point sits from the branch's own non-smooth locus.
struct MinTerm {
    double value = 0;
    double clearance = kInf;
};

void collect_base_terms(const OpenSetModel& s, const Point& x, std::vector<MinTerm>& out) {
    switch (s.kind) {
        case SetKind::HalfSpace:
            out.push_back({(dot(s.normal, x) - s.offset) / norm2(s.normal), kInf});
            break;
        case SetKind::Ball: {
            Point d(x);
            for (size_t i = 0; i < d.size(); ++i) d[i] -= s.center[i];
            double r = norm2(d);
            out.push_back({s.radius - r, r});
            break;
        }
        case SetKind::BoxSet:
            for (size_t i = 0; i < s.box.size(); ++i) {
                if (std::isfinite(s.box[i].lo)) out.push_back({x[i] - s.box[i].lo, kInf});
                if (std::isfinite(s.box[i].hi)) out.push_back({s.box[i].hi - x[i], kInf});
            }
            break;
        case SetKind::PuncturedAxis:
            for (int j : s.punctured) {
                double v = std::fabs(x[static_cast<size_t>(j)]);
                out.push_back({v, v});
            }
            break;
        case SetKind::Intersection:
            for (const auto& part : s.parts) collect_base_terms(part, x, out);
            break;
        default:
            // sampled distance: one opaque branch, kinks undetectable
            out.push_back({dist_euclid(s, x), kInf});
            break;
    }
}

// Worst-case drift of a 1-Lipschitz-per-coordinate term across the Hessian
// stencil (two coordinates move at once, up to 2 relative steps each).
double stencil_band(const Point& p) {
    double m = 1;
    for (double c : p) m = std::max(m, std::fabs(c));
    return 1e-9 + 4e-4 * m;
}

bool kink_within_band(const std::vector<MinTerm>& terms, double band) {
    double mn = kInf;
    for (const auto& t : terms) mn = std::min(mn, t.value);
    if (mn == kInf) return false;
    if (mn <= band) return true;  // the stencil can cross the boundary itself
    int near = 0;
    for (const auto& t : terms) {
        if (t.value - mn > band) continue;
        ++near;
        if (t.clearance <= band) return true;  // an active branch kinks nearby
    }
    return near >= 2;  // two branches trade the min within the stencil
}

}  // namespace

Point ComplexPoint::embed() const {
    if (x.size() != y.size())
        throw std::invalid_argument("real and imaginary parts differ in length");
    Point p(x);
    p.insert(p.end(), y.begin(), y.end());
    return p;
}

ComplexPoint ComplexPoint::split(const Point& p) {
    if (p.size() % 2 != 0)
        throw std::invalid_argument("cannot split an odd-length vector into z = x + iy");
    size_t n = p.size() / 2;
    ComplexPoint z;
    z.x.assign(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n));
    z.y.assign(p.begin() + static_cast<std::ptrdiff_t>(n), p.end());
    return z;
}

LeviEstimate levi_matrix(const ScalarField& psi, const Point& p) {
    int n = half_dim(psi);
    int n2 = psi.dim;
    if (static_cast<int>(p.size()) != n2)
        throw std::invalid_argument("point dimension does not match the field");
    if (psi.smooth == Smoothness::C0)
        throw std::invalid_argument("levi matrix needs a C2 or smoother field");

    HessianEstimate h = fd_hessian(psi, p);
    auto H = [&](int a, int b) {
        return h.matrix[static_cast<size_t>(a) * static_cast<size_t>(n2) + static_cast<size_t>(b)];
    };

    LeviEstimate le;
    le.point = p;
    le.steps = h.steps;
    le.err_scale = h.err_scale;
    le.matrix.assign(static_cast<size_t>(n) * static_cast<size_t>(n), {0.0, 0.0});
    for (int k = 0; k < n; ++k) {
        le.matrix[static_cast<size_t>(k) * n + k] = {0.25 * (H(k, k) + H(n + k, n + k)), 0.0};
        for (int l = k + 1; l < n; ++l) {
            // the (k,l) and (l,k) assemblies are averaged so conjugate
            // symmetry holds exactly, not just up to FD noise
            double re = 0.5 * (0.25 * (H(k, l) + H(n + k, n + l)) +
                               0.25 * (H(l, k) + H(n + l, n + k)));
            double im = 0.5 * (0.25 * (H(k, n + l) - H(n + k, l)) -
                               0.25 * (H(l, n + k) - H(n + l, k)));
            le.matrix[static_cast<size_t>(k) * n + l] = {re, im};
            le.matrix[static_cast<size_t>(l) * n + k] = {re, -im};
        }
    }
    return le;
}

LeviClass levi_q_index(const ScalarField& psi, const Point& p, double tol) {
    LeviEstimate le = levi_matrix(psi, p);
    int n = psi.dim / 2;
    std::vector<double> vals = eig_hermitian(le.matrix, n);
    std::sort(vals.begin(), vals.end());
    double scale = 1;
    for (double v : vals) scale = std::max(scale, std::abs(v));
    LeviClass lc;
    lc.inertia = inertia(vals, scale, tol);
    lc.eigenvalues = std::move(vals);
    lc.scale = scale;
    return lc;
}

QIndexReport qpsh_index_on_grid(const ScalarField& psi, const GridSpec& grid, double tol) {
    half_dim(psi);
    if (static_cast<int>(grid.res.size()) != psi.dim)
        throw std::invalid_argument("grid dimension does not match the field");
    size_t total = grid.count();
    struct Cell {
        bool ok = false;
        PointRecord rec;
        std::string err;
        Point p;
    };
    std::vector<Cell> cells(total);
    parallel_for(total, [&](size_t i) {
        Cell& c = cells[i];
        c.p = grid.node(i);
        try {
            LeviClass lc = levi_q_index(psi, c.p, tol);
            c.rec = PointRecord{c.p, lc.inertia.neg, lc.inertia.zero, lc.inertia.pos, lc.scale,
                                std::move(lc.eigenvalues)};
            c.ok = true;
        } catch (const EvalError& e) {
            c.err = e.what();
        } catch (const NumericError& e) {
            c.err = e.what();
        }
    });
    QIndexReport rep;
    for (auto& c : cells) {
        if (c.ok) {
            rep.q_index = std::max(rep.q_index, c.rec.neg);
            rep.strict_q_index = std::max(rep.strict_q_index, c.rec.neg + c.rec.zero);
            rep.points_evaluated++;
            rep.records.push_back(std::move(c.rec));
        } else {
            rep.failed_points.push_back(std::move(c.p));
            rep.failures.push_back(std::move(c.err));
        }
    }
    return rep;
}

ScalarField rigid_lift(const ScalarField& u, double imag_half) {
    if (!(imag_half > 0))
        throw std::invalid_argument("imaginary window needs a positive half width");
    int n = u.dim;
    ScalarField f;
    f.dim = 2 * n;
    f.box = u.box;
    f.box.insert(f.box.end(), static_cast<size_t>(n), Interval{-imag_half, imag_half});
    f.smooth = u.smooth;
    f.label = "rigid lift of " + (u.label.empty() ? std::string("field") : u.label);
    f.eval = [u, n](const Point& p) {
        Point x(p.begin(), p.begin() + n);
        return u(x);
    };
    if (u.exact_hessian) {
        f.exact_hessian = [u, n](const Point& p) {
            Point x(p.begin(), p.begin() + n);
            std::vector<double> hx = u.exact_hessian(x);
            std::vector<double> h(static_cast<size_t>(4 * n * n), 0.0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    h[static_cast<size_t>(i) * static_cast<size_t>(2 * n) + static_cast<size_t>(j)] =
                        hx[static_cast<size_t>(i) * static_cast<size_t>(n) + static_cast<size_t>(j)];
            return h;
        };
    }
    return f;
}

MainTheoremReport check_first_main_theorem(const ScalarField& u, int q, const GridSpec& base_grid,
                                           int imag_res, double imag_half, double tol) {
    if (q < 0) throw std::invalid_argument("q must be nonnegative");
    if (static_cast<int>(base_grid.box.size()) != u.dim ||
        static_cast<int>(base_grid.res.size()) != u.dim)
        throw std::invalid_argument("base grid must match the field dimension");
    if (imag_res < 1) throw std::invalid_argument("imaginary resolution must be at least 1");

    ScalarField lift = rigid_lift(u, imag_half);
    MainTheoremReport rep;
    rep.q = q;

    size_t base_total = base_grid.count();
    std::vector<int> real_neg(base_total, -1);
    parallel_for(base_total, [&](size_t i) {
        try {
            real_neg[i] = hessian_q_index(u, base_grid.node(i), tol).inertia.neg;
        } catch (const EvalError&) {
        } catch (const NumericError&) {
        }
    });

    GridSpec g;
    g.box = base_grid.box;
    g.res = base_grid.res;
    g.box.insert(g.box.end(), static_cast<size_t>(u.dim), Interval{-imag_half, imag_half});
    g.res.insert(g.res.end(), static_cast<size_t>(u.dim), imag_res);
    size_t total = g.count();
    size_t imag_total = total / base_total;

    struct Cell {
        int state = 0;  // 1 ok, 2 failed
        int neg = 0;
        Point p;
    };
    std::vector<Cell> cells(total);
    parallel_for(total, [&](size_t i) {
        cells[i].p = g.node(i);
        try {
            cells[i].neg = levi_q_index(lift, cells[i].p, tol).inertia.neg;
            cells[i].state = 1;
        } catch (const EvalError&) {
            cells[i].state = 2;
        } catch (const NumericError&) {
            cells[i].state = 2;
        }
    });

    for (size_t i = 0; i < total; ++i) {
        size_t bi = i / imag_total;
        if (cells[i].state != 1 || real_neg[bi] < 0) {
            rep.failures++;
            continue;
        }
        rep.points++;
        rep.levi_q_index = std::max(rep.levi_q_index, cells[i].neg);
        rep.real_q_index = std::max(rep.real_q_index, real_neg[bi]);
        if (cells[i].neg != real_neg[bi]) {
            rep.mismatches++;
            if (rep.mismatch_points.size() < 16) rep.mismatch_points.push_back(std::move(cells[i].p));
        }
    }
    rep.real_at_most_q = rep.real_q_index <= q;
    rep.levi_at_most_q = rep.levi_q_index <= q;
    rep.equivalent = rep.real_at_most_q == rep.levi_at_most_q;
    return rep;
}

ScalarField tube_neg_log_dist(const TubeSpec& t) {
    if (!(t.half_width > 0)) throw std::invalid_argument("tube half width must be positive");
    int n = t.base.dim;
    ScalarField f;
    f.dim = 2 * n;
    f.box = set_bounding_box(t.base);
    double a = t.half_width;
    f.box.insert(f.box.end(), static_cast<size_t>(n),
                 std::isfinite(a) ? Interval{-a, a} : Interval{});
    f.smooth = Smoothness::C0;
    f.label = "-ln d2 on tube over " +
              (t.base.label.empty() ? std::string(set_kind_name(t.base.kind)) : t.base.label);
    OpenSetModel base = t.base;
    f.eval = [base, a, n](const Point& p) {
        Point x(p.begin(), p.begin() + n);
        double d = dist_euclid(base, x);
        if (std::isfinite(a))
            for (int j = 0; j < n; ++j)
                d = std::min(d, a - std::fabs(p[static_cast<size_t>(n + j)]));
        if (!(d > 0)) throw EvalError("point is outside the tube walls");
        return d == kInf ? -kInf : -std::log(d);
    };
    return f;
}

TubeCheckReport tube_pseudoconvexity_check(const TubeSpec& t, int q, const GridSpec& base_grid,
                                           int imag_res, const WitnessBudget& budget,
                                           uint64_t seed, double tol) {
    if (q < 0) throw std::invalid_argument("q must be nonnegative");
    int n = t.base.dim;
    if (static_cast<int>(base_grid.box.size()) != n ||
        static_cast<int>(base_grid.res.size()) != n)
        throw std::invalid_argument("base grid must match the base set dimension");
    if (imag_res < 1) throw std::invalid_argument("imaginary resolution must be at least 1");

    ScalarField psi = tube_neg_log_dist(t);
    // the kink filter below only lets nodes through where every distance
    // branch is isolated, so psi is smooth near each evaluated node even
    // though its global tag is C0
    psi.smooth = Smoothness::C2;
    double a = t.half_width;
    double awin = std::isfinite(a) ? a : 1.0;

    GridSpec g;
    g.box = base_grid.box;
    g.res = base_grid.res;
    g.box.insert(g.box.end(), static_cast<size_t>(n), Interval{-awin, awin});
    g.res.insert(g.res.end(), static_cast<size_t>(n), imag_res);

    TubeCheckReport rep;
    rep.q = q;
    size_t total = g.count();
    struct Cell {
        int state = 0;  // 1 ok, 2 kink, 3 failed
        PointRecord rec;
        std::string err;
        Point p;
    };
    std::vector<Cell> cells(total);
    const OpenSetModel& base = t.base;
    parallel_for(total, [&](size_t i) {
        Cell& c = cells[i];
        c.p = g.node(i);
        Point x(c.p.begin(), c.p.begin() + n);
        std::vector<MinTerm> terms;
        try {
            collect_base_terms(base, x, terms);
        } catch (const EvalError& e) {
            c.state = 3;
            c.err = e.what();
            return;
        }
        if (std::isfinite(a))
            for (int j = 0; j < n; ++j) {
                double yj = std::fabs(c.p[static_cast<size_t>(n + j)]);
                terms.push_back({a - yj, yj});
            }
        if (kink_within_band(terms, stencil_band(c.p))) {
            c.state = 2;
            return;
        }
        try {
            LeviClass lc = levi_q_index(psi, c.p, tol);
            c.rec = PointRecord{c.p, lc.inertia.neg, lc.inertia.zero, lc.inertia.pos, lc.scale,
                                std::move(lc.eigenvalues)};
            c.state = 1;
        } catch (const EvalError& e) {
            c.state = 3;
            c.err = e.what();
        } catch (const NumericError& e) {
            c.state = 3;
            c.err = e.what();
        }
    });
    for (auto& c : cells) {
        if (c.state == 1) {
            rep.levi.q_index = std::max(rep.levi.q_index, c.rec.neg);
            rep.levi.strict_q_index = std::max(rep.levi.strict_q_index, c.rec.neg + c.rec.zero);
            rep.levi.points_evaluated++;
            rep.levi.records.push_back(std::move(c.rec));
        } else if (c.state == 2) {
            rep.kinks_skipped++;
            if (rep.kink_points.size() < 16) rep.kink_points.push_back(std::move(c.p));
        } else {
            rep.levi.failed_points.push_back(std::move(c.p));
            rep.levi.failures.push_back(std::move(c.err));
        }
    }
    rep.levi_consistent = rep.levi.q_index <= q;
    rep.base_check = set_q_convex_check(t.base, q, base_grid.box, budget, seed);
    rep.agree = rep.levi_consistent == rep.base_check.consistent;
    rep.verdict = (rep.levi_consistent
                       ? "cylinder field consistent with " + std::to_string(q) +
                             "-pseudoconvexity at this resolution"
                       : "cylinder field not " + std::to_string(q) +
                             "-pseudoconvex at this resolution") +
                  (rep.agree ? "; base set check agrees" : "; base set check disagrees");
    if (rep.levi.points_evaluated == 0) rep.verdict += " (no smooth nodes sampled)";
    return rep;
}

ScalarField reinhardt_pullback(const ScalarField& u) {
    int n = u.dim;
    ScalarField f;
    f.dim = 2 * n;
    f.box.assign(static_cast<size_t>(2 * n), Interval{});
    for (int j = 0; j < n; ++j)
        if (j < static_cast<int>(u.box.size()) && std::isfinite(u.box[static_cast<size_t>(j)].hi)) {
            double r = std::exp(u.box[static_cast<size_t>(j)].hi);
            f.box[static_cast<size_t>(j)] = Interval{-r, r};
            f.box[static_cast<size_t>(n + j)] = Interval{-r, r};
        }
    f.smooth = u.smooth;
    f.label = "reinhardt pullback of " + (u.label.empty() ? std::string("field") : u.label);
    f.eval = [u, n](const Point& p) {
        Point t(static_cast<size_t>(n));
        for (int j = 0; j < n; ++j) {
            double m = std::hypot(p[static_cast<size_t>(j)], p[static_cast<size_t>(n + j)]);
            if (!(m > 0)) throw EvalError("reinhardt pullback needs every |z_j| > 0");
            t[static_cast<size_t>(j)] = std::log(m);
        }
        if (!u.box.empty() && !box_contains(u.box, t))
            throw EvalError("log point leaves the base domain");
        return u(t);
    };
    return f;
}

ReinhardtAgreement reinhardt_grid_agreement(const ScalarField& u, const GridSpec& log_grid,
                                            int angle_samples, double tol) {
    if (angle_samples < 1) throw std::invalid_argument("need at least one angle sample");
    if (static_cast<int>(log_grid.box.size()) != u.dim)
        throw std::invalid_argument("log grid must match the base field dimension");
    if (u.smooth == Smoothness::C0)
        throw std::invalid_argument("grid agreement needs a C2 or smoother base field");

    ScalarField psi = reinhardt_pullback(u);
    int n = u.dim;
    size_t total = log_grid.count();
    const double two_pi = 6.283185307179586;

    struct Cell {
        std::vector<int> state;     // per angle: 1 agreed, 2 disagreed, 3 skipped
        std::vector<Point> z;       // per angle
        bool node_skipped = false;
        Point t;
    };
    std::vector<Cell> cells(total);
    parallel_for(total, [&](size_t i) {
        Cell& c = cells[i];
        c.t = log_grid.node(i);
        // FD steps on psi move (x_j, y_j) by up to 2 relative steps each; in
        // log coordinates that reaches about 8e-4 * max(1, r_j) / r_j
        for (int j = 0; j < n; ++j) {
            double rj = std::exp(c.t[static_cast<size_t>(j)]);
            double need = 8e-4 * std::max(1.0, rj) / rj;
            double lo = u.box.empty() ? -kInf : u.box[static_cast<size_t>(j)].lo;
            double hi = u.box.empty() ? kInf : u.box[static_cast<size_t>(j)].hi;
            if (c.t[static_cast<size_t>(j)] - lo <= need || hi - c.t[static_cast<size_t>(j)] <= need) {
                c.node_skipped = true;
                return;
            }
        }
        int real_neg;
        try {
            real_neg = hessian_q_index(u, c.t, tol).inertia.neg;
        } catch (const EvalError&) {
            c.node_skipped = true;
            return;
        } catch (const NumericError&) {
            c.node_skipped = true;
            return;
        }
        for (int m = 0; m < angle_samples; ++m) {
            Point z(static_cast<size_t>(2 * n));
            for (int j = 0; j < n; ++j) {
                double theta = two_pi * std::fmod(0.13 + 0.61 * m + 0.29 * j, 1.0);
                double rj = std::exp(c.t[static_cast<size_t>(j)]);
                z[static_cast<size_t>(j)] = rj * std::cos(theta);
                z[static_cast<size_t>(n + j)] = rj * std::sin(theta);
            }
            int state;
            try {
                state = levi_q_index(psi, z, tol).inertia.neg == real_neg ? 1 : 2;
            } catch (const EvalError&) {
                state = 3;
            } catch (const NumericError&) {
                state = 3;
            }
            c.state.push_back(state);
            c.z.push_back(std::move(z));
        }
    });

    ReinhardtAgreement rep;
    for (auto& c : cells) {
        if (c.node_skipped) {
            rep.skipped++;
            if (rep.skipped_points.size() < 16) rep.skipped_points.push_back(std::move(c.t));
            continue;
        }
        for (size_t m = 0; m < c.state.size(); ++m) {
            if (c.state[m] == 3) {
                rep.skipped++;
                if (rep.skipped_points.size() < 16) rep.skipped_points.push_back(std::move(c.z[m]));
            } else {
                rep.compared++;
                if (c.state[m] == 1)
                    rep.agreed++;
                else if (rep.disagreements.size() < 16)
                    rep.disagreements.push_back(std::move(c.z[m]));
            }
        }
    }
    return rep;
}

}  // namespace qcx
