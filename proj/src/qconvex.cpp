#include "qcx/qconvex.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <cmath>
#include <stdexcept>

#include "qcx/parallel.hpp"
#include "qcx/rng.hpp"

namespace qcx {

namespace {

void validate_grid(const GridSpec& g) {
    if (g.res.size() != g.box.size())
        throw std::invalid_argument("grid resolution list does not match the box dimension");
    for (size_t i = 0; i < g.res.size(); ++i) {
        if (g.res[i] <= 0) throw std::invalid_argument("grid resolutions must be positive");
        if (!g.box[i].bounded()) throw std::invalid_argument("grid box must be bounded");
    }
}

Point box_center(const Box& b) {
    Point c(b.size());
    for (size_t i = 0; i < b.size(); ++i) c[i] = 0.5 * (b[i].lo + b[i].hi);
    return c;
}

std::optional<std::vector<Point>> gram_schmidt(const std::vector<Point>& raw) {
    std::vector<Point> basis;
    for (const auto& v : raw) {
        Point w = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) {
                double c = dot(w, b);
                for (size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
            }
        double nw = norm2(w);
        if (nw <= 1e-10 * std::max(1.0, norm2(v))) return std::nullopt;
        for (auto& x : w) x /= nw;
        basis.push_back(std::move(w));
    }
    return basis;
}

// Frames spanning the same subspace are interchangeable for the search, so
// compare the orthogonal projectors entrywise.
bool same_subspace(const std::vector<Point>& a, const std::vector<Point>& b, int n) {
    if (a.size() != b.size()) return false;
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) {
            double pa = 0, pb = 0;
            for (const auto& v : a) pa += v[size_t(r)] * v[size_t(c)];
            for (const auto& v : b) pb += v[size_t(r)] * v[size_t(c)];
            if (std::abs(pa - pb) > 1e-6) return false;
        }
    return true;
}

}  // namespace

size_t GridSpec::count() const {
    validate_grid(*this);
    size_t c = 1;
    for (int r : res) c *= static_cast<size_t>(r);
    return c;
}

Point GridSpec::node(size_t flat) const {
    Point p(box.size());
    for (size_t i = box.size(); i-- > 0;) {
        size_t r = static_cast<size_t>(res[i]);
        size_t j = flat % r;
        flat /= r;
        p[i] = box[i].lo + (static_cast<double>(j) + 0.5) * box[i].extent() / static_cast<double>(r);
    }
    return p;
}

Point AffineSlice::ambient(const Point& s) const {
    Point p = base;
    for (size_t j = 0; j < basis.size(); ++j)
        for (size_t i = 0; i < p.size(); ++i) p[i] += s[j] * basis[j][i];
    return p;
}

AffineSlice make_slice(Point base, std::vector<Point> raw_directions) {
    for (const auto& v : raw_directions)
        if (v.size() != base.size())
            throw std::invalid_argument("slice direction dimension mismatch");
    auto basis = gram_schmidt(raw_directions);
    if (!basis) throw std::invalid_argument("slice directions are linearly dependent");
    return AffineSlice{std::move(base), std::move(*basis)};
}

PointClass hessian_q_index(const ScalarField& f, const Point& p, double tol) {
    if (f.smooth == Smoothness::C0)
        throw std::invalid_argument("Hessian classification needs a C2 or smoother field");
    HessianEstimate h = fd_hessian(f, p);
    EigResult eig = eig_symmetric(h.matrix, f.dim);
    double scale = 1;
    for (double v : eig.values) scale = std::max(scale, std::abs(v));
    PointClass pc;
    pc.inertia = inertia(eig.values, scale, tol);
    pc.eigenvalues = std::move(eig.values);
    pc.scale = scale;
    return pc;
}

QIndexReport classify_on_grid(const ScalarField& f, const GridSpec& grid, double tol) {
    if (static_cast<int>(grid.res.size()) != f.dim)
        throw std::invalid_argument("grid dimension does not match the field");
    if (f.smooth == Smoothness::C0)
        throw std::invalid_argument("Hessian classification needs a C2 or smoother field");
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
            PointClass pc = hessian_q_index(f, c.p, tol);
            c.rec = PointRecord{c.p, pc.inertia.neg, pc.inertia.zero, pc.inertia.pos, pc.scale,
                                std::move(pc.eigenvalues)};
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

double lambda_max_estimate(const ScalarField& f, const Point& p,
                           const std::vector<double>& eps_list) {
    double u0 = f(p);
    if (!std::isfinite(u0)) throw EvalError("curvature estimate needs a finite base value");
    Point g = fd_gradient(f, p);
    auto dirs = unit_sphere_points(f.dim, 64 * f.dim);
    double best = -kInf;
    bool any = false;
    for (double eps : eps_list) {
        for (const auto& h : dirs) {
            Point p2 = axpy(eps, h, p);
            if (!box_contains(f.box, p2)) continue;
            double u2;
            try {
                u2 = f(p2);
            } catch (const EvalError&) {
                continue;
            }
            if (!std::isfinite(u2)) continue;
            best = std::max(best, 2.0 * (u2 - u0 - eps * dot(g, h)) / (eps * eps));
            any = true;
        }
    }
    if (!any) throw NumericError("no admissible curvature probes at this point");
    return best;
}

SumCheckReport check_sum_theorem(const ScalarField& u1, const ScalarField& u2,
                                 const GridSpec& grid, double tol) {
    ScalarField sum = field_add(u1, u2);
    size_t total = grid.count();
    struct Row {
        int state = 0;  // 0 skipped, 1 satisfied, 2 violated
        Point p;
    };
    std::vector<Row> rows(total);
    parallel_for(total, [&](size_t i) {
        rows[i].p = grid.node(i);
        try {
            auto a = hessian_q_index(u1, rows[i].p, tol);
            auto b = hessian_q_index(u2, rows[i].p, tol);
            auto c = hessian_q_index(sum, rows[i].p, tol);
            rows[i].state = c.inertia.neg <= a.inertia.neg + b.inertia.neg ? 1 : 2;
        } catch (const EvalError&) {
        } catch (const NumericError&) {
        }
    });
    SumCheckReport rep;
    for (auto& r : rows) {
        if (r.state == 0) {
            rep.skipped++;
        } else {
            rep.points++;
            if (r.state == 2) rep.violations.push_back(std::move(r.p));
        }
    }
    return rep;
}

GlueResult glue(const ScalarField& u, const ScalarField& u1,
                const std::function<bool(const Point&)>& member1,
                const std::vector<Point>& boundary1_samples, double tol) {
    if (u.dim != u1.dim) throw std::invalid_argument("glued fields must share a dimension");
    GlueResult out;
    ScalarField g;
    g.dim = u.dim;
    g.box = u.box;
    g.smooth = Smoothness::C0;
    g.label = "glue(" + (u.label.empty() ? "outer" : u.label) + "," +
              (u1.label.empty() ? "inner" : u1.label) + ")";
    ScalarField outer = u, inner = u1;
    auto inside = member1;
    g.eval = [outer, inner, inside](const Point& p) {
        double v = outer(p);
        if (inside(p)) v = std::max(v, inner(p));
        return v;
    };
    auto dirs = unit_sphere_points(u.dim, std::max(8, 4 * u.dim));
    for (const auto& x : boundary1_samples) {
        double outer_v;
        try {
            outer_v = outer(x);
        } catch (const EvalError&) {
            continue;
        }
        double inner_v = -kInf;
        double reach = std::max(1.0, norm2(x));
        for (double delta : {1e-3, 1e-4, 1e-5}) {
            for (const auto& d : dirs) {
                Point y = axpy(delta * reach, d, x);
                if (!box_contains(inner.box, y) || !inside(y)) continue;
                try {
                    inner_v = std::max(inner_v, inner(y));
                } catch (const EvalError&) {
                }
            }
        }
        double sc = std::max({1.0, std::abs(outer_v), std::abs(inner_v)});
        if (inner_v > outer_v + tol * sc)
            out.warnings.push_back(GlueWarning{x, inner_v, outer_v});
    }
    out.field = std::move(g);
    return out;
}

ScalarField compose_increasing_convex(const ScalarField& u, const ScalarField& phi) {
    if (phi.dim != 1) throw std::invalid_argument("outer function must be one-dimensional");
    Box sample_box = u.box;
    for (auto& iv : sample_box) {
        if (!std::isfinite(iv.lo)) iv.lo = std::isfinite(iv.hi) ? iv.hi - 16.0 : -8.0;
        if (!std::isfinite(iv.hi)) iv.hi = iv.lo + 16.0;
    }
    int per_axis = u.dim <= 2 ? 9 : (u.dim == 3 ? 5 : 3);
    GridSpec gs{sample_box, std::vector<int>(static_cast<size_t>(u.dim), per_axis)};
    double lo = kInf, hi = -kInf;
    size_t total = gs.count();
    for (size_t i = 0; i < total; ++i) {
        double v;
        try {
            v = u(gs.node(i));
        } catch (const EvalError&) {
            continue;
        }
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(lo <= hi)) throw std::invalid_argument("could not sample the range of the inner function");

    auto check_on = [&phi](double a, double b) {
        const int m = 33;
        std::vector<double> vs(m);
        for (int i = 0; i < m; ++i) {
            double t = a + (b - a) * i / (m - 1);
            vs[size_t(i)] = phi(Point{t});
            if (!std::isfinite(vs[size_t(i)]))
                throw EvalError("outer function must be finite on the inner range");
        }
        for (int i = 0; i + 1 < m; ++i)
            if (!(vs[size_t(i + 1)] > vs[size_t(i)])) return false;
        for (int i = 1; i + 1 < m; ++i)
            if (!(vs[size_t(i + 1)] - 2 * vs[size_t(i)] + vs[size_t(i - 1)] > 0)) return false;
        return true;
    };
    double pad = 0.05 * (hi - lo) + 1e-3;
    bool ok;
    try {
        ok = check_on(lo - pad, hi + pad);
    } catch (const EvalError&) {
        try {
            ok = check_on(lo, hi);
        } catch (const EvalError&) {
            throw std::invalid_argument("outer function is not defined on the attained inner range");
        }
    }
    if (!ok)
        throw std::invalid_argument(
            "outer function must be strictly increasing and strictly convex on the inner range");

    ScalarField out;
    out.dim = u.dim;
    out.box = u.box;
    out.smooth = static_cast<int>(u.smooth) < static_cast<int>(phi.smooth) ? u.smooth : phi.smooth;
    out.label = "compose(" + (phi.label.empty() ? "phi" : phi.label) + "," +
                (u.label.empty() ? "u" : u.label) + ")";
    ScalarField innerf = u, outerf = phi;
    out.eval = [innerf, outerf](const Point& p) {
        double t = innerf(p);
        if (!std::isfinite(t)) throw EvalError("composition undefined where the inner value is -inf");
        return outerf(Point{t});
    };
    return out;
}

namespace {

struct FrameOutcome {
    std::optional<Witness> witness;
    int balls_tried = 0;
    int balls_skipped = 0;
    int candidates_rejected = 0;
};

// Tangent directions at a unit vector x, for hill-climbing on the sphere.
std::vector<Point> tangent_basis(const Point& x) {
    size_t k = x.size();
    std::vector<Point> tb;
    for (size_t i = 0; i < k && tb.size() + 1 < k; ++i) {
        Point v(k, 0.0);
        v[i] = 1.0;
        double c = dot(v, x);
        for (size_t j = 0; j < k; ++j) v[j] -= c * x[j];
        for (const auto& t : tb) {
            double cc = dot(v, t);
            for (size_t j = 0; j < k; ++j) v[j] -= cc * t[j];
        }
        double nv = norm2(v);
        if (nv <= 1e-8) continue;
        for (auto& e : v) e /= nv;
        tb.push_back(std::move(v));
    }
    return tb;
}

}  // namespace

WitnessSearchResult witness_search(const ScalarField& f, int q, const Box& box,
                                   const WitnessBudget& budget, uint64_t seed, double tol,
                                   const BallFilter& ball_filter) {
    const int n = f.dim;
    if (q < 0) throw std::invalid_argument("q must be nonnegative");
    if (static_cast<int>(box.size()) != n)
        throw std::invalid_argument("scan box dimension does not match the field");
    WitnessSearchResult out;
    if (q >= n) {
        out.note = "level q >= dim makes the maximum property vacuous";
        return out;
    }
    const int k = q + 1;

    Box eff(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        eff[size_t(i)].lo = std::max(box[size_t(i)].lo, f.box[size_t(i)].lo);
        eff[size_t(i)].hi = std::min(box[size_t(i)].hi, f.box[size_t(i)].hi);
        if (!(eff[size_t(i)].lo < eff[size_t(i)].hi))
            throw std::invalid_argument("scan box does not meet the field domain");
        if (!eff[size_t(i)].bounded())
            throw std::invalid_argument("witness search needs a bounded scan window");
    }

    const int frame_cap = std::max(1, budget.slices);
    std::vector<std::vector<Point>> frames;
    auto push_frame = [&](std::vector<Point> cols) {
        if (static_cast<int>(frames.size()) >= frame_cap) return;
        for (const auto& fr : frames)
            if (same_subspace(fr, cols, n)) return;
        frames.push_back(std::move(cols));
    };

    // Curvature-guided frames: eigenvectors of the most negative Hessian
    // directions at a few probe points. Random frames alone miss thin negative
    // cones, so these go first.
    if (f.smooth != Smoothness::C0) {
        std::vector<Point> probes;
        Point c = box_center(eff);
        probes.push_back(c);
        for (int i = 0; i < n && probes.size() < 9; ++i)
            for (double s : {-0.25, 0.25}) {
                Point p = c;
                p[size_t(i)] += s * eff[size_t(i)].extent();
                probes.push_back(p);
            }
        for (const auto& p : probes) {
            try {
                HessianEstimate h = fd_hessian(f, p);
                EigResult eig = eig_symmetric(h.matrix, n);
                if (eig.values[size_t(k - 1)] < 0) {
                    std::vector<Point> cols(eig.vectors.begin(), eig.vectors.begin() + k);
                    if (auto on = gram_schmidt(cols)) push_frame(std::move(*on));
                }
            } catch (const EvalError&) {
            } catch (const NumericError&) {
            }
        }
    }

    // Axis-aligned coordinate frames in lexicographic order.
    {
        std::vector<int> idx(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) idx[size_t(i)] = i;
        for (;;) {
            std::vector<Point> cols;
            for (int j : idx) {
                Point e(static_cast<size_t>(n), 0.0);
                e[size_t(j)] = 1.0;
                cols.push_back(std::move(e));
            }
            push_frame(std::move(cols));
            if (static_cast<int>(frames.size()) >= frame_cap) break;
            int i = k - 1;
            while (i >= 0 && idx[size_t(i)] == n - k + i) --i;
            if (i < 0) break;
            ++idx[size_t(i)];
            for (int j = i + 1; j < k; ++j) idx[size_t(j)] = idx[size_t(j - 1)] + 1;
        }
    }

    // Seeded random frames fill the remaining budget.
    for (int t = 0; static_cast<int>(frames.size()) < frame_cap && t < 4 * frame_cap; ++t) {
        Rng rng = Rng::for_item(seed, 0x510000u + static_cast<uint64_t>(t));
        std::vector<Point> cols;
        for (int j = 0; j < k; ++j) cols.push_back(rng.gaussian_vector(n));
        if (auto on = gram_schmidt(cols)) push_frame(std::move(*on));
    }

    // Ball base points: window center, then a per-axis quantile product grid.
    std::vector<Point> bases;
    bases.push_back(box_center(eff));
    {
        int cpa = std::max(1, budget.centers_per_axis);
        size_t total = 1;
        for (int i = 0; i < n && total <= 64; ++i) total *= static_cast<size_t>(cpa);
        for (size_t flat = 0; flat < total && bases.size() < 65; ++flat) {
            Point p(static_cast<size_t>(n));
            size_t rem = flat;
            for (size_t i = p.size(); i-- > 0;) {
                size_t j = rem % static_cast<size_t>(cpa);
                rem /= static_cast<size_t>(cpa);
                p[i] = eff[i].lo + (static_cast<double>(j) + 0.5) * eff[i].extent() / cpa;
            }
            bool dup = false;
            for (const auto& b : bases) {
                double d = 0;
                for (size_t i = 0; i < p.size(); ++i) d = std::max(d, std::abs(p[i] - b[i]));
                if (d <= 1e-12) {
                    dup = true;
                    break;
                }
            }
            if (!dup) bases.push_back(std::move(p));
        }
    }

    const int R = std::max(1, budget.radii);
    const int interior_target = std::max(1, budget.interior_samples);
    const int boundary_target = std::max(budget.boundary_samples, k + 2);

    auto scan_frame = [&](size_t frame_idx) -> FrameOutcome {
        FrameOutcome oc;
        const auto& cols = frames[frame_idx];
        for (size_t base_idx = 0; base_idx < bases.size(); ++base_idx) {
            const Point& base = bases[base_idx];
            double r_max = 0.999 * box_margin(eff, base);
            if (!(r_max > 0)) continue;
            for (int rj = 0; rj < R; ++rj) {
                double r = r_max * (R == 1 ? 1.0 : std::pow(0.01, double(rj) / (R - 1)));
                oc.balls_tried++;
                if (ball_filter && !ball_filter(base, r)) {
                    oc.balls_skipped++;
                    continue;
                }
                uint64_t salt = (static_cast<uint64_t>(frame_idx) << 40) ^
                                (static_cast<uint64_t>(base_idx) << 24) ^
                                static_cast<uint64_t>(rj);
                AffineSlice slice{base, cols};

                // boundary directions: axis pairs, diagonal sign patterns, then
                // seeded uniform fill; k = 1 is exact with the two endpoints
                std::vector<Point> dirs;
                for (int i = 0; i < k; ++i)
                    for (double s : {1.0, -1.0}) {
                        Point e(static_cast<size_t>(k), 0.0);
                        e[size_t(i)] = s;
                        dirs.push_back(std::move(e));
                    }
                if (k >= 2 && k <= 6) {
                    double inv = 1.0 / std::sqrt(double(k));
                    for (uint64_t mask = 0; mask < (uint64_t(1) << k); ++mask) {
                        Point d(static_cast<size_t>(k));
                        for (int i = 0; i < k; ++i)
                            d[size_t(i)] = (mask >> i) & 1 ? inv : -inv;
                        dirs.push_back(std::move(d));
                    }
                }
                if (k > 1) {
                    Rng rb = Rng::for_item(seed, salt * 2);
                    while (static_cast<int>(dirs.size()) < boundary_target)
                        dirs.push_back(rb.unit_vector(k));
                }

                std::vector<Point> xs;
                std::vector<double> us;
                bool bad = false;
                double scale = 1;
                for (const auto& d : dirs) {
                    Point s(static_cast<size_t>(k));
                    for (int i = 0; i < k; ++i) s[size_t(i)] = r * d[size_t(i)];
                    double uv;
                    try {
                        uv = f(slice.ambient(s));
                    } catch (const EvalError&) {
                        bad = true;
                        break;
                    }
                    if (std::isfinite(uv)) scale = std::max(scale, std::abs(uv));
                    xs.push_back(std::move(s));
                    us.push_back(uv);
                }
                if (bad) {
                    oc.balls_skipped++;
                    continue;
                }

                AffineFunctional l;
                try {
                    l = fit_affine_upper_envelope(xs, us, Point(static_cast<size_t>(k), 0.0));
                } catch (const NumericError&) {
                    oc.balls_skipped++;
                    continue;
                }

                std::vector<Point> pts;
                pts.emplace_back(static_cast<size_t>(k), 0.0);
                for (int i = 0; i < k && static_cast<int>(pts.size()) < interior_target; ++i)
                    for (double s : {0.5, -0.5}) {
                        Point e(static_cast<size_t>(k), 0.0);
                        e[size_t(i)] = s * r;
                        pts.push_back(std::move(e));
                    }
                Rng ri = Rng::for_item(seed, salt * 2 + 1);
                while (static_cast<int>(pts.size()) < interior_target) {
                    Point b = ri.ball_vector(k);
                    for (auto& e : b) e *= 0.97 * r;
                    pts.push_back(std::move(b));
                }

                double best = -kInf;
                size_t best_i = 0;
                for (size_t i = 0; i < pts.size(); ++i) {
                    double uv;
                    try {
                        uv = f(slice.ambient(pts[i]));
                    } catch (const EvalError&) {
                        continue;
                    }
                    double m = uv - l(pts[i]);
                    if (m > best) {
                        best = m;
                        best_i = i;
                    }
                }
                if (!(best > tol * scale)) continue;

                // Candidate: re-check the envelope on a dense boundary sweep
                // plus local polish, lift by the worst residual, and keep the
                // witness only if the interior margin survives.
                int dense_count = k == 1 ? 2 : (k <= 3 ? 4096 : 8192);
                auto dense = unit_sphere_points(k, dense_count);
                auto gap_at = [&](const Point& d) {
                    Point s(static_cast<size_t>(k));
                    for (int i = 0; i < k; ++i) s[size_t(i)] = r * d[size_t(i)];
                    double uv;
                    try {
                        uv = f(slice.ambient(s));
                    } catch (const EvalError&) {
                        return kInf;  // cannot certify over this direction
                    }
                    if (uv == -kInf) return -kInf;
                    return uv - l(s);
                };
                double delta = 0;
                bool cert_fail = false;
                std::vector<std::pair<double, size_t>> peaks;
                for (size_t i = 0; i < dense.size(); ++i) {
                    double gap = gap_at(dense[i]);
                    if (gap == kInf) {
                        cert_fail = true;
                        break;
                    }
                    delta = std::max(delta, gap);
                    peaks.emplace_back(gap, i);
                }
                if (cert_fail) {
                    oc.candidates_rejected++;
                    continue;
                }
                if (k > 1) {
                    std::partial_sort(peaks.begin(), peaks.begin() + std::min<size_t>(8, peaks.size()),
                                      peaks.end(), [](auto& a, auto& b) { return a.first > b.first; });
                    for (size_t pi = 0; pi < std::min<size_t>(8, peaks.size()); ++pi) {
                        Point x = dense[peaks[pi].second];
                        double gx = peaks[pi].first;
                        double step = 0.25;
                        int iters = 0;
                        while (step > 1e-6 && iters < 200) {
                            bool moved = false;
                            for (const auto& t : tangent_basis(x)) {
                                for (double sgn : {1.0, -1.0}) {
                                    Point y = axpy(sgn * step, t, x);
                                    double ny = norm2(y);
                                    for (auto& e : y) e /= ny;
                                    double gy = gap_at(y);
                                    if (gy != kInf && gy > gx) {
                                        x = std::move(y);
                                        gx = gy;
                                        moved = true;
                                    }
                                }
                            }
                            if (!moved) step *= 0.5;
                            ++iters;
                        }
                        delta = std::max(delta, gx);
                    }
                }
                delta = std::max(delta, 0.0);

                double margin = best - delta;
                if (!(margin > tol * scale)) {
                    oc.candidates_rejected++;
                    continue;
                }
                AffineFunctional lifted = l;
                lifted.b += delta;
                Witness w;
                w.ball = SliceBall{slice, Point(static_cast<size_t>(k), 0.0), r};
                w.l = lifted;
                w.point = pts[best_i];
                w.ambient_point = slice.ambient(pts[best_i]);
                w.margin = margin;
                w.tol_scale = tol * scale;
                oc.witness = std::move(w);
                return oc;
            }
        }
        return oc;
    };

    std::vector<FrameOutcome> outcomes(frames.size());
    std::atomic<int> best_found{INT_MAX};
    parallel_for(frames.size(), [&](size_t fi) {
        // Frames after an already-found witness cannot win; earlier ones must
        // still finish so the aggregated counters stay deterministic.
        if (static_cast<int>(fi) > best_found.load(std::memory_order_relaxed)) return;
        outcomes[fi] = scan_frame(fi);
        if (outcomes[fi].witness) {
            int cur = best_found.load();
            while (static_cast<int>(fi) < cur &&
                   !best_found.compare_exchange_weak(cur, static_cast<int>(fi))) {
            }
        }
    });

    int winner = INT_MAX;
    for (size_t fi = 0; fi < frames.size(); ++fi)
        if (outcomes[fi].witness) {
            winner = static_cast<int>(fi);
            break;
        }
    for (size_t fi = 0; fi < frames.size(); ++fi) {
        if (static_cast<int>(fi) > winner) break;
        out.slices_tried++;
        out.balls_tried += outcomes[fi].balls_tried;
        out.balls_skipped += outcomes[fi].balls_skipped;
        out.candidates_rejected += outcomes[fi].candidates_rejected;
    }
    if (winner != INT_MAX) {
        out.witness = std::move(outcomes[size_t(winner)].witness);
        out.note = "certified violation of the level-" + std::to_string(q) + " maximum property";
    } else {
        out.note = "no violation found at this sampling budget; not a proof of q-convexity";
    }
    return out;
}

}  // namespace qcx
