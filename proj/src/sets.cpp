#include "qcx/sets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "json_util.hpp"
#include "qcx/rng.hpp"

namespace qcx {

namespace {

constexpr int kMarchSteps = 1024;
constexpr int kBisectSteps = 60;
constexpr int kBracketRounds = 40;

void check_point(const OpenSetModel& s, const Point& x) {
    if (static_cast<int>(x.size()) != s.dim)
        throw std::invalid_argument("point dimension does not match the set");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("set queries need finite coordinates");
}

std::string describe(const OpenSetModel& s) {
    return s.label.empty() ? set_kind_name(s.kind) : s.label;
}

void require_member(const OpenSetModel& s, const Point& x) {
    if (!member(s, x)) throw EvalError("point is not in the set: " + describe(s));
}

// graph complement helpers: x = (s-block, y-block), residual f(s) - y
Point graph_residual(const OpenSetModel& s, const Point& x) {
    Point arg(x.begin(), x.begin() + s.graph_n);
    Point w(s.graph_f.size());
    for (size_t j = 0; j < s.graph_f.size(); ++j)
        w[j] = s.graph_f[j](arg) - x[static_cast<size_t>(s.graph_n) + j];
    return w;
}

double member_bisect(const OpenSetModel& s, const Point& x, const Point& v, double lo, double hi) {
    for (int i = 0; i < kBisectSteps; ++i) {
        double mid = 0.5 * (lo + hi);
        if (member(s, axpy(mid, v, x)))
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// First membership change along x + t v, t in (0, bracket]; kInf when the ray
// stays inside. Crossings thinner than bracket/1024 are missed.
double member_march(const OpenSetModel& s, const Point& x, const Point& v, double bracket) {
    double prev = 0;
    for (int i = 1; i <= kMarchSteps; ++i) {
        double t = bracket * i / kMarchSteps;
        if (!member(s, axpy(t, v, x))) return member_bisect(s, x, v, prev, t);
        prev = t;
    }
    return kInf;
}

// First hit of a punctured hyperplane x_j = 0 along the ray; the path stays
// off the other hyperplanes until the earliest hit by construction.
double puncture_exit(const std::vector<int>& axes, const Point& x, const Point& v,
                     double bracket) {
    double best = kInf;
    for (int j : axes) {
        size_t u = static_cast<size_t>(j);
        if (v[u] == 0) continue;
        double t = -x[u] / v[u];
        if (t > 0 && t <= bracket) best = std::min(best, t);
    }
    return best;
}

double ray_exit(const OpenSetModel& s, const Point& x, const Point& v, double bracket);

// The graph is thin: membership never flips, so the crossing is bracketed on
// a continuous residual instead. For one component the signed residual is
// exact; for more components a sign change of the projection onto the initial
// residual direction is only a candidate and the hit is confirmed by |w|.
double graph_exit(const OpenSetModel& s, const Point& x, const Point& v, double bracket) {
    size_t k = s.graph_f.size();
    Point w0 = graph_residual(s, x);
    double nw0 = norm2(w0);
    double scale = std::max(1.0, nw0);
    Point dir(w0);
    for (auto& c : dir) c /= nw0;
    auto g = [&](double t) {
        Point w = graph_residual(s, axpy(t, v, x));
        return k == 1 ? w[0] : dot(w, dir);
    };
    double prev = 0, gprev = g(0);
    for (int i = 1; i <= kMarchSteps; ++i) {
        double t = bracket * i / kMarchSteps;
        double gt = g(t);
        if (gprev * gt <= 0) {
            double lo = prev, hi = t, glo = gprev;
            for (int b = 0; b < kBisectSteps; ++b) {
                double mid = 0.5 * (lo + hi);
                double gm = g(mid);
                if (glo * gm <= 0)
                    hi = mid;
                else {
                    lo = mid;
                    glo = gm;
                }
            }
            double root = 0.5 * (lo + hi);
            if (k == 1 || norm2(graph_residual(s, axpy(root, v, x))) <= 1e-7 * scale)
                return root;
        }
        prev = t;
        gprev = gt;
    }
    return kInf;
}

double reinhardt_exit(const OpenSetModel& s, const Point& x, const Point& v, double bracket) {
    double best = member_march(s, x, v, bracket);
    // coordinate punctures are thin; a candidate counts when the set is still
    // inhabited just before the hit
    for (size_t u = 0; u < x.size(); ++u) {
        if (v[u] == 0) continue;
        double t = -x[u] / v[u];
        if (t > 0 && t <= bracket && t < best && member(s, axpy(t * (1 - 1e-9), v, x)))
            best = t;
    }
    return best;
}

double ray_exit(const OpenSetModel& s, const Point& x, const Point& v, double bracket) {
    switch (s.kind) {
        case SetKind::PuncturedAxis:
            return puncture_exit(s.punctured, x, v, bracket);
        case SetKind::GraphComplement:
            return graph_exit(s, x, v, bracket);
        case SetKind::ReinhardtLog:
            return reinhardt_exit(s, x, v, bracket);
        case SetKind::Intersection: {
            double best = kInf;
            for (const auto& part : s.parts) best = std::min(best, ray_exit(part, x, v, bracket));
            return best;
        }
        default:
            return member_march(s, x, v, bracket);
    }
}

double ray_pair_exit(const OpenSetModel& s, const Point& x, const Point& v, double bracket) {
    Point neg(v);
    for (auto& c : neg) c = -c;
    return std::min(ray_exit(s, x, v, bracket), ray_exit(s, x, neg, bracket));
}

double bracket_hint(const OpenSetModel& s, const Point& x) {
    switch (s.kind) {
        case SetKind::HalfSpace:
            return std::max(1.0, 4 * (dot(s.normal, x) - s.offset) / norm2(s.normal));
        case SetKind::Ball:
            return 2.5 * s.radius;
        case SetKind::BoxSet: {
            double m = box_margin(s.box, x);
            return std::isfinite(m) ? std::max(1.0, 4 * m) : 1.0;
        }
        case SetKind::PuncturedAxis: {
            double m = 1.0;
            for (int j : s.punctured) m = std::max(m, 2 * std::fabs(x[static_cast<size_t>(j)]));
            return m;
        }
        case SetKind::GraphComplement:
            return std::max(1.0, 4 * norm2(graph_residual(s, x)));
        case SetKind::ReinhardtLog: {
            double m = 1.0;
            for (double c : x) m = std::max(m, 4 * std::fabs(c));
            return m;
        }
        case SetKind::Intersection: {
            double m = kInf;
            for (const auto& part : s.parts) m = std::min(m, bracket_hint(part, x));
            return std::max(1.0, m);
        }
        case SetKind::UnionSet: {
            double m = 1.0;
            for (const auto& part : s.parts) m = std::max(m, bracket_hint(part, x));
            return m;
        }
        case SetKind::Oracle: {
            double d2 = 0;
            for (const auto& iv : s.oracle_box) d2 += iv.extent() * iv.extent();
            return 2 * std::sqrt(d2);
        }
    }
    return 1.0;
}

void append_hint_directions(const OpenSetModel& s, const Point& x, std::vector<Point>& dirs) {
    if (s.kind == SetKind::GraphComplement) {
        Point w = graph_residual(s, x);
        double nw = norm2(w);
        if (nw > 0) {
            Point v(static_cast<size_t>(s.dim), 0.0);
            for (size_t j = 0; j < w.size(); ++j)
                v[static_cast<size_t>(s.graph_n) + j] = w[j] / nw;
            dirs.push_back(v);
        }
    }
    if (s.kind == SetKind::ReinhardtLog || s.kind == SetKind::PuncturedAxis) {
        for (int j = 0; j < s.dim; ++j) {
            Point v(static_cast<size_t>(s.dim), 0.0);
            v[static_cast<size_t>(j)] = 1.0;
            dirs.push_back(v);
        }
    }
}

std::vector<Point> sampling_directions(const OpenSetModel& s, const Point& x, int count,
                                       uint64_t seed) {
    std::vector<Point> dirs = unit_sphere_points(s.dim, std::max(2, count / 2));
    Rng rng = Rng::for_item(seed, 0xD15D1500u);
    while (static_cast<int>(dirs.size()) < count) dirs.push_back(rng.unit_vector(s.dim));
    append_hint_directions(s, x, dirs);
    return dirs;
}

// Minimum of exit_distance * weight over the directions, growing the bracket
// until either something exits or no unexplored direction can still beat the
// incumbent (exit > bracket implies value > bracket * weight).
double sampled_min(const OpenSetModel& s, const Point& x, const std::vector<Point>& dirs,
                   const std::vector<double>& weights) {
    std::vector<size_t> remaining(dirs.size());
    for (size_t i = 0; i < dirs.size(); ++i) remaining[i] = i;
    double bracket = bracket_hint(s, x);
    double best = kInf;
    for (int round = 0; round < kBracketRounds && !remaining.empty(); ++round) {
        std::vector<size_t> next;
        double wmin = kInf;
        for (size_t i : remaining) {
            double d = ray_pair_exit(s, x, dirs[i], bracket);
            if (d < kInf)
                best = std::min(best, d * weights[i]);
            else {
                next.push_back(i);
                wmin = std::min(wmin, weights[i]);
            }
        }
        remaining = std::move(next);
        if (best < kInf && (remaining.empty() || best <= bracket * wmin)) break;
        bracket *= 2;
    }
    return best;
}

double sampled_euclid(const OpenSetModel& s, const Point& x) {
    std::vector<Point> dirs = sampling_directions(s, x, 128, 0xA55E);
    std::vector<double> weights(dirs.size(), 1.0);
    return sampled_min(s, x, dirs, weights);
}

void validate(const OpenSetModel& s) {
    if (s.dim < 1) throw std::invalid_argument("open set needs dim >= 1");
    switch (s.kind) {
        case SetKind::HalfSpace:
            if (static_cast<int>(s.normal.size()) != s.dim || norm2(s.normal) <= 0)
                throw std::invalid_argument("half_space needs a nonzero normal of the set's dim");
            break;
        case SetKind::Ball:
            if (static_cast<int>(s.center.size()) != s.dim || !(s.radius > 0))
                throw std::invalid_argument("ball needs a center of the set's dim and radius > 0");
            break;
        case SetKind::BoxSet:
            if (static_cast<int>(s.box.size()) != s.dim)
                throw std::invalid_argument("box set needs one interval per axis");
            for (const auto& iv : s.box)
                if (!(iv.lo < iv.hi)) throw std::invalid_argument("box set has an empty interval");
            break;
        case SetKind::PuncturedAxis:
            for (int j : s.punctured)
                if (j < 0 || j >= s.dim)
                    throw std::invalid_argument("punctured axis index out of range");
            break;
        case SetKind::GraphComplement:
            if (s.graph_n < 1 || s.graph_f.empty() ||
                s.dim != s.graph_n + static_cast<int>(s.graph_f.size()))
                throw std::invalid_argument(
                    "graph complement needs dim = n + (number of components)");
            break;
        case SetKind::ReinhardtLog:
            if (s.parts.size() != 1 || s.parts[0].dim != s.dim)
                throw std::invalid_argument("reinhardt_log needs one log image of the same dim");
            break;
        case SetKind::Intersection:
        case SetKind::UnionSet:
            if (s.parts.empty()) throw std::invalid_argument("combinator needs at least one part");
            for (const auto& part : s.parts) {
                if (part.dim != s.dim)
                    throw std::invalid_argument("combinator parts must share the ambient dim");
                validate(part);
            }
            break;
        case SetKind::Oracle:
            if (static_cast<int>(s.oracle_box.size()) != s.dim)
                throw std::invalid_argument("oracle set needs a box of the set's dim");
            for (const auto& iv : s.oracle_box)
                if (!iv.bounded())
                    throw std::invalid_argument(
                        "oracle set needs a bounded box: distance brackets come from it");
            break;
    }
}

}  // namespace

std::string set_kind_name(SetKind k) {
    switch (k) {
        case SetKind::HalfSpace: return "half_space";
        case SetKind::Ball: return "ball";
        case SetKind::BoxSet: return "box";
        case SetKind::PuncturedAxis: return "punctured_axis";
        case SetKind::GraphComplement: return "graph_complement";
        case SetKind::ReinhardtLog: return "reinhardt_log";
        case SetKind::Intersection: return "intersection";
        case SetKind::UnionSet: return "union";
        case SetKind::Oracle: return "oracle";
    }
    return "?";
}

OpenSetModel make_half_space(Point normal, double offset) {
    OpenSetModel s;
    s.kind = SetKind::HalfSpace;
    s.dim = static_cast<int>(normal.size());
    s.normal = std::move(normal);
    s.offset = offset;
    validate(s);
    return s;
}

OpenSetModel make_ball(Point center, double radius) {
    OpenSetModel s;
    s.kind = SetKind::Ball;
    s.dim = static_cast<int>(center.size());
    s.center = std::move(center);
    s.radius = radius;
    validate(s);
    return s;
}

OpenSetModel make_box_set(Box box) {
    OpenSetModel s;
    s.kind = SetKind::BoxSet;
    s.dim = static_cast<int>(box.size());
    s.box = std::move(box);
    validate(s);
    return s;
}

OpenSetModel make_punctured_axis(int dim, std::vector<int> punctured) {
    OpenSetModel s;
    s.kind = SetKind::PuncturedAxis;
    s.dim = dim;
    std::sort(punctured.begin(), punctured.end());
    punctured.erase(std::unique(punctured.begin(), punctured.end()), punctured.end());
    s.punctured = std::move(punctured);
    validate(s);
    return s;
}

OpenSetModel make_graph_complement(std::vector<std::string> f_exprs, int n) {
    OpenSetModel s;
    s.kind = SetKind::GraphComplement;
    s.graph_n = n;
    s.graph_exprs = std::move(f_exprs);
    s.dim = n + static_cast<int>(s.graph_exprs.size());
    for (const auto& src : s.graph_exprs)
        s.graph_f.push_back(field_from_expr(src, n, Box(static_cast<size_t>(n))));
    validate(s);
    return s;
}

OpenSetModel make_reinhardt_log(OpenSetModel log_image) {
    OpenSetModel s;
    s.kind = SetKind::ReinhardtLog;
    s.dim = log_image.dim;
    s.parts.push_back(std::move(log_image));
    validate(s);
    return s;
}

OpenSetModel make_intersection(std::vector<OpenSetModel> parts) {
    OpenSetModel s;
    s.kind = SetKind::Intersection;
    s.dim = parts.empty() ? 0 : parts[0].dim;
    s.parts = std::move(parts);
    validate(s);
    return s;
}

OpenSetModel make_union(std::vector<OpenSetModel> parts) {
    OpenSetModel s;
    s.kind = SetKind::UnionSet;
    s.dim = parts.empty() ? 0 : parts[0].dim;
    s.parts = std::move(parts);
    validate(s);
    return s;
}

OpenSetModel make_oracle(std::string expr, int dim, Box bounding) {
    OpenSetModel s;
    s.kind = SetKind::Oracle;
    s.dim = dim;
    s.oracle_expr = std::move(expr);
    s.oracle_box = std::move(bounding);
    s.oracle_f = field_from_expr(s.oracle_expr, dim, Box(static_cast<size_t>(dim)));
    validate(s);
    return s;
}

bool member(const OpenSetModel& s, const Point& x) {
    check_point(s, x);
    switch (s.kind) {
        case SetKind::HalfSpace:
            return dot(s.normal, x) > s.offset;
        case SetKind::Ball: {
            Point d(x);
            for (size_t i = 0; i < d.size(); ++i) d[i] -= s.center[i];
            return norm2(d) < s.radius;
        }
        case SetKind::BoxSet:
            return box_contains(s.box, x);
        case SetKind::PuncturedAxis:
            for (int j : s.punctured)
                if (x[static_cast<size_t>(j)] == 0) return false;
            return true;
        case SetKind::GraphComplement:
            return norm2(graph_residual(s, x)) > 0;
        case SetKind::ReinhardtLog: {
            Point logs(x.size());
            for (size_t i = 0; i < x.size(); ++i) {
                if (x[i] == 0) return false;
                logs[i] = std::log(std::fabs(x[i]));
            }
            return member(s.parts[0], logs);
        }
        case SetKind::Intersection:
            for (const auto& part : s.parts)
                if (!member(part, x)) return false;
            return true;
        case SetKind::UnionSet:
            for (const auto& part : s.parts)
                if (member(part, x)) return true;
            return false;
        case SetKind::Oracle:
            return box_contains(s.oracle_box, x) && s.oracle_f(x) > 0;
    }
    return false;
}

Box set_bounding_box(const OpenSetModel& s) {
    switch (s.kind) {
        case SetKind::Ball: {
            Box b;
            for (double c : s.center) b.push_back(Interval{c - s.radius, c + s.radius});
            return b;
        }
        case SetKind::BoxSet:
            return s.box;
        case SetKind::ReinhardtLog: {
            Box v = set_bounding_box(s.parts[0]);
            Box b(static_cast<size_t>(s.dim));
            for (size_t i = 0; i < v.size(); ++i)
                if (std::isfinite(v[i].hi)) {
                    double r = std::exp(v[i].hi);
                    b[i] = Interval{-r, r};
                }
            return b;
        }
        case SetKind::Intersection: {
            Box b(static_cast<size_t>(s.dim));
            for (const auto& part : s.parts) {
                Box pb = set_bounding_box(part);
                for (size_t i = 0; i < b.size(); ++i) {
                    b[i].lo = std::max(b[i].lo, pb[i].lo);
                    b[i].hi = std::min(b[i].hi, pb[i].hi);
                }
            }
            return b;
        }
        case SetKind::UnionSet: {
            Box b = set_bounding_box(s.parts[0]);
            for (size_t p = 1; p < s.parts.size(); ++p) {
                Box pb = set_bounding_box(s.parts[p]);
                for (size_t i = 0; i < b.size(); ++i) {
                    b[i].lo = std::min(b[i].lo, pb[i].lo);
                    b[i].hi = std::max(b[i].hi, pb[i].hi);
                }
            }
            return b;
        }
        case SetKind::Oracle:
            return s.oracle_box;
        default:
            return Box(static_cast<size_t>(s.dim));
    }
}

double NormSpec::operator()(const Point& x) const {
    switch (kind) {
        case Kind::Euclid:
            return norm2(x);
        case Kind::Max: {
            double m = 0;
            for (double c : x) m = std::max(m, std::fabs(c));
            return m;
        }
        case Kind::PNorm: {
            double sum = 0;
            for (double c : x) sum += std::pow(std::fabs(c), p);
            return std::pow(sum, 1.0 / p);
        }
        case Kind::Weighted: {
            if (weights.size() != x.size())
                throw std::invalid_argument("weighted norm has the wrong number of weights");
            double sum = 0;
            for (size_t i = 0; i < x.size(); ++i) sum += weights[i] * x[i] * x[i];
            return std::sqrt(sum);
        }
    }
    return 0;
}

NormSpec NormSpec::euclid() { return NormSpec{}; }

NormSpec NormSpec::max_norm() {
    NormSpec n;
    n.kind = Kind::Max;
    return n;
}

NormSpec NormSpec::p_norm(double p) {
    if (!(p >= 1)) throw std::invalid_argument("p-norm needs p >= 1");
    NormSpec n;
    n.kind = Kind::PNorm;
    n.p = p;
    return n;
}

NormSpec NormSpec::weighted(std::vector<double> w) {
    for (double c : w)
        if (!(c > 0)) throw std::invalid_argument("weighted norm needs positive weights");
    NormSpec n;
    n.kind = Kind::Weighted;
    n.weights = std::move(w);
    return n;
}

double dist_euclid(const OpenSetModel& s, const Point& x) {
    require_member(s, x);
    switch (s.kind) {
        case SetKind::HalfSpace:
            return (dot(s.normal, x) - s.offset) / norm2(s.normal);
        case SetKind::Ball: {
            Point d(x);
            for (size_t i = 0; i < d.size(); ++i) d[i] -= s.center[i];
            return s.radius - norm2(d);
        }
        case SetKind::BoxSet:
            return box_margin(s.box, x);
        case SetKind::PuncturedAxis: {
            double m = kInf;
            for (int j : s.punctured) m = std::min(m, std::fabs(x[static_cast<size_t>(j)]));
            return m;
        }
        case SetKind::Intersection: {
            double m = kInf;
            for (const auto& part : s.parts) m = std::min(m, dist_euclid(part, x));
            return m;
        }
        default:
            return sampled_euclid(s, x);
    }
}

double dist_directional(const OpenSetModel& s, const Point& x, const Point& v, double bracket,
                        bool* exhausted) {
    require_member(s, x);
    if (static_cast<int>(v.size()) != s.dim || std::fabs(norm2(v) - 1) > 1e-9)
        throw std::invalid_argument("directional distance needs a Euclidean unit direction");
    if (!(bracket > 0)) throw std::invalid_argument("directional distance needs a bracket > 0");
    if (exhausted) *exhausted = false;
    double d = ray_pair_exit(s, x, v, bracket);
    if (d == kInf && exhausted) *exhausted = true;
    return d;
}

double dist_norm(const OpenSetModel& s, const Point& x, const NormSpec& nrm, int directions,
                 uint64_t seed) {
    require_member(s, x);
    if (directions < 2) throw std::invalid_argument("norm distance needs at least 2 directions");
    std::vector<Point> dirs = sampling_directions(s, x, directions, seed);
    std::vector<double> weights(dirs.size());
    for (size_t i = 0; i < dirs.size(); ++i) weights[i] = nrm(dirs[i]);
    return sampled_min(s, x, dirs, weights);
}

ScalarField neg_log_dist_field(const OpenSetModel& s) {
    ScalarField f;
    f.dim = s.dim;
    f.box = set_bounding_box(s);
    f.smooth = Smoothness::C0;
    f.label = "-ln d2 on " + describe(s);
    f.eval = [s](const Point& p) {
        double d = dist_euclid(s, p);
        return d == kInf ? -kInf : -std::log(d);
    };
    return f;
}

ScalarField neg_log_dist_field(const OpenSetModel& s, Point v) {
    if (static_cast<int>(v.size()) != s.dim)
        throw std::invalid_argument("direction dimension does not match the set");
    double nv = norm2(v);
    if (!(nv > 0)) throw std::invalid_argument("direction must be nonzero");
    for (auto& c : v) c /= nv;
    ScalarField f;
    f.dim = s.dim;
    f.box = set_bounding_box(s);
    f.smooth = Smoothness::C0;
    f.label = "-ln ray distance on " + describe(s);
    f.eval = [s, v](const Point& p) {
        require_member(s, p);
        double bracket = bracket_hint(s, p);
        for (int round = 0; round < kBracketRounds; ++round) {
            double d = ray_pair_exit(s, p, v, bracket);
            if (d < kInf) return -std::log(d);
            bracket *= 2;
        }
        return -kInf;
    };
    return f;
}

ScalarField neg_log_dist_field(const OpenSetModel& s, NormSpec nrm, int directions,
                               uint64_t seed) {
    ScalarField f;
    f.dim = s.dim;
    f.box = set_bounding_box(s);
    f.smooth = Smoothness::C0;
    f.label = "-ln norm distance on " + describe(s);
    f.eval = [s, nrm, directions, seed](const Point& p) {
        double d = dist_norm(s, p, nrm, directions, seed);
        return d == kInf ? -kInf : -std::log(d);
    };
    return f;
}

ScalarField exhaustion_field(const OpenSetModel& s) {
    bool empty_boundary = (s.kind == SetKind::PuncturedAxis && s.punctured.empty());
    if (s.kind == SetKind::BoxSet) {
        empty_boundary = true;
        for (const auto& iv : s.box) empty_boundary &= iv.lo == -kInf && iv.hi == kInf;
    }
    if (empty_boundary)
        throw std::invalid_argument("exhaustion needs a nonempty boundary: " + describe(s));
    ScalarField f;
    f.dim = s.dim;
    f.box = set_bounding_box(s);
    f.smooth = Smoothness::C0;
    f.label = "exhaustion of " + describe(s);
    f.eval = [s](const Point& p) {
        double d = dist_euclid(s, p);
        double base = d == kInf ? -kInf : -std::log(d);
        return base + dot(p, p);
    };
    return f;
}

ScalarField product_exhaustion(const OpenSetModel& s1, const OpenSetModel& s2) {
    ScalarField e1 = exhaustion_field(s1);
    ScalarField e2 = exhaustion_field(s2);
    ScalarField f;
    f.dim = s1.dim + s2.dim;
    f.box = e1.box;
    f.box.insert(f.box.end(), e2.box.begin(), e2.box.end());
    f.smooth = Smoothness::C0;
    f.label = "exhaustion of " + describe(s1) + " x " + describe(s2);
    int split = s1.dim;
    f.eval = [e1, e2, split](const Point& p) {
        Point a(p.begin(), p.begin() + split);
        Point b(p.begin() + split, p.end());
        return std::max(e1(a), e2(b));
    };
    return f;
}

SetCheckResult set_q_convex_check(const OpenSetModel& s, int q, const Box& box,
                                  const WitnessBudget& budget, uint64_t seed) {
    SetCheckResult r;
    // The maximum property only quantifies over balls with closure inside the
    // set; a slice ball sits inside the ambient ball of the same radius, so
    // center distance > radius certifies containment. Membership errors alone
    // cannot reject straddling balls when the complement has measure zero.
    BallFilter inside = [s](const Point& c, double radius) {
        try {
            return dist_euclid(s, c) > radius;
        } catch (const EvalError&) {
            return false;
        } catch (const NumericError&) {
            return false;
        }
    };
    r.search = witness_search(neg_log_dist_field(s), q, box, budget, seed, 1e-7, inside);
    r.consistent = !r.search.witness.has_value();
    r.verdict = r.consistent
                    ? "consistent with real " + std::to_string(q) + "-convexity at this budget"
                    : "not real " + std::to_string(q) + "-convex at this resolution";
    return r;
}

SublevelReport check_sublevel_compact(const ScalarField& f, double c, const Box& box,
                                      const std::vector<int>& res) {
    if (static_cast<int>(box.size()) != f.dim || res.size() != box.size())
        throw std::invalid_argument("sublevel scan needs a box and resolutions of the field dim");
    for (size_t i = 0; i < box.size(); ++i)
        if (!box[i].bounded() || res[i] < 1)
            throw std::invalid_argument("sublevel scan needs a bounded box and res >= 1");

    SublevelReport rep;
    std::vector<int> idx(res.size(), 0);
    for (;;) {
        Point p(res.size());
        bool rim = false;
        for (size_t i = 0; i < res.size(); ++i) {
            p[i] = box[i].lo + box[i].extent() * idx[i] / res[i];
            rim |= idx[i] == 0 || idx[i] == res[i];
        }
        ++rep.samples;
        double v = kInf;
        try {
            v = f(p);
        } catch (const EvalError&) {
        }
        if (v < c) {
            ++rep.below;
            if (rim) ++rep.on_rim;
        }
        size_t ax = 0;
        while (ax < res.size() && ++idx[ax] > res[ax]) idx[ax++] = 0;
        if (ax == res.size()) break;
    }
    rep.compact = rep.on_rim == 0;
    return rep;
}

namespace {

nlohmann::ordered_json set_to_json_value(const OpenSetModel& s) {
    nlohmann::ordered_json j;
    j["kind"] = set_kind_name(s.kind);
    switch (s.kind) {
        case SetKind::HalfSpace:
            j["a"] = s.normal;
            j["b"] = s.offset;
            break;
        case SetKind::Ball:
            j["c"] = s.center;
            j["r"] = s.radius;
            break;
        case SetKind::BoxSet:
            j["intervals"] = box_to_json(s.box);
            break;
        case SetKind::PuncturedAxis:
            j["dim"] = s.dim;
            j["axes"] = s.punctured;
            break;
        case SetKind::GraphComplement:
            j["f"] = s.graph_exprs;
            j["n"] = s.graph_n;
            break;
        case SetKind::ReinhardtLog:
            j["v"] = set_to_json_value(s.parts[0]);
            break;
        case SetKind::Intersection:
        case SetKind::UnionSet: {
            nlohmann::ordered_json parts = nlohmann::ordered_json::array();
            for (const auto& part : s.parts) parts.push_back(set_to_json_value(part));
            j["parts"] = parts;
            break;
        }
        case SetKind::Oracle:
            j["expr"] = s.oracle_expr;
            j["dim"] = s.dim;
            j["box"] = box_to_json(s.oracle_box);
            break;
    }
    if (!s.label.empty()) j["label"] = s.label;
    return j;
}

OpenSetModel set_from_json_value(const nlohmann::json& j) {
    if (!j.is_object())
        throw std::invalid_argument("set JSON must be an object");
    if (!j.contains("kind")) {
        // command-line shorthand: {"box": [[0,1],[0,1]]} and
        // {"punctured_axis": 1, "dim": 2} with axes numbered like x1, x2, ...
        if (j.contains("box")) {
            OpenSetModel s = make_box_set(box_from_json_value(j.at("box")));
            if (j.contains("label")) s.label = j.at("label").get<std::string>();
            return s;
        }
        if (j.contains("punctured_axis")) {
            std::vector<int> axes;
            const auto& pa = j.at("punctured_axis");
            if (pa.is_array())
                for (const auto& a : pa) axes.push_back(a.get<int>() - 1);
            else
                axes.push_back(pa.get<int>() - 1);
            OpenSetModel s = make_punctured_axis(j.at("dim").get<int>(), std::move(axes));
            if (j.contains("label")) s.label = j.at("label").get<std::string>();
            return s;
        }
        throw std::invalid_argument("set JSON must carry a \"kind\" tag or a known shorthand key");
    }
    std::string kind = j.at("kind").get<std::string>();
    OpenSetModel s;
    if (kind == "half_space") {
        s = make_half_space(j.at("a").get<Point>(), j.at("b").get<double>());
    } else if (kind == "ball") {
        s = make_ball(j.at("c").get<Point>(), j.at("r").get<double>());
    } else if (kind == "box") {
        s = make_box_set(box_from_json_value(j.at("intervals")));
    } else if (kind == "punctured_axis") {
        s = make_punctured_axis(j.at("dim").get<int>(), j.at("axes").get<std::vector<int>>());
    } else if (kind == "graph_complement") {
        s = make_graph_complement(j.at("f").get<std::vector<std::string>>(), j.at("n").get<int>());
    } else if (kind == "reinhardt_log") {
        s = make_reinhardt_log(set_from_json_value(j.at("v")));
    } else if (kind == "intersection" || kind == "union") {
        std::vector<OpenSetModel> parts;
        for (const auto& pj : j.at("parts")) parts.push_back(set_from_json_value(pj));
        s = kind == "intersection" ? make_intersection(std::move(parts))
                                   : make_union(std::move(parts));
    } else if (kind == "oracle") {
        s = make_oracle(j.at("expr").get<std::string>(), j.at("dim").get<int>(),
                        box_from_json_value(j.at("box")));
    } else {
        throw std::invalid_argument("unknown set kind: " + kind);
    }
    if (j.contains("label")) s.label = j.at("label").get<std::string>();
    return s;
}

}  // namespace

std::string set_to_json(const OpenSetModel& s) { return set_to_json_value(s).dump(); }

OpenSetModel set_from_json(const std::string& text) {
    return set_from_json_value(nlohmann::json::parse(text));
}

}  // namespace qcx
