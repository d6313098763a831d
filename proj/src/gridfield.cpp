#include "qcx/gridfield.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>

#include "qcx/parallel.hpp"
#include "qcx/spectra.hpp"

namespace qcx {

namespace {

void validate_lattice(const Box& box, const std::vector<int>& res) {
    if (box.size() != res.size())
        throw std::invalid_argument("lattice resolution list does not match the box dimension");
    for (size_t i = 0; i < res.size(); ++i) {
        if (res[i] <= 0) throw std::invalid_argument("lattice resolutions must be positive");
        if (!box[i].bounded()) throw std::invalid_argument("lattice box must be bounded");
    }
}

}  // namespace

size_t GridField::node_count() const {
    validate_lattice(box, res);
    size_t c = 1;
    for (int r : res) c *= static_cast<size_t>(r) + 1;
    return c;
}

double GridField::spacing(size_t axis) const { return box[axis].extent() / res[axis]; }

size_t GridField::flat(const std::vector<int>& multi) const {
    size_t f = 0;
    for (size_t i = 0; i < res.size(); ++i)
        f = f * (static_cast<size_t>(res[i]) + 1) + static_cast<size_t>(multi[i]);
    return f;
}

std::vector<int> GridField::multi(size_t flat) const {
    std::vector<int> m(res.size());
    for (size_t i = res.size(); i-- > 0;) {
        size_t w = static_cast<size_t>(res[i]) + 1;
        m[i] = static_cast<int>(flat % w);
        flat /= w;
    }
    return m;
}

Point GridField::node_point(const std::vector<int>& multi) const {
    Point p(res.size());
    for (size_t i = 0; i < res.size(); ++i) p[i] = box[i].lo + multi[i] * spacing(i);
    return p;
}

GridField sample_to_grid(const ScalarField& f, const Box& box, const std::vector<int>& res) {
    validate_lattice(box, res);
    if (static_cast<int>(box.size()) != f.dim)
        throw std::invalid_argument("lattice dimension does not match the field");
    GridField gf{box, res, {}};
    size_t total = gf.node_count();
    gf.values.assign(total, 0.0);
    std::atomic<bool> failed{false};
    std::string err;
    std::mutex err_mu;
    parallel_for(total, [&](size_t i) {
        if (failed.load(std::memory_order_relaxed)) return;
        try {
            gf.values[i] = f(gf.node_point(gf.multi(i)));
        } catch (const EvalError& e) {
            std::lock_guard<std::mutex> lk(err_mu);
            failed.store(true);
            if (err.empty()) err = e.what();
        }
    });
    if (failed.load())
        throw std::invalid_argument("sampling lattice must sit strictly inside the field domain: " +
                                    err);
    return gf;
}

double KernelSpec::profile(double tau) const {
    if (tau >= 1.0) return 0.0;
    double s = tau * tau;
    if (shape == Shape::Quartic) {
        double w = 1.0 - s;
        return w * w;
    }
    return std::exp(1.0 - 1.0 / (1.0 - s));
}

double KernelSpec::operator()(const Point& t) const {
    double d2 = 0;
    for (double x : t) d2 += x * x;
    return profile(std::sqrt(d2) / radius);
}

double KernelSpec::curvature_bound() const {
    if (radius <= 0) throw std::invalid_argument("kernel radius must be positive");
    // Quartic: (1-s)^2 >= 1-2s exactly, so L = 4/r^2. Bump: the peak of
    // 2(1 - profile)/tau^2 on the unit profile is 2.5969 (scanned offline).
    double c = shape == Shape::Quartic ? 4.0 : 2.597;
    return c / (radius * radius);
}

SupConvolveResult sup_convolve(const GridField& u, const KernelSpec& g) {
    validate_lattice(u.box, u.res);
    if (g.radius <= 0) throw std::invalid_argument("kernel radius must be positive");
    for (double v : u.values)
        if (!(v >= 0))
            throw std::invalid_argument("supremum convolution needs non-negative lattice values");
    size_t n = u.res.size();
    std::vector<int> trim(n);
    GridField out;
    out.box.resize(n);
    out.res.resize(n);
    for (size_t i = 0; i < n; ++i) {
        double h = u.spacing(i);
        trim[i] = static_cast<int>(std::ceil(g.radius / h - 1e-12));
        int rr = u.res[i] - 2 * trim[i];
        if (rr < 0)
            throw std::invalid_argument("kernel radius leaves no lattice nodes to emit");
        out.res[i] = rr;
        out.box[i] = Interval{u.box[i].lo + trim[i] * h, u.box[i].hi - trim[i] * h};
    }
    // out.res entries may be zero; node_count still counts the single plane of
    // nodes, but validate_lattice refuses res 0, so bump the degenerate axes
    // into an explicit error instead.
    for (size_t i = 0; i < n; ++i)
        if (out.res[i] == 0)
            throw std::invalid_argument("kernel radius leaves a single node on some axis");

    size_t total = out.node_count();
    out.values.assign(total, 0.0);
    SupConvolveResult result;
    result.trim = trim;
    result.argmax.assign(total, SIZE_MAX);

    const double r2 = g.radius * g.radius;
    parallel_for(total, [&](size_t flat_out) {
        std::vector<int> mo = out.multi(flat_out);
        std::vector<int> center(n);
        for (size_t i = 0; i < n; ++i) center[i] = mo[i] + trim[i];
        Point x = u.node_point(center);

        double best = -kInf;
        size_t arg = SIZE_MAX;
        // The kernel vanishes outside its support, so a zero candidate exists
        // whenever the support ball misses part of the lattice hull.
        {
            double far2 = 0;
            for (size_t i = 0; i < n; ++i) {
                double d = std::max(x[i] - u.box[i].lo, u.box[i].hi - x[i]);
                far2 += d * d;
            }
            if (far2 > r2) best = 0.0;
        }

        std::vector<int> off(n);
        for (size_t i = 0; i < n; ++i) off[i] = -trim[i];
        std::vector<int> my(n);
        for (;;) {
            double d2 = 0;
            for (size_t i = 0; i < n; ++i) {
                double d = off[i] * u.spacing(i);
                d2 += d * d;
                my[i] = center[i] + off[i];
            }
            if (d2 < r2) {
                double uy = u.values[u.flat(my)];
                double v = uy * g.profile(std::sqrt(d2) / g.radius);
                if (v > best) {
                    best = v;
                    size_t code = 0;
                    for (size_t i = 0; i < n; ++i)
                        code = code * (2 * static_cast<size_t>(trim[i]) + 1) +
                               static_cast<size_t>(off[i] + trim[i]);
                    arg = code;
                }
            }
            size_t axis = n;
            while (axis-- > 0) {
                if (off[axis] < trim[axis]) {
                    ++off[axis];
                    break;
                }
                off[axis] = -trim[axis];
                if (axis == 0) {
                    axis = SIZE_MAX;
                    break;
                }
            }
            if (axis == SIZE_MAX) break;
        }
        out.values[flat_out] = best;
        result.argmax[flat_out] = arg;
    });
    result.out = std::move(out);
    return result;
}

ApproximationResult approximate_from_above(const GridField& u, double k, const KernelSpec& g) {
    if (!(k > 0)) throw std::invalid_argument("clip level k must be positive");
    GridField v = u;
    for (auto& val : v.values) val = std::max(val, -k) + k + 1.0 / k;
    SupConvolveResult sc = sup_convolve(v, g);
    ApproximationResult ar;
    ar.k = k;
    ar.trim = sc.trim;
    ar.argmax = std::move(sc.argmax);
    ar.tilde = std::move(sc.out);
    for (auto& val : ar.tilde.values) val -= k;

    size_t n = u.res.size();
    size_t total = ar.tilde.node_count();
    for (size_t flat = 0; flat < total && ar.dominates; ++flat) {
        std::vector<int> mo = ar.tilde.multi(flat);
        for (size_t i = 0; i < n; ++i) mo[i] += ar.trim[i];
        if (!(u.values[u.flat(mo)] < ar.tilde.values[flat])) {
            ar.dominates = false;
            ar.offending_node = flat;
        }
    }
    return ar;
}

GridClassifyReport grid_q_index(const GridField& gf, double tol,
                                const std::vector<size_t>* argmax) {
    validate_lattice(gf.box, gf.res);
    size_t n = gf.res.size();
    GridClassifyReport rep;

    std::vector<std::vector<int>> stencil;
    stencil.push_back(std::vector<int>(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (int s : {1, -1}) {
            std::vector<int> o(n, 0);
            o[i] = s;
            stencil.push_back(std::move(o));
        }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            for (int si : {1, -1})
                for (int sj : {1, -1}) {
                    std::vector<int> o(n, 0);
                    o[i] = si;
                    o[j] = sj;
                    stencil.push_back(std::move(o));
                }

    std::vector<int> m(n, 1);
    bool has_interior = true;
    for (size_t i = 0; i < n; ++i)
        if (gf.res[i] < 2) has_interior = false;
    if (!has_interior) return rep;

    std::vector<int> my(n);
    for (;;) {
        size_t fc = gf.flat(m);
        bool skip = false;
        bool straddle = false;
        for (const auto& o : stencil) {
            for (size_t i = 0; i < n; ++i) my[i] = m[i] + o[i];
            size_t fy = gf.flat(my);
            if (gf.values[fy] == -kInf) skip = true;
            if (argmax && (*argmax)[fy] != (*argmax)[fc]) {
                skip = true;
                straddle = true;
            }
            if (skip) break;
        }
        if (skip) {
            rep.nodes_skipped++;
            if (straddle) rep.straddle_nodes.push_back(fc);
        } else {
            std::vector<double> H(n * n, 0.0);
            double uc = gf.values[fc];
            for (size_t i = 0; i < n; ++i) {
                double hi = gf.spacing(i);
                my = m;
                my[i] = m[i] + 1;
                double up = gf.values[gf.flat(my)];
                my[i] = m[i] - 1;
                double dn = gf.values[gf.flat(my)];
                H[i * n + i] = (up - 2 * uc + dn) / (hi * hi);
                for (size_t j = i + 1; j < n; ++j) {
                    double hj = gf.spacing(j);
                    double acc = 0;
                    for (int si : {1, -1})
                        for (int sj : {1, -1}) {
                            my = m;
                            my[i] = m[i] + si;
                            my[j] = m[j] + sj;
                            acc += si * sj * gf.values[gf.flat(my)];
                        }
                    H[i * n + j] = H[j * n + i] = acc / (4 * hi * hj);
                }
            }
            EigResult eig = eig_symmetric(H, static_cast<int>(n));
            Inertia in = inertia_auto(eig.values, tol);
            rep.q_index = std::max(rep.q_index, in.neg);
            rep.strict_q_index = std::max(rep.strict_q_index, in.neg + in.zero);
            rep.nodes_evaluated++;
            rep.records.push_back(GridNodeRecord{m, in.neg, in.zero, in.pos});
        }
        size_t axis = n;
        while (axis-- > 0) {
            if (m[axis] < gf.res[axis] - 1) {
                ++m[axis];
                break;
            }
            m[axis] = 1;
            if (axis == 0) {
                axis = SIZE_MAX;
                break;
            }
        }
        if (axis == SIZE_MAX) break;
    }
    return rep;
}

}  // namespace qcx
