#include "qcx/envelope.hpp"

#include <cmath>
#include <limits>

namespace qcx {

namespace {

class SimplexTableau {
  public:
    SimplexTableau(size_t rows, size_t cols) : rows_(rows), cols_(cols), t_(rows * (cols + 1), 0.0) {}

    double& at(size_t r, size_t c) { return t_[r * (cols_ + 1) + c]; }
    double& rhs(size_t r) { return t_[r * (cols_ + 1) + cols_]; }

    // Minimizes obj over the current basis; Bland's rule throughout. Returns
    // false when some entering column is unbounded. Columns at or past
    // first_banned never enter (phase-2 lockout of artificials).
    bool run(std::vector<double>& obj, double& value, std::vector<size_t>& basis, double eps,
             size_t first_banned) {
        for (;;) {
            // reduced costs via the basic rows
            std::vector<double> reduced = obj;
            double base = 0;
            for (size_t r = 0; r < rows_; ++r) {
                double coef = obj[basis[r]];
                if (coef == 0) continue;
                base += coef * rhs(r);
                for (size_t c = 0; c < cols_; ++c) reduced[c] -= coef * at(r, c);
            }
            size_t enter = cols_;
            for (size_t c = 0; c < cols_ && c < first_banned; ++c) {
                if (reduced[c] < -eps) {
                    enter = c;
                    break;
                }
            }
            if (enter == cols_) {
                value = base;
                return true;
            }
            size_t leave = rows_;
            double best = std::numeric_limits<double>::infinity();
            for (size_t r = 0; r < rows_; ++r) {
                double p = at(r, enter);
                if (p > eps) {
                    double ratio = rhs(r) / p;
                    if (ratio < best - 1e-15 ||
                        (std::fabs(ratio - best) <= 1e-15 &&
                         (leave == rows_ || basis[r] < basis[leave]))) {
                        best = ratio;
                        leave = r;
                    }
                }
            }
            if (leave == rows_) return false;
            pivot(leave, enter);
            basis[leave] = enter;
        }
    }

    void pivot(size_t pr, size_t pc) {
        double p = at(pr, pc);
        for (size_t c = 0; c <= cols_; ++c) t_[pr * (cols_ + 1) + c] /= p;
        for (size_t r = 0; r < rows_; ++r) {
            if (r == pr) continue;
            double f = at(r, pc);
            if (f == 0) continue;
            for (size_t c = 0; c <= cols_; ++c) t_[r * (cols_ + 1) + c] -= f * t_[pr * (cols_ + 1) + c];
        }
    }

    size_t rows_, cols_;
    std::vector<double> t_;
};

}  // namespace

AffineFunctional fit_affine_upper_envelope(const std::vector<Point>& xs,
                                           const std::vector<double>& us, const Point& center) {
    if (xs.size() != us.size()) throw std::invalid_argument("sample point/value count mismatch");
    size_t k = center.size();
    std::vector<size_t> keep;
    for (size_t i = 0; i < us.size(); ++i) {
        if (us[i] == -kInf) continue;
        if (!is_extended_real(us[i]) || !std::isfinite(us[i]))
            throw std::invalid_argument("envelope sample value is not finite");
        if (xs[i].size() != k) throw std::invalid_argument("envelope sample dimension mismatch");
        keep.push_back(i);
    }
    if (keep.empty()) throw UnboundedEnvelope("all sample values are -inf");

    size_t m = keep.size();
    size_t nz = k + 1;             // free variables a, b before splitting
    size_t n_struct = 2 * nz + m;  // z+, z-, surplus
    size_t n_total = n_struct + m; // + artificials

    double magnitude = 1.0;
    for (size_t i : keep) magnitude = std::max(magnitude, std::fabs(us[i]));
    for (size_t i : keep)
        for (double c : xs[i]) magnitude = std::max(magnitude, std::fabs(c));
    const double eps = 1e-11 * magnitude;

    SimplexTableau tab(m, n_total);
    std::vector<size_t> basis(m);
    std::vector<bool> artificial_used(m, false);
    for (size_t r = 0; r < m; ++r) {
        size_t i = keep[r];
        double sign = us[i] < 0 ? -1.0 : 1.0;
        for (size_t c = 0; c < k; ++c) {
            tab.at(r, c) = sign * xs[i][c];
            tab.at(r, nz + c) = -sign * xs[i][c];
        }
        tab.at(r, k) = sign;
        tab.at(r, nz + k) = -sign;
        tab.at(r, 2 * nz + r) = -sign;  // surplus
        tab.rhs(r) = sign * us[i];
        if (sign < 0) {
            basis[r] = 2 * nz + r;  // flipped surplus starts basic
        } else {
            tab.at(r, n_struct + r) = 1.0;
            basis[r] = n_struct + r;
            artificial_used[r] = true;
        }
    }

    bool any_artificial = false;
    for (bool u : artificial_used) any_artificial |= u;
    if (any_artificial) {
        std::vector<double> phase1(n_total, 0.0);
        for (size_t r = 0; r < m; ++r)
            if (artificial_used[r]) phase1[n_struct + r] = 1.0;
        double v1 = 0;
        if (!tab.run(phase1, v1, basis, eps, n_total))
            throw NumericError("envelope phase-1 unbounded (corrupt tableau)");
        if (v1 > 1e-7 * magnitude)
            throw NumericError("envelope constraints unexpectedly infeasible");
        // pivot any artificial still basic at zero out of the basis
        for (size_t r = 0; r < m; ++r) {
            if (basis[r] < n_struct) continue;
            size_t pc = n_struct;
            for (size_t c = 0; c < n_struct; ++c) {
                if (std::fabs(tab.at(r, c)) > eps) {
                    pc = c;
                    break;
                }
            }
            if (pc < n_struct) {
                tab.pivot(r, pc);
                basis[r] = pc;
            }
        }
    }

    std::vector<double> phase2(n_total, 0.0);
    for (size_t c = 0; c < k; ++c) {
        phase2[c] = center[c];
        phase2[nz + c] = -center[c];
    }
    phase2[k] = 1.0;
    phase2[nz + k] = -1.0;

    double value = 0;
    if (!tab.run(phase2, value, basis, eps, n_struct))
        throw UnboundedEnvelope("affine envelope objective unbounded (degenerate sample geometry)");

    std::vector<double> z(n_total, 0.0);
    for (size_t r = 0; r < m; ++r) z[basis[r]] = tab.rhs(r);
    AffineFunctional l;
    l.a.resize(k);
    for (size_t c = 0; c < k; ++c) l.a[c] = z[c] - z[nz + c];
    l.b = z[k] - z[nz + k];
    return l;
}

}  // namespace qcx
