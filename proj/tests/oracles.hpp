#pragma once

// Independent oracles used to freeze expected values for the library tests.
// Everything here is deliberately brute force and shares no code paths with
// the implementations under test.

#include <cmath>
#include <optional>
#include <vector>

#include "qcx/common.hpp"
#include "qcx/rng.hpp"

namespace oracle {

using qcx::Point;

// Solves a (k+1)x(k+1) system by Gaussian elimination with partial pivoting.
inline std::optional<std::vector<double>> solve_square(std::vector<std::vector<double>> a,
                                                       std::vector<double> rhs) {
    size_t n = rhs.size();
    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        for (size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        if (std::fabs(a[piv][col]) < 1e-12) return std::nullopt;
        std::swap(a[piv], a[col]);
        std::swap(rhs[piv], rhs[col]);
        for (size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            for (size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i) x[i] = rhs[i] / a[i][i];
    return x;
}

// Minimal l(center) with l(xs[i]) >= us[i], by enumerating candidate vertices
// (all (k+1)-subsets of tight constraints). Only valid when the objective is
// bounded, which holds when center lies in the convex hull of xs.
inline std::optional<double> envelope_by_vertex_enumeration(const std::vector<Point>& xs,
                                                            const std::vector<double>& us,
                                                            const Point& center) {
    size_t m = xs.size(), k = center.size();
    std::optional<double> best;
    std::vector<size_t> idx(k + 1);
    std::vector<bool> pick(m, false);

    // iterate over all (k+1)-subsets via a simple odometer
    std::vector<size_t> sub(k + 1);
    for (size_t i = 0; i <= k; ++i) sub[i] = i;
    if (m < k + 1) return std::nullopt;
    for (;;) {
        std::vector<std::vector<double>> a(k + 1, std::vector<double>(k + 1));
        std::vector<double> rhs(k + 1);
        for (size_t r = 0; r <= k; ++r) {
            for (size_t c = 0; c < k; ++c) a[r][c] = xs[sub[r]][c];
            a[r][k] = 1.0;
            rhs[r] = us[sub[r]];
        }
        if (auto z = solve_square(a, rhs)) {
            bool feasible = true;
            for (size_t i = 0; i < m && feasible; ++i) {
                double lv = (*z)[k];
                for (size_t c = 0; c < k; ++c) lv += (*z)[c] * xs[i][c];
                if (lv < us[i] - 1e-9) feasible = false;
            }
            if (feasible) {
                double val = (*z)[k];
                for (size_t c = 0; c < k; ++c) val += (*z)[c] * center[c];
                if (!best || val < *best) best = val;
            }
        }
        // advance subset
        size_t pos = k + 1;
        while (pos > 0) {
            --pos;
            if (sub[pos] + (k + 1 - pos) < m) {
                ++sub[pos];
                for (size_t q = pos + 1; q <= k; ++q) sub[q] = sub[q - 1] + 1;
                break;
            }
            if (pos == 0) return best;
        }
        if (pos == 0 && sub[0] + k + 1 > m) break;
    }
    return best;
}

// Analytic Hessian of a quadratic x -> 0.5 x^T A x + b.x (row-major A).
inline std::vector<double> quadratic_hessian(const std::vector<double>& a) { return a; }

// Random symmetric matrix with entries uniform in [-1, 1].
inline std::vector<double> random_symmetric(qcx::Rng& rng, int n) {
    std::vector<double> a(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = rng.uniform(-1.0, 1.0);
            a[static_cast<size_t>(i) * n + j] = v;
            a[static_cast<size_t>(j) * n + i] = v;
        }
    return a;
}

// Random orthogonal matrix (columns) via Gram-Schmidt on Gaussian vectors.
inline std::vector<Point> random_orthogonal(qcx::Rng& rng, int n) {
    std::vector<Point> cols;
    while (static_cast<int>(cols.size()) < n) {
        Point v = rng.gaussian_vector(n);
        for (const auto& u : cols) {
            double d = qcx::dot(v, u);
            for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] -= d * u[static_cast<size_t>(i)];
        }
        double nv = qcx::norm2(v);
        if (nv < 1e-6) continue;
        for (auto& x : v) x /= nv;
        cols.push_back(v);
    }
    return cols;
}

}  // namespace oracle
