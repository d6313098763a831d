#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcx {

inline constexpr const char* kLibraryVersion = "0.1.0";

using Point = std::vector<double>;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Extended-real convention: values live in [-inf, +inf); -inf is a legal
// function value, +inf and NaN are not.
inline bool is_extended_real(double v) { return !std::isnan(v) && v < kInf; }

struct Interval {
    double lo = -kInf;
    double hi = kInf;
    bool contains(double x) const { return x > lo && x < hi; }
    double extent() const { return hi - lo; }
    bool bounded() const { return std::isfinite(lo) && std::isfinite(hi); }
};

using Box = std::vector<Interval>;

inline bool box_contains(const Box& b, const Point& p) {
    if (b.size() != p.size()) return false;
    for (size_t i = 0; i < b.size(); ++i)
        if (!b[i].contains(p[i])) return false;
    return true;
}

// Distance from p to the box frame along the nearest axis, +inf for all-unbounded boxes.
inline double box_margin(const Box& b, const Point& p) {
    double m = kInf;
    for (size_t i = 0; i < b.size(); ++i) {
        if (std::isfinite(b[i].lo)) m = std::min(m, p[i] - b[i].lo);
        if (std::isfinite(b[i].hi)) m = std::min(m, b[i].hi - p[i]);
    }
    return m;
}

inline Box unit_sym_box(int dim, double half = 1.0) {
    return Box(static_cast<size_t>(dim), Interval{-half, half});
}

struct ParseError : std::runtime_error {
    size_t offset;
    ParseError(const std::string& what, size_t off)
        : std::runtime_error(what + " (byte " + std::to_string(off) + ")"), offset(off) {}
};

struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double dot(const Point& a, const Point& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(const Point& a) { return std::sqrt(dot(a, a)); }

inline Point axpy(double t, const Point& x, const Point& y) {
    Point r(y);
    for (size_t i = 0; i < x.size(); ++i) r[i] += t * x[i];
    return r;
}

}  // namespace qcx
