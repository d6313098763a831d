#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "qcx/common.hpp"

namespace qcx {

// Deterministic cross-platform generators; std:: distributions are
// implementation-defined, so sampling is done by hand on top of raw bits.

inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    // Work items derive independent streams as seed ^ item-index so results
    // do not depend on scheduling.
    static Rng for_item(uint64_t seed, uint64_t item) {
        return Rng(seed ^ (0x9e3779b97f4a7c15ULL * (item + 1)));
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0,1).
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_double(), u2 = next_double();
        while (u1 <= 0) u1 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    Point gaussian_vector(int dim) {
        Point v(static_cast<size_t>(dim));
        for (auto& x : v) x = normal();
        return v;
    }

    Point unit_vector(int dim) {
        for (;;) {
            Point v = gaussian_vector(dim);
            double n = norm2(v);
            if (n > 1e-12) {
                for (auto& x : v) x /= n;
                return v;
            }
        }
    }

    // Uniform in the unit ball via radius ~ u^(1/dim).
    Point ball_vector(int dim) {
        Point v = unit_vector(dim);
        double r = std::pow(next_double(), 1.0 / dim);
        for (auto& x : v) x *= r;
        return v;
    }

    Point point_in_box(const Box& b) {
        Point p(b.size());
        for (size_t i = 0; i < b.size(); ++i) p[i] = uniform(b[i].lo, b[i].hi);
        return p;
    }

  private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4] = {};
    double spare_ = 0;
    bool have_spare_ = false;
};

inline double halton(uint64_t index, uint64_t base) {
    double f = 1.0, r = 0.0;
    for (uint64_t i = index + 1; i > 0; i /= base) {
        f /= static_cast<double>(base);
        r += f * static_cast<double>(i % base);
    }
    return r;
}

// Deterministic quasi-uniform points on the unit sphere S^(dim-1).
// dim 1 and 2 are exact lattices, dim 3 the golden spiral, higher dims
// Box-Muller over Halton pairs.
inline std::vector<Point> unit_sphere_points(int dim, int count) {
    std::vector<Point> pts;
    pts.reserve(static_cast<size_t>(count));
    if (dim == 1) {
        for (int j = 0; j < count; ++j) pts.push_back({j % 2 == 0 ? 1.0 : -1.0});
        return pts;
    }
    if (dim == 2) {
        for (int j = 0; j < count; ++j) {
            double th = 2.0 * M_PI * j / count;
            pts.push_back({std::cos(th), std::sin(th)});
        }
        return pts;
    }
    if (dim == 3) {
        const double ga = M_PI * (3.0 - std::sqrt(5.0));
        for (int j = 0; j < count; ++j) {
            double z = 1.0 - 2.0 * (j + 0.5) / count;
            double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            double th = ga * j;
            pts.push_back({rho * std::cos(th), rho * std::sin(th), z});
        }
        return pts;
    }
    static const uint64_t primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    int pairs = (dim + 1) / 2;
    for (int j = 0; j < count; ++j) {
        Point v(static_cast<size_t>(dim));
        for (int k = 0; k < pairs; ++k) {
            double u1 = halton(static_cast<uint64_t>(j), primes[2 * k]);
            double u2 = halton(static_cast<uint64_t>(j), primes[2 * k + 1]);
            u1 = std::max(u1, 1e-12);
            double r = std::sqrt(-2.0 * std::log(u1));
            v[static_cast<size_t>(2 * k)] = r * std::cos(2.0 * M_PI * u2);
            if (2 * k + 1 < dim) v[static_cast<size_t>(2 * k + 1)] = r * std::sin(2.0 * M_PI * u2);
        }
        double n = norm2(v);
        if (n < 1e-12) {
            v.assign(static_cast<size_t>(dim), 0.0);
            v[0] = 1.0;
            n = 1.0;
        }
        for (auto& x : v) x /= n;
        pts.push_back(std::move(v));
    }
    return pts;
}

}  // namespace qcx
