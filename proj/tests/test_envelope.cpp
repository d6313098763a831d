#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "qcx/envelope.hpp"
#include "qcx/rng.hpp"

using namespace qcx;

TEST_CASE("two-point chord in one dimension") {
    std::vector<Point> xs{{-1.0}, {1.0}};
    std::vector<double> us{1.0, 1.0};
    auto l = fit_affine_upper_envelope(xs, us, {0.0});
    CHECK(l({0.0}) == doctest::Approx(1.0));
    for (size_t i = 0; i < xs.size(); ++i) CHECK(l(xs[i]) >= us[i] - 1e-9);
}

TEST_CASE("affine data is reproduced exactly at the center") {
    // values sampled from l0(x) = 2 x1 - x2 + 3 on a circle
    std::vector<Point> xs;
    std::vector<double> us;
    for (int j = 0; j < 12; ++j) {
        double th = 2 * M_PI * j / 12;
        Point p{std::cos(th), std::sin(th)};
        us.push_back(2 * p[0] - p[1] + 3);
        xs.push_back(p);
    }
    Point center{0.25, -0.125};
    auto l = fit_affine_upper_envelope(xs, us, center);
    CHECK(std::fabs(l(center) - (2 * 0.25 + 0.125 + 3)) <= 1e-8);
    for (size_t i = 0; i < xs.size(); ++i) CHECK(l(xs[i]) >= us[i] - 1e-9);
}

TEST_CASE("concave boundary data forces the envelope above the chord middle") {
    // u(x) = -x^2 on {-1, 0, 1}: minimal upper bound at 0 is 0
    std::vector<Point> xs{{-1.0}, {0.0}, {1.0}};
    std::vector<double> us{-1.0, 0.0, -1.0};
    auto l = fit_affine_upper_envelope(xs, us, {0.0});
    CHECK(l({0.0}) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("matches brute-force vertex enumeration on small instances") {
    Rng rng(101);
    int compared = 0;
    for (int trial = 0; trial < 60; ++trial) {
        size_t k = 1 + trial % 2;
        size_t m = k + 2 + rng.next_u64() % (4 - k);  // up to 6 constraints
        std::vector<Point> xs;
        std::vector<double> us;
        Point center(k, 0.0);
        for (size_t i = 0; i < m; ++i) {
            Point p(k);
            for (auto& c : p) c = rng.uniform(-2.0, 2.0);
            xs.push_back(p);
            us.push_back(rng.uniform(-3.0, 3.0));
            for (size_t c = 0; c < k; ++c) center[c] += p[c] / static_cast<double>(m);
        }
        // center is the sample mean, hence inside the hull: bounded LP
        auto expected = oracle::envelope_by_vertex_enumeration(xs, us, center);
        if (!expected) continue;
        auto l = fit_affine_upper_envelope(xs, us, center);
        CHECK(std::fabs(l(center) - *expected) <= 1e-9 * std::max(1.0, std::fabs(*expected)));
        for (size_t i = 0; i < m; ++i) CHECK(l(xs[i]) >= us[i] - 1e-9);
        ++compared;
    }
    CHECK(compared >= 50);
}

TEST_CASE("center outside the affine hull is reported unbounded") {
    std::vector<Point> xs{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
    std::vector<double> us{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(fit_affine_upper_envelope(xs, us, {0.5, 1.0}), UnboundedEnvelope);
}

TEST_CASE("minus-infinity samples are vacuous") {
    std::vector<Point> xs{{-1.0}, {0.5}, {1.0}};
    std::vector<double> us{1.0, -kInf, 1.0};
    auto l = fit_affine_upper_envelope(xs, us, {0.0});
    CHECK(l({0.0}) == doctest::Approx(1.0));
    std::vector<double> all_inf{-kInf, -kInf, -kInf};
    CHECK_THROWS_AS(fit_affine_upper_envelope(xs, all_inf, {0.0}), UnboundedEnvelope);
}
