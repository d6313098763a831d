#include "doctest.h"

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "qcx/rng.hpp"
#include "qcx/spectra.hpp"

using namespace qcx;

TEST_CASE("2x2 symmetric with known spectrum") {
    std::vector<double> m{2, 1, 1, 2};
    auto r = eig_symmetric(m, 2);
    CHECK(r.values[0] == doctest::Approx(1.0));
    CHECK(r.values[1] == doctest::Approx(3.0));
    // eigenvectors orthonormal and reconstruct the matrix
    CHECK(std::fabs(dot(r.vectors[0], r.vectors[1])) < 1e-10);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            double rec = r.values[0] * r.vectors[0][i] * r.vectors[0][j] +
                         r.values[1] * r.vectors[1][i] * r.vectors[1][j];
            CHECK(rec == doctest::Approx(m[static_cast<size_t>(i) * 2 + j]).epsilon(1e-10));
        }
}

TEST_CASE("zero and diagonal matrices") {
    auto z = eig_symmetric(std::vector<double>(9, 0.0), 3);
    for (double v : z.values) CHECK(v == 0.0);
    auto d = eig_symmetric({3, 0, 0, 0, -1, 0, 0, 0, 2}, 3);
    CHECK(d.values[0] == doctest::Approx(-1));
    CHECK(d.values[1] == doctest::Approx(2));
    CHECK(d.values[2] == doctest::Approx(3));
}

TEST_CASE("eigenvalue sum matches trace within 1e-9 * n * frobenius") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        int n = 2 + static_cast<int>(trial % 5);
        auto m = oracle::random_symmetric(rng, n);
        auto r = eig_symmetric(m, n);
        double trace = 0, sum = 0;
        for (int i = 0; i < n; ++i) trace += m[static_cast<size_t>(i) * n + i];
        for (double v : r.values) sum += v;
        CHECK(std::fabs(trace - sum) <= 1e-9 * n * frobenius_norm(m));
    }
}

TEST_CASE("eigenvalues invariant under orthogonal similarity within 1e-9") {
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 3;
        auto m = oracle::random_symmetric(rng, n);
        auto q = oracle::random_orthogonal(rng, n);
        // b = Q^T m Q
        std::vector<double> b(static_cast<size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0;
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c)
                        s += q[static_cast<size_t>(i)][static_cast<size_t>(r)] *
                             m[static_cast<size_t>(r) * n + c] *
                             q[static_cast<size_t>(j)][static_cast<size_t>(c)];
                b[static_cast<size_t>(i) * n + j] = s;
            }
        auto ra = eig_symmetric(m, n);
        auto rb = eig_symmetric(b, n);
        double scale = std::max(1.0, frobenius_norm(m));
        for (int i = 0; i < n; ++i)
            CHECK(std::fabs(ra.values[static_cast<size_t>(i)] -
                            rb.values[static_cast<size_t>(i)]) <= 1e-9 * scale);
    }
}

TEST_CASE("hermitian [[0,-i],[i,0]] has eigenvalues -1, 1") {
    using cd = std::complex<double>;
    std::vector<cd> m{cd(0, 0), cd(0, -1), cd(0, 1), cd(0, 0)};
    auto v = eig_hermitian(m, 2);
    CHECK(v[0] == doctest::Approx(-1.0));
    CHECK(v[1] == doctest::Approx(1.0));
}

TEST_CASE("hermitian diagonal passes through") {
    using cd = std::complex<double>;
    std::vector<cd> m{cd(2.5, 0), cd(0, 0), cd(0, 0), cd(-0.5, 0)};
    auto v = eig_hermitian(m, 2);
    CHECK(v[0] == doctest::Approx(-0.5));
    CHECK(v[1] == doctest::Approx(2.5));
}

TEST_CASE("hermitian eigenvalues are real shifts of trace") {
    using cd = std::complex<double>;
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 3;
        std::vector<cd> m(static_cast<size_t>(n) * n);
        for (int i = 0; i < n; ++i) {
            m[static_cast<size_t>(i) * n + i] = cd(rng.uniform(-1, 1), 0);
            for (int j = i + 1; j < n; ++j) {
                cd v(rng.uniform(-1, 1), rng.uniform(-1, 1));
                m[static_cast<size_t>(i) * n + j] = v;
                m[static_cast<size_t>(j) * n + i] = std::conj(v);
            }
        }
        auto vals = eig_hermitian(m, n);
        double trace = 0, sum = 0;
        for (int i = 0; i < n; ++i) trace += m[static_cast<size_t>(i) * n + i].real();
        for (double v : vals) sum += v;
        CHECK(std::fabs(trace - sum) <= 1e-8);
    }
}

TEST_CASE("inertia bands") {
    Inertia a = inertia_auto({-0.5, 0.0, 2.0});
    CHECK(a.neg == 1);
    CHECK(a.zero == 1);
    CHECK(a.pos == 1);
    Inertia b = inertia({-1e-9, 1e-9}, 1.0);
    CHECK(b.neg == 0);
    CHECK(b.zero == 2);
    Inertia c = inertia({-1e-9, 1e-9}, 1.0, 1e-10);
    CHECK(c.neg == 1);
    CHECK(c.pos == 1);
    // scale-relative: same spectrum scaled by 1e6 classifies identically
    Inertia d = inertia_auto({-1e-3, 5.0, 1e3});
    Inertia e = inertia_auto({-1.0, 5e3, 1e6});
    CHECK(d.neg == e.neg);
    CHECK(d.zero == e.zero);
    CHECK(d.pos == e.pos);
}
