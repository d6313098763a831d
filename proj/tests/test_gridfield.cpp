#include <cmath>

#include "doctest.h"
#include "qcx/field.hpp"
#include "qcx/gridfield.hpp"

using namespace qcx;

namespace {

GridField constant_grid(const Box& box, const std::vector<int>& res, double value) {
    GridField gf{box, res, {}};
    gf.values.assign(gf.node_count(), value);
    return gf;
}

}  // namespace

TEST_CASE("lattice indexing round-trips and spaces nodes evenly") {
    GridField gf = constant_grid(Box{Interval{0, 1}, Interval{0, 2}}, {2, 4}, 0.0);
    REQUIRE(gf.node_count() == 15);
    CHECK(gf.spacing(0) == 0.5);
    CHECK(gf.spacing(1) == 0.5);
    CHECK(gf.flat({1, 2}) == 7);
    CHECK(gf.multi(7) == std::vector<int>{1, 2});
    CHECK(gf.node_point({1, 2}) == Point{0.5, 1.0});
    for (size_t i = 0; i < gf.node_count(); ++i) CHECK(gf.flat(gf.multi(i)) == i);
}

TEST_CASE("sampling a field onto a lattice") {
    auto f = field_from_expr("x1^2", 1, unit_sym_box(1, 2.0), Smoothness::CInf);
    GridField gf = sample_to_grid(f, Box{Interval{-1, 1}}, {4});
    REQUIRE(gf.values.size() == 5);
    CHECK(gf.values[0] == doctest::Approx(1.0));
    CHECK(gf.values[1] == doctest::Approx(0.25));
    CHECK(gf.values[2] == doctest::Approx(0.0));
    CHECK(gf.values[3] == doctest::Approx(0.25));
    CHECK(gf.values[4] == doctest::Approx(1.0));

    CHECK_THROWS_AS(sample_to_grid(f, Box{Interval{-3, 3}}, {4}), std::invalid_argument);
}

TEST_CASE("kernel profiles and their curvature bounds") {
    KernelSpec quartic{KernelSpec::Shape::Quartic, 1.0};
    CHECK(quartic.profile(0.0) == 1.0);
    CHECK(quartic.profile(1.0) == 0.0);
    CHECK(quartic.profile(0.5) == doctest::Approx(0.5625));
    CHECK(quartic({0.3, 0.4}) == doctest::Approx(0.5625));
    CHECK(quartic.curvature_bound() == doctest::Approx(4.0));

    KernelSpec bump{KernelSpec::Shape::Bump, 2.0};
    CHECK(bump.profile(0.0) == 1.0);
    CHECK(bump.profile(1.0) == 0.0);
    CHECK(bump.curvature_bound() == doctest::Approx(2.597 / 4.0));

    for (KernelSpec ker : {quartic, bump}) {
        double c = ker.curvature_bound() * ker.radius * ker.radius;
        for (int i = 0; i <= 1000; ++i) {
            double tau = i / 1000.0;
            CHECK(ker.profile(tau) >= 1.0 - 0.5 * c * tau * tau);
        }
    }
}

TEST_CASE("sup-convolution of a constant keeps the constant") {
    GridField gf = constant_grid(unit_sym_box(2), {8, 8}, 2.0);
    KernelSpec ker{KernelSpec::Shape::Quartic, 0.24};
    SupConvolveResult sc = sup_convolve(gf, ker);
    CHECK(sc.trim == std::vector<int>{1, 1});
    CHECK(sc.out.res == std::vector<int>{6, 6});
    for (double v : sc.out.values) CHECK(v == doctest::Approx(2.0));
    REQUIRE(!sc.argmax.empty());
    for (size_t a : sc.argmax) CHECK(a == sc.argmax[0]);

    GridField neg = constant_grid(unit_sym_box(2), {8, 8}, -1.0);
    CHECK_THROWS_AS(sup_convolve(neg, ker), std::invalid_argument);
}

TEST_CASE("smoothing from above reproduces the shift identities") {
    Box box = unit_sym_box(2);
    KernelSpec ker{KernelSpec::Shape::Quartic, 0.3};

    GridField zero = constant_grid(box, {8, 8}, 0.0);
    ApproximationResult a = approximate_from_above(zero, 1.0, ker);
    CHECK(a.dominates);
    for (double v : a.tilde.values) CHECK(v == doctest::Approx(1.0));

    GridField low = constant_grid(box, {8, 8}, -5.0);
    ApproximationResult b = approximate_from_above(low, 10.0, ker);
    CHECK(b.dominates);
    for (double v : b.tilde.values) CHECK(v == doctest::Approx(-4.9));

    CHECK_THROWS_AS(approximate_from_above(zero, 0.0, ker), std::invalid_argument);
}

TEST_CASE("branch switches are detected and suppress phantom curvature") {
    GridField gf = constant_grid(Box{Interval{0, 1}, Interval{0, 1}}, {16, 16}, 1.0);
    gf.values[gf.flat({8, 8})] = 10.0;
    KernelSpec ker{KernelSpec::Shape::Quartic, 0.2};
    SupConvolveResult sc = sup_convolve(gf, ker);
    REQUIRE(sc.out.res == std::vector<int>{8, 8});

    // Without branch labels the isolated peak scallops into a cap whose
    // lattice Hessian is negative definite.
    GridClassifyReport naive = grid_q_index(sc.out);
    CHECK(naive.q_index == 2);

    // With them, every stencil that crosses a branch switch is skipped and
    // the remaining nodes are flat.
    GridClassifyReport guarded = grid_q_index(sc.out, 1e-7, &sc.argmax);
    CHECK(guarded.q_index == 0);
    CHECK(!guarded.straddle_nodes.empty());
    CHECK(guarded.nodes_evaluated > 0);
}

TEST_CASE("smoothing preserves the lattice negativity count of a saddle") {
    auto f = field_from_expr("-x1^2 + x2^2", 2, unit_sym_box(2, 2.0), Smoothness::CInf);
    GridField gf = sample_to_grid(f, unit_sym_box(2), {16, 16});
    KernelSpec ker{KernelSpec::Shape::Quartic, 0.2};
    ApproximationResult ar = approximate_from_above(gf, 5.0, ker);
    CHECK(ar.dominates);
    GridClassifyReport rep = grid_q_index(ar.tilde, 1e-7, &ar.argmax);
    CHECK(rep.straddle_nodes.empty());
    CHECK(rep.nodes_evaluated == 121);
    CHECK(rep.q_index == 1);
    CHECK(rep.strict_q_index == 1);
}
