#include <cmath>
#include <complex>

#include "doctest.h"
#include "oracles.hpp"
#include "qcx/complex.hpp"
#include "qcx/rng.hpp"

using namespace qcx;

namespace {

ScalarField quadratic_field(const std::vector<double>& a, int n) {
    ScalarField f;
    f.dim = n;
    f.box = Box(static_cast<size_t>(n));
    f.smooth = Smoothness::CInf;
    f.label = "x'Ax";
    f.eval = [a, n](const Point& x) {
        double s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) s += a[size_t(i) * size_t(n) + size_t(j)] * x[size_t(i)] * x[size_t(j)];
        return s;
    };
    f.exact_hessian = [a, n](const Point&) {
        std::vector<double> h(size_t(n) * size_t(n));
        for (size_t i = 0; i < h.size(); ++i) h[i] = 2 * a[i];
        return h;
    };
    return f;
}

ScalarField cubic_field(const std::vector<double>& c) {
    // c holds coefficients of x^2, xy, y^2, x^3, x^2 y, x y^2, y^3
    ScalarField f;
    f.dim = 2;
    f.box = Box(2);
    f.smooth = Smoothness::CInf;
    f.label = "random cubic";
    f.eval = [c](const Point& p) {
        double x = p[0], y = p[1];
        return c[0] * x * x + c[1] * x * y + c[2] * y * y + c[3] * x * x * x +
               c[4] * x * x * y + c[5] * x * y * y + c[6] * y * y * y;
    };
    return f;
}

}  // namespace

TEST_CASE("complex points embed and split") {
    ComplexPoint z{{1.0, 2.0}, {3.0, 4.0}};
    Point p = z.embed();
    CHECK(p == Point{1.0, 2.0, 3.0, 4.0});
    ComplexPoint back = ComplexPoint::split(p);
    CHECK(back.x == z.x);
    CHECK(back.y == z.y);
    CHECK(back.n() == 2);
    CHECK_THROWS_AS(ComplexPoint::split({1.0, 2.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS((ComplexPoint{{1.0}, {1.0, 2.0}}.embed()), std::invalid_argument);
}

TEST_CASE("levi matrices of the standard examples") {
    Point at{0.2, -0.3};

    ScalarField kaehler = field_from_expr("x1^2 + x2^2", 2, Box(2));
    LeviEstimate k = levi_matrix(kaehler, at);
    CHECK(k.matrix.size() == 1);
    CHECK(k.matrix[0].real() == doctest::Approx(1.0));
    CHECK(k.matrix[0].imag() == 0.0);

    ScalarField harm = field_from_expr("x1^2 - x2^2", 2, Box(2));
    CHECK(std::abs(levi_matrix(harm, at).matrix[0]) <= 1e-6);

    ScalarField halfneg = field_from_expr("-x1^2", 2, Box(2));
    CHECK(levi_matrix(halfneg, at).matrix[0].real() == doctest::Approx(-0.5));

    // |z1|^2 - |z2|^2 on C^2, layout (x1, x2, y1, y2)
    ScalarField sig = field_from_expr("x1^2 + x3^2 - x2^2 - x4^2", 4, Box(4));
    LeviClass sc = levi_q_index(sig, {0.1, 0.2, -0.1, 0.3});
    CHECK(sc.inertia.neg == 1);
    CHECK(sc.inertia.pos == 1);
    CHECK(sc.eigenvalues[0] == doctest::Approx(-1.0));
    CHECK(sc.eigenvalues[1] == doctest::Approx(1.0));

    // Im(z1 conj(z2)) has a purely imaginary off-diagonal entry
    ScalarField cross = field_from_expr("x3*x2 - x1*x4", 4, Box(4));
    LeviEstimate ce = levi_matrix(cross, {0.3, -0.2, 0.1, 0.4});
    CHECK(ce.matrix[0 * 2 + 1].real() == doctest::Approx(0.0));
    CHECK(ce.matrix[0 * 2 + 1].imag() == doctest::Approx(-0.5));
    CHECK(ce.matrix[1 * 2 + 0] == std::conj(ce.matrix[0 * 2 + 1]));
    LeviClass cc = levi_q_index(cross, {0.3, -0.2, 0.1, 0.4});
    CHECK(cc.inertia.neg == 1);
    CHECK(cc.inertia.pos == 1);

    ScalarField odd = field_from_expr("x1^2 + x2^2 + x3^2", 3, Box(3));
    CHECK_THROWS_AS(levi_matrix(odd, {0.0, 0.0, 0.0}), std::invalid_argument);
    ScalarField rough = kaehler;
    rough.smooth = Smoothness::C0;
    CHECK_THROWS_AS(levi_matrix(rough, at), std::invalid_argument);
    CHECK_THROWS_AS(levi_matrix(kaehler, {0.0}), std::invalid_argument);
}

TEST_CASE("pluriharmonic polynomials have vanishing levi matrices") {
    // Re(z^3), Im(z^3) on C; Re(z1 z2), Im(z1 z2) on C^2
    std::vector<std::pair<std::string, int>> cases = {
        {"x1^3 - 3*x1*x2^2", 2},
        {"3*x1^2*x2 - x2^3", 2},
        {"x1*x2 - x3*x4", 4},
        {"x1*x4 + x2*x3", 4},
    };
    std::vector<Point> probes2 = {{0.3, -0.4}, {-0.7, 0.2}, {0.1, 0.9}};
    std::vector<Point> probes4 = {{0.3, -0.4, 0.2, 0.5}, {-0.6, 0.1, -0.2, 0.4}};
    for (const auto& [src, dim] : cases) {
        ScalarField f = field_from_expr(src, dim, Box(static_cast<size_t>(dim)));
        for (const auto& p : dim == 2 ? probes2 : probes4) {
            LeviEstimate le = levi_matrix(f, p);
            for (const auto& entry : le.matrix) CHECK(std::abs(entry) <= 1e-5);
        }
    }
}

TEST_CASE("rigid lifts reproduce quarter hessians") {
    ScalarField u = field_from_expr("-x1^2", 2, Box(2));
    ScalarField lift = rigid_lift(u);
    CHECK(lift.dim == 4);
    CHECK(lift.box[2].lo == -1.0);
    CHECK(lift.box[3].hi == 1.0);
    LeviClass lc = levi_q_index(lift, {0.3, 0.4, 0.2, -0.1});
    CHECK(lc.inertia.neg == 1);
    CHECK(lc.inertia.zero == 1);
    CHECK(lc.eigenvalues[0] == doctest::Approx(-0.5));

    ScalarField affine = field_from_expr("2*x1 - x2 + 1", 2, Box(2));
    LeviEstimate ae = levi_matrix(rigid_lift(affine), {0.1, 0.2, 0.0, 0.5});
    for (const auto& e : ae.matrix) CHECK(std::abs(e) <= 1e-6);

    ScalarField convex = field_from_expr("x1^2 + x1*x2 + x2^2", 2, Box(2));
    LeviClass cc = levi_q_index(rigid_lift(convex), {-0.2, 0.6, 0.3, 0.3});
    CHECK(cc.inertia.pos == 2);
    CHECK(cc.eigenvalues[0] == doctest::Approx(0.25));
    CHECK(cc.eigenvalues[1] == doctest::Approx(0.75));

    CHECK_THROWS_AS(rigid_lift(u, 0.0), std::invalid_argument);
}

TEST_CASE("first main theorem equivalence on the worked examples") {
    GridSpec base{unit_sym_box(2), {4, 4}};

    ScalarField saddle = field_from_expr("-x1^2", 2, Box(2));
    MainTheoremReport r1 = check_first_main_theorem(saddle, 1, base);
    CHECK(r1.points == 64);
    CHECK(r1.real_q_index == 1);
    CHECK(r1.levi_q_index == 1);
    CHECK(r1.mismatches == 0);
    CHECK(r1.real_at_most_q);
    CHECK(r1.levi_at_most_q);
    CHECK(r1.equivalent);
    MainTheoremReport r0 = check_first_main_theorem(saddle, 0, base);
    CHECK(!r0.real_at_most_q);
    CHECK(!r0.levi_at_most_q);
    CHECK(r0.equivalent);

    ScalarField bowl = field_from_expr("x1^2 + x2^2", 2, Box(2));
    MainTheoremReport rb = check_first_main_theorem(bowl, 0, base);
    CHECK(rb.real_q_index == 0);
    CHECK(rb.levi_q_index == 0);
    CHECK(rb.mismatches == 0);
    CHECK(rb.equivalent);

    ScalarField cap = field_from_expr("-x1^2 - x2^2", 2, Box(2));
    MainTheoremReport rc = check_first_main_theorem(cap, 1, base);
    CHECK(rc.real_q_index == 2);
    CHECK(rc.levi_q_index == 2);
    CHECK(rc.mismatches == 0);
    CHECK(rc.equivalent);

    CHECK_THROWS_AS(check_first_main_theorem(saddle, -1, base), std::invalid_argument);
    CHECK_THROWS_AS(check_first_main_theorem(saddle, 1, base, 0), std::invalid_argument);
}

TEST_CASE("random cubic lifts agree pointwise") {
    GridSpec base{unit_sym_box(2, 0.8), {3, 3}};
    for (uint64_t trial = 0; trial < 5; ++trial) {
        Rng rng = Rng::for_item(0xC3B1C, trial);
        std::vector<double> c(7);
        for (auto& v : c) v = rng.uniform(-1.0, 1.0);
        ScalarField u = cubic_field(c);
        ScalarField lift = rigid_lift(u);

        MainTheoremReport rep = check_first_main_theorem(u, 1, base);
        CHECK(rep.failures == 0);
        CHECK(rep.mismatches == 0);
        CHECK(rep.equivalent);

        // quarter-Hessian identity at a few lifted probes
        for (double yv : {-0.4, 0.3}) {
            Point x{0.35, -0.55};
            HessianEstimate h = fd_hessian(u, x);
            double scale = 1;
            for (double e : h.matrix) scale = std::max(scale, std::abs(e));
            LeviEstimate le = levi_matrix(lift, {x[0], x[1], yv, -yv});
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    std::complex<double> got = le.matrix[size_t(k) * 2 + size_t(l)];
                    CHECK(std::abs(got.real() - 0.25 * h.matrix[size_t(k) * 2 + size_t(l)]) <=
                          1e-4 * scale);
                    CHECK(std::abs(got.imag()) <= 1e-4 * scale);
                }
        }
    }
}

TEST_CASE("tube fields decompose the cylinder distance") {
    OpenSetModel iv = make_box_set(Box{Interval{0, 1}});
    ScalarField walled = tube_neg_log_dist({iv, 1.0});
    CHECK(walled.dim == 2);
    CHECK(walled({0.3, 0.2}) == doctest::Approx(-std::log(0.3)));
    CHECK(walled({0.5, 0.9}) == doctest::Approx(-std::log(0.1)));
    CHECK_THROWS_AS(walled({0.5, 1.5}), EvalError);
    CHECK_THROWS_AS(walled({-0.2, 0.0}), EvalError);

    ScalarField open_tube = tube_neg_log_dist({iv, kInf});
    CHECK(open_tube({0.3, 5.0}) == open_tube({0.3, 0.0}));
    CHECK(open_tube({0.3, 0.0}) == doctest::Approx(-std::log(0.3)));

    CHECK_THROWS_AS(tube_neg_log_dist({iv, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(tube_neg_log_dist({iv, -2.0}), std::invalid_argument);
}

TEST_CASE("tube checks agree with the base set") {
    WitnessBudget tiny{4, 32, 24, 2, 2};

    OpenSetModel iv = make_box_set(Box{Interval{0, 1}});
    GridSpec g1{Box{Interval{0.1, 0.9}}, {4}};
    for (double a : {1.0, kInf}) {
        TubeCheckReport r = tube_pseudoconvexity_check({iv, a}, 0, g1, 2, tiny);
        CHECK(r.levi.points_evaluated > 0);
        CHECK(r.levi_consistent);
        CHECK(r.base_check.consistent);
        CHECK(r.agree);
    }

    OpenSetModel punct = make_punctured_axis(1, {0});
    GridSpec g2{Box{Interval{-0.9, 0.9}}, {4}};
    for (double a : {1.0, kInf}) {
        TubeCheckReport r = tube_pseudoconvexity_check({punct, a}, 0, g2, 2, tiny);
        CHECK(r.levi.points_evaluated == 8);
        CHECK(r.levi_consistent);
        CHECK(r.base_check.consistent);
        CHECK(r.agree);
    }

    // corner ridge of the square: diagonal nodes are genuine kinks
    OpenSetModel sq = make_box_set(Box{Interval{0, 1}, Interval{0, 1}});
    TubeCheckReport rs =
        tube_pseudoconvexity_check({sq, 1.0}, 0, GridSpec{Box{Interval{0, 1}, Interval{0, 1}}, {3, 3}}, 1, tiny);
    CHECK(rs.kinks_skipped == 5);
    CHECK(rs.levi.points_evaluated == 4);
    CHECK(rs.levi_consistent);
    CHECK(rs.agree);
}

TEST_CASE("tube checks flag a non-convex base from both sides") {
    OpenSetModel outside = make_oracle("x1^2 + x2^2 - 0.0625", 2, unit_sym_box(2, 2.0));
    WitnessBudget wee{2, 8, 16, 1, 2};
    GridSpec g{Box{Interval{0.35, 0.85}, Interval{-0.25, 0.25}}, {2, 2}};
    TubeCheckReport r = tube_pseudoconvexity_check({outside, 1.0}, 0, g, 1, wee);
    CHECK(r.levi.points_evaluated == 4);
    CHECK(r.levi.q_index >= 1);
    CHECK(!r.levi_consistent);
    CHECK(!r.base_check.consistent);
    CHECK(r.agree);
    CHECK(r.verdict.find("not 0-pseudoconvex") != std::string::npos);
}

TEST_CASE("tube kink nodes are skipped and counted") {
    OpenSetModel iv = make_box_set(Box{Interval{0, 1}});
    // base margin 0.3 ties the wall a = 0.3 exactly at y = 0
    TubeCheckReport tie =
        tube_pseudoconvexity_check({iv, 0.3}, 0, GridSpec{Box{Interval{0.25, 0.35}}, {1}}, 1, {});
    CHECK(tie.kinks_skipped == 1);
    CHECK(tie.levi.points_evaluated == 0);
    CHECK(tie.verdict.find("no smooth nodes sampled") != std::string::npos);
    CHECK(tie.kink_points.size() == 1);

    // a node closer to the boundary than the stencil is no place for FD
    OpenSetModel punct = make_punctured_axis(1, {0});
    TubeCheckReport close =
        tube_pseudoconvexity_check({punct, kInf}, 0, GridSpec{Box{Interval{1e-6, 2e-5}}, {1}}, 1, {});
    CHECK(close.kinks_skipped == 1);
    CHECK(close.levi.points_evaluated == 0);
}

TEST_CASE("reinhardt pullbacks factor through the moduli") {
    ScalarField u = field_from_expr("x1^2", 1, Box{Interval{-1, 1}});
    ScalarField psi = reinhardt_pullback(u);
    CHECK(psi.dim == 2);
    CHECK(psi.box[0].hi == doctest::Approx(std::exp(1.0)));
    double r = std::hypot(0.3, 0.4);
    CHECK(psi({0.3, 0.4}) == doctest::Approx(std::pow(std::log(0.5), 2)));
    CHECK(psi({0.3, 0.4}) == psi({r, 0.0}));
    CHECK_THROWS_AS(psi({0.0, 0.0}), EvalError);
    CHECK_THROWS_AS(psi({3.0, 0.0}), EvalError);

    LeviClass pos = levi_q_index(psi, {0.5, 0.0});
    CHECK(pos.inertia.neg == 0);
    CHECK(pos.eigenvalues[0] == doctest::Approx(2.0).epsilon(1e-3));

    ScalarField w = field_from_expr("-x1^2", 1, Box{Interval{-1, 1}});
    LeviClass neg = levi_q_index(reinhardt_pullback(w), {0.5, 0.0});
    CHECK(neg.inertia.neg == 1);
    CHECK(neg.eigenvalues[0] == doctest::Approx(-2.0).epsilon(1e-3));
}

TEST_CASE("reinhardt grids agree with the base hessians") {
    ScalarField up = field_from_expr("x1^2", 1, Box{Interval{-1, 1}});
    ReinhardtAgreement a = reinhardt_grid_agreement(up, GridSpec{Box{Interval{-0.9, 0.9}}, {6}}, 3);
    CHECK(a.compared == 18);
    CHECK(a.skipped == 0);
    CHECK(a.ratio() == 1.0);

    ScalarField dn = field_from_expr("-x1^2", 1, Box{Interval{-1, 1}});
    ReinhardtAgreement b = reinhardt_grid_agreement(dn, GridSpec{Box{Interval{-0.9, 0.9}}, {6}}, 3);
    CHECK(b.ratio() == 1.0);
    CHECK(b.disagreements.empty());

    ScalarField mix = field_from_expr("x1^2 - x2^2", 2, unit_sym_box(2));
    ReinhardtAgreement c = reinhardt_grid_agreement(mix, GridSpec{unit_sym_box(2, 0.7), {3, 3}}, 2);
    CHECK(c.compared == 18);
    CHECK(c.ratio() == 1.0);

    CHECK_THROWS_AS(reinhardt_grid_agreement(up, GridSpec{Box{Interval{-0.9, 0.9}}, {6}}, 0),
                    std::invalid_argument);
}

TEST_CASE("qpsh index grids classify the standard fields") {
    ScalarField sig = field_from_expr("x1^2 + x3^2 - x2^2 - x4^2", 4, Box(4));
    QIndexReport r1 = qpsh_index_on_grid(sig, GridSpec{unit_sym_box(4, 0.5), {2, 2, 2, 2}});
    CHECK(r1.points_evaluated == 16);
    CHECK(r1.q_index == 1);
    CHECK(r1.strict_q_index == 1);

    ScalarField ph = field_from_expr("x1^2 - x3^2", 4, Box(4));
    QIndexReport r2 = qpsh_index_on_grid(ph, GridSpec{unit_sym_box(4, 0.5), {1, 1, 1, 1}});
    CHECK(r2.q_index == 0);
    CHECK(r2.strict_q_index == 2);  // the Levi vanishes identically

    ScalarField capc3 = field_from_expr("-x1^2-x2^2-x3^2-x4^2-x5^2-x6^2", 6, Box(6));
    QIndexReport r3 = qpsh_index_on_grid(capc3, GridSpec{unit_sym_box(6, 0.5), {1, 1, 1, 1, 1, 1}});
    CHECK(r3.q_index == 3);

    ScalarField odd = field_from_expr("x1^2", 3, Box(3));
    CHECK_THROWS_AS(qpsh_index_on_grid(odd, GridSpec{unit_sym_box(3), {1, 1, 1}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(qpsh_index_on_grid(sig, GridSpec{unit_sym_box(2), {2, 2}}),
                    std::invalid_argument);
}

TEST_CASE("real convexity bounds the levi negatives") {
    Point probe{0.1, -0.2, 0.3, 0.05};
    int done = 0;
    for (uint64_t trial = 0; done < 20; ++trial) {
        Rng rng = Rng::for_item(0x2EA1, trial);
        std::vector<double> a = oracle::random_symmetric(rng, 4);
        std::vector<double> h(a.size());
        for (size_t i = 0; i < a.size(); ++i) h[i] = 2 * a[i];
        EigResult eig = eig_symmetric(h, 4);
        double top = 1;
        for (double v : eig.values) top = std::max(top, std::abs(v));
        bool teetering = false;
        for (double v : eig.values) teetering |= std::abs(v) <= 1e-2 * top;
        if (teetering) continue;
        int real_neg = 0;
        for (double v : eig.values) real_neg += v < 0;

        ScalarField f = quadratic_field(a, 4);
        LeviClass lc = levi_q_index(f, probe);
        CHECK(lc.inertia.neg <= real_neg);
        ++done;
    }
}
