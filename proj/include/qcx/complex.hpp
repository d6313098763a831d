#pragma once

#include <complex>
#include <string>
#include <vector>

#include "qcx/common.hpp"
#include "qcx/field.hpp"
#include "qcx/qconvex.hpp"
#include "qcx/sets.hpp"
#include "qcx/spectra.hpp"

namespace qcx {

// Points of C^n live in R^{2n} with the split layout (x1..xn, y1..yn),
// z_j = x_j + i*y_j.
struct ComplexPoint {
    Point x, y;
    int n() const { return static_cast<int>(x.size()); }
    Point embed() const;
    static ComplexPoint split(const Point& p);
};

struct LeviEstimate {
    Point point;  // 2n real coordinates
    std::vector<std::complex<double>> matrix;  // n*n row-major, Hermitian
    std::vector<double> steps;
    double err_scale = 0;
};

// Mixed Wirtinger second derivatives assembled from the real Hessian:
// L[k][l] = 1/4 * ((H[xk][xl] + H[yk][yl]) + i (H[xk][yl] - H[yk][xl])),
// then symmetrized so the result is Hermitian exactly.
LeviEstimate levi_matrix(const ScalarField& psi, const Point& p);

struct LeviClass {
    Inertia inertia;
    std::vector<double> eigenvalues;  // ascending, n of them
    double scale = 1;
};

LeviClass levi_q_index(const ScalarField& psi, const Point& p, double tol = 1e-7);

// classify_on_grid with Levi inertia; psi.dim must be even. Records carry the
// n Levi eigenvalues per node.
QIndexReport qpsh_index_on_grid(const ScalarField& psi, const GridSpec& grid, double tol = 1e-7);

// psi(x, y) = u(x) on u's box times (-imag_half, imag_half)^n. The window
// cannot affect verdicts (the lift ignores y); it only bounds grids.
ScalarField rigid_lift(const ScalarField& u, double imag_half = 1.0);

struct MainTheoremReport {
    int q = 0;
    int real_q_index = 0;  // max negatives of H_u over the base grid
    int levi_q_index = 0;  // max Levi negatives of the lift over the product grid
    bool real_at_most_q = false;
    bool levi_at_most_q = false;
    bool equivalent = false;  // the two at-most-q verdicts match
    size_t points = 0;        // product-grid nodes compared
    size_t mismatches = 0;    // nodes where the negative counts differ
    size_t failures = 0;
    std::vector<Point> mismatch_points;  // lifted coordinates, capped at 16
};

// Compares negatives of H_u across base_grid with Levi negatives of the rigid
// lift across base_grid x an imaginary grid of imag_res cells per axis.
MainTheoremReport check_first_main_theorem(const ScalarField& u, int q, const GridSpec& base_grid,
                                           int imag_res = 2, double imag_half = 1.0,
                                           double tol = 1e-7);

struct TubeSpec {
    OpenSetModel base;         // omega in R^n
    double half_width = kInf;  // a; the tube is omega + i(-a,a)^n
};

// -ln min(d2(x, boundary of omega), min_j (a - |y_j|)) on R^{2n}; an infinite
// half width drops the wall terms.
ScalarField tube_neg_log_dist(const TubeSpec& t);

struct TubeCheckReport {
    int q = 0;
    QIndexReport levi;  // Levi inertia over the non-kink product-grid nodes
    size_t kinks_skipped = 0;
    std::vector<Point> kink_points;  // capped at 16
    bool levi_consistent = false;    // levi.q_index <= q
    SetCheckResult base_check;
    bool agree = false;  // levi verdict matches the base-set verdict
    std::string verdict;
};

// Levi criterion on the cylinder distance field at product-grid nodes, with
// nodes skipped where the min decomposition kinks within finite-difference
// reach; cross-checked against set_q_convex_check on the base.
TubeCheckReport tube_pseudoconvexity_check(const TubeSpec& t, int q, const GridSpec& base_grid,
                                           int imag_res = 2, const WitnessBudget& budget = {},
                                           uint64_t seed = 0, double tol = 1e-7);

// psi(z) = u(ln|z_1|, ..., ln|z_n|); evaluation needs every |z_j| > 0 and the
// log point inside u's box.
ScalarField reinhardt_pullback(const ScalarField& u);

struct ReinhardtAgreement {
    size_t compared = 0;
    size_t agreed = 0;
    size_t skipped = 0;
    std::vector<Point> skipped_points;  // 2n coordinates, capped at 16
    std::vector<Point> disagreements;   // capped at 16
    double ratio() const { return compared ? double(agreed) / double(compared) : 1.0; }
};

// Negatives of H_u at log-grid nodes against Levi negatives of the pullback
// at angle_samples rotations per node. Nodes whose stencil reaches the base
// domain edge in log coordinates are skipped and listed.
ReinhardtAgreement reinhardt_grid_agreement(const ScalarField& u, const GridSpec& log_grid,
                                            int angle_samples = 3, double tol = 1e-7);

}  // namespace qcx
