#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qcx/common.hpp"
#include "qcx/field.hpp"
#include "qcx/spectra.hpp"
#include "qcx/envelope.hpp"

namespace qcx {

// Scan grid over a box: res[i] cell centers per axis, so every node is
// strictly interior.
struct GridSpec {
    Box box;
    std::vector<int> res;
    size_t count() const;
    Point node(size_t flat) const;
};

// Affine k-plane p(s) = base + sum_j s_j basis[j]; basis orthonormal to 1e-12.
struct AffineSlice {
    Point base;
    std::vector<Point> basis;
    Point ambient(const Point& s) const;
    int k() const { return static_cast<int>(basis.size()); }
};

AffineSlice make_slice(Point base, std::vector<Point> raw_directions);

struct SliceBall {
    AffineSlice slice;
    Point center;  // slice coordinates
    double radius = 0;
};

struct Witness {
    SliceBall ball;
    AffineFunctional l;   // on slice coordinates
    Point point;          // slice coordinates of the violating sample
    Point ambient_point;
    double margin = 0;    // u(point) - l(point) after boundary lift
    double tol_scale = 0; // threshold the margin was tested against
};

struct WitnessBudget {
    int slices = 64;
    int boundary_samples = 128;
    int interior_samples = 256;
    int centers_per_axis = 2;
    int radii = 5;
};

struct WitnessSearchResult {
    std::optional<Witness> witness;
    int slices_tried = 0;
    int balls_tried = 0;
    int balls_skipped = 0;
    int candidates_rejected = 0;
    std::string note;
};

// Admissibility test for a candidate ball, given its ambient center and
// radius. Needed when the field's domain is an open set whose complement has
// measure zero: membership sampling alone can never reject a ball straddling
// such a boundary.
using BallFilter = std::function<bool(const Point& center, double radius)>;

// Sample-based violation search for the level-q maximum property: balls on
// (q+1)-dimensional affine slices, an affine upper envelope fitted on boundary
// samples, interior samples scanned for u - l above tol*scale. A candidate is
// only accepted after the envelope is re-checked against a dense boundary
// sweep (with local polishing) and lifted by any residual, which filters the
// sampling artifacts that sparse boundaries produce on curved fields. Finding
// no witness is a resolution statement, not a proof. Balls rejected by the
// filter count as skipped.
WitnessSearchResult witness_search(const ScalarField& f, int q, const Box& box,
                                   const WitnessBudget& budget = {}, uint64_t seed = 0,
                                   double tol = 1e-7, const BallFilter& ball_filter = {});

struct PointClass {
    Inertia inertia;
    std::vector<double> eigenvalues;
    double scale = 1;
};

// Negative eigenvalue count of the (FD or exact) Hessian at p; requires a
// C2-or-better smoothness tag.
PointClass hessian_q_index(const ScalarField& f, const Point& p, double tol = 1e-7);

struct PointRecord {
    Point p;
    int neg = 0, zero = 0, pos = 0;
    double scale = 1;
    std::vector<double> eigenvalues;
};

struct QIndexReport {
    int q_index = 0;         // max negatives over evaluated nodes
    int strict_q_index = 0;  // max negatives + zeros (zeros count against strictness)
    size_t points_evaluated = 0;
    std::vector<PointRecord> records;
    std::vector<Point> failed_points;
    std::vector<std::string> failures;
};

QIndexReport classify_on_grid(const ScalarField& f, const GridSpec& grid, double tol = 1e-7);

// Largest-curvature estimate 2 * max_h (u(x+eps h) - u(x) - eps grad.h) / eps^2
// over a deterministic sphere sweep of 64*dim directions, maximized over eps.
double lambda_max_estimate(const ScalarField& f, const Point& p,
                           const std::vector<double>& eps_list = {1e-2, 1e-3});

struct SumCheckReport {
    size_t points = 0;
    size_t skipped = 0;
    std::vector<Point> violations;  // nodes where neg(H_{u1+u2}) > neg(H_u1) + neg(H_u2)
};

SumCheckReport check_sum_theorem(const ScalarField& u1, const ScalarField& u2,
                                 const GridSpec& grid, double tol = 1e-7);

struct GlueWarning {
    Point at;
    double inner_value = 0;
    double outer_value = 0;
};

struct GlueResult {
    ScalarField field;
    std::vector<GlueWarning> warnings;
};

// Patch two fields: max{u, u1} where member1 holds, u elsewhere. The boundary
// compatibility limsup_{y->x} u1(y) <= u(x) is estimated on the given boundary
// sample points; violations come back as warnings, not errors.
GlueResult glue(const ScalarField& u, const ScalarField& u1,
                const std::function<bool(const Point&)>& member1,
                const std::vector<Point>& boundary1_samples, double tol = 1e-7);

// phi o u for phi strictly increasing and strictly convex on the attained
// range of u; both properties are spot-checked on samples and rejected with
// invalid_argument when they fail. Smoothness tag is the weaker of the two.
ScalarField compose_increasing_convex(const ScalarField& u, const ScalarField& phi);

}  // namespace qcx
