#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qcx/common.hpp"
#include "qcx/field.hpp"
#include "qcx/sets.hpp"

namespace qcx {

// Family of k-planar sets A_t = map(t, param_box) for t in [0,1]: affine in
// the slice parameter s at each fixed t, continuous in t, bounded overall.
struct PlanarFamily {
    int k = 1;
    Box param_box;
    std::function<Point(double, const Point&)> map;
    std::string label;
};

struct ContinuityVerdict {
    enum class Status { Inapplicable, Holds, Violated };
    Status status = Status::Holds;
    double t_star = 0;  // family time of the offending slice when violated
    Point offending;    // point of that slice outside the set
    std::vector<std::string> trace;
    std::string note;
};

// Sampled check of the continuity principle at level k-1. Hypotheses first:
// the closure of A_t must sit in the set for sampled t < 1 and the boundary
// of A_1 (image of the parameter-box rim) must too; any failure gives the
// inapplicable verdict. Then A_1 is scanned for points outside the set.
// s_steps counts lattice intervals per axis (s_steps + 1 nodes), so even
// values keep the grid symmetric through parameter 0. Violations between
// samples are invisible at this resolution.
ContinuityVerdict continuity_principle_test(const OpenSetModel& s, const PlanarFamily& fam,
                                            int t_steps = 33, int s_steps = 8);

struct GraphFamilyResult {
    PlanarFamily family;
    double r0 = 0;          // strict mid-convexity gap of the leading component
    Point x0;               // probe midpoint in the base block
    bool flipped = false;   // mirrored construction for a concavity violation
};

// Touching family for a graph complement: chords of the segment [x1, x2]
// under the leading component, lifted off the graph by r = (2 - t) * r0 so
// that family time 1 is the touching configuration. Requires f1 to violate
// mid-convexity strictly at (x1, x2, t0) in either direction; the convex
// violation is handled by mirroring the lift.
GraphFamilyResult graph_complement_family(const OpenSetModel& graph_set, const Point& x1,
                                          const Point& x2, double t0);

// x -> -ln|f(base) - y| + |x|^2 on the complement of an affine graph; rejects
// maps with a detectably nonzero second difference.
ScalarField graph_complement_exhaustion(const OpenSetModel& graph_set);

}  // namespace qcx
