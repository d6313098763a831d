#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qcx/common.hpp"
#include "qcx/field.hpp"
#include "qcx/qconvex.hpp"

namespace qcx {

enum class SetKind {
    HalfSpace,
    Ball,
    BoxSet,
    PuncturedAxis,
    GraphComplement,
    ReinhardtLog,
    Intersection,
    UnionSet,
    Oracle,
};

std::string set_kind_name(SetKind k);

// Open subset of R^n with a deterministic membership test. Primitive variants
// (half-space, ball, box, punctured axes, intersections of those) also answer
// the exact Euclidean boundary distance; the rest fall back to directional
// sampling. Unused fields stay at their defaults.
struct OpenSetModel {
    SetKind kind = SetKind::BoxSet;
    int dim = 0;
    std::string label;

    Point normal;  // half_space: <normal, x> > offset
    double offset = 0;
    Point center;  // ball: |x - center| < radius
    double radius = 0;
    Box box;
    std::vector<int> punctured;  // punctured_axis: coordinates with 0 removed

    // graph_complement: x = (s, y) in R^(graph_n + k), member iff f(s) != y
    int graph_n = 0;
    std::vector<std::string> graph_exprs;
    std::vector<ScalarField> graph_f;

    // oracle: member iff x in oracle_box and oracle_f(x) > 0
    std::string oracle_expr;
    Box oracle_box;
    ScalarField oracle_f;

    // intersection / union members; reinhardt_log stores its log image here
    // as a single entry (member iff all |x_j| > 0 and (ln|x_1|,..) in parts[0])
    std::vector<OpenSetModel> parts;
};

OpenSetModel make_half_space(Point normal, double offset);
OpenSetModel make_ball(Point center, double radius);
OpenSetModel make_box_set(Box box);
OpenSetModel make_punctured_axis(int dim, std::vector<int> punctured);
OpenSetModel make_graph_complement(std::vector<std::string> f_exprs, int n);
OpenSetModel make_reinhardt_log(OpenSetModel log_image);
OpenSetModel make_intersection(std::vector<OpenSetModel> parts);
OpenSetModel make_union(std::vector<OpenSetModel> parts);
// Generic membership oracle expr > 0; needs a bounded box (distance brackets).
OpenSetModel make_oracle(std::string expr, int dim, Box bounding);

std::string set_to_json(const OpenSetModel& s);
OpenSetModel set_from_json(const std::string& text);

bool member(const OpenSetModel& s, const Point& x);

// Smallest box known to contain the set; unbounded axes where nothing better
// is known.
Box set_bounding_box(const OpenSetModel& s);

// Norm on R^n used for boundary distances. Weighted is the scaled Euclidean
// norm sqrt(sum w_i x_i^2) with all w_i > 0.
struct NormSpec {
    enum class Kind { Euclid, Max, PNorm, Weighted };
    Kind kind = Kind::Euclid;
    double p = 2.0;
    std::vector<double> weights;

    double operator()(const Point& x) const;

    static NormSpec euclid();
    static NormSpec max_norm();
    static NormSpec p_norm(double p);
    static NormSpec weighted(std::vector<double> w);
};

// Euclidean distance to the boundary; +inf when the boundary is empty or out
// of sampling reach. Throws EvalError when x is not a member.
double dist_euclid(const OpenSetModel& s, const Point& x);

// Distance to the boundary along the line x + R*v (minimum over both ray
// directions), by marching in steps bracket/1024 to the first membership
// change and then bisecting. Exits farther than the bracket are reported as
// +inf with *exhausted set. Crossings thinner than one marching step are a
// documented resolution limit; thin boundary pieces with a usable analytic
// form (coordinate punctures, graphs) are bracketed through a continuous
// residual instead of the raw membership bit.
double dist_directional(const OpenSetModel& s, const Point& x, const Point& v, double bracket,
                        bool* exhausted = nullptr);

// Boundary distance in an arbitrary norm as the minimum of ray_distance * nrm(v)
// over sampled Euclidean-unit directions (deterministic sphere set plus seeded
// fill). Upper estimate converging with the direction count.
double dist_norm(const OpenSetModel& s, const Point& x, const NormSpec& nrm, int directions = 512,
                 uint64_t seed = 0);

// x -> -ln dist(x, boundary); evaluates to -inf where the distance is +inf and
// throws EvalError outside the set.
ScalarField neg_log_dist_field(const OpenSetModel& s);
ScalarField neg_log_dist_field(const OpenSetModel& s, Point v);
ScalarField neg_log_dist_field(const OpenSetModel& s, NormSpec nrm, int directions = 512,
                               uint64_t seed = 0);

// x -> -ln dist_euclid + |x|^2, the standard exhaustion; rejects sets with an
// empty boundary.
ScalarField exhaustion_field(const OpenSetModel& s);

// Exhaustion of a product set on R^(dim1 + dim2): max of the factor
// exhaustions in their own variables.
ScalarField product_exhaustion(const OpenSetModel& s1, const OpenSetModel& s2);

struct SetCheckResult {
    bool consistent = true;  // no violation found at this budget
    std::string verdict;
    WitnessSearchResult search;
};

// Runs witness_search on -ln dist_euclid over the scan box; balls touching
// non-members are skipped, so the scan is effectively restricted to the set.
SetCheckResult set_q_convex_check(const OpenSetModel& s, int q, const Box& box,
                                  const WitnessBudget& budget = {}, uint64_t seed = 0);

struct SublevelReport {
    long samples = 0;
    long below = 0;   // nodes with f < c (unevaluable nodes count as +inf)
    long on_rim = 0;  // sublevel nodes on the outermost lattice layer
    bool compact = false;
};

// Grid check that {f < c} stays away from the scan rim, the sampled stand-in
// for relative compactness of the sublevel set.
SublevelReport check_sublevel_compact(const ScalarField& f, double c, const Box& box,
                                      const std::vector<int>& res);

}  // namespace qcx
