#pragma once

#include <optional>
#include <vector>

#include "qcx/common.hpp"
#include "qcx/field.hpp"

namespace qcx {

// Inclusive lattice on the closed box hull: res[i] cells and res[i]+1 nodes
// per axis, values row-major with the last axis fastest. -inf entries are
// legal stored data.
struct GridField {
    Box box;
    std::vector<int> res;
    std::vector<double> values;

    size_t node_count() const;
    double spacing(size_t axis) const;
    size_t flat(const std::vector<int>& multi) const;
    std::vector<int> multi(size_t flat) const;
    Point node_point(const std::vector<int>& multi) const;
};

// Evaluates f on the lattice; the box must sit strictly inside f's domain.
GridField sample_to_grid(const ScalarField& f, const Box& box, const std::vector<int>& res);

struct KernelSpec {
    enum class Shape { Quartic, Bump };
    Shape shape = Shape::Quartic;
    double radius = 1;

    // Smallest L with g(t) >= 1 - (L/2)|t|^2 on the support: the curvature
    // price the multiplicative sup-convolution pays near each peak.
    double curvature_bound() const;
    double profile(double tau) const;  // radial profile, 1 at 0, 0 from 1 on
    double operator()(const Point& t) const;
};

struct SupConvolveResult {
    GridField out;
    // Encoded kernel offset t winning each output max. The branches of the
    // sup are the scaled translates x -> g(t) u(x - t); as long as one offset
    // wins across a whole stencil the output is such a translate there, so
    // the offset is the branch label that matters. SIZE_MAX marks wins by the
    // kernel's zero tail (possible once the support ball fails to cover the
    // lattice).
    std::vector<size_t> argmax;
    std::vector<int> trim;  // cells dropped per side per axis
};

// sup_y u(y) g(x - y) over lattice nodes, emitted on the sublattice lying at
// least `radius` inside the hull. Values must be non-negative: the
// multiplicative sup only orders branches correctly for non-negative data.
SupConvolveResult sup_convolve(const GridField& u, const KernelSpec& g);

struct ApproximationResult {
    GridField tilde;
    std::vector<size_t> argmax;
    std::vector<int> trim;
    double k = 0;
    bool dominates = true;
    std::optional<size_t> offending_node;  // flat index in tilde where u >= tilde
};

// Smoothing from above: clip at -k, shift by k + 1/k into positive values,
// sup-convolve, shift back. The result must strictly dominate u on the shared
// nodes; a failure is reported, never repaired.
ApproximationResult approximate_from_above(const GridField& u, double k, const KernelSpec& g);

struct GridNodeRecord {
    std::vector<int> multi;
    int neg = 0, zero = 0, pos = 0;
};

struct GridClassifyReport {
    int q_index = 0;
    int strict_q_index = 0;
    size_t nodes_evaluated = 0;
    size_t nodes_skipped = 0;
    std::vector<size_t> straddle_nodes;
    std::vector<GridNodeRecord> records;
};

// Lattice-Hessian inertia over interior nodes. Stencils touching -inf are
// skipped; with `argmax` from a sup-convolution, stencils spanning two max
// branches are skipped too, since second differences across a ridge say
// nothing about curvature.
GridClassifyReport grid_q_index(const GridField& gf, double tol = 1e-7,
                                const std::vector<size_t>* argmax = nullptr);

}  // namespace qcx
