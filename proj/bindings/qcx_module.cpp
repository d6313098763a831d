#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>

#include "qcx/complex.hpp"
#include "qcx/gridfield.hpp"
#include "qcx/planar.hpp"

namespace py = pybind11;
using namespace qcx;

namespace {

using PyBox = std::vector<std::pair<double, double>>;
using PyRes = std::vector<int>;

Box to_box(const std::optional<PyBox>& pb, size_t axes) {
    if (!pb) return unit_sym_box(static_cast<int>(axes));
    Box b;
    for (const auto& [lo, hi] : *pb) b.push_back(Interval{lo, hi});
    if (b.size() != axes)
        throw std::invalid_argument("box needs " + std::to_string(axes) + " intervals");
    return b;
}

std::vector<int> to_res(const std::optional<PyRes>& pr, size_t axes, int fallback) {
    if (!pr) return std::vector<int>(axes, fallback);
    std::vector<int> r = *pr;
    if (r.size() == 1 && axes > 1) r.assign(axes, r[0]);
    if (r.size() != axes)
        throw std::invalid_argument("res needs 1 or " + std::to_string(axes) + " entries");
    return r;
}

WitnessBudget to_budget(const std::optional<std::vector<int>>& pb) {
    WitnessBudget b;
    if (!pb) return b;
    const auto& v = *pb;
    if (v.size() < 3 || v.size() > 5)
        throw std::invalid_argument("budget is [slices, boundary, interior, centers?, radii?]");
    b.slices = v[0];
    b.boundary_samples = v[1];
    b.interior_samples = v[2];
    if (v.size() > 3) b.centers_per_axis = v[3];
    if (v.size() > 4) b.radii = v[4];
    return b;
}

py::dict qindex_dict(const QIndexReport& r) {
    py::dict d;
    d["q_index"] = r.q_index;
    d["strict_q_index"] = r.strict_q_index;
    d["points_evaluated"] = r.points_evaluated;
    d["failed_points"] = r.failed_points.size();
    return d;
}

py::dict search_dict(const WitnessSearchResult& r) {
    py::dict d;
    d["found"] = r.witness.has_value();
    if (r.witness) {
        d["margin"] = r.witness->margin;
        d["ambient_point"] = r.witness->ambient_point;
        d["radius"] = r.witness->ball.radius;
    }
    d["slices_tried"] = r.slices_tried;
    d["balls_tried"] = r.balls_tried;
    d["balls_skipped"] = r.balls_skipped;
    d["note"] = r.note;
    return d;
}

py::dict classify(const std::string& expr, int dim, std::optional<PyBox> box,
                  std::optional<PyRes> res, bool complex_field, double tol) {
    if (dim <= 0) throw std::invalid_argument("dim must be positive");
    size_t axes = complex_field ? 2 * static_cast<size_t>(dim) : static_cast<size_t>(dim);
    GridSpec grid{to_box(box, axes), to_res(res, axes, 8)};
    ScalarField f = complex_field
                        ? field_from_expr(parse_expr(expr, complex_var_names(dim)), Box(axes),
                                          Smoothness::C2)
                        : field_from_expr(expr, dim, Box(axes));
    QIndexReport rep =
        complex_field ? qpsh_index_on_grid(f, grid, tol) : classify_on_grid(f, grid, tol);
    return qindex_dict(rep);
}

py::dict witness(const std::string& expr, int dim, int q, std::optional<PyBox> box,
                 std::optional<std::vector<int>> budget, uint64_t seed, double tol) {
    Box b = to_box(box, static_cast<size_t>(dim));
    ScalarField f = field_from_expr(expr, dim, Box(b.size()));
    return search_dict(witness_search(f, q, b, to_budget(budget), seed, tol));
}

py::dict set_check(const std::string& set_json, int q, std::optional<PyBox> box,
                   std::optional<std::vector<int>> budget, uint64_t seed) {
    OpenSetModel s = set_from_json(set_json);
    SetCheckResult r =
        set_q_convex_check(s, q, to_box(box, static_cast<size_t>(s.dim)), to_budget(budget), seed);
    py::dict d;
    d["consistent"] = r.consistent;
    d["verdict"] = r.verdict;
    d["search"] = search_dict(r.search);
    return d;
}

py::dict tube_check(const std::string& set_json, double a, int q, std::optional<PyBox> box,
                    std::optional<PyRes> res, int imag_res,
                    std::optional<std::vector<int>> budget, uint64_t seed, double tol) {
    TubeSpec t{set_from_json(set_json), a};
    size_t n = static_cast<size_t>(t.base.dim);
    GridSpec grid{to_box(box, n), to_res(res, n, 4)};
    TubeCheckReport rep =
        tube_pseudoconvexity_check(t, q, grid, imag_res, to_budget(budget), seed, tol);
    py::dict d;
    d["verdict"] = rep.verdict;
    d["levi"] = qindex_dict(rep.levi);
    d["kinks_skipped"] = rep.kinks_skipped;
    d["levi_consistent"] = rep.levi_consistent;
    d["base_consistent"] = rep.base_check.consistent;
    d["agree"] = rep.agree;
    return d;
}

py::dict first_main_theorem(const std::string& expr, int dim, int q, std::optional<PyBox> box,
                            std::optional<PyRes> res, int imag_res, double tol) {
    GridSpec grid{to_box(box, static_cast<size_t>(dim)),
                  to_res(res, static_cast<size_t>(dim), 4)};
    ScalarField u = field_from_expr(expr, dim, Box(grid.box.size()));
    MainTheoremReport rep = check_first_main_theorem(u, q, grid, imag_res, 1.0, tol);
    py::dict d;
    d["real_q_index"] = rep.real_q_index;
    d["levi_q_index"] = rep.levi_q_index;
    d["real_at_most_q"] = rep.real_at_most_q;
    d["levi_at_most_q"] = rep.levi_at_most_q;
    d["equivalent"] = rep.equivalent;
    d["points"] = rep.points;
    d["mismatches"] = rep.mismatches;
    return d;
}

py::dict reinhardt_agreement(const std::string& expr, int dim, std::optional<PyBox> box,
                             std::optional<PyRes> res, int angles, double tol) {
    GridSpec grid{to_box(box, static_cast<size_t>(dim)),
                  to_res(res, static_cast<size_t>(dim), 6)};
    ScalarField u = field_from_expr(expr, dim, Box(grid.box.size()));
    ReinhardtAgreement a = reinhardt_grid_agreement(u, grid, angles, tol);
    py::dict d;
    d["compared"] = a.compared;
    d["agreed"] = a.agreed;
    d["skipped"] = a.skipped;
    d["ratio"] = a.ratio();
    return d;
}

py::dict graph_demo(const std::vector<std::string>& f, int n, const Point& x1, const Point& x2,
                    double t0, int t_steps, int s_steps) {
    OpenSetModel graph_set = make_graph_complement(f, n);
    GraphFamilyResult fam = graph_complement_family(graph_set, x1, x2, t0);
    ContinuityVerdict v = continuity_principle_test(graph_set, fam.family, t_steps, s_steps);
    py::dict d;
    d["status"] = v.status == ContinuityVerdict::Status::Violated  ? "violated"
                  : v.status == ContinuityVerdict::Status::Holds   ? "holds"
                                                                   : "inapplicable";
    d["t_star"] = v.t_star;
    d["offending"] = v.offending;
    d["r0"] = fam.r0;
    d["flipped"] = fam.flipped;
    return d;
}

py::dict regularize(const std::string& expr, int dim, std::optional<PyBox> box,
                    std::optional<PyRes> res, double k, double radius,
                    const std::string& kernel_name, double tol) {
    Box b = to_box(box, static_cast<size_t>(dim));
    std::vector<int> r = to_res(res, static_cast<size_t>(dim), 16);
    GridField gf = sample_to_grid(field_from_expr(expr, dim, Box(b.size())), b, r);
    KernelSpec kernel;
    if (kernel_name == "quartic")
        kernel.shape = KernelSpec::Shape::Quartic;
    else if (kernel_name == "bump")
        kernel.shape = KernelSpec::Shape::Bump;
    else
        throw std::invalid_argument("kernel is quartic or bump");
    double widest = 0;
    for (size_t i = 0; i < r.size(); ++i) widest = std::max(widest, gf.spacing(i));
    kernel.radius = radius > 0 ? radius : 2 * widest;
    ApproximationResult ar = approximate_from_above(gf, k, kernel);
    GridClassifyReport before = grid_q_index(gf, tol);
    GridClassifyReport after = grid_q_index(ar.tilde, tol, &ar.argmax);
    py::dict d;
    d["dominates"] = ar.dominates;
    d["trim"] = ar.trim;
    d["q_index_before"] = before.q_index;
    d["q_index_after"] = after.q_index;
    d["nodes_evaluated"] = after.nodes_evaluated;
    return d;
}

}  // namespace

PYBIND11_MODULE(_qcx, m) {
    m.doc() = "grid-based q-convexity and q-pseudoconvexity checks";
    m.attr("__version__") = kLibraryVersion;

    py::register_exception<EvalError>(m, "EvalError");
    py::register_exception<NumericError>(m, "NumericError");

    m.def("classify", &classify, py::arg("expr"), py::arg("dim"), py::arg("box") = py::none(),
          py::arg("res") = py::none(), py::arg("complex") = false, py::arg("tol") = 1e-7,
          "Max Hessian (or Levi, with complex=True) negative count over a grid");
    m.def("witness", &witness, py::arg("expr"), py::arg("dim"), py::arg("q") = 0,
          py::arg("box") = py::none(), py::arg("budget") = py::none(), py::arg("seed") = 0,
          py::arg("tol") = 1e-7, "Search for a level-q maximum-property violation");
    m.def("set_check", &set_check, py::arg("set_json"), py::arg("q") = 0,
          py::arg("box") = py::none(), py::arg("budget") = py::none(), py::arg("seed") = 0,
          "Boundary-distance convexity check of a set given as JSON");
    m.def("tube_check", &tube_check, py::arg("set_json"), py::arg("a") = kInf, py::arg("q") = 0,
          py::arg("box") = py::none(), py::arg("res") = py::none(), py::arg("imag_res") = 2,
          py::arg("budget") = py::none(), py::arg("seed") = 0, py::arg("tol") = 1e-7,
          "Levi check of the cylinder distance field over a base set");
    m.def("first_main_theorem", &first_main_theorem, py::arg("expr"), py::arg("dim"),
          py::arg("q") = 0, py::arg("box") = py::none(), py::arg("res") = py::none(),
          py::arg("imag_res") = 2, py::arg("tol") = 1e-7,
          "Compare Hessian negatives of u with Levi negatives of its rigid lift");
    m.def("reinhardt_agreement", &reinhardt_agreement, py::arg("expr"), py::arg("dim"),
          py::arg("box") = py::none(), py::arg("res") = py::none(), py::arg("angles") = 3,
          py::arg("tol") = 1e-7,
          "Log-coordinate inertia vs Levi inertia of the rotation-invariant pullback");
    m.def("graph_demo", &graph_demo, py::arg("f"), py::arg("n"), py::arg("x1"), py::arg("x2"),
          py::arg("t0") = 0.0, py::arg("t_steps") = 33, py::arg("s_steps") = 8,
          "Continuity-principle test of a touching family over a graph complement");
    m.def("regularize", &regularize, py::arg("expr"), py::arg("dim"), py::arg("box") = py::none(),
          py::arg("res") = py::none(), py::arg("k") = 8.0, py::arg("radius") = 0.0,
          py::arg("kernel") = "quartic", py::arg("tol") = 1e-7,
          "Smooth a sampled field from above and compare lattice q-indices");
}
