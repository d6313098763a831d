#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "json_util.hpp"
#include "qcx/complex.hpp"
#include "qcx/gridfield.hpp"
#include "qcx/parallel.hpp"
#include "qcx/planar.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qcx;

struct Options {
    std::string expr;
    std::vector<std::string> graph_exprs;
    std::string set_json;
    std::string box_json;
    std::string grid_text;
    std::string budget_text;
    std::string a_text = "inf";
    std::string kernel_name = "quartic";
    std::string out_path = "qcx-report.json";
    std::string csv_path;
    std::string x1_text, x2_text;
    int dim = 0;
    int q = 0;
    int codomain = 0;
    int imag_res = 2;
    int angles = 3;
    int t_steps = 33;
    int s_steps = 8;
    int threads = 0;
    uint64_t seed = 0;
    double tol = 1e-7;
    double clip = 8.0;
    double kernel_radius = 0.0;  // 0 = twice the widest cell
    double t0 = 0.0;
    bool use_complex = false;
    bool records = false;
};

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    size_t start = 0;
    while (start <= text.size()) {
        size_t comma = text.find(',', start);
        if (comma == std::string::npos) {
            parts.push_back(text.substr(start));
            break;
        }
        parts.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return parts;
}

std::vector<int> parse_grid(const std::string& text, size_t axes, int fallback) {
    std::vector<int> res;
    if (text.empty()) {
        res.assign(axes, fallback);
        return res;
    }
    for (const auto& part : split_commas(text)) res.push_back(std::stoi(part));
    if (res.size() == 1 && axes > 1) res.assign(axes, res[0]);
    if (res.size() != axes)
        throw std::invalid_argument("grid needs 1 or " + std::to_string(axes) + " resolutions");
    for (int r : res)
        if (r < 2) throw std::invalid_argument("grid resolutions must be at least 2");
    return res;
}

Point parse_point(const std::string& text, size_t dim, const char* what) {
    Point p;
    for (const auto& part : split_commas(text)) p.push_back(std::stod(part));
    if (p.size() != dim)
        throw std::invalid_argument(std::string(what) + " needs " + std::to_string(dim) +
                                    " comma-separated coordinates");
    return p;
}

WitnessBudget parse_budget(const std::string& text) {
    WitnessBudget b;
    if (text.empty()) return b;
    auto parts = split_commas(text);
    if (parts.size() < 3 || parts.size() > 5)
        throw std::invalid_argument("budget is slices,boundary,interior[,centers[,radii]]");
    b.slices = std::stoi(parts[0]);
    b.boundary_samples = std::stoi(parts[1]);
    b.interior_samples = std::stoi(parts[2]);
    if (parts.size() > 3) b.centers_per_axis = std::stoi(parts[3]);
    if (parts.size() > 4) b.radii = std::stoi(parts[4]);
    return b;
}

double parse_half_width(const std::string& text) {
    if (text == "inf" || text == "+inf") return kInf;
    return std::stod(text);
}

Box resolve_box(const std::string& box_json, size_t axes) {
    if (box_json.empty()) return unit_sym_box(static_cast<int>(axes));
    Box b = box_from_json_value(nlohmann::json::parse(box_json));
    if (b.size() != axes)
        throw std::invalid_argument("box has " + std::to_string(b.size()) + " intervals, need " +
                                    std::to_string(axes));
    return b;
}

// Complex runs take either n intervals (mirrored onto the imaginary axes) or
// the full 2n.
Box resolve_complex_box(const std::string& box_json, size_t n) {
    if (box_json.empty()) return unit_sym_box(static_cast<int>(2 * n));
    Box b = box_from_json_value(nlohmann::json::parse(box_json));
    if (b.size() == n) {
        Box full = b;
        full.insert(full.end(), b.begin(), b.end());
        return full;
    }
    if (b.size() == 2 * n) return b;
    throw std::invalid_argument("complex box needs n or 2n intervals");
}

int max_var_index(const std::vector<std::string>& exprs) {
    int best = 0;
    for (const auto& src : exprs) {
        for (size_t i = 0; i < src.size(); ++i) {
            if (src[i] != 'x') continue;
            if (i > 0 && (std::isalnum(static_cast<unsigned char>(src[i - 1])) || src[i - 1] == '_'))
                continue;
            size_t j = i + 1;
            int idx = 0;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
                idx = idx * 10 + (src[j++] - '0');
            if (j > i + 1) best = std::max(best, idx);
        }
    }
    if (best == 0) throw std::invalid_argument("no x<k> variables found; pass --dim explicitly");
    return best;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json budget_json(const WitnessBudget& b) {
    ordered_json j;
    j["slices"] = b.slices;
    j["boundary_samples"] = b.boundary_samples;
    j["interior_samples"] = b.interior_samples;
    j["centers_per_axis"] = b.centers_per_axis;
    j["radii"] = b.radii;
    return j;
}

ordered_json grid_json(const GridSpec& g) {
    ordered_json j;
    j["box"] = box_to_json(g.box);
    j["res"] = g.res;
    return j;
}

ordered_json witness_json(const Witness& w) {
    ordered_json j;
    j["slice_base"] = w.ball.slice.base;
    ordered_json basis = ordered_json::array();
    for (const auto& col : w.ball.slice.basis) basis.push_back(col);
    j["slice_basis"] = basis;
    j["ball_center"] = w.ball.center;
    j["ball_radius"] = w.ball.radius;
    j["affine_a"] = w.l.a;
    j["affine_b"] = w.l.b;
    j["point"] = w.point;
    j["ambient_point"] = w.ambient_point;
    j["margin"] = w.margin;
    j["tol_scale"] = w.tol_scale;
    return j;
}

ordered_json search_json(const WitnessSearchResult& r) {
    ordered_json j;
    j["found"] = r.witness.has_value();
    j["witness"] = r.witness ? witness_json(*r.witness) : ordered_json(nullptr);
    j["slices_tried"] = r.slices_tried;
    j["balls_tried"] = r.balls_tried;
    j["balls_skipped"] = r.balls_skipped;
    j["candidates_rejected"] = r.candidates_rejected;
    j["note"] = r.note;
    return j;
}

ordered_json qindex_json(const QIndexReport& r, bool with_records) {
    ordered_json j;
    j["q_index"] = r.q_index;
    j["strict_q_index"] = r.strict_q_index;
    j["points_evaluated"] = r.points_evaluated;
    j["failed_points"] = r.failed_points.size();
    if (!r.failures.empty()) j["failures"] = r.failures;
    if (with_records) {
        ordered_json recs = ordered_json::array();
        for (const auto& rec : r.records) {
            ordered_json e;
            e["p"] = rec.p;
            e["neg"] = rec.neg;
            e["zero"] = rec.zero;
            e["pos"] = rec.pos;
            e["scale"] = rec.scale;
            e["eigenvalues"] = rec.eigenvalues;
            recs.push_back(e);
        }
        j["records"] = recs;
    }
    return j;
}

ordered_json set_check_json(const SetCheckResult& r) {
    ordered_json j;
    j["consistent"] = r.consistent;
    j["verdict"] = r.verdict;
    j["search"] = search_json(r.search);
    return j;
}

ordered_json points_json(const std::vector<Point>& pts) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : pts) arr.push_back(p);
    return arr;
}

struct ReportSink {
    ordered_json doc;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    explicit ReportSink(const std::string& command) {
        doc["schema"] = "qcx-report-v1";
        doc["library_version"] = kLibraryVersion;
        doc["command"] = command;
    }

    void write(const std::string& path) {
        auto elapsed = std::chrono::steady_clock::now() - start;
        doc["wall_time_ms"] =
            std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(elapsed).count();
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::invalid_argument("cannot open report path: " + path);
        os << doc.dump(2) << "\n";
        if (!os) throw NumericError("short write on report: " + path);
    }
};

void write_field_csv(const std::string& path, const ScalarField& f, const GridSpec& g) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open csv path: " + path);
    for (int i = 0; i < f.dim; ++i) os << "x" << i + 1 << ",";
    os << "value\n";
    size_t total = g.count();
    for (size_t flat = 0; flat < total; ++flat) {
        Point p = g.node(flat);
        double v;
        try {
            v = f(p);
        } catch (const EvalError&) {
            v = std::numeric_limits<double>::quiet_NaN();
        }
        for (double c : p) os << fmt(c) << ",";
        os << fmt(v) << "\n";
    }
    if (!os) throw NumericError("short write on csv: " + path);
}

void write_lattice_csv(const std::string& path, const GridField& gf) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open csv path: " + path);
    for (size_t i = 0; i < gf.box.size(); ++i) os << "x" << i + 1 << ",";
    os << "value\n";
    size_t total = gf.node_count();
    for (size_t flat = 0; flat < total; ++flat) {
        Point p = gf.node_point(gf.multi(flat));
        for (double c : p) os << fmt(c) << ",";
        os << fmt(gf.values[flat]) << "\n";
    }
    if (!os) throw NumericError("short write on csv: " + path);
}

int run_classify(const Options& o) {
    if (o.dim <= 0) throw std::invalid_argument("--dim must be positive");
    ReportSink sink("classify");

    ScalarField f;
    GridSpec grid;
    // expressions are total; the box is only the scan window
    if (o.use_complex) {
        grid.box = resolve_complex_box(o.box_json, static_cast<size_t>(o.dim));
        grid.res = parse_grid(o.grid_text, static_cast<size_t>(2 * o.dim), 8);
        f = field_from_expr(parse_expr(o.expr, complex_var_names(o.dim)), Box(grid.box.size()),
                            Smoothness::C2);
    } else {
        grid.box = resolve_box(o.box_json, static_cast<size_t>(o.dim));
        grid.res = parse_grid(o.grid_text, static_cast<size_t>(o.dim), 8);
        f = field_from_expr(o.expr, o.dim, Box(grid.box.size()));
    }

    ordered_json cfg;
    cfg["expr"] = o.expr;
    cfg["dim"] = o.dim;
    cfg["complex"] = o.use_complex;
    cfg["grid"] = grid_json(grid);
    cfg["tol"] = o.tol;
    cfg["records"] = o.records;
    sink.doc["config"] = cfg;

    QIndexReport rep =
        o.use_complex ? qpsh_index_on_grid(f, grid, o.tol) : classify_on_grid(f, grid, o.tol);
    if (rep.points_evaluated == 0)
        throw NumericError("no grid node could be classified: " +
                           (rep.failures.empty() ? std::string("empty grid") : rep.failures[0]));

    sink.doc["result"] = qindex_json(rep, o.records);
    sink.write(o.out_path);
    if (!o.csv_path.empty()) write_field_csv(o.csv_path, f, grid);

    const char* matrix = o.use_complex ? "levi" : "hessian";
    std::cout << "classified " << rep.points_evaluated << " grid points of \"" << o.expr
              << "\" (dim " << o.dim << (o.use_complex ? ", complex" : "") << ")\n";
    std::cout << "max " << matrix << " negatives " << rep.q_index << ", strict index "
              << rep.strict_q_index << ", " << rep.failed_points.size() << " failed points\n";
    std::cout << rep.q_index << "\n";
    return 0;
}

int run_witness(const Options& o) {
    if (o.dim <= 0) throw std::invalid_argument("--dim must be positive");
    if (o.q < 0) throw std::invalid_argument("--q must be nonnegative");
    ReportSink sink("witness");

    Box box = resolve_box(o.box_json, static_cast<size_t>(o.dim));
    ScalarField f = field_from_expr(o.expr, o.dim, Box(box.size()));
    WitnessBudget budget = parse_budget(o.budget_text);

    ordered_json cfg;
    cfg["expr"] = o.expr;
    cfg["dim"] = o.dim;
    cfg["q"] = o.q;
    cfg["box"] = box_to_json(box);
    cfg["budget"] = budget_json(budget);
    cfg["seed"] = o.seed;
    cfg["tol"] = o.tol;
    sink.doc["config"] = cfg;

    WitnessSearchResult r = witness_search(f, o.q, box, budget, o.seed, o.tol);
    sink.doc["result"] = search_json(r);
    sink.write(o.out_path);

    if (r.witness) {
        const Witness& w = *r.witness;
        std::cout << "witness against level " << o.q << ": margin " << fmt(w.margin)
                  << " on a ball of radius " << fmt(w.ball.radius) << "\n";
        std::cout << "violating point (";
        for (size_t i = 0; i < w.ambient_point.size(); ++i)
            std::cout << (i ? ", " : "") << fmt(w.ambient_point[i]);
        std::cout << ")\n";
    } else {
        std::cout << "witness against level " << o.q << ": none at this budget";
        if (!r.note.empty()) std::cout << " (" << r.note << ")";
        std::cout << "\n";
    }
    return 0;
}

int run_set_check(const Options& o) {
    if (o.q < 0) throw std::invalid_argument("--q must be nonnegative");
    ReportSink sink("set-check");

    OpenSetModel s = set_from_json(o.set_json);
    Box box = resolve_box(o.box_json, static_cast<size_t>(s.dim));
    WitnessBudget budget = parse_budget(o.budget_text);

    ordered_json cfg;
    cfg["set"] = nlohmann::ordered_json::parse(set_to_json(s));
    cfg["q"] = o.q;
    cfg["box"] = box_to_json(box);
    cfg["budget"] = budget_json(budget);
    cfg["seed"] = o.seed;
    sink.doc["config"] = cfg;

    SetCheckResult r = set_q_convex_check(s, o.q, box, budget, o.seed);
    sink.doc["result"] = set_check_json(r);
    sink.write(o.out_path);

    if (!o.csv_path.empty()) {
        GridSpec grid{box, parse_grid(o.grid_text, box.size(), 8)};
        write_field_csv(o.csv_path, neg_log_dist_field(s), grid);
    }

    std::cout << set_kind_name(s.kind) << " set: " << r.verdict << "\n";
    return 0;
}

int run_tube(const Options& o) {
    if (o.q < 0) throw std::invalid_argument("--q must be nonnegative");
    if (o.imag_res < 1) throw std::invalid_argument("--imag-res must be at least 1");
    ReportSink sink("tube");

    TubeSpec t;
    t.base = set_from_json(o.set_json);
    t.half_width = parse_half_width(o.a_text);
    size_t n = static_cast<size_t>(t.base.dim);
    GridSpec base_grid{resolve_box(o.box_json, n), parse_grid(o.grid_text, n, 4)};
    WitnessBudget budget = parse_budget(o.budget_text);

    ordered_json cfg;
    cfg["set"] = nlohmann::ordered_json::parse(set_to_json(t.base));
    cfg["a"] = std::isfinite(t.half_width) ? ordered_json(t.half_width) : ordered_json("inf");
    cfg["q"] = o.q;
    cfg["grid"] = grid_json(base_grid);
    cfg["imag_res"] = o.imag_res;
    cfg["budget"] = budget_json(budget);
    cfg["seed"] = o.seed;
    cfg["tol"] = o.tol;
    sink.doc["config"] = cfg;

    TubeCheckReport rep =
        tube_pseudoconvexity_check(t, o.q, base_grid, o.imag_res, budget, o.seed, o.tol);

    ordered_json res;
    res["q"] = rep.q;
    res["verdict"] = rep.verdict;
    res["levi"] = qindex_json(rep.levi, o.records);
    res["kinks_skipped"] = rep.kinks_skipped;
    res["kink_points"] = points_json(rep.kink_points);
    res["levi_consistent"] = rep.levi_consistent;
    res["base_check"] = set_check_json(rep.base_check);
    res["agree"] = rep.agree;
    sink.doc["result"] = res;
    sink.write(o.out_path);

    if (!o.csv_path.empty()) {
        double awin = std::isfinite(t.half_width) ? t.half_width : 1.0;
        GridSpec full = base_grid;
        full.box.insert(full.box.end(), n, Interval{-awin, awin});
        full.res.insert(full.res.end(), n, o.imag_res);
        write_field_csv(o.csv_path, tube_neg_log_dist(t), full);
    }

    std::cout << rep.verdict << "\n";
    return 0;
}

int run_reinhardt(const Options& o) {
    if (o.dim <= 0) throw std::invalid_argument("--dim must be positive");
    ReportSink sink("reinhardt");

    GridSpec log_grid;
    log_grid.box = resolve_box(o.box_json, static_cast<size_t>(o.dim));
    log_grid.res = parse_grid(o.grid_text, static_cast<size_t>(o.dim), 8);
    ScalarField u = field_from_expr(o.expr, o.dim, Box(log_grid.box.size()));

    ordered_json cfg;
    cfg["expr"] = o.expr;
    cfg["dim"] = o.dim;
    cfg["grid"] = grid_json(log_grid);
    cfg["angles"] = o.angles;
    cfg["tol"] = o.tol;
    sink.doc["config"] = cfg;

    ReinhardtAgreement a = reinhardt_grid_agreement(u, log_grid, o.angles, o.tol);

    ordered_json res;
    res["compared"] = a.compared;
    res["agreed"] = a.agreed;
    res["skipped"] = a.skipped;
    res["ratio"] = a.ratio();
    res["skipped_points"] = points_json(a.skipped_points);
    res["disagreements"] = points_json(a.disagreements);
    sink.doc["result"] = res;
    sink.write(o.out_path);

    if (!o.csv_path.empty()) write_field_csv(o.csv_path, u, log_grid);

    std::cout << "log-coordinate inertia vs pullback levi inertia: " << a.agreed << "/"
              << a.compared << " nodes agree, " << a.skipped << " skipped\n";
    return 0;
}

int run_graph_demo(const Options& o) {
    ReportSink sink("graph-demo");
    if (o.graph_exprs.empty()) throw std::invalid_argument("--f needs at least one component");
    int k = o.codomain > 0 ? o.codomain : static_cast<int>(o.graph_exprs.size());
    if (k != static_cast<int>(o.graph_exprs.size()))
        throw std::invalid_argument("--k must match the number of --f components");
    int n = o.dim > 0 ? o.dim : max_var_index(o.graph_exprs);

    OpenSetModel graph_set = make_graph_complement(o.graph_exprs, n);
    Point x1 = o.x1_text.empty() ? Point(static_cast<size_t>(n), 0.0)
                                 : parse_point(o.x1_text, static_cast<size_t>(n), "--x1");
    if (o.x1_text.empty()) x1[0] = -1.0;
    Point x2 = o.x2_text.empty() ? Point(static_cast<size_t>(n), 0.0)
                                 : parse_point(o.x2_text, static_cast<size_t>(n), "--x2");
    if (o.x2_text.empty()) x2[0] = 1.0;

    ordered_json cfg;
    cfg["f"] = o.graph_exprs;
    cfg["k"] = k;
    cfg["dim"] = n;
    cfg["x1"] = x1;
    cfg["x2"] = x2;
    cfg["t0"] = o.t0;
    cfg["t_steps"] = o.t_steps;
    cfg["s_steps"] = o.s_steps;
    sink.doc["config"] = cfg;

    GraphFamilyResult fam = graph_complement_family(graph_set, x1, x2, o.t0);
    ContinuityVerdict v = continuity_principle_test(graph_set, fam.family, o.t_steps, o.s_steps);

    const char* status = v.status == ContinuityVerdict::Status::Violated     ? "violated"
                         : v.status == ContinuityVerdict::Status::Holds      ? "holds"
                                                                             : "inapplicable";
    ordered_json res;
    res["status"] = status;
    res["t_star"] = v.t_star;
    res["offending"] = v.offending;
    res["family_r0"] = fam.r0;
    res["family_x0"] = fam.x0;
    res["family_flipped"] = fam.flipped;
    res["note"] = v.note;
    res["trace"] = v.trace;
    sink.doc["result"] = res;
    sink.write(o.out_path);

    if (!o.csv_path.empty()) {
        GridSpec grid{resolve_box(o.box_json, static_cast<size_t>(n)),
                      parse_grid(o.grid_text, static_cast<size_t>(n), 8)};
        write_field_csv(o.csv_path, field_from_expr(o.graph_exprs[0], n, Box(grid.box.size())), grid);
    }

    std::cout << "touching family over the graph complement: gap " << fmt(fam.r0)
              << (fam.flipped ? ", mirrored lift" : "") << "\n";
    std::cout << "continuity principle " << status;
    if (v.status == ContinuityVerdict::Status::Violated) {
        std::cout << " at t = " << fmt(v.t_star) << ", slice point (";
        for (size_t i = 0; i < v.offending.size(); ++i)
            std::cout << (i ? ", " : "") << fmt(v.offending[i]);
        std::cout << ") leaves the set";
    }
    if (!v.note.empty()) std::cout << ": " << v.note;
    std::cout << "\n";
    return 0;
}

int run_regularize(const Options& o) {
    if (o.dim <= 0) throw std::invalid_argument("--dim must be positive");
    if (o.clip <= 0) throw std::invalid_argument("--k must be positive");
    ReportSink sink("regularize");

    Box box = resolve_box(o.box_json, static_cast<size_t>(o.dim));
    std::vector<int> res = parse_grid(o.grid_text, static_cast<size_t>(o.dim), 16);
    ScalarField f = field_from_expr(o.expr, o.dim, Box(box.size()));
    GridField gf = sample_to_grid(f, box, res);

    KernelSpec kernel;
    if (o.kernel_name == "quartic")
        kernel.shape = KernelSpec::Shape::Quartic;
    else if (o.kernel_name == "bump")
        kernel.shape = KernelSpec::Shape::Bump;
    else
        throw std::invalid_argument("--kernel is quartic or bump");
    double widest = 0;
    for (size_t i = 0; i < res.size(); ++i) widest = std::max(widest, gf.spacing(i));
    kernel.radius = o.kernel_radius > 0 ? o.kernel_radius : 2 * widest;

    ordered_json cfg;
    cfg["expr"] = o.expr;
    cfg["dim"] = o.dim;
    cfg["box"] = box_to_json(box);
    cfg["res"] = res;
    cfg["k"] = o.clip;
    cfg["kernel"] = o.kernel_name;
    cfg["kernel_radius"] = kernel.radius;
    cfg["tol"] = o.tol;
    sink.doc["config"] = cfg;

    ApproximationResult ar = approximate_from_above(gf, o.clip, kernel);
    GridClassifyReport before = grid_q_index(gf, o.tol);
    GridClassifyReport after = grid_q_index(ar.tilde, o.tol, &ar.argmax);

    auto lattice_json = [](const GridClassifyReport& r) {
        ordered_json j;
        j["q_index"] = r.q_index;
        j["strict_q_index"] = r.strict_q_index;
        j["nodes_evaluated"] = r.nodes_evaluated;
        j["nodes_skipped"] = r.nodes_skipped;
        j["straddle_nodes"] = r.straddle_nodes.size();
        return j;
    };
    ordered_json resj;
    resj["dominates"] = ar.dominates;
    resj["offending_node"] =
        ar.offending_node ? ordered_json(*ar.offending_node) : ordered_json(nullptr);
    resj["trim"] = ar.trim;
    resj["input"] = lattice_json(before);
    resj["output"] = lattice_json(after);
    sink.doc["result"] = resj;
    sink.write(o.out_path);

    if (!o.csv_path.empty()) write_lattice_csv(o.csv_path, ar.tilde);

    std::cout << "smoothed from above with k = " << fmt(o.clip) << ", kernel radius "
              << fmt(kernel.radius) << (ar.dominates ? ": dominates the input"
                                                     : ": DOES NOT dominate the input") << "\n";
    std::cout << "lattice q-index " << before.q_index << " -> " << after.q_index << " ("
              << after.nodes_evaluated << " nodes, " << after.nodes_skipped << " skipped)\n";
    return ar.dominates ? 0 : 3;
}

void add_output_opts(CLI::App* cmd, Options& o) {
    cmd->add_option("--out", o.out_path, "report path (default qcx-report.json)");
    cmd->add_option("--csv", o.csv_path, "write sampled values as CSV for plotting");
    cmd->add_option("--threads", o.threads, "worker threads (default QCX_THREADS, then hardware)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid-based q-convexity and q-pseudoconvexity checks"};
    app.require_subcommand(1);
    Options o;

    CLI::App* classify = app.add_subcommand("classify", "Hessian or Levi negative index on a grid");
    classify->add_option("--expr", o.expr, "expression in x1..xn (and y1..yn with --complex)")
        ->required();
    classify->add_option("--dim", o.dim, "variable count (complex dimension with --complex)")
        ->required();
    classify->add_flag("--complex", o.use_complex, "classify the Levi form on C^dim");
    classify->add_option("--box", o.box_json, "grid box [[lo,hi],...] (default [-1,1]^n)");
    classify->add_option("--grid", o.grid_text, "per-axis resolutions (default 8)");
    classify->add_option("--tol", o.tol, "inertia zero band (default 1e-7)");
    classify->add_flag("--records", o.records, "embed per-point eigenvalue records");
    add_output_opts(classify, o);

    CLI::App* witness = app.add_subcommand("witness", "search for a level-q maximum violation");
    witness->add_option("--expr", o.expr, "expression in x1..xn")->required();
    witness->add_option("--dim", o.dim, "variable count")->required();
    witness->add_option("--q", o.q, "level to test (default 0)");
    witness->add_option("--box", o.box_json, "scan box (default [-1,1]^n)");
    witness->add_option("--budget", o.budget_text,
                        "slices,boundary,interior[,centers[,radii]] (default 64,128,256,2,5)");
    witness->add_option("--seed", o.seed, "search seed (default 0)");
    witness->add_option("--tol", o.tol, "violation margin threshold (default 1e-7)");
    add_output_opts(witness, o);

    CLI::App* set_check = app.add_subcommand("set-check", "boundary-distance convexity check");
    set_check->add_option("--set", o.set_json, "set JSON (see docs/schema.md)")->required();
    set_check->add_option("--q", o.q, "level to test (default 0)");
    set_check->add_option("--box", o.box_json, "scan box (default [-1,1]^n)");
    set_check->add_option("--budget", o.budget_text, "witness budget");
    set_check->add_option("--seed", o.seed, "search seed (default 0)");
    set_check->add_option("--grid", o.grid_text, "CSV sampling resolutions (default 8)");
    add_output_opts(set_check, o);

    CLI::App* tube = app.add_subcommand("tube", "Levi check of the cylinder distance field");
    tube->add_option("--set", o.set_json, "base set JSON")->required();
    tube->add_option("--a", o.a_text, "imaginary half width, number or inf (default inf)");
    tube->add_option("--q", o.q, "level to test (default 0)");
    tube->add_option("--box", o.box_json, "base grid box (default [-1,1]^n)");
    tube->add_option("--grid", o.grid_text, "base grid resolutions (default 4)");
    tube->add_option("--imag-res", o.imag_res, "imaginary cells per axis (default 2)");
    tube->add_option("--budget", o.budget_text, "witness budget for the base check");
    tube->add_option("--seed", o.seed, "search seed (default 0)");
    tube->add_option("--tol", o.tol, "inertia zero band (default 1e-7)");
    tube->add_flag("--records", o.records, "embed per-point Levi records");
    add_output_opts(tube, o);

    CLI::App* reinhardt = app.add_subcommand("reinhardt", "log-coordinate vs pullback agreement");
    reinhardt->add_option("--expr", o.expr, "base expression in log coordinates x1..xn")
        ->required();
    reinhardt->add_option("--dim", o.dim, "log-coordinate count")->required();
    reinhardt->add_option("--box", o.box_json, "log grid box (default [-1,1]^n)");
    reinhardt->add_option("--grid", o.grid_text, "log grid resolutions (default 8)");
    reinhardt->add_option("--angles", o.angles, "rotations sampled per node (default 3)");
    reinhardt->add_option("--tol", o.tol, "inertia zero band (default 1e-7)");
    add_output_opts(reinhardt, o);

    CLI::App* graph_demo = app.add_subcommand("graph-demo", "continuity principle on a graph complement");
    graph_demo->add_option("--f", o.graph_exprs, "graph map components (repeatable)")->required();
    graph_demo->add_option("--k", o.codomain, "codomain dimension (default: component count)");
    graph_demo->add_option("--dim", o.dim, "base dimension (default: highest x<k> used)");
    graph_demo->add_option("--x1", o.x1_text, "first chord endpoint (default -e1)");
    graph_demo->add_option("--x2", o.x2_text, "second chord endpoint (default e1)");
    graph_demo->add_option("--t0", o.t0, "chord probe parameter in [-1,1] (default 0, the midpoint)");
    graph_demo->add_option("--t-steps", o.t_steps, "family time samples (default 33)");
    graph_demo->add_option("--s-steps", o.s_steps, "slice lattice intervals (default 8)");
    graph_demo->add_option("--box", o.box_json, "CSV sampling box (default [-1,1]^n)");
    graph_demo->add_option("--grid", o.grid_text, "CSV sampling resolutions (default 8)");
    add_output_opts(graph_demo, o);

    CLI::App* regularize = app.add_subcommand("regularize", "smooth a sampled field from above");
    regularize->add_option("--expr", o.expr, "expression in x1..xn")->required();
    regularize->add_option("--dim", o.dim, "variable count")->required();
    regularize->add_option("--box", o.box_json, "lattice box (default [-1,1]^n)");
    regularize->add_option("--grid", o.grid_text, "lattice cells per axis (default 16)");
    regularize->add_option("--k", o.clip, "clip depth for the shift into positives (default 8)");
    regularize->add_option("--radius", o.kernel_radius, "kernel radius (default 2 cells)");
    regularize->add_option("--kernel", o.kernel_name, "quartic or bump (default quartic)");
    regularize->add_option("--tol", o.tol, "inertia zero band (default 1e-7)");
    add_output_opts(regularize, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);  // --help and --version
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (o.threads > 0) set_thread_count(o.threads);

    try {
        if (classify->parsed()) return run_classify(o);
        if (witness->parsed()) return run_witness(o);
        if (set_check->parsed()) return run_set_check(o);
        if (tube->parsed()) return run_tube(o);
        if (reinhardt->parsed()) return run_reinhardt(o);
        if (graph_demo->parsed()) return run_graph_demo(o);
        if (regularize->parsed()) return run_regularize(o);
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const EvalError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
