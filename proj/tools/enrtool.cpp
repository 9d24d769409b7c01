// Command-line front end: lattice utilities, model validation, enumeration
// runs, invariant reports and certificate emission.

#include "enrlat/boxscan.hpp"
#include "enrlat/discriminant.hpp"
#include "enrlat/enumerate.hpp"
#include "enrlat/json_io.hpp"
#include "enrlat/roots.hpp"
#include "enrlat/sublattice.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

using namespace enrlat;
namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitOperation = 3;
constexpr int kExitCertify = 4;

struct Output {
    std::string format = "text"; // text | json | csv
    std::string out_path;

    void emit(const Json& j, const std::string& text_form, const std::string& csv_form = "") const {
        std::string payload;
        if (format == "json") payload = j.dump(2) + "\n";
        else if (format == "csv") payload = csv_form.empty() ? j.dump(2) + "\n" : csv_form;
        else payload = text_form;
        if (out_path.empty()) std::cout << payload;
        else write_text_file(out_path, payload);
    }
};

fs::path resolve_input(const std::string& path, const std::string& fixtures_dir) {
    fs::path p(path);
    if (fs::exists(p)) return p;
    if (!fixtures_dir.empty()) {
        fs::path q = fs::path(fixtures_dir) / p;
        if (fs::exists(q)) return q;
    }
    fail(ErrorCode::SchemaError, "no such file: " + path);
}

LatticePtr lattice_from_file(const fs::path& p, bool allow_degenerate = false) {
    Json j = read_json_file(p);
    if (j.contains("gram")) return lattice_from_json(j, allow_degenerate);
    if (j.contains("vertices")) return lattice_from_dual_graph(graph_from_json(j));
    fail(ErrorCode::SchemaError, p.string() + ": expected a lattice or dual-graph file");
}

std::string lattice_text(const IntegerLattice& l) {
    std::ostringstream os;
    os << "rank " << l.rank() << ", det " << l.det() << ", signature (" << l.signature().first
       << "," << l.signature().second << ")\n";
    return os.str();
}

int run_lattice_snf(const std::string& file, const Output& out) {
    Json j = read_json_file(file);
    Json rep;
    std::string text;
    if (j.contains("gram") || j.contains("vertices")) {
        LatticePtr l = lattice_from_file(file);
        DiscriminantData d = discriminant_group(*l);
        rep = discriminant_to_json(d);
        std::ostringstream os;
        os << "invariant factors:";
        if (d.invariant_factors.empty()) os << " none (unimodular)";
        for (const auto& f : d.invariant_factors) os << " " << f;
        os << "\n";
        text = os.str();
    } else if (j.contains("matrix")) {
        const auto& rows = j["matrix"];
        IMat m(rows.size(), rows.empty() ? 0 : rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t k = 0; k < rows[i].size(); ++k)
                m(i, k) = rows[i][k].get<std::int64_t>();
        DiscriminantData d = smith_normal_form(m);
        rep = discriminant_to_json(d);
        std::ostringstream os;
        os << "invariant factors:";
        for (const auto& f : d.invariant_factors) os << " " << f;
        os << "\n";
        text = os.str();
    } else {
        fail(ErrorCode::SchemaError, "snf expects a lattice, graph or {\"matrix\": ...} file");
    }
    out.emit(rep, text);
    return kExitOk;
}

int run_lattice_ade(const std::string& file, const Output& out) {
    LatticePtr l = lattice_from_file(file);
    ADEType t = ade_type(*l);
    Json j;
    j["ade_type"] = t.str();
    out.emit(j, t.str() + "\n");
    return kExitOk;
}

int run_lattice_roots(const std::string& file, const Output& out) {
    LatticePtr l = lattice_from_file(file);
    auto roots = enumerate_roots(*l);
    Json j;
    j["count"] = roots.size();
    Json arr = Json::array();
    for (const auto& r : roots) arr.push_back(Json(r));
    j["roots"] = arr;
    std::ostringstream os;
    os << roots.size() << " roots\n";
    out.emit(j, os.str());
    return kExitOk;
}

int run_lattice_closure(const std::string& graph_file, const std::string& ambient_file, int box,
                        const std::string& halfsum, const Output& out) {
    LatticePtr amb = ambient_file.empty() ? make_l10() : lattice_from_file(ambient_file);
    DualGraph graph = graph_from_json(read_json_file(graph_file));
    EmbeddingPredicate pred;
    if (!halfsum.empty()) {
        // comma-separated vertex labels whose half-sum must land in the lattice
        std::vector<int> cols;
        std::stringstream ss(halfsum);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            auto it = std::find(graph.vertices.begin(), graph.vertices.end(), tok);
            if (it == graph.vertices.end())
                fail(ErrorCode::SchemaError, "unknown vertex in --require-halfsum: " + tok);
            cols.push_back(static_cast<int>(it - graph.vertices.begin()));
        }
        pred = [cols](const Mat64& m) {
            for (std::size_t i = 0; i < m.rows(); ++i) {
                std::int64_t s = 0;
                for (int c : cols) s += m(i, c);
                if (s % 2 != 0) return false;
            }
            return true;
        };
    }
    Embedding emb = embed_by_graph_where(amb, graph, box, pred);
    ClosureResult cl = primitive_closure(emb);
    const auto& closed = *cl.closure.source();
    Json j;
    j["rank"] = closed.rank();
    std::ostringstream det;
    det << abs(closed.det());
    j["abs_det"] = det.str();
    j["index"] = static_cast<std::int64_t>(cl.index);
    j["ade_type"] = ade_type(closed).str();
    j["basis"] = [&] {
        Json arr = Json::array();
        for (int c = 0; c < closed.rank(); ++c) arr.push_back(Json(cl.closure.column(c)));
        return arr;
    }();
    std::ostringstream os;
    os << "closure: rank " << closed.rank() << ", |det| " << abs(closed.det()) << ", index "
       << cl.index << ", type " << ade_type(closed).str() << "\n";
    out.emit(j, os.str());
    return kExitOk;
}

int run_lattice_mr(const std::string& root_type, int box, const Output& out) {
    ADEType t = parse_ade(root_type);
    auto l10 = make_l10();
    Embedding emb = embed_by_graph(l10, ade_dynkin_graph(t), box);
    MRLattice mr = build_mr(emb);
    Json j = lattice_to_json(*mr.mr);
    std::ostringstream dd;
    dd << mr.det_direct;
    j["abs_det"] = dd.str();
    j["l10_block_rank"] = 10;
    out.emit(j, lattice_text(*mr.mr));
    return kExitOk;
}

int run_lattice_graph(const std::string& file, const Output& out) {
    DualGraph g = graph_from_json(read_json_file(file));
    LatticePtr l = lattice_from_dual_graph(g);
    out.emit(lattice_to_json(*l), lattice_text(*l));
    return kExitOk;
}

int run_model_validate(const SurfaceModel& m, const Output& out) {
    ModelReport r = validate_model(m);
    Json j = report_to_json(r, m);
    std::ostringstream os;
    os << "model " << m.name << ": " << (r.valid() ? "valid" : "INVALID") << " (" << r.curve_count
       << " curves, " << r.halffiber_count << " halffibers, " << r.isometry_count
       << " isometries)\n";
    for (const auto& [f, c] : r.nefness_failures)
        os << "  nefness failure: halffiber " << f << " meets curve " << c << " negatively\n";
    for (int i : r.curves_bad_norm) os << "  curve " << i << " has norm != -2\n";
    for (int i : r.halffibers_bad_norm) os << "  halffiber " << i << " is not isotropic\n";
    for (int i : r.halffibers_imprimitive) os << "  halffiber " << i << " is imprimitive\n";
    for (int i : r.isometries_bad_gram) os << "  isometry " << i << " does not preserve the gram\n";
    for (const auto& w : m.loader_warnings) os << "  warning: " << w << "\n";
    out.emit(j, os.str());
    return kExitOk; // failures are content here
}

int run_model_enumerate(const SurfaceModel& m, PolKind kind, const EngineOptions& eopts,
                        bool reduce_orbits, const Output& out) {
    ModelReport r = validate_model(m);
    if (!r.valid()) fail(ErrorCode::CertificateFailure, "model failed validation");
    EnumerationResult res = enumerate_polarizations(m, kind, eopts);
    std::ostringstream os;
    if (reduce_orbits) {
        OrbitReduction red = orbit_representatives(res, m, eopts);
        os << "model " << m.name << ": " << res.polarizations.size() << " " << pol_kind_name(kind)
           << " polarizations in " << red.reduced.polarizations.size() << " orbits\n";
        out.emit(enumeration_to_json(red.reduced, &red.orbit_sizes), os.str(),
                 enumeration_to_csv(red.reduced, &red.orbit_sizes));
    } else {
        os << "model " << m.name << ": " << res.polarizations.size() << " " << pol_kind_name(kind)
           << " polarizations\n";
        for (auto [c, cnt] : res.stats) os << "  nondegeneracy " << c << ": " << cnt << "\n";
        out.emit(enumeration_to_json(res), os.str(), enumeration_to_csv(res));
    }
    return kExitOk;
}

int run_model_invariants(const SurfaceModel& m, const EngineOptions& eopts, const Output& out) {
    ModelReport r = validate_model(m);
    if (!r.valid()) fail(ErrorCode::CertificateFailure, "model failed validation");
    Invariants inv = compute_invariants(m, eopts);
    std::ostringstream os;
    os << "nd " << inv.nd << ", Fnd " << inv.fnd << ", Mnd " << inv.mnd
       << " (exact relative to model data; clique lower bound " << inv.clique_lower_bound
       << ")\n";
    out.emit(invariants_to_json(inv), os.str());
    return kExitOk;
}

int run_certify(const std::string& model_file, const std::string& reps_file, int d,
                const std::string& mode, bool recheck, const std::string& fixtures_dir,
                const EngineOptions& eopts, const Output& out) {
    SurfaceModel m = load_model(resolve_input(model_file, fixtures_dir));
    ModelReport r = validate_model(m);
    if (!r.valid()) fail(ErrorCode::CertificateFailure, "model failed validation");
    PolKind kind;
    if (mode == "fano") kind = PolKind::Fano;
    else if (mode == "mukai") kind = PolKind::Mukai;
    else fail(ErrorCode::SchemaError, "--mode must be fano or mukai");
    std::vector<Polarization> reps =
        reps_from_json(read_json_file(resolve_input(reps_file, fixtures_dir)), m.lattice);
    BoundCertificate cert = upper_bound_certificate(m, reps, d, kind, eopts);
    std::ostringstream os;
    if (cert.certified) {
        os << "certified: " << cert.conclusion << " (" << cert.reps.size()
           << " representatives)\n";
    } else {
        os << "certificate FAILED for representatives:";
        for (auto i : cert.failed_reps) os << " " << i;
        os << "\n";
    }
    out.emit(certificate_to_json(cert), os.str());
    if (cert.certified && recheck) {
        recheck_certificate(m, cert, eopts);
        std::cerr << "recheck: all witness intersections verified from scratch\n";
    }
    return cert.certified ? kExitOk : kExitCertify;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact lattice toolkit and enumeration engine for Enriques-surface models"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "text", out_path, fixtures_dir;
    app.add_option("--format", format, "output format: text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--out", out_path, "write output to a file");
    app.add_option("--fixtures-dir", fixtures_dir, "directory searched for input files");

    int box = 3;
    app.add_option("--box", box, "coordinate bound for bounded searches")->check(CLI::Range(1, 64));
    EngineOptions eopts;
    app.add_option("--orbit-cap", eopts.orbit_cap, "cap for isometry-orbit closures")
        ->check(CLI::Range(std::size_t(1), std::size_t(100000000)));
    app.add_option("--workers", eopts.workers, "worker threads for partitioned enumeration")
        ->check(CLI::Range(1, 256));

    // lattice subcommands
    auto* lattice = app.add_subcommand("lattice", "lattice kernel utilities");
    lattice->fallthrough();
    lattice->require_subcommand(1);
    std::string lat_file, graph_file, ambient_file, root_type;

    auto* snf = lattice->add_subcommand("snf", "Smith form / discriminant group");
    snf->fallthrough();
    snf->add_option("file", lat_file)->required();
    auto* ade = lattice->add_subcommand("ade-type", "ADE classification of a definite lattice");
    ade->fallthrough();
    ade->add_option("file", lat_file)->required();
    auto* roots_cmd = lattice->add_subcommand("roots", "all (-2)-vectors of a definite lattice");
    roots_cmd->fallthrough();
    roots_cmd->add_option("file", lat_file)->required();
    auto* closure = lattice->add_subcommand("closure", "primitive closure of an embedded graph");
    closure->fallthrough();
    std::string halfsum;
    closure->add_option("--graph", graph_file)->required();
    closure->add_option("--ambient", ambient_file);
    closure->add_option("--require-halfsum", halfsum,
                        "comma-separated vertices whose half-sum must be integral");
    auto* mr = lattice->add_subcommand("mr", "build the M_R overlattice for a root type");
    mr->fallthrough();
    mr->add_option("--root-type", root_type)->required();
    auto* graph = lattice->add_subcommand("graph", "lattice of a dual graph");
    graph->fallthrough();
    graph->add_option("file", graph_file)->required();

    // model subcommands
    auto* model = app.add_subcommand("model", "surface-model operations");
    model->fallthrough();
    model->require_subcommand(1);
    std::string model_file, kind = "fano";

    auto* validate = model->add_subcommand("validate", "check every model invariant");
    validate->fallthrough();
    validate->add_option("file", model_file)->required();
    auto* enumerate = model->add_subcommand("enumerate", "numerical Fano/Mukai polarizations");
    enumerate->fallthrough();
    enumerate->add_option("file", model_file)->required();
    enumerate->add_option("--kind", kind)->check(CLI::IsMember({"fano", "mukai"}));
    auto* invariants = model->add_subcommand("invariants", "nd, Fnd and Mnd of the model");
    invariants->fallthrough();
    invariants->add_option("file", model_file)->required();
    auto* orbits = model->add_subcommand("orbits", "orbit-reduced polarization list");
    orbits->fallthrough();
    orbits->add_option("file", model_file)->required();
    orbits->add_option("--kind", kind)->check(CLI::IsMember({"fano", "mukai"}));

    // certify
    auto* certify = app.add_subcommand("certify", "upper-bound certificate for Fnd/Mnd");
    certify->fallthrough();
    std::string reps_file, mode = "fano";
    int dval = 1;
    bool recheck = false;
    certify->add_option("--model", model_file)->required();
    certify->add_option("--reps", reps_file)->required();
    certify->add_option("--d", dval)->required()->check(CLI::Range(1, 10));
    certify->add_option("--mode", mode)->check(CLI::IsMember({"fano", "mukai"}));
    certify->add_flag("--recheck", recheck, "re-verify the emitted certificate from scratch");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitInput : kExitOk;
    }

    Output out{format, out_path};
    try {
        if (snf->parsed()) return run_lattice_snf(resolve_input(lat_file, fixtures_dir), out);
        if (ade->parsed()) return run_lattice_ade(resolve_input(lat_file, fixtures_dir), out);
        if (roots_cmd->parsed())
            return run_lattice_roots(resolve_input(lat_file, fixtures_dir), out);
        if (closure->parsed())
            return run_lattice_closure(resolve_input(graph_file, fixtures_dir),
                                       ambient_file.empty()
                                           ? ""
                                           : resolve_input(ambient_file, fixtures_dir).string(),
                                       box, halfsum, out);
        if (mr->parsed()) return run_lattice_mr(root_type, box, out);
        if (graph->parsed()) return run_lattice_graph(resolve_input(graph_file, fixtures_dir), out);

        if (model->parsed()) {
            SurfaceModel m = load_model(resolve_input(model_file, fixtures_dir));
            PolKind k = kind == "mukai" ? PolKind::Mukai : PolKind::Fano;
            if (validate->parsed()) return run_model_validate(m, out);
            if (enumerate->parsed()) return run_model_enumerate(m, k, eopts, false, out);
            if (invariants->parsed()) return run_model_invariants(m, eopts, out);
            if (orbits->parsed()) return run_model_enumerate(m, k, eopts, true, out);
        }
        if (certify->parsed())
            return run_certify(model_file, reps_file, dval, mode, recheck, fixtures_dir, eopts,
                               out);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
            case ErrorCode::SchemaError:
            case ErrorCode::BadArgument:
                return kExitInput;
            case ErrorCode::CertificateFailure:
                return kExitCertify;
            default:
                return kExitOperation;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitOperation;
    }
    return kExitOk;
}
