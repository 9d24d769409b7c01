#include "enrlat/json_io.hpp"

#include <fstream>
#include <sstream>
#include <algorithm>
#include <limits>

namespace enrlat {

namespace {

[[noreturn]] void schema_fail(const std::string& where, const std::string& what) {
    fail(ErrorCode::SchemaError, where + ": " + what);
}

Vec vec_from_json(const Json& j, const std::string& where, int expect_len = -1) {
    if (!j.is_array()) schema_fail(where, "expected an array of integers");
    Vec v;
    for (const auto& e : j) {
        if (!e.is_number_integer()) schema_fail(where, "expected integer coordinates");
        v.push_back(e.get<std::int64_t>());
    }
    if (expect_len >= 0 && static_cast<int>(v.size()) != expect_len)
        schema_fail(where, "expected " + std::to_string(expect_len) + " coordinates, got " +
                               std::to_string(v.size()));
    return v;
}

Json vec_to_json(const Vec& v) { return Json(v); }

Json vecs_to_json(const std::vector<Vec>& vs) {
    Json arr = Json::array();
    for (const auto& v : vs) arr.push_back(vec_to_json(v));
    return arr;
}

Json int_to_json(const Int& v) {
    if (v <= std::numeric_limits<std::int64_t>::max() &&
        v >= std::numeric_limits<std::int64_t>::min())
        return Json(to_i64(v));
    return Json(v.str());
}

std::string rat_str(const Rat& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

} // namespace

Json read_json_file(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) fail(ErrorCode::SchemaError, "cannot open " + p.string());
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorCode::SchemaError, p.string() + ": " + e.what());
    }
    return j;
}

void write_text_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) fail(ErrorCode::SchemaError, "cannot write " + p.string());
    out << text;
}

Json lattice_to_json(const IntegerLattice& l) {
    Json j;
    j["rank"] = l.rank();
    Json gram = Json::array();
    for (int i = 0; i < l.rank(); ++i) {
        Json row = Json::array();
        for (int k = 0; k < l.rank(); ++k) row.push_back(l.gram()(i, k));
        gram.push_back(row);
    }
    j["gram"] = gram;
    if (!l.labels().empty()) j["labels"] = l.labels();
    return j;
}

LatticePtr lattice_from_json(const Json& j, bool allow_degenerate) {
    if (!j.is_object() || !j.contains("gram")) schema_fail("lattice", "missing \"gram\"");
    const Json& gram = j["gram"];
    if (!gram.is_array() || gram.empty()) schema_fail("lattice.gram", "expected a nonempty matrix");
    const int n = static_cast<int>(gram.size());
    if (j.contains("rank") && j["rank"].get<int>() != n)
        schema_fail("lattice.rank", "rank does not match gram size");
    Mat64 g(n, n);
    for (int i = 0; i < n; ++i) {
        Vec row = vec_from_json(gram[i], "lattice.gram row " + std::to_string(i), n);
        for (int k = 0; k < n; ++k) g(i, k) = row[k];
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        for (const auto& s : j["labels"]) {
            if (!s.is_string()) schema_fail("lattice.labels", "expected strings");
            labels.push_back(s.get<std::string>());
        }
    }
    try {
        return std::make_shared<IntegerLattice>(std::move(g), std::move(labels), allow_degenerate);
    } catch (const Error& e) {
        schema_fail("lattice", e.what());
    }
}

DualGraph graph_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
        schema_fail("graph", "expected \"vertices\" and \"edges\"");
    DualGraph g;
    for (const auto& v : j["vertices"]) {
        if (v.is_string()) g.vertices.push_back(v.get<std::string>());
        else schema_fail("graph.vertices", "expected vertex labels");
    }
    auto vertex_index = [&](const Json& v, const std::string& where) -> int {
        if (v.is_number_integer()) {
            int idx = v.get<int>();
            if (idx < 0 || idx >= static_cast<int>(g.vertices.size()))
                schema_fail(where, "vertex index out of range");
            return idx;
        }
        if (v.is_string()) {
            auto it = std::find(g.vertices.begin(), g.vertices.end(), v.get<std::string>());
            if (it == g.vertices.end()) schema_fail(where, "unknown vertex " + v.get<std::string>());
            return static_cast<int>(it - g.vertices.begin());
        }
        schema_fail(where, "expected vertex index or label");
    };
    int en = 0;
    for (const auto& e : j["edges"]) {
        std::string where = "graph.edges[" + std::to_string(en++) + "]";
        if (!e.is_array() || e.size() != 2) schema_fail(where, "expected a pair");
        g.edges.push_back({vertex_index(e[0], where), vertex_index(e[1], where)});
    }
    return g;
}

Json model_to_json(const SurfaceModel& m) {
    Json j;
    j["name"] = m.name;
    j["lattice"] = lattice_to_json(*m.lattice);
    j["curves"] = vecs_to_json(m.curves);
    j["halffibers"] = vecs_to_json(m.halffibers);
    Json isos = Json::array();
    for (const auto& h : m.isometries) {
        Json rows = Json::array();
        for (std::size_t i = 0; i < h.rows(); ++i) {
            Json row = Json::array();
            for (std::size_t k = 0; k < h.cols(); ++k) row.push_back(h(i, k));
            rows.push_back(row);
        }
        isos.push_back(rows);
    }
    j["isometries"] = isos;
    return j;
}

SurfaceModel model_from_json(const Json& j) {
    if (!j.is_object()) schema_fail("model", "expected an object");
    SurfaceModel m;
    m.name = j.value("name", std::string("unnamed"));
    if (!j.contains("lattice")) schema_fail("model", "missing \"lattice\"");
    m.lattice = lattice_from_json(j["lattice"]);
    const int n = m.lattice->rank();

    int idx = 0;
    for (const auto& c : j.value("curves", Json::array()))
        m.curves.push_back(vec_from_json(c, "model.curves[" + std::to_string(idx++) + "]", n));
    idx = 0;
    const Mat64& g = m.lattice->gram();
    for (const auto& f : j.value("halffibers", Json::array())) {
        Vec v = vec_from_json(f, "model.halffibers[" + std::to_string(idx) + "]", n);
        // fibration data sometimes stores the full double fiber; the halving
        // is reported, never silent
        if (norm_of(g, v) == 0) {
            std::int64_t gc = gcd_of(v);
            if (gc % 2 == 0 && gc > 0) {
                for (auto& c : v) c /= 2;
                m.loader_warnings.push_back("halffibers[" + std::to_string(idx) +
                                            "] was imprimitive; halved once");
            }
        }
        m.halffibers.push_back(std::move(v));
        ++idx;
    }
    idx = 0;
    for (const auto& h : j.value("isometries", Json::array())) {
        std::string where = "model.isometries[" + std::to_string(idx++) + "]";
        if (!h.is_array() || static_cast<int>(h.size()) != n) schema_fail(where, "expected a rank-sized matrix");
        Mat64 mat(n, n);
        for (int i = 0; i < n; ++i) {
            Vec row = vec_from_json(h[i], where + " row " + std::to_string(i), n);
            for (int k = 0; k < n; ++k) mat(i, k) = row[k];
        }
        m.isometries.push_back(std::move(mat));
    }
    return m;
}

SurfaceModel load_model(const std::filesystem::path& p) { return model_from_json(read_json_file(p)); }

Json report_to_json(const ModelReport& r, const SurfaceModel& m) {
    Json j;
    j["valid"] = r.valid();
    j["lattice_is_marked_l10"] = r.lattice_is_marked_l10;
    j["counts"] = {{"curves", r.curve_count},
                   {"halffibers", r.halffiber_count},
                   {"isometries", r.isometry_count}};
    Json fails;
    fails["curves_bad_norm"] = r.curves_bad_norm;
    fails["halffibers_bad_norm"] = r.halffibers_bad_norm;
    fails["halffibers_imprimitive"] = r.halffibers_imprimitive;
    Json nf = Json::array();
    for (auto [f, c] : r.nefness_failures) nf.push_back({f, c});
    fails["nefness"] = nf;
    fails["isometries_bad_gram"] = r.isometries_bad_gram;
    j["failures"] = fails;
    j["isometries_curveset_open"] = r.isometries_curveset_open;
    j["warnings"] = m.loader_warnings;
    return j;
}

Json sequence_to_json(const IsotropicSequence& s) { return vecs_to_json(s.entries); }

Json polarization_to_json(const Polarization& p) {
    Json j;
    j["kind"] = pol_kind_name(p.kind);
    j["vector"] = vec_to_json(p.vector);
    j["sequence"] = sequence_to_json(p.sequence);
    j["nondegeneracy"] = p.nondegeneracy;
    j["contracted_curves"] = vecs_to_json(p.contracted_curves);
    if (p.sequence.annotation) {
        Json ann = Json::array();
        for (const auto& grp : *p.sequence.annotation) {
            Json a;
            a["anchor"] = vec_to_json(grp.anchor);
            a["chain"] = vecs_to_json(grp.curves);
            ann.push_back(a);
        }
        j["annotation"] = ann;
    }
    return j;
}

Polarization polarization_from_json(const Json& j, const LatticePtr& lattice) {
    if (!j.is_object() || !j.contains("vector") || !j.contains("sequence"))
        schema_fail("polarization", "expected \"vector\" and \"sequence\"");
    const int n = lattice->rank();
    std::vector<Vec> entries;
    int idx = 0;
    for (const auto& e : j["sequence"])
        entries.push_back(vec_from_json(e, "polarization.sequence[" + std::to_string(idx++) + "]", n));
    IsotropicSequence seq = [&] {
        try {
            return validate_sequence(lattice, entries);
        } catch (const Error& e) {
            schema_fail("polarization.sequence", e.what());
        }
    }();
    if (j.contains("annotation")) {
        std::vector<ChainAnnotation> ann;
        for (const auto& a : j["annotation"]) {
            ChainAnnotation grp;
            grp.anchor = vec_from_json(a.at("anchor"), "polarization.annotation.anchor", n);
            for (const auto& c : a.at("chain"))
                grp.curves.push_back(vec_from_json(c, "polarization.annotation.chain", n));
            ann.push_back(std::move(grp));
        }
        seq.annotation = std::move(ann);
        std::string why;
        if (!annotation_consistent(seq, &why))
            schema_fail("polarization.annotation", why);
    } else {
        seq = annotate_nondegenerate(std::move(seq));
    }
    Polarization p = polarization_from_sequence(seq);
    Vec stated = vec_from_json(j["vector"], "polarization.vector", n);
    if (stated != p.vector)
        schema_fail("polarization.vector", "stated vector does not match the sequence sum");
    return p;
}

Json enumeration_to_json(const EnumerationResult& r, const std::vector<std::size_t>* orbit_sizes) {
    Json j;
    j["kind"] = pol_kind_name(r.kind);
    j["model"] = r.model;
    j["count"] = r.polarizations.size();
    Json stats;
    for (auto [c, cnt] : r.stats) stats[std::to_string(c)] = cnt;
    j["stats_by_nondegeneracy"] = stats;
    j["pools_truncated"] = r.pools_truncated;
    Json pols = Json::array();
    for (std::size_t i = 0; i < r.polarizations.size(); ++i) {
        Json p = polarization_to_json(r.polarizations[i]);
        if (orbit_sizes) p["orbit_size"] = (*orbit_sizes)[i];
        pols.push_back(p);
    }
    j["polarizations"] = pols;
    if (orbit_sizes) j["orbit_count"] = orbit_sizes->size();
    return j;
}

std::string enumeration_to_csv(const EnumerationResult& r,
                               const std::vector<std::size_t>* orbit_sizes) {
    std::ostringstream os;
    os << "vector,kind,c,contracted,orbit\n";
    for (std::size_t i = 0; i < r.polarizations.size(); ++i) {
        const auto& p = r.polarizations[i];
        os << '"';
        for (std::size_t k = 0; k < p.vector.size(); ++k) {
            if (k) os << ' ';
            os << p.vector[k];
        }
        os << "\"," << pol_kind_name(p.kind) << ',' << p.nondegeneracy << ','
           << p.contracted_curves.size() << ',';
        if (orbit_sizes) os << i;
        os << '\n';
    }
    return os.str();
}

std::vector<Polarization> reps_from_json(const Json& j, const LatticePtr& lattice) {
    std::vector<Polarization> reps;
    const Json* arr = nullptr;
    if (j.is_array()) arr = &j;
    else if (j.is_object() && j.contains("polarizations")) arr = &j["polarizations"];
    else schema_fail("reps", "expected an array or an enumeration result");
    for (const auto& p : *arr) reps.push_back(polarization_from_json(p, lattice));
    if (reps.empty()) schema_fail("reps", "empty representative list");
    return reps;
}

Json invariants_to_json(const Invariants& inv) {
    Json j;
    j["nd"] = inv.nd;
    j["Fnd"] = inv.fnd;
    j["Mnd"] = inv.mnd;
    j["clique_lower_bound"] = inv.clique_lower_bound;
    j["exact_relative_to_model"] = inv.exact_relative_to_model;
    j["consistent_with_clique_bound"] = inv.consistent_with_clique_bound;
    return j;
}

Json certificate_to_json(const BoundCertificate& c) {
    Json j;
    j["mode"] = pol_kind_name(c.mode);
    j["d"] = c.d;
    j["certified"] = c.certified;
    j["conclusion"] = c.conclusion;
    Json reps = Json::array();
    for (const auto& cr : c.reps) {
        Json r;
        r["rep"] = polarization_to_json(cr.rep);
        r["witnesses"] = vecs_to_json(cr.witnesses);
        if (cr.rho) r["rho"] = vec_to_json(*cr.rho);
        reps.push_back(r);
    }
    j["reps"] = reps;
    j["failed_reps"] = c.failed_reps;
    return j;
}

BoundCertificate certificate_from_json(const Json& j, const LatticePtr& lattice) {
    BoundCertificate c;
    std::string mode = j.value("mode", std::string());
    if (mode == "fano") c.mode = PolKind::Fano;
    else if (mode == "mukai") c.mode = PolKind::Mukai;
    else schema_fail("certificate.mode", "expected fano or mukai");
    c.d = j.value("d", 0);
    c.certified = j.value("certified", false);
    c.conclusion = j.value("conclusion", std::string());
    const int n = lattice->rank();
    for (const auto& r : j.value("reps", Json::array())) {
        CertifiedRep cr;
        cr.rep = polarization_from_json(r.at("rep"), lattice);
        for (const auto& w : r.value("witnesses", Json::array()))
            cr.witnesses.push_back(vec_from_json(w, "certificate.witness", n));
        if (r.contains("rho")) cr.rho = vec_from_json(r["rho"], "certificate.rho", n);
        c.reps.push_back(std::move(cr));
    }
    for (const auto& f : j.value("failed_reps", Json::array()))
        c.failed_reps.push_back(f.get<std::size_t>());
    return c;
}

Json discriminant_to_json(const DiscriminantData& d) {
    Json j;
    Json factors = Json::array();
    for (const auto& f : d.invariant_factors) factors.push_back(int_to_json(f));
    j["invariant_factors"] = factors;
    Json diag = Json::array();
    for (const auto& f : d.full_diagonal) diag.push_back(int_to_json(f));
    j["diagonal"] = diag;
    if (!d.representatives.empty()) {
        Json reps = Json::array();
        for (const auto& rep : d.representatives) {
            Json row = Json::array();
            for (const auto& r : rep) row.push_back(rat_str(r));
            reps.push_back(row);
        }
        j["representatives"] = reps;
    }
    Json order = int_to_json(d.group_order());
    j["group_order"] = order;
    return j;
}

} // namespace enrlat
