// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one pass/fail line each. Exit code 0 only when nothing failed.
//
// Usage: acceptance [--fixtures-dir DIR] [--kondo-dir DIR]
// The Kondo fixture checks only run when the optional directory with
// kondo-I.json .. kondo-VII.json is supplied; otherwise they are skipped
// with an explicit notice.

#include "enrlat/boxscan.hpp"
#include "enrlat/discriminant.hpp"
#include "enrlat/enumerate.hpp"
#include "enrlat/json_io.hpp"
#include "enrlat/roots.hpp"
#include "enrlat/sublattice.hpp"

#include "oracles.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace enrlat;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int idx, const std::string& what, bool ok, double secs, const std::string& extra = "") {
    std::ostringstream os;
    os << (ok ? "PASS" : "FAIL") << "  criterion " << idx << ": " << what << "  [" << std::fixed
       << secs << "s]";
    if (!extra.empty()) os << "  " << extra;
    std::cout << os.str() << std::endl;
    if (!ok) ++failures;
}

void skip(int idx, const std::string& what, const std::string& why) {
    std::cout << "SKIP  criterion " << idx << ": " << what << "  (" << why << ")" << std::endl;
}

struct Timer {
    Clock::time_point t0 = Clock::now();
    double secs() const { return std::chrono::duration<double>(Clock::now() - t0).count(); }
};

DualGraph d8_graph() {
    DualGraph g;
    for (int i = 1; i <= 8; ++i) g.vertices.push_back("e" + std::to_string(i));
    g.edges = {{0, 2}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}};
    return g;
}

// ---------------------------------------------------------------- 1
void criterion_1() {
    Timer t;
    bool ok = true;
    auto d8 = lattice_from_dual_graph(d8_graph());
    DiscriminantData d = discriminant_group(*d8);
    ok &= d.invariant_factors == std::vector<Int>{2, 2};

    std::vector<Rat> v(8, Rat(0));
    v[0] = v[3] = v[5] = v[7] = Rat(1, 2); // (e1+e4+e6+e8)/2
    ok &= in_dual_lattice(*d8, v);
    ok &= !in_lattice(v); // nonzero class in A_L
    ok &= coset_in_span(*d8, v, d.representatives, d.invariant_factors);
    double s = t.secs();
    report(1, "D8 discriminant group is (Z/2)^2 with nonzero half-sum class", ok && s < 1.0, s);
}

// ---------------------------------------------------------------- 2
void criterion_2() {
    Timer t;
    auto l10 = make_l10();
    // the surface configuration carries the integral half-sum class
    // (e1+e4+e6+e8)/2; the brute-force search pins it before closing up
    auto halfsum_integral = [](const Mat64& m) {
        for (std::size_t i = 0; i < m.rows(); ++i)
            if ((m(i, 0) + m(i, 3) + m(i, 5) + m(i, 7)) % 2 != 0) return false;
        return true;
    };
    bool ok = true;
    try {
        Embedding emb = embed_by_graph_where(l10, d8_graph(), 3, halfsum_integral);
        ClosureResult cl = primitive_closure(emb);
        const auto& closed = *cl.closure.source();
        ok &= closed.rank() == 8;
        ok &= abs(closed.det()) == 1;
        ok &= ade_type(closed) == parse_ade("E8");
        for (int i = 0; i < 8; ++i) ok &= closed.gram()(i, i) % 2 == 0;
    } catch (const Error&) {
        ok = false;
    }
    double s = t.secs();
    report(2, "embedded D8 configuration closes up to E8 (box 3)", ok && s < 10.0, s);
}

// ---------------------------------------------------------------- 3
void criterion_3() {
    Timer t;
    bool ok = true;
    std::vector<std::string> symbols;
    for (int n = 1; n <= 9; ++n) symbols.push_back("A" + std::to_string(n));
    for (int n = 4; n <= 9; ++n) symbols.push_back("D" + std::to_string(n));
    symbols.insert(symbols.end(), {"E6", "E7", "E8"});
    for (const auto& sym : symbols) {
        ADEType ty = parse_ade(sym);
        auto lat = lattice_from_dual_graph(ade_dynkin_graph(ty));
        ok &= ade_type(*lat) == ty;
    }
    auto count_roots = [](const char* sym) {
        return enumerate_roots(*lattice_from_dual_graph(ade_dynkin_graph(parse_ade(sym)))).size();
    };
    ok &= count_roots("A1") == 2;
    ok &= count_roots("A2") == 6;
    ok &= count_roots("E8") == 240;
    // independent exhaustive box oracle on the small ranks
    auto a1 = lattice_from_dual_graph(ade_dynkin_graph(parse_ade("A1")));
    auto a2 = lattice_from_dual_graph(ade_dynkin_graph(parse_ade("A2")));
    ok &= oracles::box_norm_scan(a1->gram(), 6, -2).size() == 2;
    ok &= oracles::box_norm_scan(a2->gram(), 6, -2).size() == 6;
    double s = t.secs();
    report(3, "ADE round trip (rank <= 9) and root counts 2/6/240", ok && s < 30.0, s);
}

// ---------------------------------------------------------------- 4
void criterion_4() {
    Timer t;
    bool ok = true;
    auto l10 = make_l10();
    for (const char* sym : {"A1", "A1+A1", "D8", "E8"}) {
        ADEType ty = parse_ade(sym);
        Embedding emb = embed_by_graph(l10, ade_dynkin_graph(ty), 1);
        MRLattice mr = build_mr(emb);
        const int r = ty.rank();
        Int expected = (Int(1) << (10 - r)) * abs(emb.source()->det());
        ok &= mr.det_direct == expected;
        ok &= mr.det_by_index == expected;
    }
    double s = t.secs();
    report(4, "M_R determinant identity, two routes, R in {A1, 2A1, D8, E8}", ok && s < 5.0, s);
}

// ---------------------------------------------------------------- 5-7
std::vector<IsotropicSequence> g_found10;

void criterion_5() {
    Timer t;
    SequenceSearchOptions opts;
    opts.box = 3;
    opts.max_count = 5;
    g_found10 = find_isotropic_sequences(make_l10(), 10, opts);
    bool ok = !g_found10.empty();
    for (const auto& seq : g_found10) {
        ok &= check_isotropic_sequence(seq.lattice, seq.entries).ok;
        Vec sum = seq.entry_sum();
        for (auto c : sum) ok &= c % 3 == 0;
        Polarization pol = polarization_from_sequence(annotate_nondegenerate(seq));
        ok &= norm_of(seq.lattice->gram(), pol.vector) == 10;
        for (const auto& f : seq.entries) ok &= dot(seq.lattice->gram(), pol.vector, f) == 3;
    }
    double s = t.secs();
    report(5, "length-10 sequences found at box 3: sum = 3h, h^2 = 10, h.f = 3", ok && s < 60.0, s,
           "found " + std::to_string(g_found10.size()));
}

void criterion_6() {
    Timer t;
    bool ok = !g_found10.empty();
    int checked = 0;
    for (const auto& seq : g_found10) {
        for (std::size_t drop : {std::size_t(9), std::size_t(4)}) {
            IsotropicSequence g = derive_o2_sequence(seq, drop);
            ok &= classify_length9(g) == Orbit9::O2;
            Vec sum = g.entry_sum();
            for (auto c : sum) ok &= c % 2 == 0;
            Polarization pol = polarization_from_sequence(annotate_nondegenerate(g));
            ok &= norm_of(g.lattice->gram(), pol.vector) == 18;
            for (const auto& e : g.entries) ok &= dot(g.lattice->gram(), pol.vector, e) == 4;

            std::vector<LatticeVector> gens;
            for (const auto& e : g.entries) gens.emplace_back(g.lattice, e);
            auto comp = orthogonal_complement_primitive(g.lattice, gens);
            ok &= comp.size() == 1 && norm_of(g.lattice->gram(), comp[0]) == -2;
            ok &= dot(g.lattice->gram(), comp[0], pol.vector) == 0;

            ok &= extension_candidates(g, 3).empty();
            ++checked;
        }
        if (checked >= 4) break;
    }
    double s = t.secs();
    report(6, "O2 nine-sequences: even sum, v^2 = 18, v.g = 4, rho^2 = -2, no extension at box 3",
           ok && s < 60.0, s, std::to_string(checked) + " sequences");
}

void criterion_7() {
    Timer t;
    bool ok = !g_found10.empty();
    for (const auto& seq : g_found10) ok &= extension_candidates(seq, 3).empty();
    double s = t.secs();
    report(7, "no isotropic sequence of length 11 (extension empty at box 3)", ok && s < 60.0, s);
}

// ---------------------------------------------------------------- 8
void criterion_8() {
    Timer t;
    bool ok = true;
    auto l10 = make_l10();
    try {
        Vec v = vinberg_fano_vector(l10, 3);
        ok &= norm_of(l10->gram(), v) == 10;
        Vec gv = gram_times(l10->gram(), v);
        for (auto c : gv) ok &= c >= 0;
        ok &= phi_bounded(LatticeVector(l10, v), 3).value == 3;
    } catch (const Error&) {
        ok = false; // NotFound and NotUnique both fail the criterion
    }
    double s = t.secs();
    report(8, "unique chamber vector of degree 10 with box-phi 3 (box 3)", ok && s < 120.0, s);
}

// ---------------------------------------------------------------- 9-10
struct ToyOutcome {
    SurfaceModel model;
    EnumerationResult fano, mukai;
};

std::vector<ToyOutcome> g_toys;

SurfaceModel degenerated_f_model(const IsotropicSequence& base, const std::set<std::size_t>& degen,
                                 std::string name) {
    SurfaceModel m;
    m.name = std::move(name);
    m.lattice = base.lattice;
    for (std::size_t i = 0; i < 10; ++i) {
        if (degen.count(i)) {
            Vec r(10);
            for (int k = 0; k < 10; ++k) r[k] = base.entries[i][k] - base.entries[i - 1][k];
            m.curves.push_back(r);
        } else {
            m.halffibers.push_back(base.entries[i]);
        }
    }
    return m;
}

SurfaceModel degenerated_g_model(const IsotropicSequence& base10, const std::set<std::size_t>& degen,
                                 std::string name) {
    // O2 side: g_i = h - f_i - f_10 for i = 1..9; including the curve
    // R_{i+1} = f_{i+1} - f_i degenerates g_i
    IsotropicSequence nine = derive_o2_sequence(base10, 9);
    std::vector<Vec> gs;
    {
        Vec sum = base10.entry_sum();
        Vec h(10);
        for (int k = 0; k < 10; ++k) h[k] = sum[k] / 3;
        for (std::size_t i = 0; i < 9; ++i) {
            Vec gi(10);
            for (int k = 0; k < 10; ++k)
                gi[k] = h[k] - base10.entries[i][k] - base10.entries[9][k];
            gs.push_back(gi);
        }
    }
    SurfaceModel m;
    m.name = std::move(name);
    m.lattice = base10.lattice;
    for (std::size_t i = 0; i < 9; ++i) {
        if (degen.count(i)) {
            Vec r(10);
            for (int k = 0; k < 10; ++k)
                r[k] = base10.entries[i + 1][k] - base10.entries[i][k];
            m.curves.push_back(r);
        } else {
            m.halffibers.push_back(gs[i]);
        }
    }
    return m;
}

void criterion_9() {
    Timer t;
    bool ok = !g_found10.empty();
    const IsotropicSequence& base = g_found10.front();
    std::mt19937 rng(20250810);

    std::vector<SurfaceModel> batch;
    // 14 Fano-side models: 4 nef fibers, 6 chain curves in random run patterns
    for (int i = 0; i < 14; ++i) {
        std::set<std::size_t> degen;
        std::uniform_int_distribution<std::size_t> pos(1, 9);
        while (degen.size() < 6) degen.insert(pos(rng));
        batch.push_back(degenerated_f_model(base, degen, "toy-f" + std::to_string(i)));
    }
    // 4 Mukai-side models: 4 nef fibers from the O2 family, 5 chain curves
    for (int i = 0; i < 4; ++i) {
        std::set<std::size_t> degen;
        std::uniform_int_distribution<std::size_t> pos(0, 7);
        while (degen.size() < 5) degen.insert(pos(rng));
        batch.push_back(degenerated_g_model(base, degen, "toy-g" + std::to_string(i)));
    }
    // 2 sparse models: cliques too small for any canonical sequence
    for (int i = 0; i < 2; ++i) {
        SurfaceModel m;
        m.name = "toy-sparse" + std::to_string(i);
        m.lattice = base.lattice;
        m.halffibers.assign(base.entries.begin(), base.entries.begin() + 2 + i);
        batch.push_back(m);
    }
    // 2 supplementary models beyond the small-size family, with both families
    // of fibers listed so both invariants are witnessed and the case analysis
    // bites: expected triples (10,10,9) and (9,9,8)
    auto mixed_model = [&](const std::set<std::size_t>& degen, std::string name) {
        Vec sum = base.entry_sum();
        Vec h(10);
        for (int k = 0; k < 10; ++k) h[k] = sum[k] / 3;
        SurfaceModel m;
        m.name = std::move(name);
        m.lattice = base.lattice;
        std::set<Vec> curves;
        for (std::size_t i : degen) {
            Vec r(10);
            for (int k = 0; k < 10; ++k) r[k] = base.entries[i][k] - base.entries[i - 1][k];
            curves.insert(r);
        }
        m.curves.assign(curves.begin(), curves.end());
        auto nef = [&](const Vec& f) {
            for (const auto& c : m.curves)
                if (dot(m.lattice->gram(), f, c) < 0) return false;
            return true;
        };
        for (const auto& f : base.entries)
            if (nef(f)) m.halffibers.push_back(f);
        for (std::size_t i = 0; i < 9; ++i) {
            Vec gi(10);
            for (int k = 0; k < 10; ++k) gi[k] = h[k] - base.entries[i][k] - base.entries[9][k];
            if (nef(gi)) m.halffibers.push_back(gi);
        }
        return m;
    };
    batch.push_back(mixed_model({}, "toy-mixed"));
    batch.push_back(mixed_model({6}, "toy-mixed-deg"));

    int case_checked = 0, truncated = 0;
    g_toys.clear();
    for (const auto& m : batch) {
        ok &= validate_model(m).valid();

        auto len10 = enumerate_canonical_sequences(m, SequenceTarget::Len10);
        auto o2nine = enumerate_canonical_sequences(m, SequenceTarget::O2Nine);

        // exact agreement with the independent tuple-scan oracle
        auto as_set = [](const std::vector<IsotropicSequence>& seqs) {
            std::set<std::vector<Vec>> s;
            for (const auto& q : seqs) {
                std::vector<Vec> key = q.entries;
                std::sort(key.begin(), key.end());
                s.insert(key);
            }
            return s;
        };
        ok &= as_set(len10) == oracles::canonical_sequences_bruteforce(
                                   m.lattice->gram(), m.halffibers, m.curves, 10, false);
        ok &= as_set(o2nine) == oracles::canonical_sequences_bruteforce(
                                    m.lattice->gram(), m.halffibers, m.curves, 9, true);

        // invariant triple; empty families record data truncation, the case
        // analysis presupposes exhaustive fibration lists
        int fnd = 0, mnd = 0;
        for (const auto& q : len10) fnd = std::max(fnd, static_cast<int>(q.annotation->size()));
        for (const auto& q : o2nine) mnd = std::max(mnd, static_cast<int>(q.annotation->size()));
        int nd = std::max(fnd, mnd);
        if (fnd > 0 && mnd > 0) {
            bool allowed = (nd == fnd && fnd == mnd) || (nd == 10 && fnd == 10 && mnd == 9) ||
                           (nd == 10 && fnd == 10 && mnd == 8) ||
                           (nd == 9 && fnd == 9 && mnd == 8) || (nd == 9 && mnd == 9 && fnd == 8);
            ok &= allowed;
            if (fnd == 10) ok &= mnd >= 8;
            ++case_checked;
        } else if (fnd == 0 && mnd == 0) {
            ++case_checked; // equal triple (0,0,0): nothing enumerable either way
        } else {
            ++truncated; // one side unwitnessed by the finite lists
        }
        if (m.name == "toy-mixed") ok &= fnd == 10 && mnd == 9;
        if (m.name == "toy-mixed-deg") ok &= fnd == 9 && mnd == 9;

        ToyOutcome out;
        out.model = m;
        if (!len10.empty()) out.fano = enumerate_polarizations(m, PolKind::Fano);
        if (!o2nine.empty()) out.mukai = enumerate_polarizations(m, PolKind::Mukai);
        g_toys.push_back(std::move(out));
    }
    double s = t.secs();
    report(9, "engine = oracle on 20 randomized toy models (+2 richer); triples consistent",
           ok && s < 120.0, s,
           std::to_string(case_checked) + " case-checked, " + std::to_string(truncated) +
               " one-sided (truncated data)");
}

void criterion_10() {
    Timer t;
    bool ok = true;
    int pols = 0;
    for (const auto& toy : g_toys) {
        const Mat64& g = toy.model.lattice->gram();
        for (const auto& res : {toy.fano, toy.mukai}) {
            for (const auto& pol : res.polarizations) {
                const std::int64_t want = pol.kind == PolKind::Fano ? 3 : 4;
                std::set<Vec> owning(pol.sequence.entries.begin(), pol.sequence.entries.end());
                for (const auto& e : pol.sequence.entries)
                    ok &= dot(g, pol.vector, e) == want;
                for (const auto& f : toy.model.halffibers)
                    if (!owning.count(f)) ok &= dot(g, pol.vector, f) > want;

                // contraction criterion on curves: a model curve pairs to zero
                // exactly when it appears in the sequence, with the Mukai
                // escape for curves orthogonal to every entry
                std::set<Vec> appearing(pol.contracted_curves.begin(),
                                        pol.contracted_curves.end());
                for (const auto& r : toy.model.curves) {
                    bool orth_all = true;
                    for (const auto& e : pol.sequence.entries)
                        if (dot(g, e, r) != 0) orth_all = false;
                    bool zero = dot(g, pol.vector, r) == 0;
                    if (pol.kind == PolKind::Fano)
                        ok &= zero == (appearing.count(r) > 0);
                    else
                        ok &= zero == (appearing.count(r) > 0 || orth_all);
                }
                ++pols;
            }
        }
    }
    double s = t.secs();
    report(10, "uniqueness pairings: 3/4 on the owning sequence, larger elsewhere", ok && pols > 0,
           s, std::to_string(pols) + " polarizations");
}

// ---------------------------------------------------------------- 11-12
const char* kKondoNames[7] = {"I", "II", "III", "IV", "V", "VI", "VII"};
const std::size_t kKondoF[7] = {74, 573, 2712, 15336, 1672, 9031, 8561};
const std::size_t kKondoM[7] = {142, 1227, 6944, 43038, 4188, 24665, 22425};
const std::size_t kKondoForb[7] = {20, 32, 61, 68, 79, 87, 81};
const std::size_t kKondoMorb[7] = {38, 64, 147, 179, 323, 872, 1034};

void criterion_11(const fs::path& kondo_dir) {
    const std::string what = "Kondo fixture counts |F| and |M| match the reported table";
    if (kondo_dir.empty()) {
        skip(11, what, "no Kondo fixtures directory supplied");
        return;
    }
    Timer t;
    bool ok = true, any = false;
    for (int i = 0; i < 7; ++i) {
        fs::path p = kondo_dir / (std::string("kondo-") + kKondoNames[i] + ".json");
        if (!fs::exists(p)) {
            std::cout << "      kondo-" << kKondoNames[i] << ".json missing, skipped\n";
            continue;
        }
        any = true;
        SurfaceModel m = load_model(p);
        EnumerationResult f = enumerate_polarizations(m, PolKind::Fano);
        EnumerationResult mk = enumerate_polarizations(m, PolKind::Mukai);
        bool row = f.polarizations.size() == kKondoF[i] && mk.polarizations.size() == kKondoM[i];
        if (row && !m.isometries.empty()) {
            OrbitReduction fo = orbit_representatives(f, m);
            OrbitReduction mo = orbit_representatives(mk, m);
            row &= fo.reduced.polarizations.size() == kKondoForb[i];
            row &= mo.reduced.polarizations.size() == kKondoMorb[i];
        }
        std::cout << "      type " << kKondoNames[i] << ": |F| = " << f.polarizations.size()
                  << ", |M| = " << mk.polarizations.size() << (row ? "" : "  MISMATCH") << "\n";
        ok &= row;
    }
    if (!any) {
        skip(11, what, "directory supplied but no kondo-*.json files found");
        return;
    }
    report(11, what, ok, t.secs());
}

void criterion_12(const fs::path& kondo_dir) {
    const std::string what = "Kondo I and II invariants: nd = 4 and nd = 7";
    if (kondo_dir.empty()) {
        skip(12, what, "no Kondo fixtures directory supplied");
        return;
    }
    Timer t;
    bool ok = true, any = false;
    const int expect[2] = {4, 7};
    for (int i = 0; i < 2; ++i) {
        fs::path p = kondo_dir / (std::string("kondo-") + kKondoNames[i] + ".json");
        if (!fs::exists(p)) continue;
        any = true;
        SurfaceModel m = load_model(p);
        Invariants inv = compute_invariants(m);
        std::cout << "      type " << kKondoNames[i] << ": nd = " << inv.nd << "\n";
        ok &= inv.nd == expect[i];
    }
    if (!any) {
        skip(12, what, "kondo-I.json / kondo-II.json not found");
        return;
    }
    report(12, what, ok, t.secs());
}

} // namespace

int main(int argc, char** argv) {
    fs::path fixtures_dir, kondo_dir;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--fixtures-dir" && i + 1 < argc) fixtures_dir = argv[++i];
        else if (a == "--kondo-dir" && i + 1 < argc) kondo_dir = argv[++i];
    }
    // the Kondo data may also sit inside the fixtures directory
    if (kondo_dir.empty() && !fixtures_dir.empty() &&
        fs::exists(fixtures_dir / "kondo-I.json"))
        kondo_dir = fixtures_dir;

    std::cout << "acceptance suite (exact arithmetic throughout)\n";
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11(kondo_dir);
    criterion_12(kondo_dir);

    if (failures == 0) {
        std::cout << "all runnable criteria passed\n";
        return 0;
    }
    std::cout << failures << " criteria FAILED\n";
    return 1;
}
