#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "enrlat/enumerate.hpp"
#include "enrlat/json_io.hpp"

#include "oracles.hpp"

#include <random>

using namespace enrlat;

namespace {

const IsotropicSequence& seq10() {
    static IsotropicSequence s = [] {
        auto l10 = make_l10();
        SequenceSearchOptions opts;
        opts.box = 1;
        opts.max_count = 1;
        auto found = find_isotropic_sequences(l10, 10, opts);
        REQUIRE(found.size() == 1);
        return found[0];
    }();
    return s;
}

// degenerates the base sequence at the given positions: each position i in
// `degenerate` contributes the root f_i - f_{i-1} as a curve, and the nef
// fibers are the remaining entries; produces genuine Enriques-lattice data
SurfaceModel degenerated_model(const std::set<std::size_t>& degenerate, std::string name) {
    const auto& s = seq10();
    SurfaceModel m;
    m.name = std::move(name);
    m.lattice = s.lattice;
    for (std::size_t i = 0; i < 10; ++i) {
        if (degenerate.count(i)) {
            REQUIRE(i > 0);
            Vec r(10);
            for (int k = 0; k < 10; ++k) r[k] = s.entries[i][k] - s.entries[i - 1][k];
            m.curves.push_back(r);
        } else {
            m.halffibers.push_back(s.entries[i]);
        }
    }
    return m;
}

} // namespace

TEST_CASE("validate_model accepts genuine data and reports violations") {
    SurfaceModel m = degenerated_model({}, "clique10");
    ModelReport r = validate_model(m);
    CHECK(r.valid());
    CHECK(r.lattice_is_marked_l10);
    CHECK(r.halffiber_count == 10);

    // empty curve set stays valid (general surfaces carry no rational curves)
    CHECK(m.curves.empty());

    // a fiber meeting a curve negatively is flagged
    SurfaceModel bad = degenerated_model({5}, "bad");
    bad.halffibers.push_back(seq10().entries[5]); // meets the curve f5-f4 in -1
    ModelReport rb = validate_model(bad);
    CHECK(!rb.valid());
    CHECK(!rb.nefness_failures.empty());

    // identity isometry only stays valid
    SurfaceModel ident = degenerated_model({}, "ident");
    ident.isometries.push_back(Mat64::identity(10));
    CHECK(validate_model(ident).valid());

    // norm violations are flagged with indices
    SurfaceModel badnorm = degenerated_model({}, "badnorm");
    badnorm.curves.push_back(Vec(10, 0));
    ModelReport rn = validate_model(badnorm);
    CHECK(rn.curves_bad_norm == std::vector<int>{0});
}

TEST_CASE("isometry_orbit: identity, swaps, caps") {
    SurfaceModel m = degenerated_model({}, "orbit");
    const Vec seed = m.halffibers[0];

    // no generators: the seed is its own closure
    OrbitResult r0 = isometry_orbit(m, {seed}, 10);
    CHECK(r0.vectors == std::vector<Vec>{seed});
    CHECK(!r0.truncated);

    // an order-2 reflection swaps x and its image
    auto l10 = m.lattice;
    VecList roots = roots_in_box(*l10, 1);
    Vec root = roots.at(0);
    Mat64 refl(10, 10);
    for (int j = 0; j < 10; ++j) {
        Vec ej(10, 0);
        ej[j] = 1;
        Vec img = reflect_raw(l10->gram(), root, ej);
        for (int i = 0; i < 10; ++i) refl(i, j) = img[i];
    }
    m.isometries.push_back(refl);
    OrbitResult r1 = isometry_orbit(m, {seed}, 100);
    CHECK(!r1.truncated);
    CHECK(r1.vectors.size() <= 2);
    for (const auto& v : r1.vectors) {
        // orbit closed under the generator
        Vec img(10, 0);
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) img[i] += refl(i, j) * v[j];
        CHECK(std::find(r1.vectors.begin(), r1.vectors.end(), img) != r1.vectors.end());
    }

    // cap reached: truncated flag, still sorted
    if (r1.vectors.size() == 2) {
        OrbitResult r2 = isometry_orbit(m, {seed}, 1);
        CHECK(r2.truncated);
        CHECK(std::is_sorted(r2.vectors.begin(), r2.vectors.end(),
                             [](const Vec& a, const Vec& b) { return balanced_less(a, b); }));
    }
}

TEST_CASE("halffiber cliques on constructed models") {
    SurfaceModel m = degenerated_model({}, "clique10");
    auto singles = enumerate_halffiber_cliques(m, 1);
    CHECK(singles.size() == 10);
    auto pairs = enumerate_halffiber_cliques(m, 2);
    CHECK(pairs.size() == 45);
    CHECK(max_halffiber_clique(m) == 10);
}

TEST_CASE("curve-free model with a 10-clique: all nondegeneracy 10") {
    SurfaceModel m = degenerated_model({}, "clique10");
    auto seqs = enumerate_canonical_sequences(m, SequenceTarget::Len10);
    REQUIRE(seqs.size() == 1);
    CHECK(seqs[0].annotation->size() == 10);

    EnumerationResult res = enumerate_polarizations(m, PolKind::Fano);
    REQUIRE(res.polarizations.size() == 1);
    CHECK(res.polarizations[0].nondegeneracy == 10);
    CHECK(res.stats.at(10) == 1);

    Invariants inv = compute_invariants(m);
    CHECK(inv.fnd == 10);
    CHECK(inv.nd == 10);
}

TEST_CASE("degenerated models recover the base sequence with chains") {
    SurfaceModel m = degenerated_model({4, 5}, "deg45");
    REQUIRE(validate_model(m).valid());
    auto seqs = enumerate_canonical_sequences(m, SequenceTarget::Len10);
    REQUIRE(!seqs.empty());
    bool with_chains = false;
    for (const auto& s : seqs) {
        CHECK(check_isotropic_sequence(s.lattice, s.entries).ok);
        CHECK(annotation_consistent(s));
        if (s.annotation->size() == 8) with_chains = true;
    }
    CHECK(with_chains);
}

TEST_CASE("engine matches the brute-force oracle on degenerated models") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 8; ++trial) {
        std::set<std::size_t> degenerate;
        std::uniform_int_distribution<std::size_t> pos(1, 9);
        std::uniform_int_distribution<int> cnt(0, 4);
        int want = cnt(rng);
        while (static_cast<int>(degenerate.size()) < want) degenerate.insert(pos(rng));
        SurfaceModel m = degenerated_model(degenerate, "rand" + std::to_string(trial));

        auto seqs = enumerate_canonical_sequences(m, SequenceTarget::Len10);
        std::set<std::vector<Vec>> got;
        for (const auto& s : seqs) {
            std::vector<Vec> key = s.entries;
            std::sort(key.begin(), key.end());
            got.insert(key);
        }
        auto want_set = oracles::canonical_sequences_bruteforce(m.lattice->gram(), m.halffibers,
                                                                m.curves, 10, false);
        CHECK_MESSAGE(got == want_set, "trial " << trial << " size " << got.size() << " vs "
                                                << want_set.size());
    }
}

TEST_CASE("uniqueness-lemma pairings hold on enumerated polarizations") {
    SurfaceModel m = degenerated_model({3, 7}, "uniq");
    EnumerationResult res = enumerate_polarizations(m, PolKind::Fano);
    const Mat64& g = m.lattice->gram();
    for (const auto& pol : res.polarizations) {
        std::set<Vec> in_seq(pol.sequence.entries.begin(), pol.sequence.entries.end());
        for (const auto& f : m.halffibers) {
            std::int64_t p = dot(g, pol.vector, f);
            if (in_seq.count(f)) CHECK(p == 3);
            else CHECK(p > 3);
        }
        // contracted curves are orthogonal to the vector
        for (const auto& r : pol.contracted_curves) CHECK(dot(g, pol.vector, r) == 0);
    }
}

TEST_CASE("O2Nine enumeration yields Mukai polarizations with v.g = 4") {
    // the derived O2 nine-sequence as fiber data
    IsotropicSequence g9 = derive_o2_sequence(seq10(), 9);
    SurfaceModel m;
    m.name = "o2nine";
    m.lattice = g9.lattice;
    m.halffibers = g9.entries;
    REQUIRE(validate_model(m).valid());

    auto seqs = enumerate_canonical_sequences(m, SequenceTarget::O2Nine);
    REQUIRE(!seqs.empty());
    EnumerationResult res = enumerate_polarizations(m, PolKind::Mukai);
    REQUIRE(!res.polarizations.empty());
    const Mat64& gr = m.lattice->gram();
    for (const auto& pol : res.polarizations) {
        CHECK(norm_of(gr, pol.vector) == 18);
        for (const auto& e : pol.sequence.entries) CHECK(dot(gr, pol.vector, e) == 4);
    }

    // the same model has no length-10 canonical sequence: O2 cliques cannot
    // extend and there are no curves
    CHECK(enumerate_canonical_sequences(m, SequenceTarget::Len10).empty());
}

TEST_CASE("orbit reduction partitions the polarization set") {
    SurfaceModel m = degenerated_model({}, "orbits");
    EnumerationResult res = enumerate_polarizations(m, PolKind::Fano);
    OrbitReduction red = orbit_representatives(res, m);
    CHECK(red.reduced.polarizations.size() == res.polarizations.size()); // identity only
    std::size_t total = 0;
    for (auto s : red.orbit_sizes) total += s;
    CHECK(total == res.polarizations.size());
}

TEST_CASE("compute_invariants flags empty enumerations") {
    SurfaceModel m;
    m.name = "sparse";
    m.lattice = make_l10();
    m.halffibers = {seq10().entries[0], seq10().entries[1]};
    CHECK_THROWS_WITH_AS(compute_invariants(m), doctest::Contains("EmptyEnumeration"), Error);
}

TEST_CASE("upper bound certificates") {
    // model with two degenerate positions and the full Fano set
    SurfaceModel m = degenerated_model({4, 5}, "cert");
    EnumerationResult res = enumerate_polarizations(m, PolKind::Fano);
    REQUIRE(!res.polarizations.empty());

    // d = 1: every enumerated Fano vector with chains contracts a curve; the
    // chain-free clique sequence would not certify, so restrict to reps with
    // nondegeneracy < 10
    std::vector<Polarization> reps;
    for (const auto& p : res.polarizations)
        if (p.nondegeneracy <= 8) reps.push_back(p);
    REQUIRE(!reps.empty());
    BoundCertificate cert = upper_bound_certificate(m, reps, 2, PolKind::Fano);
    CHECK(cert.certified);
    CHECK(cert.conclusion == "Fnd <= 8");
    recheck_certificate(m, cert);

    // an uncontractable representative fails and is named
    std::vector<Polarization> all = res.polarizations;
    BoundCertificate fail_cert = upper_bound_certificate(m, all, 2, PolKind::Fano);
    bool has_full = false;
    for (const auto& p : all)
        if (p.nondegeneracy == 10) has_full = true;
    if (has_full) {
        CHECK(!fail_cert.certified);
        CHECK(!fail_cert.failed_reps.empty());
    }
}

TEST_CASE("mukai analysis: ample-against-model on curve-free data") {
    IsotropicSequence g9 = derive_o2_sequence(seq10(), 9);
    SurfaceModel m;
    m.name = "mukai-ample";
    m.lattice = g9.lattice;
    m.halffibers = g9.entries;
    EnumerationResult res = enumerate_polarizations(m, PolKind::Mukai);
    REQUIRE(!res.polarizations.empty());
    MukaiAnalysis an = mukai_orthogonal_analysis(res.polarizations[0], m);
    CHECK(an.scenario == MukaiAnalysis::Scenario::AmpleAgainstModel);
    CHECK(an.confirmed);
    CHECK(norm_of(m.lattice->gram(), an.rho) == -2);
}

TEST_CASE("mukai H-generator has norm -2 and pairs zero with the vector") {
    IsotropicSequence g9 = derive_o2_sequence(seq10(), 2);
    Polarization pol = polarization_from_sequence(annotate_nondegenerate(g9));
    Vec rho = mukai_h_generator(pol);
    CHECK(norm_of(g9.lattice->gram(), rho) == -2);
    CHECK(dot(g9.lattice->gram(), rho, pol.vector) == 0);
    for (const auto& e : g9.entries) CHECK(dot(g9.lattice->gram(), rho, e) == 0);
}

TEST_CASE("json round trips") {
    SurfaceModel m = degenerated_model({4}, "roundtrip");
    m.isometries.push_back(Mat64::identity(10));
    Json j = model_to_json(m);
    SurfaceModel back = model_from_json(j);
    CHECK(back.name == m.name);
    CHECK(back.curves == m.curves);
    CHECK(back.halffibers == m.halffibers);
    CHECK(back.lattice->gram() == m.lattice->gram());
    CHECK(model_to_json(back) == j);

    EnumerationResult res = enumerate_polarizations(m, PolKind::Fano);
    REQUIRE(!res.polarizations.empty());
    Json pj = polarization_to_json(res.polarizations[0]);
    Polarization p2 = polarization_from_json(pj, m.lattice);
    CHECK(p2.vector == res.polarizations[0].vector);
    CHECK(p2.nondegeneracy == res.polarizations[0].nondegeneracy);

    BoundCertificate cert =
        upper_bound_certificate(m, {res.polarizations[0]}, 1, PolKind::Fano);
    if (cert.certified) {
        Json cj = certificate_to_json(cert);
        BoundCertificate c2 = certificate_from_json(cj, m.lattice);
        CHECK(c2.d == cert.d);
        CHECK(c2.reps.size() == cert.reps.size());
        recheck_certificate(m, c2);
    }
}

TEST_CASE("model loader halves imprimitive isotropic fiber entries with a warning") {
    SurfaceModel m = degenerated_model({}, "halving");
    Json j = model_to_json(m);
    // double one halffiber entry, as if the file stored the full fiber class
    for (auto& c : j["halffibers"][0]) c = 2 * c.get<std::int64_t>();
    SurfaceModel back = model_from_json(j);
    CHECK(back.halffibers[0] == m.halffibers[0]);
    REQUIRE(!back.loader_warnings.empty());
    CHECK(back.loader_warnings[0].find("halved") != std::string::npos);
}

TEST_CASE("worker counts do not change enumeration output") {
    SurfaceModel m = degenerated_model({2, 5, 6}, "workers");
    EngineOptions one, four;
    one.workers = 1;
    four.workers = 4;
    EnumerationResult a = enumerate_polarizations(m, PolKind::Fano, one);
    EnumerationResult b = enumerate_polarizations(m, PolKind::Fano, four);
    Json ja = enumeration_to_json(a), jb = enumeration_to_json(b);
    CHECK(ja.dump() == jb.dump());
}

namespace {

// the O2 companion family g_i = h - f_i - f_10, with chosen positions
// degenerated by the run curves R_{i+1} = f_{i+1} - f_i
SurfaceModel g_side_model(const std::set<std::size_t>& degen, std::string name) {
    const auto& base = seq10();
    Vec sum = base.entry_sum();
    Vec h(10);
    for (int k = 0; k < 10; ++k) h[k] = sum[k] / 3;
    SurfaceModel m;
    m.name = std::move(name);
    m.lattice = base.lattice;
    for (std::size_t i = 0; i < 9; ++i) {
        Vec gi(10);
        for (int k = 0; k < 10; ++k) gi[k] = h[k] - base.entries[i][k] - base.entries[9][k];
        if (degen.count(i)) {
            Vec r(10);
            for (int k = 0; k < 10; ++k) r[k] = base.entries[i + 1][k] - base.entries[i][k];
            m.curves.push_back(r);
        } else {
            m.halffibers.push_back(gi);
        }
    }
    return m;
}

} // namespace

TEST_CASE("mukai analysis scenario 1: two orthogonal curves, one meets an entry") {
    SurfaceModel m = g_side_model({3, 4}, "mukai-two");
    REQUIRE(validate_model(m).valid());
    EnumerationResult res = enumerate_polarizations(m, PolKind::Mukai);
    REQUIRE(!res.polarizations.empty());
    bool saw_two = false;
    for (const auto& pol : res.polarizations) {
        MukaiAnalysis an = mukai_orthogonal_analysis(pol, m);
        if (an.scenario == MukaiAnalysis::Scenario::TwoOrthogonalCurves) {
            saw_two = true;
            CHECK(an.confirmed);
            REQUIRE(an.witness.has_value());
            bool meets = false;
            for (const auto& e : pol.sequence.entries)
                if (dot(m.lattice->gram(), e, *an.witness) != 0) meets = true;
            CHECK(meets);
        }
    }
    CHECK(saw_two);
}

TEST_CASE("mukai analysis scenario 2: single curve confirmed by the secondary search") {
    SurfaceModel m = g_side_model({4}, "mukai-one");
    REQUIRE(validate_model(m).valid());
    EnumerationResult res = enumerate_polarizations(m, PolKind::Mukai);
    bool saw_single = false;
    for (const auto& pol : res.polarizations) {
        MukaiAnalysis an = mukai_orthogonal_analysis(pol, m);
        if (an.scenario == MukaiAnalysis::Scenario::SingleCurveSecondary) {
            saw_single = true;
            CHECK(an.confirmed);
            CHECK(an.secondary_fibers.size() >= 8);
        }
    }
    CHECK(saw_single);
}

TEST_CASE("isometries that shuffle curves out of the listed set are reported, not fatal") {
    SurfaceModel m = degenerated_model({5}, "open-curves");
    // reflection across the chain curve maps it to its negative
    Vec r = m.curves[0];
    Mat64 refl(10, 10);
    for (int j = 0; j < 10; ++j) {
        Vec ej(10, 0);
        ej[j] = 1;
        Vec img = reflect_raw(m.lattice->gram(), r, ej);
        for (int i = 0; i < 10; ++i) refl(i, j) = img[i];
    }
    m.isometries.push_back(refl);
    ModelReport rep = validate_model(m);
    CHECK(rep.valid());
    CHECK(rep.isometries_curveset_open == std::vector<int>{0});
}

TEST_CASE("schema diagnostics carry the failing field") {
    Json bad;
    bad["name"] = "x";
    bad["lattice"] = {{"rank", 2}, {"gram", Json::array({Json::array({-2, 1}), Json::array({1})})}};
    try {
        model_from_json(bad);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SchemaError);
        CHECK(std::string(e.what()).find("gram") != std::string::npos);
    }

    Json badrow = model_to_json(degenerated_model({}, "bad"));
    badrow["curves"].push_back(Json::array({1, 2}));
    try {
        model_from_json(badrow);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("curves") != std::string::npos);
    }
}

TEST_CASE("orbit reduction merges polarizations under a genuine automorphism") {
    // fibers: both families; the reflection across f_2 - f_1 swaps
    // f_1 <-> f_2 and g_1 <-> g_2, preserving the fiber set
    const auto& base = seq10();
    SurfaceModel m;
    m.name = "mixed";
    m.lattice = base.lattice;
    m.halffibers = base.entries;
    {
        Vec sum = base.entry_sum();
        Vec h(10);
        for (int k = 0; k < 10; ++k) h[k] = sum[k] / 3;
        for (std::size_t i = 0; i < 9; ++i) {
            Vec gi(10);
            for (int k = 0; k < 10; ++k) gi[k] = h[k] - base.entries[i][k] - base.entries[9][k];
            m.halffibers.push_back(gi);
        }
    }
    Vec r(10);
    for (int k = 0; k < 10; ++k) r[k] = base.entries[1][k] - base.entries[0][k];
    Mat64 refl(10, 10);
    for (int j = 0; j < 10; ++j) {
        Vec ej(10, 0);
        ej[j] = 1;
        Vec img = reflect_raw(m.lattice->gram(), r, ej);
        for (int i = 0; i < 10; ++i) refl(i, j) = img[i];
    }
    m.isometries.push_back(refl);
    REQUIRE(validate_model(m).valid());

    EnumerationResult res = enumerate_polarizations(m, PolKind::Mukai);
    REQUIRE(res.polarizations.size() >= 2);
    OrbitReduction red = orbit_representatives(res, m);
    std::size_t total = 0;
    for (auto s : red.orbit_sizes) total += s;
    CHECK(total == res.polarizations.size());
    CHECK(red.reduced.polarizations.size() < res.polarizations.size()); // something merged
    bool merged = false;
    for (auto s : red.orbit_sizes)
        if (s >= 2) merged = true;
    CHECK(merged);
}

TEST_CASE("a Mukai representative whose only orthogonal curve generates H fails to certify") {
    IsotropicSequence g9 = derive_o2_sequence(seq10(), 9);
    Polarization pol = polarization_from_sequence(annotate_nondegenerate(g9));
    Vec rho = mukai_h_generator(pol);

    SurfaceModel m;
    m.name = "h-curve";
    m.lattice = g9.lattice;
    m.halffibers = g9.entries;
    m.curves.push_back(rho);
    REQUIRE(validate_model(m).valid());

    BoundCertificate cert = upper_bound_certificate(m, {pol}, 1, PolKind::Mukai);
    CHECK(!cert.certified);
    CHECK(cert.failed_reps == std::vector<std::size_t>{0});

    // the analysis reports the situation honestly: one orthogonal curve, but
    // it sits inside H so the secondary reconstruction cannot confirm it
    MukaiAnalysis an = mukai_orthogonal_analysis(pol, m);
    CHECK(an.scenario == MukaiAnalysis::Scenario::Unresolved);
    CHECK(!an.confirmed);
    REQUIRE(an.orthogonal_curves.size() == 1);
    CHECK((an.orthogonal_curves[0] == rho));
}

TEST_CASE("branching chain starts: several admissible curves at one anchor") {
    // extensions of an 8-prefix differ from the last prefix entry by a root
    // that starts a chain there, so listing several of them as curves makes
    // the chain DFS branch; the oracle pins the exact outcome either way
    const auto& base = seq10();
    std::vector<Vec> eight(base.entries.begin(), base.entries.begin() + 8);
    IsotropicSequence prefix{base.lattice, eight, std::nullopt};
    auto exts = extension_candidates(prefix, 1);
    REQUIRE(exts.size() >= 3);

    SurfaceModel m;
    m.name = "branching";
    m.lattice = base.lattice;
    m.halffibers = eight;
    const Vec& anchor = eight.back();
    for (int which = 0; which < 3; ++which) {
        Vec r(10);
        for (int k = 0; k < 10; ++k) r[k] = exts[which][k] - anchor[k];
        m.curves.push_back(r);
    }
    // nef-filter the fibers like a consistent data set would
    SurfaceModel filtered = m;
    filtered.halffibers.clear();
    for (const auto& f : m.halffibers) {
        bool nef = true;
        for (const auto& c : m.curves)
            if (dot(m.lattice->gram(), f, c) < 0) nef = false;
        if (nef) filtered.halffibers.push_back(f);
    }
    REQUIRE(validate_model(filtered).valid());
    int branch_starts = 0;
    for (const auto& c : filtered.curves)
        if (dot(m.lattice->gram(), filtered.halffibers.back(), c) == 1) ++branch_starts;
    CHECK(branch_starts >= 2);

    for (auto target : {SequenceTarget::Len10, SequenceTarget::O2Nine}) {
        const bool o2 = target == SequenceTarget::O2Nine;
        auto seqs = enumerate_canonical_sequences(filtered, target);
        std::set<std::vector<Vec>> got;
        for (const auto& s : seqs) {
            CHECK(annotation_consistent(s));
            std::vector<Vec> key = s.entries;
            std::sort(key.begin(), key.end());
            got.insert(key);
        }
        auto want = oracles::canonical_sequences_bruteforce(
            filtered.lattice->gram(), filtered.halffibers, filtered.curves, o2 ? 9 : 10, o2);
        CHECK(got == want);
    }
}
