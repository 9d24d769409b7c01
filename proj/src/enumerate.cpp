#include "enrlat/enumerate.hpp"

#include "enrlat/sublattice.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <thread>

namespace enrlat {

namespace {

std::vector<Vec> sorted_unique(std::vector<Vec> v) {
    std::sort(v.begin(), v.end(), [](const Vec& a, const Vec& b) { return balanced_less(a, b); });
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

ModelPools build_pools(const SurfaceModel& m, const EngineOptions& opts) {
    ModelPools p;
    if (m.isometries.empty()) {
        p.fibers = sorted_unique(m.halffibers);
        p.curves = sorted_unique(m.curves);
    } else {
        OrbitResult fo = isometry_orbit(m, m.halffibers, opts.orbit_cap);
        OrbitResult co = isometry_orbit(m, m.curves, opts.orbit_cap);
        p.fibers = fo.vectors;
        p.curves = co.vectors;
        p.truncated = fo.truncated || co.truncated;
    }
    // anchors must stay nef against the whole curve pool
    const Mat64& g = m.lattice->gram();
    std::vector<Vec> nef;
    for (const auto& f : p.fibers) {
        bool ok = true;
        for (const auto& c : p.curves)
            if (dot(g, f, c) < 0) {
                ok = false;
                break;
            }
        if (ok) nef.push_back(f);
    }
    p.fibers = std::move(nef);
    return p;
}

namespace {

// pairwise product tables over the pools
struct PoolTables {
    Mat64 ff, fc, cc;
};

PoolTables pool_tables(const Mat64& g, const ModelPools& p) {
    PoolTables t;
    const std::size_t nf = p.fibers.size(), nc = p.curves.size();
    t.ff = Mat64(nf, nf);
    t.fc = Mat64(nf, nc);
    t.cc = Mat64(nc, nc);
    std::vector<Vec> fcov, ccov;
    for (const auto& f : p.fibers) fcov.push_back(gram_times(g, f));
    for (const auto& c : p.curves) ccov.push_back(gram_times(g, c));
    auto pair_with = [&](const Vec& cov, const Vec& v) {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < v.size(); ++i) s += cov[i] * v[i];
        return s;
    };
    for (std::size_t i = 0; i < nf; ++i)
        for (std::size_t j = 0; j < nf; ++j) t.ff(i, j) = pair_with(fcov[i], p.fibers[j]);
    for (std::size_t i = 0; i < nf; ++i)
        for (std::size_t j = 0; j < nc; ++j) t.fc(i, j) = pair_with(fcov[i], p.curves[j]);
    for (std::size_t i = 0; i < nc; ++i)
        for (std::size_t j = 0; j < nc; ++j) t.cc(i, j) = pair_with(ccov[i], p.curves[j]);
    return t;
}

void clique_dfs(const Mat64& ff, std::size_t nf, int k, std::vector<int>& cur,
                std::vector<int>& cands, const std::function<void(const std::vector<int>&)>& emit,
                bool exact_size) {
    if (static_cast<int>(cur.size()) == k) {
        emit(cur);
        return;
    }
    for (std::size_t ci = 0; ci < cands.size(); ++ci) {
        int v = cands[ci];
        std::vector<int> next;
        for (std::size_t cj = ci + 1; cj < cands.size(); ++cj)
            if (ff(v, cands[cj]) == 1) next.push_back(cands[cj]);
        if (exact_size && cur.size() + 1 + next.size() < static_cast<std::size_t>(k)) continue;
        cur.push_back(v);
        if (!exact_size) emit(cur);
        clique_dfs(ff, nf, k, cur, next, emit, exact_size);
        cur.pop_back();
    }
}

} // namespace

std::vector<std::vector<Vec>> enumerate_halffiber_cliques(const SurfaceModel& m, int k,
                                                          const EngineOptions& opts) {
    if (k < 1 || k > 10) fail(ErrorCode::BadArgument, "clique size must be 1..10");
    ModelPools p = build_pools(m, opts);
    PoolTables t = pool_tables(m.lattice->gram(), p);
    std::vector<std::vector<Vec>> out;
    std::vector<int> cur, cands;
    for (std::size_t i = 0; i < p.fibers.size(); ++i) cands.push_back(static_cast<int>(i));
    clique_dfs(t.ff, p.fibers.size(), k, cur, cands,
               [&](const std::vector<int>& c) {
                   std::vector<Vec> clique;
                   for (int idx : c) clique.push_back(p.fibers[idx]);
                   out.push_back(std::move(clique));
               },
               /*exact_size=*/true);
    return out;
}

int max_halffiber_clique(const SurfaceModel& m, const EngineOptions& opts) {
    ModelPools p = build_pools(m, opts);
    PoolTables t = pool_tables(m.lattice->gram(), p);
    int best = 0;
    std::vector<int> cur, cands;
    for (std::size_t i = 0; i < p.fibers.size(); ++i) cands.push_back(static_cast<int>(i));
    std::function<void(std::vector<int>&, std::vector<int>&)> dfs = [&](std::vector<int>& c,
                                                                        std::vector<int>& cs) {
        best = std::max(best, static_cast<int>(c.size()));
        if (c.size() + cs.size() <= static_cast<std::size_t>(best)) return;
        for (std::size_t i = 0; i < cs.size(); ++i) {
            std::vector<int> next;
            for (std::size_t j = i + 1; j < cs.size(); ++j)
                if (t.ff(cs[i], cs[j]) == 1) next.push_back(cs[j]);
            c.push_back(cs[i]);
            dfs(c, next);
            c.pop_back();
        }
    };
    dfs(cur, cands);
    return std::min(best, 10);
}

namespace {

// chain-growing DFS over one anchor set; every pairwise constraint is applied
// the moment a curve is placed
struct SequenceBuilder {
    const Mat64& gram;
    const ModelPools& pools;
    const PoolTables& tables;
    int target_len;
    bool require_even_sum;

    std::vector<int> anchors;                 // fiber pool indices, ascending
    std::vector<std::vector<int>> chains;     // curve pool indices per anchor
    std::vector<IsotropicSequence>* out;
    std::set<std::vector<Vec>>* seen;
    const LatticePtr* lattice;

    int entries_count() const {
        int n = static_cast<int>(anchors.size());
        for (const auto& ch : chains) n += static_cast<int>(ch.size());
        return n;
    }

    bool curve_admissible(std::size_t anchor_pos, int curve) const {
        const auto& chain = chains[anchor_pos];
        // incidence with the owning anchor
        std::int64_t want_anchor = chain.empty() ? 1 : 0;
        if (tables.fc(anchors[anchor_pos], curve) != want_anchor) return false;
        // A-chain pattern inside the owning chain
        for (std::size_t l = 0; l < chain.size(); ++l) {
            std::int64_t want = (l + 1 == chain.size()) ? 1 : 0;
            if (tables.cc(chain[l], curve) != want) return false;
        }
        // disjoint from every other anchor and its chain
        for (std::size_t a = 0; a < anchors.size(); ++a) {
            if (a == anchor_pos) continue;
            if (tables.fc(anchors[a], curve) != 0) return false;
            for (int r : chains[a])
                if (tables.cc(r, curve) != 0) return false;
        }
        return true;
    }

    void emit() {
        std::vector<Vec> entries;
        std::vector<ChainAnnotation> ann;
        for (std::size_t a = 0; a < anchors.size(); ++a) {
            const Vec& anchor = pools.fibers[anchors[a]];
            entries.push_back(anchor);
            ChainAnnotation grp{anchor, {}};
            Vec acc = anchor;
            for (int r : chains[a]) {
                const Vec& curve = pools.curves[r];
                grp.curves.push_back(curve);
                for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += curve[i];
                entries.push_back(acc);
            }
            ann.push_back(std::move(grp));
        }
        if (require_even_sum) {
            Vec s(entries.front().size(), 0);
            for (const auto& e : entries)
                for (std::size_t i = 0; i < s.size(); ++i) s[i] += e[i];
            if (!std::all_of(s.begin(), s.end(), [](std::int64_t v) { return v % 2 == 0; })) return;
        }
        std::vector<Vec> key = entries;
        std::sort(key.begin(), key.end(),
                  [](const Vec& a, const Vec& b) { return balanced_less(a, b); });
        if (!seen->insert(key).second) return;

        IsotropicSequence seq{*lattice, std::move(entries), std::move(ann)};
        SequenceCheck chk = check_isotropic_sequence(seq.lattice, seq.entries);
        if (!chk.ok)
            fail(ErrorCode::InternalInconsistency,
                 "enumerated sequence failed validation: " + chk.violations.front().describe());
        out->push_back(std::move(seq));
    }

    // fill chains anchor by anchor; anchor_pos's chain may grow while later
    // anchors are still chainless
    void fill_chains(std::size_t anchor_pos) {
        const int have = entries_count();
        if (have == target_len) {
            emit();
            return;
        }
        if (anchor_pos == anchors.size()) return;
        // option 1: close this anchor's chain, move on
        fill_chains(anchor_pos + 1);
        // option 2: extend this anchor's chain by one admissible curve
        if (have < target_len) {
            for (std::size_t c = 0; c < pools.curves.size(); ++c) {
                if (!curve_admissible(anchor_pos, static_cast<int>(c))) continue;
                chains[anchor_pos].push_back(static_cast<int>(c));
                fill_chains(anchor_pos);
                chains[anchor_pos].pop_back();
            }
        }
    }
};

} // namespace

std::vector<IsotropicSequence> enumerate_canonical_sequences(const SurfaceModel& m,
                                                             SequenceTarget target,
                                                             const EngineOptions& opts) {
    ModelPools pools = build_pools(m, opts);
    PoolTables tables = pool_tables(m.lattice->gram(), pools);
    const int target_len = target == SequenceTarget::Len10 ? 10 : 9;

    std::vector<IsotropicSequence> out;
    std::set<std::vector<Vec>> seen;

    SequenceBuilder builder{m.lattice->gram(), pools,        tables, target_len,
                            target == SequenceTarget::O2Nine, {},    {},
                            &out,              &seen,        &m.lattice};

    // anchor cliques of every size 1..target_len, ascending indices
    std::function<void(int)> choose_anchor = [&](int from) {
        if (!builder.anchors.empty()) {
            builder.chains.assign(builder.anchors.size(), {});
            builder.fill_chains(0);
        }
        if (static_cast<int>(builder.anchors.size()) == target_len) return;
        for (std::size_t f = from; f < pools.fibers.size(); ++f) {
            bool compatible = true;
            for (int a : builder.anchors)
                if (tables.ff(a, f) != 1) {
                    compatible = false;
                    break;
                }
            if (!compatible) continue;
            builder.anchors.push_back(static_cast<int>(f));
            choose_anchor(static_cast<int>(f) + 1);
            builder.anchors.pop_back();
        }
    };

    if (opts.workers <= 1 || pools.fibers.size() < 2) {
        choose_anchor(0);
    } else {
        // partition the first anchor index across workers; merge in index
        // order and dedup once at the end
        const int nw = std::min<int>(opts.workers, static_cast<int>(pools.fibers.size()));
        std::vector<std::vector<IsotropicSequence>> parts(nw);
        std::vector<std::thread> threads;
        for (int w = 0; w < nw; ++w) {
            threads.emplace_back([&, w]() {
                std::vector<IsotropicSequence> local_out;
                std::set<std::vector<Vec>> local_seen;
                SequenceBuilder b{m.lattice->gram(), pools,        tables, target_len,
                                  target == SequenceTarget::O2Nine, {},    {},
                                  &local_out,        &local_seen,  &m.lattice};
                std::function<void(int)> choose = [&](int from) {
                    if (!b.anchors.empty()) {
                        b.chains.assign(b.anchors.size(), {});
                        b.fill_chains(0);
                    }
                    if (static_cast<int>(b.anchors.size()) == target_len) return;
                    for (std::size_t f = from; f < pools.fibers.size(); ++f) {
                        if (b.anchors.empty() && static_cast<int>(f % nw) != w) continue;
                        bool compatible = true;
                        for (int a : b.anchors)
                            if (tables.ff(a, f) != 1) {
                                compatible = false;
                                break;
                            }
                        if (!compatible) continue;
                        b.anchors.push_back(static_cast<int>(f));
                        choose(static_cast<int>(f) + 1);
                        b.anchors.pop_back();
                    }
                };
                choose(0);
                parts[w] = std::move(local_out);
            });
        }
        for (auto& t : threads) t.join();
        for (auto& part : parts)
            for (auto& seq : part) {
                std::vector<Vec> key = seq.entries;
                std::sort(key.begin(), key.end(),
                          [](const Vec& a, const Vec& b) { return balanced_less(a, b); });
                if (seen.insert(key).second) out.push_back(std::move(seq));
            }
    }

    // canonical result order: by sorted entry list
    std::sort(out.begin(), out.end(), [](const IsotropicSequence& a, const IsotropicSequence& b) {
        std::vector<Vec> ka = a.entries, kb = b.entries;
        std::sort(ka.begin(), ka.end(), [](const Vec& x, const Vec& y) { return balanced_less(x, y); });
        std::sort(kb.begin(), kb.end(), [](const Vec& x, const Vec& y) { return balanced_less(x, y); });
        return ka < kb;
    });
    return out;
}

EnumerationResult enumerate_polarizations(const SurfaceModel& m, PolKind kind,
                                          const EngineOptions& opts) {
    EnumerationResult res;
    res.kind = kind;
    res.model = m.name;
    {
        ModelPools p = build_pools(m, opts);
        res.pools_truncated = p.truncated;
    }
    auto seqs = enumerate_canonical_sequences(
        m, kind == PolKind::Fano ? SequenceTarget::Len10 : SequenceTarget::O2Nine, opts);

    std::map<Vec, Polarization> by_vector;
    for (const auto& s : seqs) {
        Polarization pol = polarization_from_sequence(s);
        auto it = by_vector.find(pol.vector);
        if (it == by_vector.end()) {
            by_vector.emplace(pol.vector, std::move(pol));
        } else {
            // the associated canonical sequence is unique up to reordering
            if (it->second.sequence.entries != pol.sequence.entries)
                fail(ErrorCode::InternalInconsistency,
                     "one polarization vector with two distinct canonical sequences");
        }
    }
    for (auto& [vec, pol] : by_vector) {
        res.stats[pol.nondegeneracy] += 1;
        res.polarizations.push_back(std::move(pol));
    }
    std::sort(res.polarizations.begin(), res.polarizations.end(),
              [](const Polarization& a, const Polarization& b) {
                  return balanced_less(a.vector, b.vector);
              });
    return res;
}

OrbitReduction orbit_representatives(const EnumerationResult& res, const SurfaceModel& m,
                                     const EngineOptions& opts) {
    OrbitReduction out;
    out.reduced.kind = res.kind;
    out.reduced.model = res.model;
    out.reduced.pools_truncated = res.pools_truncated;

    std::map<Vec, std::size_t> index_of;
    for (std::size_t i = 0; i < res.polarizations.size(); ++i)
        index_of[res.polarizations[i].vector] = i;

    std::vector<bool> assigned(res.polarizations.size(), false);
    for (std::size_t i = 0; i < res.polarizations.size(); ++i) {
        if (assigned[i]) continue;
        OrbitResult orb = isometry_orbit(m, {res.polarizations[i].vector}, opts.orbit_cap);
        if (orb.truncated)
            fail(ErrorCode::OrbitCapExceeded,
                 "orbit of a polarization exceeded the cap of " + std::to_string(opts.orbit_cap));
        std::vector<std::size_t> members;
        for (const auto& v : orb.vectors) {
            auto it = index_of.find(v);
            if (it != index_of.end() && !assigned[it->second]) {
                assigned[it->second] = true;
                members.push_back(it->second);
            }
        }
        std::size_t rep = *std::min_element(members.begin(), members.end(),
                                            [&](std::size_t a, std::size_t b) {
                                                return balanced_less(res.polarizations[a].vector,
                                                                     res.polarizations[b].vector);
                                            });
        out.reduced.polarizations.push_back(res.polarizations[rep]);
        out.orbit_sizes.push_back(members.size());
    }
    // keep representative list canonically ordered
    std::vector<std::size_t> order(out.reduced.polarizations.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return balanced_less(out.reduced.polarizations[a].vector,
                             out.reduced.polarizations[b].vector);
    });
    OrbitReduction sorted;
    sorted.reduced.kind = out.reduced.kind;
    sorted.reduced.model = out.reduced.model;
    sorted.reduced.pools_truncated = out.reduced.pools_truncated;
    for (std::size_t i : order) {
        sorted.reduced.polarizations.push_back(std::move(out.reduced.polarizations[i]));
        sorted.orbit_sizes.push_back(out.orbit_sizes[i]);
        sorted.reduced.stats[sorted.reduced.polarizations.back().nondegeneracy] += 1;
    }
    return sorted;
}

Invariants compute_invariants(const SurfaceModel& m, const EngineOptions& opts) {
    Invariants inv;
    auto len10 = enumerate_canonical_sequences(m, SequenceTarget::Len10, opts);
    auto o2nine = enumerate_canonical_sequences(m, SequenceTarget::O2Nine, opts);
    if (len10.empty() && o2nine.empty())
        fail(ErrorCode::EmptyEnumeration,
             "no canonical sequences found; the model data is too sparse");
    auto nondeg = [](const IsotropicSequence& s) {
        return static_cast<int>(s.annotation->size());
    };
    for (const auto& s : len10) inv.fnd = std::max(inv.fnd, nondeg(s));
    for (const auto& s : o2nine) inv.mnd = std::max(inv.mnd, nondeg(s));
    inv.nd = std::max(inv.fnd, inv.mnd);
    inv.clique_lower_bound = max_halffiber_clique(m, opts);
    inv.consistent_with_clique_bound = inv.nd >= inv.clique_lower_bound;
    return inv;
}

Vec mukai_h_generator(const Polarization& v) {
    if (v.kind != PolKind::Mukai) fail(ErrorCode::BadArgument, "H-generator needs a Mukai polarization");
    std::vector<LatticeVector> gens;
    for (const auto& e : v.sequence.entries) gens.emplace_back(v.sequence.lattice, e);
    auto basis = orthogonal_complement_primitive(v.sequence.lattice, gens);
    if (basis.size() != 1)
        fail(ErrorCode::InternalInconsistency, "Mukai orthogonal complement is not rank 1");
    const Vec& rho = basis.front();
    if (norm_of(v.sequence.lattice->gram(), rho) != -2)
        fail(ErrorCode::InternalInconsistency, "H-generator has norm != -2");
    return rho;
}

BoundCertificate upper_bound_certificate(const SurfaceModel& m,
                                         const std::vector<Polarization>& reps, int d,
                                         PolKind mode, const EngineOptions& opts) {
    if (reps.empty()) fail(ErrorCode::BadArgument, "no representatives given");
    if (d < 1) fail(ErrorCode::BadArgument, "d must be positive");
    for (const auto& r : reps)
        if (r.kind != mode) fail(ErrorCode::BadArgument, "representative kind does not match mode");

    ModelPools pools = build_pools(m, opts);
    const Mat64& g = m.lattice->gram();

    BoundCertificate cert;
    cert.mode = mode;
    cert.d = d;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        const Polarization& rep = reps[i];
        CertifiedRep cr;
        cr.rep = rep;
        if (mode == PolKind::Mukai) cr.rho = mukai_h_generator(rep);
        for (const auto& r : pools.curves) {
            if (dot(g, rep.vector, r) != 0) continue;
            if (cr.rho) {
                Vec neg = *cr.rho;
                for (auto& c : neg) c = -c;
                if (r == *cr.rho || r == neg) continue; // lies in H, excluded
            }
            cr.witnesses.push_back(r);
            if (static_cast<int>(cr.witnesses.size()) == d) break;
        }
        if (static_cast<int>(cr.witnesses.size()) < d) cert.failed_reps.push_back(i);
        cert.reps.push_back(std::move(cr));
    }
    cert.certified = cert.failed_reps.empty();
    if (cert.certified) {
        int bound = (mode == PolKind::Fano ? 10 : 9) - d;
        cert.conclusion = std::string(mode == PolKind::Fano ? "Fnd" : "Mnd") +
                          " <= " + std::to_string(bound);
    }
    return cert;
}

void recheck_certificate(const SurfaceModel& m, const BoundCertificate& cert,
                         const EngineOptions& opts) {
    if (!cert.certified) fail(ErrorCode::CertificateFailure, "certificate is not marked certified");
    ModelPools pools = build_pools(m, opts);
    std::set<Vec> curve_set(pools.curves.begin(), pools.curves.end());
    const Mat64& g = m.lattice->gram();
    for (const auto& cr : cert.reps) {
        if (static_cast<int>(cr.witnesses.size()) < cert.d)
            fail(ErrorCode::CertificateFailure, "representative with too few witnesses");
        std::set<Vec> distinct(cr.witnesses.begin(), cr.witnesses.end());
        if (distinct.size() != cr.witnesses.size())
            fail(ErrorCode::CertificateFailure, "repeated witness");
        for (const auto& w : cr.witnesses) {
            if (!curve_set.count(w))
                fail(ErrorCode::CertificateFailure, "witness not in the model curve pool");
            if (norm_of(g, w) != -2) fail(ErrorCode::CertificateFailure, "witness is not a root");
            if (dot(g, cr.rep.vector, w) != 0)
                fail(ErrorCode::CertificateFailure, "witness does not contract");
            if (cert.mode == PolKind::Mukai) {
                Vec rho = mukai_h_generator(cr.rep);
                Vec neg = rho;
                for (auto& c : neg) c = -c;
                if (w == rho || w == neg)
                    fail(ErrorCode::CertificateFailure, "witness lies in H");
            }
        }
    }
}

MukaiAnalysis mukai_orthogonal_analysis(const Polarization& v, const SurfaceModel& m,
                                        const EngineOptions& opts) {
    if (v.kind != PolKind::Mukai) fail(ErrorCode::BadArgument, "analysis needs a Mukai polarization");
    MukaiAnalysis out;
    out.rho = mukai_h_generator(v);

    ModelPools pools = build_pools(m, opts);
    const Mat64& g = m.lattice->gram();
    bool negative = false;
    for (const auto& r : pools.curves) {
        std::int64_t p = dot(g, v.vector, r);
        if (p < 0) negative = true;
        if (p == 0) out.orthogonal_curves.push_back(r);
    }
    if (negative) {
        out.scenario = MukaiAnalysis::Scenario::Unresolved;
        return out;
    }
    if (out.orthogonal_curves.empty()) {
        out.scenario = MukaiAnalysis::Scenario::AmpleAgainstModel;
        out.confirmed = true;
        return out;
    }
    auto meets_entry = [&](const Vec& r) {
        for (const auto& e : v.sequence.entries)
            if (dot(g, e, r) != 0) return true;
        return false;
    };
    if (out.orthogonal_curves.size() >= 2) {
        out.scenario = MukaiAnalysis::Scenario::TwoOrthogonalCurves;
        // at most one curve can be orthogonal to every entry, so a witness
        // meeting some entry must exist
        for (const auto& r : out.orthogonal_curves)
            if (meets_entry(r)) {
                out.witness = r;
                out.confirmed = true;
                break;
            }
        if (!out.confirmed) out.scenario = MukaiAnalysis::Scenario::Unresolved;
        return out;
    }
    // single orthogonal curve: the secondary search reconstructs the sequence
    // from fibers pairing to 4 and locates the curve inside it
    out.scenario = MukaiAnalysis::Scenario::SingleCurveSecondary;
    const Vec& r = out.orthogonal_curves.front();
    std::set<Vec> fibers4;
    for (const auto& f : pools.fibers)
        if (dot(g, v.vector, f) == 4) {
            fibers4.insert(f);
            out.secondary_fibers.push_back(f);
        }
    int in_pool = 0;
    bool ninth_matches = false;
    for (const auto& e : v.sequence.entries) {
        if (fibers4.count(e)) {
            ++in_pool;
            continue;
        }
        for (const auto& f : fibers4) {
            Vec sum(f.size());
            for (std::size_t i = 0; i < f.size(); ++i) sum[i] = f[i] + r[i];
            if (sum == e) {
                ninth_matches = true;
                break;
            }
        }
    }
    out.witness = r;
    out.confirmed = (in_pool == 8 && ninth_matches && meets_entry(r));
    if (!out.confirmed) out.scenario = MukaiAnalysis::Scenario::Unresolved;
    return out;
}

} // namespace enrlat
