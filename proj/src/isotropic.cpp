#include "enrlat/isotropic.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <cstdlib>
#include <functional>
#include <numeric>

namespace enrlat {

Vec IsotropicSequence::entry_sum() const {
    Vec s(lattice->rank(), 0);
    for (const auto& e : entries)
        for (std::size_t i = 0; i < s.size(); ++i) s[i] += e[i];
    return s;
}

std::string SequenceViolation::describe() const {
    switch (kind) {
        case ErrorCode::NotIsotropic:
            return "entry " + std::to_string(i) + " is not isotropic";
        case ErrorCode::BadPairing:
            return "entries " + std::to_string(i) + "," + std::to_string(j) + " do not pair to 1";
        case ErrorCode::TooLong:
            return "sequence longer than 10";
        default:
            return "unknown violation";
    }
}

SequenceCheck check_isotropic_sequence(const LatticePtr& lattice, const std::vector<Vec>& entries) {
    SequenceCheck r;
    const Mat64& g = lattice->gram();
    for (const auto& e : entries)
        if (static_cast<int>(e.size()) != lattice->rank())
            fail(ErrorCode::LatticeMismatch, "entry length does not match lattice rank");
    if (entries.size() > 10) {
        r.ok = false;
        r.violations.push_back({ErrorCode::TooLong, static_cast<int>(entries.size()), -1});
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (norm_of(g, entries[i]) != 0) {
            r.ok = false;
            r.violations.push_back({ErrorCode::NotIsotropic, static_cast<int>(i), -1});
        }
        for (std::size_t j = i + 1; j < entries.size(); ++j)
            if (dot(g, entries[i], entries[j]) != 1) {
                r.ok = false;
                r.violations.push_back(
                    {ErrorCode::BadPairing, static_cast<int>(i), static_cast<int>(j)});
            }
    }
    return r;
}

IsotropicSequence validate_sequence(const LatticePtr& lattice, const std::vector<Vec>& entries) {
    SequenceCheck c = check_isotropic_sequence(lattice, entries);
    if (!c.ok) {
        const auto& v = c.violations.front();
        fail(v.kind, v.describe());
    }
    return IsotropicSequence{lattice, entries, std::nullopt};
}

Orbit9 classify_length9(const IsotropicSequence& seq) {
    if (seq.length() != 9)
        fail(ErrorCode::WrongLength, "classification needs a length-9 sequence, got " +
                                         std::to_string(seq.length()));
    Vec s = seq.entry_sum();
    bool even = std::all_of(s.begin(), s.end(), [](std::int64_t v) { return v % 2 == 0; });
    if (even) return Orbit9::O2;
    if (gcd_of(s) == 1) return Orbit9::O1;
    fail(ErrorCode::InternalInconsistency,
         "length-9 sum neither primitive nor divisible by 2; sequence invalid");
}

bool annotation_consistent(const IsotropicSequence& seq, std::string* why) {
    auto explain = [&](const std::string& s) {
        if (why) *why = s;
        return false;
    };
    if (!seq.annotation) return explain("no annotation");
    const Mat64& g = seq.lattice->gram();
    const auto& ann = *seq.annotation;
    if (ann.empty()) return seq.entries.empty() ? true : explain("no anchors");

    std::multiset<Vec> expected;
    for (const auto& grp : ann) {
        if (norm_of(g, grp.anchor) != 0) return explain("anchor not isotropic");
        expected.insert(grp.anchor);
        Vec acc = grp.anchor;
        for (std::size_t j = 0; j < grp.curves.size(); ++j) {
            const Vec& r = grp.curves[j];
            if (norm_of(g, r) != -2) return explain("chain vector is not a root");
            std::int64_t ar = dot(g, grp.anchor, r);
            if (j == 0 ? ar != 1 : ar != 0) return explain("anchor/chain incidence broken");
            for (std::size_t l = 0; l < j; ++l) {
                std::int64_t p = dot(g, grp.curves[l], r);
                std::int64_t want = (l + 1 == j) ? 1 : 0;
                if (p != want) return explain("chain is not an A-chain");
            }
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += r[i];
            expected.insert(acc);
        }
    }
    // chains of distinct anchors stay disjoint from each other and from the
    // other anchors
    for (std::size_t a = 0; a < ann.size(); ++a)
        for (std::size_t b = 0; b < ann.size(); ++b) {
            if (a == b) continue;
            for (const auto& r : ann[a].curves) {
                if (dot(g, r, ann[b].anchor) != 0) return explain("chain meets a foreign anchor");
                for (const auto& r2 : ann[b].curves)
                    if (a < b && dot(g, r, r2) != 0) return explain("chains of two anchors meet");
            }
        }
    std::multiset<Vec> actual(seq.entries.begin(), seq.entries.end());
    if (actual != expected) return explain("entries do not match anchors plus chain prefixes");
    return true;
}

IsotropicSequence annotate_nondegenerate(IsotropicSequence seq) {
    std::vector<ChainAnnotation> ann;
    for (const auto& e : seq.entries) ann.push_back({e, {}});
    seq.annotation = std::move(ann);
    return seq;
}

const char* pol_kind_name(PolKind k) { return k == PolKind::Fano ? "fano" : "mukai"; }

Polarization polarization_from_sequence(const IsotropicSequence& seq) {
    if (!seq.annotation)
        fail(ErrorCode::BadArgument, "polarization needs an annotated canonical sequence");
    const std::size_t len = seq.length();
    if (len != 9 && len != 10)
        fail(ErrorCode::WrongLength, "polarization needs length 10 or 9, got " + std::to_string(len));
    {
        SequenceCheck c = check_isotropic_sequence(seq.lattice, seq.entries);
        if (!c.ok) fail(c.violations.front().kind, c.violations.front().describe());
    }

    const Mat64& g = seq.lattice->gram();
    Vec sum = seq.entry_sum();
    Polarization pol;
    std::int64_t divisor;
    std::int64_t want_norm, want_pairing;
    if (len == 10) {
        pol.kind = PolKind::Fano;
        divisor = 3;
        want_norm = 10;
        want_pairing = 3;
    } else {
        if (classify_length9(seq) == Orbit9::O1)
            fail(ErrorCode::O1Mukai, "length-9 sequence in O1 is not a Mukai source");
        pol.kind = PolKind::Mukai;
        divisor = 2;
        want_norm = 18;
        want_pairing = 4;
    }
    Vec d(sum.size());
    for (std::size_t i = 0; i < sum.size(); ++i) {
        if (sum[i] % divisor != 0)
            fail(ErrorCode::NotDivisible, "entry sum not divisible by " + std::to_string(divisor));
        d[i] = sum[i] / divisor;
    }
    if (norm_of(g, d) != want_norm)
        fail(ErrorCode::InternalInconsistency, "polarization norm check failed");
    for (const auto& e : seq.entries)
        if (dot(g, d, e) != want_pairing)
            fail(ErrorCode::InternalInconsistency, "polarization pairing check failed");

    pol.vector = std::move(d);
    pol.sequence = seq;
    std::sort(pol.sequence.entries.begin(), pol.sequence.entries.end(),
              [](const Vec& a, const Vec& b) { return balanced_less(a, b); });
    pol.nondegeneracy = static_cast<int>(seq.annotation->size());
    std::set<Vec> contracted;
    for (const auto& grp : *seq.annotation)
        for (const auto& r : grp.curves) contracted.insert(r);
    pol.contracted_curves.assign(contracted.begin(), contracted.end());
    std::sort(pol.contracted_curves.begin(), pol.contracted_curves.end(),
              [](const Vec& a, const Vec& b) { return balanced_less(a, b); });
    return pol;
}

std::int64_t phi_over_candidates(const LatticeVector& h, const std::vector<Vec>& candidates) {
    if (candidates.empty()) fail(ErrorCode::EmptyCandidates, "phi needs at least one candidate");
    const Mat64& g = h.lattice()->gram();
    std::int64_t best = 0;
    bool first = true;
    for (const auto& f : candidates) {
        if (norm_of(g, f) != 0) fail(ErrorCode::NotIsotropic, "phi candidate is not isotropic");
        std::int64_t v = std::llabs(dot(g, h.coords(), f));
        if (first || v < best) {
            best = v;
            first = false;
        }
    }
    return best;
}

PhiResult phi_bounded(const LatticeVector& h, int box, int workers) {
    if (box < 1) fail(ErrorCode::BadArgument, "phi_bounded needs box >= 1");
    const LatticePtr& l = h.lattice();
    const Mat64& g = l->gram();
    if (norm_of(g, h.coords()) <= 0)
        fail(ErrorCode::BadArgument, "phi_bounded needs a vector of positive norm");

    Vec cov = gram_times(g, h.coords());
    PhiResult res;
    res.box = box;
    bool found = false;
    auto consider = [&](std::span<const std::int64_t> f) {
        bool zero = std::all_of(f.begin(), f.end(), [](std::int64_t v) { return v == 0; });
        if (zero) return;
        std::int64_t v = 0;
        for (std::size_t i = 0; i < f.size(); ++i) v += cov[i] * f[i];
        v = std::llabs(v);
        if (!found || v < res.value ||
            (v == res.value && balanced_less(f, res.witness))) {
            res.value = v;
            res.witness.assign(f.begin(), f.end());
            found = true;
        }
    };
    for (const auto& region : standard_box(*l, box))
        enumerate_region(*l, {}, 0, region, consider, workers);
    if (!found) fail(ErrorCode::EmptyCandidates, "no isotropic vector in box " + std::to_string(box));
    return res;
}

std::vector<Vec> extension_candidates(const IsotropicSequence& seq, int box) {
    if (seq.length() > 10) fail(ErrorCode::TooLong, "sequences never exceed length 10");
    std::vector<LinearCondition> conds;
    const Mat64& g = seq.lattice->gram();
    for (const auto& e : seq.entries) conds.push_back({gram_times(g, e), 1});
    VecList found = solve_in_box(*seq.lattice, conds, 0, box);
    std::vector<Vec> out;
    for (std::size_t i = 0; i < found.size(); ++i) out.push_back(found.at(i));
    return out;
}

Vec vinberg_fano_vector(const LatticePtr& l, int box) {
    if (box < 1) fail(ErrorCode::NotFound, "empty box");
    VecList deg10 = solve_in_box(*l, {}, 10, box);
    const Mat64& g = l->gram();
    std::vector<Vec> nef;
    for (std::size_t i = 0; i < deg10.size(); ++i) {
        Vec x = deg10.at(i);
        Vec gx = gram_times(g, x);
        if (std::all_of(gx.begin(), gx.end(), [](std::int64_t v) { return v >= 0; }))
            nef.push_back(std::move(x));
    }
    std::vector<Vec> hits;
    for (const auto& x : nef) {
        PhiResult phi = phi_bounded(LatticeVector(l, x), box);
        if (phi.value == 3) hits.push_back(x);
    }
    if (hits.empty())
        fail(ErrorCode::NotFound, "no chamber vector of degree 10 with box-phi 3 in box " +
                                      std::to_string(box) + " (advisory)");
    if (hits.size() > 1)
        fail(ErrorCode::NotUnique, "several chamber vectors within box " + std::to_string(box) +
                                       " (advisory)");
    return hits.front();
}

namespace {

// search order: small pairing coordinates first, then canonical order; the
// nef-like classes sit in tiny dual boxes and extend to full sequences fast
std::vector<std::uint32_t> search_order(const VecList& pool, const Mat64& g) {
    std::vector<std::int64_t> dualsup(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        auto v = pool[i];
        Vec gv = gram_times(g, Vec(v.begin(), v.end()));
        std::int64_t m = 0;
        for (auto c : gv) m = std::max<std::int64_t>(m, std::llabs(c));
        dualsup[i] = m;
    }
    std::vector<std::uint32_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (dualsup[a] != dualsup[b]) return dualsup[a] < dualsup[b];
        return balanced_less(pool[a], pool[b]);
    });
    return order;
}

} // namespace

std::vector<IsotropicSequence> find_isotropic_sequences(const LatticePtr& l, int length,
                                                        const SequenceSearchOptions& opts) {
    if (length < 1 || length > 10) fail(ErrorCode::BadArgument, "sequence length must be 1..10");
    const Mat64& g = l->gram();
    VecList pool = isotropic_in_box(*l, opts.box);
    std::vector<std::uint32_t> order = search_order(pool, g);

    std::vector<IsotropicSequence> results;
    std::vector<std::uint32_t> chosen; // positions into `order`
    std::size_t nodes = 0;

    // candidate lists are positions into `order`, kept sorted ascending so the
    // DFS enumerates sets once
    std::function<bool(const std::vector<std::uint32_t>&)> dfs =
        [&](const std::vector<std::uint32_t>& cands) -> bool {
        if (chosen.size() == static_cast<std::size_t>(length)) {
            std::vector<Vec> entries;
            for (auto pos : chosen) entries.push_back(pool.at(order[pos]));
            std::sort(entries.begin(), entries.end(),
                      [](const Vec& a, const Vec& b) { return balanced_less(a, b); });
            results.push_back(IsotropicSequence{l, std::move(entries), std::nullopt});
            return results.size() >= opts.max_count;
        }
        for (auto pos : cands) {
            if (++nodes > opts.node_budget) return true;
            auto vspan = pool[order[pos]];
            Vec v(vspan.begin(), vspan.end());
            Vec cov = gram_times(g, v);
            std::vector<std::uint32_t> next;
            for (auto p2 : cands) {
                if (p2 <= pos) continue;
                auto w = pool[order[p2]];
                std::int64_t pr = 0;
                for (std::size_t i = 0; i < w.size(); ++i) pr += cov[i] * w[i];
                if (pr == 1) next.push_back(p2);
            }
            if (chosen.size() + 1 + next.size() < static_cast<std::size_t>(length)) continue;
            chosen.push_back(pos);
            bool stop = dfs(next);
            chosen.pop_back();
            if (stop) return true;
        }
        return false;
    };

    std::vector<std::uint32_t> all(order.size());
    std::iota(all.begin(), all.end(), 0);
    dfs(all);
    return results;
}

IsotropicSequence derive_o2_sequence(const IsotropicSequence& seq10, std::size_t drop) {
    if (seq10.length() != 10) fail(ErrorCode::WrongLength, "derivation starts from length 10");
    if (drop >= 10) fail(ErrorCode::BadArgument, "drop index out of range");
    Vec sum = seq10.entry_sum();
    Vec h(sum.size());
    for (std::size_t i = 0; i < sum.size(); ++i) {
        if (sum[i] % 3 != 0) fail(ErrorCode::NotDivisible, "length-10 sum not divisible by 3");
        h[i] = sum[i] / 3;
    }
    const Vec& fd = seq10.entries[drop];
    std::vector<Vec> entries;
    for (std::size_t i = 0; i < 10; ++i) {
        if (i == drop) continue;
        Vec gi(h.size());
        for (std::size_t r = 0; r < h.size(); ++r) gi[r] = h[r] - seq10.entries[i][r] - fd[r];
        entries.push_back(std::move(gi));
    }
    std::sort(entries.begin(), entries.end(),
              [](const Vec& a, const Vec& b) { return balanced_less(a, b); });
    IsotropicSequence out{seq10.lattice, std::move(entries), std::nullopt};
    SequenceCheck c = check_isotropic_sequence(out.lattice, out.entries);
    if (!c.ok) fail(ErrorCode::InternalInconsistency, "derived O2 sequence failed validation");
    if (classify_length9(out) != Orbit9::O2)
        fail(ErrorCode::InternalInconsistency, "derived sequence is not in O2");
    return out;
}

} // namespace enrlat
