#include "enrlat/boxscan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <thread>

namespace enrlat {

void VecList::sort_dedup() {
    const std::size_t n = size();
    if (n < 2) return;
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    auto less = [&](std::uint32_t a, std::uint32_t b) {
        return balanced_less((*this)[a], (*this)[b]);
    };
    std::sort(idx.begin(), idx.end(), less);
    std::vector<std::int64_t> out;
    out.reserve(flat_.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0) {
            auto prev = (*this)[idx[k - 1]], cur = (*this)[idx[k]];
            if (std::equal(prev.begin(), prev.end(), cur.begin())) continue;
        }
        auto s = (*this)[idx[k]];
        out.insert(out.end(), s.begin(), s.end());
    }
    flat_ = std::move(out);
}

std::vector<BoundSystem> standard_box(const IntegerLattice& l, int box) {
    std::vector<BoundSystem> r;
    r.push_back({Mat64::identity(l.rank()), box});
    if (!l.degenerate()) r.push_back({l.gram(), box});
    return r;
}

namespace {

struct Coset {
    Vec x0;
    Mat64 k; // n x q
};

std::optional<Coset> solve_affine(const IntegerLattice& l,
                                  const std::vector<LinearCondition>& conds) {
    const int n = l.rank();
    if (conds.empty()) return Coset{Vec(n, 0), Mat64::identity(n)};
    IMat a(conds.size(), n);
    std::vector<Int> rhs;
    for (std::size_t i = 0; i < conds.size(); ++i) {
        if (static_cast<int>(conds[i].covector.size()) != n)
            fail(ErrorCode::LatticeMismatch, "condition covector length mismatch");
        for (int j = 0; j < n; ++j) a(i, j) = conds[i].covector[j];
        rhs.push_back(conds[i].value);
    }
    auto x0 = solve_integer(a, rhs);
    if (!x0) return std::nullopt;
    Coset c;
    c.x0.resize(n);
    for (int i = 0; i < n; ++i) c.x0[i] = to_i64((*x0)[i]);
    c.k = narrow(integer_kernel(a));
    return c;
}

// Column echelon by unimodular column ops, mirrored on the kernel basis.
// Afterwards pivot rows p_0 < p_1 < ... satisfy e(p_j, j) > 0 and
// e(p_j, l) = 0 for l > j.
struct Echelon {
    Mat64 e, k;
    std::vector<int> pivot_row;
};

Echelon echelonize(Mat64 e, Mat64 k) {
    const std::size_t m = e.rows(), q = e.cols();
    std::vector<int> pivots;
    std::size_t j = 0;
    for (std::size_t row = 0; row < m && j < q; ++row) {
        while (true) {
            std::size_t nz = 0, last = 0, small = q;
            for (std::size_t c = j; c < q; ++c)
                if (e(row, c) != 0) {
                    ++nz;
                    last = c;
                    if (small == q || std::llabs(e(row, c)) < std::llabs(e(row, small))) small = c;
                }
            if (nz <= 1) {
                if (nz == 1) {
                    e.swap_cols(j, last);
                    k.swap_cols(j, last);
                    if (e(row, j) < 0) {
                        e.negate_col(j);
                        k.negate_col(j);
                    }
                    pivots.push_back(static_cast<int>(row));
                    ++j;
                }
                break;
            }
            for (std::size_t c = j; c < q; ++c) {
                if (c == small || e(row, c) == 0) continue;
                std::int64_t f = e(row, c) / e(row, small);
                if (f != 0) {
                    e.add_col(c, small, -f);
                    k.add_col(c, small, -f);
                }
            }
        }
    }
    if (j < q) fail(ErrorCode::InternalInconsistency, "bound matrix does not pin the kernel coset");
    return {std::move(e), std::move(k), std::move(pivots)};
}

std::int64_t isqrt64(std::int64_t v) {
    if (v < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && static_cast<__int128>(r) * r > v) --r;
    while (static_cast<__int128>(r + 1) * (r + 1) <= v) ++r;
    return r;
}

// Walks one region of a kernel coset. Levels are t-space coordinates after
// echelonization; when a norm is requested the final level is an integer
// quadratic instead of a scan.
class RegionWalker {
public:
    RegionWalker(const IntegerLattice& l, const Coset& coset, const BoundSystem& region,
                 std::optional<std::int64_t> nrm)
        : gram_(l.gram()), bound_(region.bound), norm_(nrm) {
        n_ = l.rank();
        m_ = static_cast<int>(region.b.rows());
        q_ = static_cast<int>(coset.k.cols());
        x0_ = coset.x0;

        Mat64 bk(m_, q_);
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < q_; ++j) {
                std::int64_t s = 0;
                for (int r = 0; r < n_; ++r) s += region.b(i, r) * coset.k(r, j);
                bk(i, j) = s;
            }
        if (q_ > 0) {
            Echelon ech = echelonize(std::move(bk), coset.k);
            e_ = std::move(ech.e);
            k_ = std::move(ech.k);
            pivot_row_ = std::move(ech.pivot_row);
        } else {
            e_ = std::move(bk);
            k_ = coset.k;
        }

        z0_.assign(m_, 0);
        for (int i = 0; i < m_; ++i)
            for (int r = 0; r < n_; ++r) z0_[i] += region.b(i, r) * x0_[r];

        tform_ = Mat64(q_, q_);
        for (int a = 0; a < q_; ++a) {
            Vec ka(n_);
            for (int r = 0; r < n_; ++r) ka[r] = k_(r, a);
            Vec gka = gram_times(gram_, ka);
            for (int b = 0; b < q_; ++b) {
                std::int64_t s = 0;
                for (int r = 0; r < n_; ++r) s += gka[r] * k_(r, b);
                tform_(a, b) = s;
            }
        }
        w_.assign(q_, 0);
        {
            Vec gx0 = gram_times(gram_, x0_);
            for (int a = 0; a < q_; ++a)
                for (int r = 0; r < n_; ++r) w_[a] += k_(r, a) * gx0[r];
        }
        c0_ = norm_of(gram_, x0_);

        rows_done_.assign(std::max(q_, 1), {});
        feasible_ = true;
        for (int i = 0; i < m_; ++i) {
            int lastlvl = -1;
            for (int j = 0; j < q_; ++j)
                if (e_(i, j) != 0) lastlvl = j;
            if (lastlvl >= 0) {
                rows_done_[lastlvl].push_back(i);
            } else if (std::llabs(z0_[i]) > bound_) {
                feasible_ = false; // constant row violates the bound
            }
        }
    }

    void run(VecList& out, int workers) const {
        if (!feasible_) return;
        if (q_ == 0) {
            if (!norm_ || norm_of(gram_, x0_) == *norm_) out.push(x0_);
            return;
        }
        if (norm_ && q_ == m_ && static_cast<int>(pivot_row_.size()) == m_ && q_ >= 2) {
            FastWalk fw(*this);
            fw.run(out);
            return;
        }
        State st = initial_state();
        auto [lo, hi] = level_range(0, st);
        if (lo > hi) return;
        const std::int64_t span = hi - lo + 1;
        const int nw = static_cast<int>(std::min<std::int64_t>(workers, span));
        if (nw <= 1 || q_ < 3) {
            Sink sink{&out};
            for (std::int64_t t = lo; t <= hi; ++t) descend(0, t, st, sink);
            return;
        }
        std::vector<VecList> parts(nw, VecList(n_));
        std::vector<std::thread> pool;
        for (int widx = 0; widx < nw; ++widx) {
            pool.emplace_back([&, widx]() {
                State local = initial_state();
                Sink sink{&parts[widx]};
                for (std::int64_t t = lo + widx; t <= hi; t += nw) descend(0, t, local, sink);
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& p : parts) out.append(p);
    }

    // hot path for the full-box scans (no affine conditions): every bound row
    // is a pivot row, so range bookkeeping shrinks to the pivot triangle and
    // coordinates are materialized only at solution leaves
    class FastWalk {
    public:
        explicit FastWalk(const RegionWalker& w) : w_(w), q_(w.q_) {
            er_.assign(q_ * q_, 0);
            tf_.assign(q_ * q_, 0);
            for (int j = 0; j < q_; ++j)
                for (int l = 0; l < q_; ++l) {
                    er_[j * q_ + l] = w.e_(w.pivot_row_[j], l);
                    tf_[j * q_ + l] = w.tform_(j, l);
                }
            zp_.assign(q_, 0);
            mdot_.assign(q_, 0);
            t_.assign(q_, 0);
            for (int j = 0; j < q_; ++j) zp_[j] = w.z0_[w.pivot_row_[j]];
        }

        void run(VecList& out) {
            out_ = &out;
            walk(0, w_.c0_);
        }

    private:
        void walk(int j, std::int64_t qn) {
            const std::int64_t coef = er_[j * q_ + j];
            const std::int64_t cur = zp_[j];
            std::int64_t lo = -w_.bound_ - cur, hi = w_.bound_ - cur;
            std::int64_t tlo = lo >= 0 ? (lo + coef - 1) / coef : -((-lo) / coef);
            std::int64_t thi = hi >= 0 ? hi / coef : -((-hi + coef - 1) / coef);
            if (tlo > thi) return;
            if (j + 1 == q_) {
                // alpha t^2 + beta t + gamma = 0 exactly
                const std::int64_t alpha = tf_[j * q_ + j];
                const std::int64_t beta = 2 * (w_.w_[j] + mdot_[j]);
                const std::int64_t gamma = qn - *w_.norm_;
                auto leaf = [&](std::int64_t t) {
                    if (t < tlo || t > thi) return;
                    t_[j] = t;
                    emit_leaf();
                };
                if (alpha == 0) {
                    if (beta == 0) {
                        if (gamma == 0)
                            for (std::int64_t t = tlo; t <= thi; ++t) {
                                t_[j] = t;
                                emit_leaf();
                            }
                    } else if (gamma % beta == 0) {
                        leaf(-(gamma / beta));
                    }
                } else {
                    __int128 disc = static_cast<__int128>(beta) * beta -
                                    static_cast<__int128>(4) * alpha * gamma;
                    if (disc < 0) return;
                    std::int64_t s = isqrt64(static_cast<std::int64_t>(disc));
                    if (static_cast<__int128>(s) * s != disc) return;
                    if ((-beta + s) % (2 * alpha) == 0) leaf((-beta + s) / (2 * alpha));
                    if (s != 0 && (-beta - s) % (2 * alpha) == 0) leaf((-beta - s) / (2 * alpha));
                }
                return;
            }
            for (std::int64_t t = tlo; t <= thi; ++t) {
                t_[j] = t;
                std::int64_t qn2 = qn;
                if (t != 0) {
                    qn2 += tf_[j * q_ + j] * t * t + 2 * t * (w_.w_[j] + mdot_[j]);
                    for (int b = j + 1; b < q_; ++b) {
                        mdot_[b] += t * tf_[j * q_ + b];
                        zp_[b] += t * er_[b * q_ + j];
                    }
                }
                walk(j + 1, qn2);
                if (t != 0) {
                    for (int b = j + 1; b < q_; ++b) {
                        mdot_[b] -= t * tf_[j * q_ + b];
                        zp_[b] -= t * er_[b * q_ + j];
                    }
                }
            }
        }

        void emit_leaf() {
            Vec x = w_.x0_;
            for (int j = 0; j < q_; ++j) {
                if (t_[j] == 0) continue;
                for (int r = 0; r < w_.n_; ++r) x[r] += t_[j] * w_.k_(r, j);
            }
            out_->push(x);
        }

        const RegionWalker& w_;
        int q_;
        std::vector<std::int64_t> er_, tf_, zp_, mdot_, t_;
        VecList* out_ = nullptr;
    };

private:
    struct State {
        Vec x, z, mdot;
        std::int64_t qn;
    };
    struct Sink {
        VecList* out;
        void operator()(const Vec& x) const { out->push(x); }
    };

    State initial_state() const {
        State st;
        st.x = x0_;
        st.z = z0_;
        st.mdot.assign(q_, 0);
        st.qn = c0_;
        return st;
    }

    std::pair<std::int64_t, std::int64_t> level_range(int j, const State& st) const {
        const std::int64_t coef = e_(pivot_row_[j], j); // > 0 after echelon
        const std::int64_t cur = st.z[pivot_row_[j]];
        const std::int64_t lo = -bound_ - cur, hi = bound_ - cur;
        std::int64_t tlo = lo >= 0 ? (lo + coef - 1) / coef : -((-lo) / coef);
        std::int64_t thi = hi >= 0 ? hi / coef : -((-hi + coef - 1) / coef);
        return {tlo, thi};
    }

    void apply(int j, std::int64_t t, State& st) const {
        for (int r = 0; r < n_; ++r) st.x[r] += t * k_(r, j);
        for (int i = 0; i < m_; ++i) st.z[i] += t * e_(i, j);
        st.qn += tform_(j, j) * t * t + 2 * t * (w_[j] + st.mdot[j]);
        for (int b = 0; b < q_; ++b) st.mdot[b] += t * tform_(j, b);
    }
    void unapply(int j, std::int64_t t, State& st) const {
        for (int b = 0; b < q_; ++b) st.mdot[b] -= t * tform_(j, b);
        st.qn -= tform_(j, j) * t * t + 2 * t * (w_[j] + st.mdot[j]);
        for (int i = 0; i < m_; ++i) st.z[i] -= t * e_(i, j);
        for (int r = 0; r < n_; ++r) st.x[r] -= t * k_(r, j);
    }

    bool rows_ok(int j, const State& st) const {
        for (int i : rows_done_[j])
            if (std::llabs(st.z[i]) > bound_) return false;
        return true;
    }

    void descend(int j, std::int64_t t, State& st, const Sink& sink) const {
        apply(j, t, st);
        if (rows_ok(j, st)) {
            if (j + 1 == q_) {
                if (!norm_ || st.qn == *norm_) sink(st.x);
            } else if (j + 2 == q_ && norm_) {
                solve_last(j + 1, st, sink);
            } else {
                auto [lo, hi] = level_range(j + 1, st);
                for (std::int64_t tt = lo; tt <= hi; ++tt) descend(j + 1, tt, st, sink);
            }
        }
        unapply(j, t, st);
    }

    // integer solutions of alpha t^2 + beta t + gamma = 0 at the last level
    void solve_last(int j, State& st, const Sink& sink) const {
        auto [lo, hi] = level_range(j, st);
        if (lo > hi) return;
        const std::int64_t alpha = tform_(j, j);
        const std::int64_t beta = 2 * (w_[j] + st.mdot[j]);
        const std::int64_t gamma = st.qn - *norm_;
        auto leaf = [&](std::int64_t t) {
            if (t < lo || t > hi) return;
            apply(j, t, st);
            if (rows_ok(j, st)) sink(st.x);
            unapply(j, t, st);
        };
        if (alpha == 0) {
            if (beta == 0) {
                if (gamma == 0)
                    for (std::int64_t t = lo; t <= hi; ++t) leaf(t);
            } else if (gamma % beta == 0) {
                leaf(-(gamma / beta));
            }
        } else {
            __int128 disc = static_cast<__int128>(beta) * beta -
                            static_cast<__int128>(4) * alpha * gamma;
            if (disc < 0) return;
            if (disc > static_cast<__int128>(std::numeric_limits<std::int64_t>::max()))
                fail(ErrorCode::InternalInconsistency, "quadratic discriminant overflow");
            std::int64_t s = isqrt64(static_cast<std::int64_t>(disc));
            if (static_cast<__int128>(s) * s != static_cast<__int128>(disc)) return;
            if ((-beta + s) % (2 * alpha) == 0) leaf((-beta + s) / (2 * alpha));
            if (s != 0 && (-beta - s) % (2 * alpha) == 0) leaf((-beta - s) / (2 * alpha));
        }
    }

    const Mat64& gram_;
    Mat64 e_, k_, tform_;
    std::vector<int> pivot_row_;
    std::vector<std::vector<int>> rows_done_;
    Vec x0_, z0_, w_;
    std::int64_t bound_, c0_ = 0;
    std::optional<std::int64_t> norm_;
    int n_ = 0, m_ = 0, q_ = 0;
    bool feasible_ = true;
};

} // namespace

void enumerate_region(const IntegerLattice& l, const std::vector<LinearCondition>& conditions,
                      std::optional<std::int64_t> norm, const BoundSystem& region,
                      const std::function<void(std::span<const std::int64_t>)>& emit,
                      int workers) {
    auto coset = solve_affine(l, conditions);
    if (!coset) return;
    RegionWalker walker(l, *coset, region, norm);
    VecList buf(l.rank());
    walker.run(buf, workers);
    for (std::size_t i = 0; i < buf.size(); ++i) emit(buf[i]);
}

VecList solve_in_box(const IntegerLattice& l, const std::vector<LinearCondition>& conditions,
                     std::optional<std::int64_t> norm, int box, int workers) {
    VecList out(l.rank());
    if (box < 0) return out;
    auto coset = solve_affine(l, conditions);
    if (!coset) return out;
    for (const auto& region : standard_box(l, box)) {
        RegionWalker walker(l, *coset, region, norm);
        walker.run(out, workers);
    }
    VecList clean(l.rank());
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto s = out[i];
        bool is_zero = std::all_of(s.begin(), s.end(), [](std::int64_t v) { return v == 0; });
        if (!is_zero) clean.push(s);
    }
    clean.sort_dedup();
    return clean;
}

VecList isotropic_in_box(const IntegerLattice& l, int box, int workers) {
    return solve_in_box(l, {}, 0, box, workers);
}

VecList roots_in_box(const IntegerLattice& l, int box, int workers) {
    return solve_in_box(l, {}, -2, box, workers);
}

Embedding embed_by_graph_where(const LatticePtr& amb, const DualGraph& graph, int box,
                               const EmbeddingPredicate& pred) {
    if (box < 1) fail(ErrorCode::NotFound, "embed_by_graph: box must be >= 1");
    LatticePtr target_lattice = lattice_from_dual_graph(graph);
    const int k = target_lattice->rank();
    const int n = amb->rank();
    {
        // configurations may be degenerate (cycles), so the obstruction is the
        // rank of the graph gram, not the vertex count
        SnfResult s = smith_form(widen(target_lattice->gram()));
        int grank = 0;
        for (const auto& d : s.diagonal())
            if (d != 0) ++grank;
        if (grank > n)
            fail(ErrorCode::NotFound,
                 "graph gram rank exceeds ambient rank (box " + std::to_string(box) + ")");
    }

    const VecList pool = roots_in_box(*amb, box);
    const Mat64& g = amb->gram();
    const Mat64& target = target_lattice->gram();
    const std::size_t psz = pool.size();

    // pairing of every placed vector against the whole pool, pushed as a
    // column so level filters are single passes of integer compares
    std::vector<std::vector<std::int32_t>> prod_stack;
    std::vector<std::size_t> chosen;

    auto push_products = [&](std::size_t idx) {
        Vec cov = gram_times(g, pool.at(idx));
        std::vector<std::int32_t> col(psz);
        for (std::size_t i = 0; i < psz; ++i) {
            auto v = pool[i];
            std::int64_t p = 0;
            for (int r = 0; r < n; ++r) p += cov[r] * v[r];
            col[i] = static_cast<std::int32_t>(p);
        }
        prod_stack.push_back(std::move(col));
    };
    auto assemble = [&]() {
        Mat64 matrix(n, k);
        for (int j = 0; j < k; ++j) {
            auto v = pool[chosen[j]];
            for (int i = 0; i < n; ++i) matrix(i, j) = v[i];
        }
        return matrix;
    };

    Mat64 result;
    std::function<bool(int)> dfs = [&](int level) -> bool {
        if (level == k) {
            Mat64 m = assemble();
            if (pred && !pred(m)) return false;
            result = std::move(m);
            return true;
        }
        for (std::size_t i = 0; i < psz; ++i) {
            bool ok = true;
            for (int p = 0; p < level; ++p)
                if (prod_stack[p][i] != target(p, level)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            chosen.push_back(i);
            push_products(i);
            if (dfs(level + 1)) return true;
            prod_stack.pop_back();
            chosen.pop_back();
        }
        return false;
    };
    if (!dfs(0))
        fail(ErrorCode::NotFound,
             "no embedding found within box " + std::to_string(box) + " (advisory, not a proof)");
    return Embedding(target_lattice, amb, std::move(result));
}

Embedding embed_by_graph(const LatticePtr& amb, const DualGraph& graph, int box) {
    return embed_by_graph_where(amb, graph, box, nullptr);
}

} // namespace enrlat
