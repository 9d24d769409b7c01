#include "enrlat/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <cstdlib>

namespace enrlat {

IntegerLattice::IntegerLattice(Mat64 gram, std::vector<std::string> labels,
                               bool allow_degenerate)
    : rank_(static_cast<int>(gram.rows())), gram_(std::move(gram)), labels_(std::move(labels)) {
    if (rank_ == 0 || gram_.cols() != gram_.rows())
        fail(ErrorCode::BadGram, "gram matrix must be square and nonempty");
    for (int i = 0; i < rank_; ++i) {
        if (gram_(i, i) % 2 != 0)
            fail(ErrorCode::BadGram, "odd diagonal entry; all lattices here are even");
        for (int j = 0; j < i; ++j)
            if (gram_(i, j) != gram_(j, i)) fail(ErrorCode::BadGram, "gram matrix not symmetric");
    }
    if (!labels_.empty() && static_cast<int>(labels_.size()) != rank_)
        fail(ErrorCode::BadGram, "label count does not match rank");
    det_ = enrlat::det(widen(gram_));
    if (det_ == 0 && !allow_degenerate)
        fail(ErrorCode::BadGram, "degenerate gram matrix");
    auto [p, n, z] = enrlat::signature(gram_);
    sig_pos_ = p;
    sig_neg_ = n;
    (void)z;
}

LatticeVector::LatticeVector(LatticePtr lattice, Vec coords)
    : lat_(std::move(lattice)), c_(std::move(coords)) {
    if (!lat_ || static_cast<int>(c_.size()) != lat_->rank())
        fail(ErrorCode::LatticeMismatch, "coordinate length does not match lattice rank");
}

void require_same_lattice(const LatticeVector& x, const LatticeVector& y) {
    if (x.lattice() == y.lattice()) return;
    if (!x.lattice()->same_as(*y.lattice()))
        fail(ErrorCode::LatticeMismatch, "vectors belong to different lattices");
}

std::int64_t dot(const Mat64& gram, std::span<const std::int64_t> x, std::span<const std::int64_t> y) {
    const std::size_t n = gram.rows();
    std::int64_t s = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] == 0) continue;
        std::int64_t row = 0;
        for (std::size_t j = 0; j < n; ++j) row += gram(i, j) * y[j];
        s += x[i] * row;
    }
    return s;
}

std::int64_t norm_of(const Mat64& gram, std::span<const std::int64_t> x) {
    return dot(gram, x, x);
}

Vec gram_times(const Mat64& gram, std::span<const std::int64_t> x) {
    const std::size_t n = gram.rows();
    Vec r(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r[i] += gram(i, j) * x[j];
    return r;
}

std::int64_t inner_product(const LatticeVector& x, const LatticeVector& y) {
    require_same_lattice(x, y);
    return dot(x.lattice()->gram(), x.coords(), y.coords());
}

LatticePtr lattice_from_dual_graph(const DualGraph& g) {
    const int n = static_cast<int>(g.vertices.size());
    if (n == 0) fail(ErrorCode::BadGram, "empty vertex list");
    Mat64 gram(n, n);
    for (int i = 0; i < n; ++i) gram(i, i) = -2;
    std::set<std::pair<int, int>> seen;
    for (auto [a, b] : g.edges) {
        if (a < 0 || b < 0 || a >= n || b >= n)
            fail(ErrorCode::SchemaError, "edge endpoint out of range");
        if (a == b) fail(ErrorCode::SelfLoop, "self loop at vertex " + g.vertices[a]);
        auto key = std::minmax(a, b);
        if (!seen.insert(key).second)
            fail(ErrorCode::DuplicateEdge, "duplicate edge " + g.vertices[a] + "-" + g.vertices[b]);
        gram(a, b) = 1;
        gram(b, a) = 1;
    }
    return std::make_shared<IntegerLattice>(std::move(gram), g.vertices, /*allow_degenerate=*/true);
}

LatticePtr make_l10() {
    DualGraph g;
    for (int i = 1; i <= 10; ++i) g.vertices.push_back("e" + std::to_string(i));
    g.edges = {{0, 3}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 8}, {8, 9}};
    return lattice_from_dual_graph(g);
}

LatticePtr rescale(const IntegerLattice& l, std::int64_t n) {
    if (n <= 0) fail(ErrorCode::BadGram, "rescale factor must be positive");
    Mat64 g = l.gram();
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= n;
    return std::make_shared<IntegerLattice>(std::move(g), l.labels(), l.degenerate());
}

LatticePtr direct_sum(const IntegerLattice& a, const IntegerLattice& b) {
    const int n = a.rank(), m = b.rank();
    Mat64 g(n + m, n + m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = a.gram()(i, j);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g(n + i, n + j) = b.gram()(i, j);
    std::vector<std::string> labels;
    if (!a.labels().empty() || !b.labels().empty()) {
        auto la = a.labels(), lb = b.labels();
        if (la.empty()) la.resize(n);
        if (lb.empty()) lb.resize(m);
        labels = la;
        labels.insert(labels.end(), lb.begin(), lb.end());
    }
    return std::make_shared<IntegerLattice>(std::move(g), std::move(labels),
                                            a.degenerate() || b.degenerate());
}

Vec reflect_raw(const Mat64& gram, std::span<const std::int64_t> r, std::span<const std::int64_t> x) {
    const std::int64_t p = dot(gram, x, r);
    Vec out(x.begin(), x.end());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += p * r[i];
    return out;
}

LatticeVector reflect(const LatticeVector& r, const LatticeVector& x) {
    require_same_lattice(r, x);
    const Mat64& g = r.lattice()->gram();
    if (norm_of(g, r.coords()) != -2)
        fail(ErrorCode::NotMinusTwo, "reflection vector must have norm -2");
    return LatticeVector(x.lattice(), reflect_raw(g, r.coords(), x.coords()));
}

int balanced_key(std::int64_t v) {
    // 0 -> 0, 1 -> 1, -1 -> 2, 2 -> 3, -2 -> 4, ...
    return v > 0 ? static_cast<int>(2 * v - 1) : static_cast<int>(-2 * v);
}

bool balanced_less(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int ka = balanced_key(a[i]), kb = balanced_key(b[i]);
        if (ka != kb) return ka < kb;
    }
    return a.size() < b.size();
}

Vec lex_positive(Vec v) {
    for (auto c : v) {
        if (c > 0) return v;
        if (c < 0) {
            for (auto& x : v) x = -x;
            return v;
        }
    }
    return v;
}

std::int64_t gcd_of(std::span<const std::int64_t> v) {
    std::int64_t g = 0;
    for (auto c : v) g = std::gcd(g, c);
    return g;
}

} // namespace enrlat
