#include "enrlat/roots.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <cctype>
#include <cstdlib>
#include <limits>

namespace enrlat {

namespace {

// q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2 for the positive definite
// form q = -gram; the classical recursive short-vector walk, exact rationals.
struct DefiniteEnumerator {
    int n;
    std::vector<std::vector<Rat>> u; // u[i][j] for j > i
    std::vector<Rat> d;

    explicit DefiniteEnumerator(const Mat64& gram) : n(static_cast<int>(gram.rows())) {
        Mat<Rat> a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = Rat(-gram(i, j));
        u.assign(n, std::vector<Rat>(n, Rat(0)));
        d.assign(n, Rat(0));
        for (int i = 0; i < n; ++i) {
            d[i] = a(i, i);
            if (d[i] <= 0) fail(ErrorCode::NotDefinite, "form is not negative definite");
            for (int j = i + 1; j < n; ++j) u[i][j] = a(i, j) / d[i];
            for (int k = i + 1; k < n; ++k)
                for (int l = i + 1; l < n; ++l) a(k, l) -= d[i] * u[i][k] * u[i][l];
        }
    }

    void collect(std::int64_t target, std::vector<Vec>& out) const {
        Vec x(n, 0);
        walk(n - 1, Rat(target), x, out);
    }

private:
    void walk(int i, const Rat& budget, Vec& x, std::vector<Vec>& out) const {
        // remaining budget for levels 0..i
        Rat center(0); // c_i = sum_{j>i} u_ij x_j
        for (int j = i + 1; j < n; ++j) center += u[i][j] * Rat(x[j]);

        // integer range with d_i (t + center)^2 <= budget
        auto fits = [&](std::int64_t t) {
            Rat s = Rat(t) + center;
            return d[i] * s * s <= budget;
        };
        // floor(-center) always satisfies (t + center <= 0 shrinking square),
        // unless even the vertex overshoots
        std::int64_t base = to_i64(Int(numerator(center) / denominator(center)));
        while (Rat(base) + center > 0) --base;
        while (Rat(base + 1) + center <= 0) ++base;
        if (!fits(base) && !fits(base + 1)) return;

        std::int64_t lo = base, hi = base;
        while (fits(hi + 1)) ++hi;
        while (fits(lo) == false) ++lo; // vertex may sit just below range
        while (lo > std::numeric_limits<std::int64_t>::min() && fits(lo - 1)) --lo;

        for (std::int64_t t = lo; t <= hi; ++t) {
            x[i] = t;
            Rat s = Rat(t) + center;
            Rat rest = budget - d[i] * s * s;
            if (i == 0) {
                if (rest == 0) out.push_back(x);
            } else {
                walk(i - 1, rest, x, out);
            }
        }
        x[i] = 0;
    }
};

} // namespace

std::vector<Vec> short_vectors(const IntegerLattice& l, std::int64_t norm) {
    if (!l.negative_definite()) fail(ErrorCode::NotDefinite, "lattice is not negative definite");
    if (norm >= 0) fail(ErrorCode::BadGram, "short_vectors expects a negative norm");
    DefiniteEnumerator fp(l.gram());
    std::vector<Vec> out;
    fp.collect(-norm, out);
    std::sort(out.begin(), out.end(),
              [](const Vec& a, const Vec& b) { return balanced_less(a, b); });
    return out;
}

std::vector<Vec> enumerate_roots(const IntegerLattice& l) {
    return short_vectors(l, -2);
}

std::string ADEType::str() const {
    if (components.empty()) return "0";
    std::string s;
    std::size_t i = 0;
    while (i < components.size()) {
        std::size_t j = i;
        while (j < components.size() && components[j] == components[i]) ++j;
        if (!s.empty()) s += "+";
        if (j - i > 1) s += std::to_string(j - i);
        s += components[i].letter + std::to_string(components[i].n);
        i = j;
    }
    return s;
}

int ADEType::rank() const {
    int r = 0;
    for (const auto& c : components) r += c.n;
    return r;
}

namespace {

bool comp_order(const ADEComponent& a, const ADEComponent& b) {
    if (a.n != b.n) return a.n > b.n;
    return a.letter > b.letter; // E before D before A at equal rank
}

void validate_component(const ADEComponent& c) {
    bool ok = (c.letter == 'A' && c.n >= 1) || (c.letter == 'D' && c.n >= 4) ||
              (c.letter == 'E' && c.n >= 6 && c.n <= 8);
    if (!ok)
        fail(ErrorCode::SchemaError,
             std::string("not an ADE symbol: ") + c.letter + std::to_string(c.n));
}

} // namespace

ADEType parse_ade(const std::string& s) {
    ADEType t;
    std::size_t i = 0;
    while (i < s.size()) {
        int mult = 0;
        while (i < s.size() && isdigit(s[i])) mult = mult * 10 + (s[i++] - '0');
        if (mult == 0) mult = 1;
        if (i >= s.size() || (s[i] != 'A' && s[i] != 'D' && s[i] != 'E'))
            fail(ErrorCode::SchemaError, "cannot parse ADE symbol: " + s);
        char letter = s[i++];
        int n = 0;
        while (i < s.size() && isdigit(s[i])) n = n * 10 + (s[i++] - '0');
        ADEComponent c{letter, n};
        validate_component(c);
        for (int k = 0; k < mult; ++k) t.components.push_back(c);
        if (i < s.size()) {
            if (s[i] != '+') fail(ErrorCode::SchemaError, "cannot parse ADE symbol: " + s);
            ++i;
        }
    }
    if (t.components.empty()) fail(ErrorCode::SchemaError, "empty ADE symbol");
    std::sort(t.components.begin(), t.components.end(), comp_order);
    return t;
}

DualGraph ade_dynkin_graph(const ADEType& t) {
    DualGraph g;
    auto add_vertex = [&]() {
        g.vertices.push_back("r" + std::to_string(g.vertices.size() + 1));
        return static_cast<int>(g.vertices.size()) - 1;
    };
    for (const auto& c : t.components) {
        validate_component(c);
        std::vector<int> chain;
        if (c.letter == 'A') {
            for (int i = 0; i < c.n; ++i) chain.push_back(add_vertex());
            for (int i = 0; i + 1 < c.n; ++i) g.edges.push_back({chain[i], chain[i + 1]});
        } else if (c.letter == 'D') {
            // two prongs on the head of a chain of length n-2
            for (int i = 0; i < c.n - 2; ++i) chain.push_back(add_vertex());
            for (int i = 0; i + 1 < c.n - 2; ++i) g.edges.push_back({chain[i], chain[i + 1]});
            int p1 = add_vertex(), p2 = add_vertex();
            g.edges.push_back({p1, chain[0]});
            g.edges.push_back({p2, chain[0]});
        } else {
            // E_n: chain of n-1 with one vertex on the third node
            for (int i = 0; i < c.n - 1; ++i) chain.push_back(add_vertex());
            for (int i = 0; i + 1 < c.n - 1; ++i) g.edges.push_back({chain[i], chain[i + 1]});
            int p = add_vertex();
            g.edges.push_back({p, chain[2]});
        }
    }
    return g;
}

ADEType ade_type(const IntegerLattice& l) {
    std::vector<Vec> roots = enumerate_roots(l);
    const int n = l.rank();
    if (roots.empty()) fail(ErrorCode::NotRootGenerated, "lattice has no roots");

    {
        IMat m(roots.size(), n);
        for (std::size_t i = 0; i < roots.size(); ++i)
            for (int j = 0; j < n; ++j) m(i, j) = roots[i][j];
        SnfResult s = smith_form(m);
        int rank = 0;
        const std::size_t lim = std::min(m.rows(), m.cols());
        for (std::size_t i = 0; i < lim; ++i)
            if (s.d(i, i) != 0) ++rank;
        if (rank != n) fail(ErrorCode::NotRootGenerated, "roots do not span the lattice");
    }

    // generic height: sum 10^i x_i, rescaled if a root happens to vanish on it
    Int base = 10;
    for (const auto& r : roots)
        for (auto c : r) base = std::max(base, Int(2 * std::abs(c) + 1));
    auto height = [&](const Vec& v) {
        Int h = 0, p = 1;
        for (auto c : v) {
            h += p * c;
            p *= base;
        }
        return h;
    };

    std::vector<Vec> positive;
    std::set<Vec> positive_set;
    for (const auto& r : roots) {
        Int h = height(r);
        if (h == 0) fail(ErrorCode::InternalInconsistency, "height functional vanished on a root");
        if (h > 0) {
            positive.push_back(r);
            positive_set.insert(r);
        }
    }

    std::vector<Vec> simple;
    for (const auto& r : positive) {
        bool is_sum = false;
        for (const auto& p : positive) {
            Vec diff(n);
            for (int i = 0; i < n; ++i) diff[i] = r[i] - p[i];
            if (diff == Vec(n, 0)) continue;
            if (positive_set.count(diff)) {
                is_sum = true;
                break;
            }
        }
        if (!is_sum) simple.push_back(r);
    }
    if (static_cast<int>(simple.size()) != n)
        fail(ErrorCode::InternalInconsistency, "simple root count differs from rank");

    // Dynkin graph on the simple roots
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::int64_t p = dot(l.gram(), simple[i], simple[j]);
            if (p != 0 && p != 1)
                fail(ErrorCode::InternalInconsistency, "simple roots with pairing outside {0,1}");
            if (p == 1) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
        }

    // split into connected components and classify each by branch structure
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int i = 0; i < n; ++i) {
        if (comp[i] != -1) continue;
        std::vector<int> stack{i};
        comp[i] = ncomp;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (comp[w] == -1) {
                    comp[w] = ncomp;
                    stack.push_back(w);
                }
        }
        ++ncomp;
    }

    ADEType result;
    for (int c = 0; c < ncomp; ++c) {
        std::vector<int> verts;
        for (int i = 0; i < n; ++i)
            if (comp[i] == c) verts.push_back(i);
        const int k = static_cast<int>(verts.size());
        std::vector<int> branch;
        int edge_count = 0;
        for (int v : verts) {
            int deg = 0;
            for (int w : adj[v])
                if (comp[w] == c) ++deg;
            edge_count += deg;
            if (deg >= 3) branch.push_back(v);
            if (deg > 3) fail(ErrorCode::InternalInconsistency, "vertex of degree > 3 in Dynkin graph");
        }
        if (edge_count / 2 != k - 1)
            fail(ErrorCode::InternalInconsistency, "Dynkin component is not a tree");
        if (branch.empty()) {
            result.components.push_back({'A', k});
        } else if (branch.size() == 1) {
            // arm lengths from the trivalent vertex
            std::vector<int> arms;
            for (int s : adj[branch[0]]) {
                int len = 1, prev = branch[0], cur = s;
                while (true) {
                    int next = -1;
                    for (int w : adj[cur])
                        if (w != prev) next = w;
                    if (next == -1) break;
                    prev = cur;
                    cur = next;
                    ++len;
                }
                arms.push_back(len);
            }
            std::sort(arms.begin(), arms.end());
            if (arms.size() != 3) fail(ErrorCode::InternalInconsistency, "bad branch arms");
            if (arms[0] == 1 && arms[1] == 1) {
                result.components.push_back({'D', arms[2] + 3});
            } else if (arms[0] == 1 && arms[1] == 2 && arms[2] >= 2 && arms[2] <= 4) {
                result.components.push_back({'E', arms[2] + 4});
            } else {
                fail(ErrorCode::InternalInconsistency, "tree is not a Dynkin diagram");
            }
        } else {
            fail(ErrorCode::InternalInconsistency, "multiple branch vertices in one component");
        }
    }
    std::sort(result.components.begin(), result.components.end(), comp_order);
    return result;
}

} // namespace enrlat
