#include "enrlat/discriminant.hpp"

namespace enrlat {

Int DiscriminantData::group_order() const {
    Int o = 1;
    for (const auto& f : invariant_factors) o *= f;
    return o;
}

DiscriminantData smith_normal_form(const IMat& m) {
    if (m.rows() != m.cols() || det(m) == 0)
        fail(ErrorCode::SingularMatrix, "smith_normal_form expects a square nonsingular matrix");
    SnfResult s = smith_form(m);
    DiscriminantData out;
    out.u = s.u;
    out.v = s.v;
    out.full_diagonal = s.diagonal();
    for (const auto& d : out.full_diagonal)
        if (d > 1) out.invariant_factors.push_back(d);
    return out;
}

DiscriminantData discriminant_group(const IntegerLattice& l) {
    if (l.degenerate()) fail(ErrorCode::SingularMatrix, "discriminant group needs nondegenerate gram");
    DiscriminantData d = smith_normal_form(widen(l.gram()));
    // With u G v = diag(d_i), the class of column v_i / d_i generates the
    // Z/d_i factor of L*/L.
    const std::size_t n = d.full_diagonal.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (d.full_diagonal[i] <= 1) continue;
        std::vector<Rat> rep(n);
        for (std::size_t r = 0; r < n; ++r) rep[r] = Rat(d.v(r, i), d.full_diagonal[i]);
        d.representatives.push_back(std::move(rep));
    }
    return d;
}

bool in_lattice(const std::vector<Rat>& y) {
    for (const auto& c : y)
        if (denominator(c) != 1) return false;
    return true;
}

bool in_dual_lattice(const IntegerLattice& l, const std::vector<Rat>& y) {
    const int n = l.rank();
    if (static_cast<int>(y.size()) != n) fail(ErrorCode::LatticeMismatch, "length mismatch");
    for (int i = 0; i < n; ++i) {
        Rat s(0);
        for (int j = 0; j < n; ++j) s += Rat(l.gram()(i, j)) * y[j];
        if (denominator(s) != 1) return false;
    }
    return true;
}

bool coset_in_span(const IntegerLattice& l, const std::vector<Rat>& target,
                   const std::vector<std::vector<Rat>>& gens, const std::vector<Int>& orders) {
    if (!in_dual_lattice(l, target)) fail(ErrorCode::LatticeMismatch, "target not in dual lattice");
    if (gens.size() != orders.size())
        fail(ErrorCode::InternalInconsistency, "generator/order count mismatch");
    Int combos = 1;
    for (const auto& o : orders) combos *= o;
    if (combos > 1000000)
        fail(ErrorCode::InternalInconsistency, "discriminant group too large for brute-force span test");

    const std::size_t n = target.size();
    std::vector<Int> idx(gens.size(), 0);
    while (true) {
        std::vector<Rat> acc(n, Rat(0));
        for (std::size_t g = 0; g < gens.size(); ++g)
            for (std::size_t r = 0; r < n; ++r) acc[r] += Rat(idx[g]) * gens[g][r];
        std::vector<Rat> diff(n);
        for (std::size_t r = 0; r < n; ++r) diff[r] = acc[r] - target[r];
        if (in_lattice(diff)) return true;

        std::size_t g = 0;
        while (g < gens.size()) {
            idx[g] += 1;
            if (idx[g] < orders[g]) break;
            idx[g] = 0;
            ++g;
        }
        if (g == gens.size()) return false;
    }
}

} // namespace enrlat
