#include "enrlat/sublattice.hpp"

#include <algorithm>
#include <string>

namespace enrlat {

Embedding::Embedding(LatticePtr source, LatticePtr target, Mat64 matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    const int n = target_->rank(), k = source_->rank();
    if (static_cast<int>(matrix_.rows()) != n || static_cast<int>(matrix_.cols()) != k)
        fail(ErrorCode::LatticeMismatch, "embedding matrix shape mismatch");
    // isometry: matrix^T * G_target * matrix == G_source
    IMat m = widen(matrix_);
    IMat g = mat_mul(mat_mul(m.transposed(), widen(target_->gram())), m);
    if (!(g == widen(source_->gram())))
        fail(ErrorCode::LatticeMismatch, "embedding is not isometric");
}

Vec Embedding::column(std::size_t j) const {
    Vec v(matrix_.rows());
    for (std::size_t i = 0; i < matrix_.rows(); ++i) v[i] = matrix_(i, j);
    return v;
}

Vec Embedding::apply(std::span<const std::int64_t> x) const {
    if (x.size() != matrix_.cols()) fail(ErrorCode::LatticeMismatch, "embedding apply shape mismatch");
    Vec v(matrix_.rows(), 0);
    for (std::size_t i = 0; i < matrix_.rows(); ++i)
        for (std::size_t j = 0; j < matrix_.cols(); ++j) v[i] += matrix_(i, j) * x[j];
    return v;
}

ClosureResult primitive_closure(const Embedding& emb) {
    const LatticePtr& amb = emb.target();
    if (amb->degenerate()) fail(ErrorCode::BadGram, "primitive closure needs nondegenerate ambient");
    const std::size_t n = amb->rank();
    const std::size_t k = emb.source()->rank();

    // u E v = d; the saturation of the column span is spanned by the first k
    // columns of u^{-1}.
    SnfResult s = smith_form(widen(emb.matrix()));
    Int index = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (s.d(i, i) == 0)
            fail(ErrorCode::LatticeMismatch, "embedding columns are not independent");
        index *= s.d(i, i);
    }
    if (index == 1) return {emb, 1}; // already primitive
    auto uinv = unimodular_inverse(s.u);
    if (!uinv) fail(ErrorCode::InternalInconsistency, "SNF transform not unimodular");

    Mat64 basis(n, k);
    {
        Mat64 u64 = narrow(*uinv);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < k; ++j) basis(i, j) = u64(i, j);
    }
    IMat b = widen(basis);
    Mat64 gram = narrow(mat_mul(mat_mul(b.transposed(), widen(amb->gram())), b));
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < k; ++j) labels.push_back("s" + std::to_string(j + 1));
    auto sub = std::make_shared<IntegerLattice>(std::move(gram), std::move(labels));
    return {Embedding(sub, amb, std::move(basis)), index};
}

std::vector<Vec> orthogonal_complement_primitive(const LatticePtr& amb,
                                                 const std::vector<LatticeVector>& gens) {
    if (amb->degenerate()) fail(ErrorCode::BadGram, "complement needs nondegenerate ambient");
    const std::size_t n = amb->rank();
    IMat pairing(gens.size(), n);
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (!gens[i].lattice()->same_as(*amb))
            fail(ErrorCode::LatticeMismatch, "generator not in ambient lattice");
        Vec row = gram_times(amb->gram(), gens[i].coords());
        for (std::size_t j = 0; j < n; ++j) pairing(i, j) = row[j];
    }
    IMat k = gens.empty() ? IMat::identity(n) : integer_kernel(pairing);
    Mat64 k64 = narrow(k);
    std::vector<Vec> basis;
    for (std::size_t j = 0; j < k64.cols(); ++j) {
        Vec v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = k64(i, j);
        basis.push_back(std::move(v));
    }
    if (basis.size() == 1) basis[0] = lex_positive(std::move(basis[0]));
    return basis;
}

MRLattice build_mr(const Embedding& r_in_l10) {
    const LatticePtr& amb = r_in_l10.target();
    const LatticePtr& r = r_in_l10.source();
    const int n = amb->rank();
    const int rr = r->rank();
    for (int j = 0; j < rr; ++j)
        if (r->gram()(j, j) != -2)
            fail(ErrorCode::NotMinusTwo, "build_mr expects a root basis for R");

    // Basis {(e_i, 0)} u {(w_j, w_j)/2} in the doubled form. Products:
    //   (e_i,0).(e_k,0)       = 2 e_i.e_k
    //   (e_i,0).(w_j,w_j)/2   = e_i.w_j
    //   (w_j,w_j)/2.(w_l,w_l)/2 = w_j.w_l
    Mat64 g(n + rr, n + rr);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) g(i, k) = 2 * amb->gram()(i, k);
    for (int j = 0; j < rr; ++j) {
        Vec wj = r_in_l10.column(j);
        Vec gw = gram_times(amb->gram(), wj);
        for (int i = 0; i < n; ++i) {
            g(i, n + j) = gw[i];
            g(n + j, i) = gw[i];
        }
        for (int l = 0; l <= j; ++l) {
            Vec wl = r_in_l10.column(l);
            std::int64_t p = dot(amb->gram(), wj, wl);
            g(n + j, n + l) = p;
            g(n + l, n + j) = p;
        }
    }
    for (int i = 0; i < n + rr; ++i)
        if (g(i, i) % 2 != 0) fail(ErrorCode::InternalInconsistency, "M_R gram is not even");

    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i)
        labels.push_back(amb->labels().empty() ? "l" + std::to_string(i + 1) : amb->labels()[i]);
    for (int j = 0; j < rr; ++j) labels.push_back("w" + std::to_string(j + 1));
    auto mr = std::make_shared<IntegerLattice>(g, std::move(labels));

    Mat64 incl(n + rr, n);
    for (int i = 0; i < n; ++i) incl(i, i) = 1;
    auto l10_scaled = rescale(*amb, 2);
    Embedding emb(l10_scaled, mr, std::move(incl));

    Int det_direct = abs(mr->det());
    Int index = Int(1) << rr;
    Int det_sum = abs(l10_scaled->det()) * abs(rescale(*r, 2)->det());
    Int det_by_index = det_sum / (index * index);
    return {mr, std::move(emb), det_direct, det_by_index};
}

} // namespace enrlat
