#pragma once

#include "enrlat/lattice.hpp"

#include <vector>

namespace enrlat {

/// Isometric embedding of one lattice into another. Columns of `matrix` are
/// the images of the source basis in target coordinates.
class Embedding {
public:
    Embedding(LatticePtr source, LatticePtr target, Mat64 matrix);

    const LatticePtr& source() const { return source_; }
    const LatticePtr& target() const { return target_; }
    const Mat64& matrix() const { return matrix_; }

    /// Image of the j-th source basis vector.
    Vec column(std::size_t j) const;
    /// Image of an arbitrary source vector.
    Vec apply(std::span<const std::int64_t> x) const;

private:
    LatticePtr source_, target_;
    Mat64 matrix_;
};

/// Saturation of an embedded sublattice: the smallest primitive sublattice of
/// the ambient containing the image. Index of the input inside it is returned
/// alongside.
struct ClosureResult {
    Embedding closure;
    Int index; // [closure : input]
};
ClosureResult primitive_closure(const Embedding& emb);

/// Integral basis of the primitive sublattice orthogonal to all generators.
/// Rank-1 results are sign-normalized lex-positive.
std::vector<Vec> orthogonal_complement_primitive(const LatticePtr& amb,
                                                 const std::vector<LatticeVector>& gens);

/// The index-2^r overlattice M_R of L10(2) + R(2), presented on the basis
/// {(e_i,0)} u {(w_j,w_j)/2} for the embedded root basis w_j of R.
struct MRLattice {
    LatticePtr mr;
    Embedding l10_scaled; // L10(2) inside M_R, basis-to-first-block
    Int det_direct;       // |det| of the assembled Gram
    Int det_by_index;     // |det L10(2) + R(2)| / index^2, index = 2^r
};
MRLattice build_mr(const Embedding& r_in_l10);

} // namespace enrlat
