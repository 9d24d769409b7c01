#pragma once

#include "enrlat/bigint.hpp"
#include "enrlat/errors.hpp"
#include "enrlat/imat.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace enrlat {

/// An even integer lattice: a symmetric Gram matrix with basis labels.
/// Immutable after construction; all operations on it are pure.
class IntegerLattice {
public:
    IntegerLattice(Mat64 gram, std::vector<std::string> labels = {},
                   bool allow_degenerate = false);

    int rank() const { return rank_; }
    const Mat64& gram() const { return gram_; }
    const std::vector<std::string>& labels() const { return labels_; }

    const Int& det() const { return det_; }
    /// (positives, negatives); zeros only occur for degenerate-allowed lattices.
    std::pair<int, int> signature() const { return {sig_pos_, sig_neg_}; }
    bool degenerate() const { return det_ == 0; }
    bool negative_definite() const { return sig_neg_ == rank_ && det_ != 0; }
    bool hyperbolic() const { return sig_pos_ == 1 && sig_neg_ == rank_ - 1; }

    bool same_as(const IntegerLattice& o) const {
        return rank_ == o.rank_ && gram_ == o.gram_;
    }

private:
    int rank_;
    Mat64 gram_;
    std::vector<std::string> labels_;
    Int det_;
    int sig_pos_ = 0, sig_neg_ = 0;
};

using LatticePtr = std::shared_ptr<const IntegerLattice>;

/// Integer coordinate tuple relative to a lattice basis.
class LatticeVector {
public:
    LatticeVector(LatticePtr lattice, Vec coords);

    const LatticePtr& lattice() const { return lat_; }
    const Vec& coords() const { return c_; }
    std::int64_t operator[](std::size_t i) const { return c_[i]; }

    bool operator==(const LatticeVector& o) const { return c_ == o.c_; }

private:
    LatticePtr lat_;
    Vec c_;
};

void require_same_lattice(const LatticeVector& x, const LatticeVector& y);

std::int64_t inner_product(const LatticeVector& x, const LatticeVector& y);

// raw-coordinate pairing helpers used by the enumeration paths
std::int64_t dot(const Mat64& gram, std::span<const std::int64_t> x, std::span<const std::int64_t> y);
std::int64_t norm_of(const Mat64& gram, std::span<const std::int64_t> x);
Vec gram_times(const Mat64& gram, std::span<const std::int64_t> x);

/// Simple undirected graph describing a root configuration.
struct DualGraph {
    std::vector<std::string> vertices;
    std::vector<std::pair<int, int>> edges; // 0-based vertex indices
};

/// Gram matrix with -2 on the diagonal and 1 across each edge.
LatticePtr lattice_from_dual_graph(const DualGraph& g);

/// The rank-10 even unimodular hyperbolic lattice in its standard root basis
/// e1..e10: a chain e2-e3-...-e10 with e1 attached to e4.
LatticePtr make_l10();

LatticePtr rescale(const IntegerLattice& l, std::int64_t n);
LatticePtr direct_sum(const IntegerLattice& a, const IntegerLattice& b);

/// Reflection across a (-2)-vector: x + (x.r) r.
LatticeVector reflect(const LatticeVector& r, const LatticeVector& x);
Vec reflect_raw(const Mat64& gram, std::span<const std::int64_t> r, std::span<const std::int64_t> x);

// Canonical vector order used for every sorted output: coordinates compared
// entrywise with 0 < 1 < -1 < 2 < -2 < ... so small, positive-leaning vectors
// come first and the order is a total order on each coordinate box.
bool balanced_less(std::span<const std::int64_t> a, std::span<const std::int64_t> b);
int balanced_key(std::int64_t v);

/// Sign normalization: flips the vector when its first nonzero entry is negative.
Vec lex_positive(Vec v);

std::int64_t gcd_of(std::span<const std::int64_t> v);

} // namespace enrlat
