#pragma once

#include "enrlat/lattice.hpp"
#include "enrlat/sublattice.hpp"

#include <functional>
#include <optional>
#include <span>

namespace enrlat {

/// Flat fixed-width vector storage for large candidate pools.
class VecList {
public:
    VecList() = default;
    explicit VecList(std::size_t width) : width_(width) {}

    std::size_t width() const { return width_; }
    std::size_t size() const { return width_ ? flat_.size() / width_ : 0; }
    bool empty() const { return flat_.empty(); }

    std::span<const std::int64_t> operator[](std::size_t i) const {
        return {flat_.data() + i * width_, width_};
    }
    Vec at(std::size_t i) const {
        auto s = (*this)[i];
        return Vec(s.begin(), s.end());
    }
    void push(std::span<const std::int64_t> v) {
        flat_.insert(flat_.end(), v.begin(), v.end());
    }
    void append(const VecList& o) { flat_.insert(flat_.end(), o.flat_.begin(), o.flat_.end()); }

    void sort_dedup();

private:
    std::size_t width_ = 0;
    std::vector<std::int64_t> flat_;
};

/// A search region |B x|_inf <= bound. The default region for a box search is
/// the union of the basis box (B = identity) and the pairing box (B = gram):
/// isotropic classes of L10 carry small pairing coordinates but large basis
/// coordinates, roots the other way around, and the union exhausts both.
struct BoundSystem {
    Mat64 b;
    std::int64_t bound;
};

std::vector<BoundSystem> standard_box(const IntegerLattice& l, int box);

/// A linear condition  covector . x = value  (covector in functional form,
/// i.e. already multiplied by the Gram matrix when it came from a vector).
struct LinearCondition {
    Vec covector;
    std::int64_t value;
};

/// Exhausts { x integral : all conditions hold, x^T G x = norm (if set),
/// x in region } for one region, streaming each solution. Solutions of the
/// affine system are parametrized by SNF; the kernel coset is walked with
/// exact per-level bounds from an echelonized bound matrix and the last
/// coordinate is solved as an integer quadratic.
void enumerate_region(const IntegerLattice& l, const std::vector<LinearCondition>& conditions,
                      std::optional<std::int64_t> norm, const BoundSystem& region,
                      const std::function<void(std::span<const std::int64_t>)>& emit,
                      int workers = 1);

/// Union over regions, deduplicated, canonically sorted. Excludes zero.
VecList solve_in_box(const IntegerLattice& l, const std::vector<LinearCondition>& conditions,
                     std::optional<std::int64_t> norm, int box, int workers = 1);

VecList isotropic_in_box(const IntegerLattice& l, int box, int workers = 1);
VecList roots_in_box(const IntegerLattice& l, int box, int workers = 1);

/// Bounded search for norm -2 vectors realizing a dual graph, first solution
/// in canonical order. Throws NotFound with the box in the message when the
/// box is exhausted (advisory only, never a nonexistence proof).
Embedding embed_by_graph(const LatticePtr& amb, const DualGraph& graph, int box);

/// Same search, restricted to embeddings whose column matrix satisfies an
/// extra predicate (e.g. integrality of a half-sum class).
using EmbeddingPredicate = std::function<bool(const Mat64&)>;
Embedding embed_by_graph_where(const LatticePtr& amb, const DualGraph& graph, int box,
                               const EmbeddingPredicate& pred);

} // namespace enrlat
