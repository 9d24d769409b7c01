#pragma once

#include "enrlat/imat.hpp"
#include "enrlat/lattice.hpp"

#include <vector>

namespace enrlat {

/// Invariant factors of a finite abelian quotient together with the
/// unimodular transforms that realized the Smith form.
struct DiscriminantData {
    std::vector<Int> invariant_factors; // the factors > 1, divisibility chain
    IMat u, v;                          // u * m * v = diag
    std::vector<Int> full_diagonal;     // including the 1s

    // one dual-lattice representative per nontrivial factor, as rational
    // coordinates over the lattice basis (filled by discriminant_group)
    std::vector<std::vector<Rat>> representatives;

    Int group_order() const;
};

/// Smith normal form of a square nonsingular integer matrix.
DiscriminantData smith_normal_form(const IMat& m);

/// Discriminant group A_L = L*/L of a nondegenerate lattice, from the Smith
/// form of its Gram matrix, with a generator representative per factor.
DiscriminantData discriminant_group(const IntegerLattice& l);

/// Whether a rational vector (coordinates over the basis of L) lies in L*.
bool in_dual_lattice(const IntegerLattice& l, const std::vector<Rat>& y);

/// Whether a rational vector has integral coordinates, i.e. lies in L itself.
bool in_lattice(const std::vector<Rat>& y);

/// Whether the class of `target` in A_L lies in the subgroup generated by the
/// classes of `gens`. Brute force over the (small) group; orders taken from
/// `orders` which must bound the order of each generator.
bool coset_in_span(const IntegerLattice& l, const std::vector<Rat>& target,
                   const std::vector<std::vector<Rat>>& gens, const std::vector<Int>& orders);

} // namespace enrlat
