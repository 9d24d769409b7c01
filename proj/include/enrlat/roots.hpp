#pragma once

#include "enrlat/lattice.hpp"

#include <string>
#include <vector>

namespace enrlat {

/// All vectors of norm -2 in a negative definite lattice, both signs,
/// canonically sorted. Throws NotDefinite otherwise.
std::vector<Vec> enumerate_roots(const IntegerLattice& l);

/// All vectors of a given negative norm in a negative definite lattice.
std::vector<Vec> short_vectors(const IntegerLattice& l, std::int64_t norm);

struct ADEComponent {
    char letter; // 'A', 'D' or 'E'
    int n;
    bool operator==(const ADEComponent&) const = default;
};

struct ADEType {
    std::vector<ADEComponent> components; // canonical order, largest first
    std::string str() const;
    int rank() const;
    bool operator==(const ADEType&) const = default;
};

/// Parses symbols like "E8", "D8+A1", "2A1", "E7+2A1".
ADEType parse_ade(const std::string& s);

/// Dynkin diagram of the given ADE type, vertex labels r1, r2, ...
DualGraph ade_dynkin_graph(const ADEType& t);

/// Classifies a negative definite root-generated lattice by extracting a
/// simple root system. Throws NotRootGenerated when roots do not span.
ADEType ade_type(const IntegerLattice& l);

} // namespace enrlat
