#pragma once

#include "enrlat/lattice.hpp"

#include <string>
#include <vector>

namespace enrlat {

/// Desk-scale surface data: a marked rank-10 lattice, finite curve and
/// half-fiber class lists and isometry generators.
struct SurfaceModel {
    std::string name;
    LatticePtr lattice;
    std::vector<Vec> curves;
    std::vector<Vec> halffibers;
    std::vector<Mat64> isometries;
    std::vector<std::string> loader_warnings;
};

struct ModelReport {
    bool lattice_is_marked_l10 = false; // rank 10, even, unimodular, signature (1,9)
    std::vector<int> curves_bad_norm;
    std::vector<int> halffibers_bad_norm;
    std::vector<int> halffibers_imprimitive;
    std::vector<std::pair<int, int>> nefness_failures; // (fiber index, curve index)
    std::vector<int> isometries_bad_gram;
    std::vector<int> isometries_curveset_open; // generator image leaves the curve list
    std::size_t curve_count = 0, halffiber_count = 0, isometry_count = 0;

    /// The curve-set closure check is informational; everything else gates.
    bool valid() const {
        return lattice_is_marked_l10 && curves_bad_norm.empty() && halffibers_bad_norm.empty() &&
               halffibers_imprimitive.empty() && nefness_failures.empty() &&
               isometries_bad_gram.empty();
    }
};

ModelReport validate_model(const SurfaceModel& m);

struct OrbitResult {
    std::vector<Vec> vectors; // canonically sorted
    bool truncated = false;
};

/// BFS closure of the seed under the generators and their inverses,
/// truncated at `cap` visited vectors.
OrbitResult isometry_orbit(const SurfaceModel& m, const std::vector<Vec>& seed, std::size_t cap);

} // namespace enrlat
