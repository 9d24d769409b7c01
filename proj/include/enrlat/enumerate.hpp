#pragma once

#include "enrlat/isotropic.hpp"
#include "enrlat/model.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace enrlat {

enum class SequenceTarget { Len10, O2Nine };

struct EngineOptions {
    std::size_t orbit_cap = 100000;
    int workers = 1;
};

/// Half-fiber and curve pools after orbit extension: the working material for
/// every canonical-sequence search. Fibers are filtered to classes nef
/// against the whole curve pool.
struct ModelPools {
    std::vector<Vec> fibers;
    std::vector<Vec> curves;
    bool truncated = false;
};
ModelPools build_pools(const SurfaceModel& m, const EngineOptions& opts = {});

/// All size-k subsets of the fiber pool with pairwise product 1.
std::vector<std::vector<Vec>> enumerate_halffiber_cliques(const SurfaceModel& m, int k,
                                                          const EngineOptions& opts = {});

/// Largest clique size over the fiber pool (the nd lower bound of the model).
int max_halffiber_clique(const SurfaceModel& m, const EngineOptions& opts = {});

/// All annotated canonical sequences of the target shape: anchors form a
/// half-fiber clique, the degenerate entries are anchor plus A-chain prefix
/// sums of pool curves, deduplicated up to reordering.
std::vector<IsotropicSequence> enumerate_canonical_sequences(const SurfaceModel& m,
                                                             SequenceTarget target,
                                                             const EngineOptions& opts = {});

struct EnumerationResult {
    PolKind kind;
    std::string model;
    std::vector<Polarization> polarizations;   // sorted by vector
    std::map<int, std::size_t> stats;          // count by nondegeneracy
    bool pools_truncated = false;
};
EnumerationResult enumerate_polarizations(const SurfaceModel& m, PolKind kind,
                                          const EngineOptions& opts = {});

struct OrbitReduction {
    EnumerationResult reduced;             // one lex-min representative per orbit
    std::vector<std::size_t> orbit_sizes;  // aligned with reduced.polarizations
};
OrbitReduction orbit_representatives(const EnumerationResult& res, const SurfaceModel& m,
                                     const EngineOptions& opts = {});

struct Invariants {
    int nd = 0, fnd = 0, mnd = 0;
    int clique_lower_bound = 0;
    bool exact_relative_to_model = true; // exactness rests on the input lists
    bool consistent_with_clique_bound = true;
};
Invariants compute_invariants(const SurfaceModel& m, const EngineOptions& opts = {});

struct CertifiedRep {
    Polarization rep;
    std::vector<Vec> witnesses; // d distinct orthogonal curves
    std::optional<Vec> rho;     // Mukai mode: the H-generator excluded from witnesses
};

struct BoundCertificate {
    PolKind mode;
    int d = 0;
    bool certified = false;
    std::string conclusion; // "Fnd <= 10-d" / "Mnd <= 9-d" when certified
    std::vector<CertifiedRep> reps;
    std::vector<std::size_t> failed_reps; // indices into the input list
};
BoundCertificate upper_bound_certificate(const SurfaceModel& m,
                                         const std::vector<Polarization>& reps, int d,
                                         PolKind mode, const EngineOptions& opts = {});

/// Independent re-verification of an emitted certificate: every witness
/// intersection is recomputed from the model data alone.
void recheck_certificate(const SurfaceModel& m, const BoundCertificate& cert,
                         const EngineOptions& opts = {});

struct MukaiAnalysis {
    enum class Scenario { AmpleAgainstModel, TwoOrthogonalCurves, SingleCurveSecondary, Unresolved };
    Scenario scenario = Scenario::Unresolved;
    Vec rho;                                // generator of <g_1..g_9>^perp, lex-positive
    std::vector<Vec> orthogonal_curves;
    std::optional<Vec> witness;             // a curve orthogonal to v but not in H
    std::vector<Vec> secondary_fibers;      // fibers with v.f = 4 found in the pool
    bool confirmed = false;
};
MukaiAnalysis mukai_orthogonal_analysis(const Polarization& v, const SurfaceModel& m,
                                        const EngineOptions& opts = {});

/// The rank-1 orthogonal complement generator of a Mukai sequence.
Vec mukai_h_generator(const Polarization& v);

} // namespace enrlat
