#pragma once

#include "enrlat/boxscan.hpp"
#include "enrlat/lattice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace enrlat {

/// Canonical-structure annotation: nef anchors, each carrying an A-chain of
/// (-2)-curves whose prefix sums give the degenerate entries.
struct ChainAnnotation {
    Vec anchor;
    std::vector<Vec> curves;
};

struct IsotropicSequence {
    LatticePtr lattice;
    std::vector<Vec> entries;
    std::optional<std::vector<ChainAnnotation>> annotation;

    std::size_t length() const { return entries.size(); }
    Vec entry_sum() const;
};

struct SequenceViolation {
    ErrorCode kind; // NotIsotropic, BadPairing or TooLong
    int i = -1, j = -1;
    std::string describe() const;
};

struct SequenceCheck {
    bool ok = true;
    std::vector<SequenceViolation> violations;
};

/// Validates norms and pairwise pairings; never throws on content problems,
/// everything lands in the report.
SequenceCheck check_isotropic_sequence(const LatticePtr& lattice, const std::vector<Vec>& entries);

/// Throwing wrapper returning the validated sequence.
IsotropicSequence validate_sequence(const LatticePtr& lattice, const std::vector<Vec>& entries);

enum class Orbit9 { O1, O2 };
/// O2 iff the entry sum is divisible by 2; O1 iff primitive.
Orbit9 classify_length9(const IsotropicSequence& seq);

/// Structural check of an annotation against the entry multiset:
/// entries = anchors plus chain prefix sums, chains are A-chains hanging off
/// their anchor, disjoint from everything else.
bool annotation_consistent(const IsotropicSequence& seq, std::string* why = nullptr);

/// Marks every entry as a nef anchor (chain-free canonical structure).
IsotropicSequence annotate_nondegenerate(IsotropicSequence seq);

enum class PolKind { Fano, Mukai };
const char* pol_kind_name(PolKind k);

struct Polarization {
    PolKind kind;
    Vec vector;
    IsotropicSequence sequence; // entries stored canonically sorted
    int nondegeneracy = 0;
    std::vector<Vec> contracted_curves;
};

/// One third (Fano) or one half (Mukai) of the entry sum of an annotated
/// canonical sequence, with all paper identities re-verified.
Polarization polarization_from_sequence(const IsotropicSequence& seq);

std::int64_t phi_over_candidates(const LatticeVector& h, const std::vector<Vec>& candidates);

struct PhiResult {
    std::int64_t value = 0;
    Vec witness;
    int box = 0;
};
/// min |h.f| over nonzero isotropic f in the search box, with witness.
PhiResult phi_bounded(const LatticeVector& h, int box, int workers = 1);

/// Every one-step extension of the sequence within the box. Emptiness is
/// advisory (box-limited), except that no sequence of length 11 exists at all.
std::vector<Vec> extension_candidates(const IsotropicSequence& seq, int box);

/// The unique degree-10 vector of the standard chamber x.e_i >= 0 with
/// box-Phi equal to 3.
Vec vinberg_fano_vector(const LatticePtr& l, int box);

struct SequenceSearchOptions {
    int box = 3;
    std::size_t max_count = 1;
    std::size_t node_budget = 4000000;
};
/// Bounded DFS for isotropic sequences of the given length; results carry
/// canonically sorted entries. Deterministic for fixed options.
std::vector<IsotropicSequence> find_isotropic_sequences(const LatticePtr& l, int length,
                                                        const SequenceSearchOptions& opts = {});

/// Degenerates a length-10 sequence into a length-9 sequence in O2:
/// g_i = h - f_i - f_drop where h is the Fano vector of the input.
IsotropicSequence derive_o2_sequence(const IsotropicSequence& seq10, std::size_t drop);

} // namespace enrlat
