#pragma once

#include "dnabot/dna_codec.hpp"
#include "dnabot/seed_groups.hpp"
#include "dnabot/species_clustering.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dnabot {

struct ScoringScheme {
    int match = 2;
    int mismatch = -1;
    int gap = -2;

    /// Throws ConfigError unless match > 0, mismatch <= 0 and gap < 0.
    void validate() const;
};

struct AlignmentResult {
    int score = 0;
    std::size_t aligned_length = 0;  // columns
    std::size_t matches = 0;         // identical aligned pairs
    double identity = 0.0;           // matches / aligned_length, 0 for an empty alignment
    std::string aligned_a;           // '-' marks a gap
    std::string aligned_b;
};

/// Needleman-Wunsch with a linear gap penalty. Traceback prefers the diagonal,
/// then a gap in `b` (up), then a gap in `a` (left).
AlignmentResult align_global(std::string_view a, std::string_view b, const ScoringScheme& scoring);

/// Alignment identity in [0, 1]; 0 when both strings are empty.
double similarity(std::string_view a, std::string_view b, const ScoringScheme& scoring);

struct AffinityParams {
    double beta = 0.6;  // weight of alignment identity against weighted retention

    void validate() const;
};

/// A seed group with its member DNA materialized.
struct GroupProfile {
    std::string group_lcs;
    std::vector<std::string> member_dna;

    bool empty() const { return member_dna.empty(); }
};

GroupProfile make_group_profile(std::span<const Species> species, const SeedGroup& group, const DnaTable& dna);

/// |LCS(group members + species members)| / |group_lcs|; 0 for an empty group LCS.
double merge_retention(std::span<const std::string> species_dna, const GroupProfile& group);

/**
 * beta * similarity(species_lcs, group_lcs)
 *   + (1 - beta) * merge_retention * |group| / total_grouped.
 * An empty group has affinity 0.
 */
double species_affinity(const Species& species, std::span<const std::string> species_dna, const GroupProfile& group,
                        std::size_t total_grouped, const AffinityParams& params, const ScoringScheme& scoring);

struct GroupAssignment {
    std::size_t species_id = 0;
    Label assigned = Label::Genuine;
    double affinity_bot = 0.0;
    double affinity_genuine = 0.0;
    bool tie = false;

    bool operator==(const GroupAssignment&) const = default;
};

/// Assigns each species independently against the static seed groups; ties go to
/// genuine. Output order follows `unlabeled`. Work is spread over `threads` workers.
std::vector<GroupAssignment> classify_species(std::span<const Species> unlabeled, const GroupProfile& bot,
                                              const GroupProfile& genuine, const DnaTable& dna,
                                              const AffinityParams& params, const ScoringScheme& scoring,
                                              std::size_t threads = 1);

}  // namespace dnabot
