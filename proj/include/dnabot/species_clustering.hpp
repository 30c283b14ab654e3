#pragma once

#include "dnabot/dna_codec.hpp"
#include "dnabot/lcs_engine.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dnabot {

struct DropPoint {
    std::size_t k_star = 0;  // last group size before the drop
    std::size_t length_before = 0;
    std::size_t length_after = 0;
    double magnitude = 0.0;  // (before - after) / before

    bool operator==(const DropPoint&) const = default;
};

struct ClusteringParams {
    double drop_threshold = 0.4;
    std::size_t min_species_size = 3;
    std::size_t min_lcs_length = 2;
    std::size_t max_rounds = 64;

    /// Throws ConfigError unless every value is positive and drop_threshold <= 1.
    void validate() const;
};

struct Species {
    std::size_t species_id = 0;
    std::vector<std::string> member_ids;  // in input order
    std::string species_lcs;
    std::size_t birth_round = 0;
    /// Drop that carved this species off; empty for the terminal species.
    std::optional<DropPoint> drop;

    bool terminal() const { return !drop.has_value(); }
    bool operator==(const Species&) const = default;
};

/// One round of the clustering loop, kept for plotting.
struct ClusteringRound {
    std::size_t round = 0;
    std::size_t accounts = 0;
    LcsCurve curve;
    std::optional<DropPoint> drop;
};

struct ClusteringResult {
    std::vector<Species> species;
    std::vector<ClusteringRound> rounds;
};

/// Smallest k with length(k) >= min_lcs_length and a relative drop to k+1 of at
/// least drop_threshold.
std::optional<DropPoint> detect_first_drop(const LcsCurve& curve, const ClusteringParams& params);

/**
 * Repeatedly builds the LCS curve over the remaining accounts, carves off every
 * account containing the witness at the first drop, and recomputes. Stops when
 * no drop is found, fewer than 2 * min_species_size accounts remain, or
 * max_rounds rounds ran; the leftovers (plus any carved group smaller than
 * min_species_size) form one terminal species. Throws InputError for fewer than
 * 2 accounts.
 */
ClusteringResult cluster_into_species(std::span<const DnaSequence> accounts, const ClusteringParams& params);

}  // namespace dnabot
