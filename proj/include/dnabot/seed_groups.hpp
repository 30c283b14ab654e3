#pragma once

#include "dnabot/dna_codec.hpp"
#include "dnabot/species_clustering.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace dnabot {

struct SeedParams {
    double pareto_fraction = 0.2;     // minimum share of all accounts for the bot seed
    std::size_t bot_min_lcs = 20;     // characters
    std::size_t genuine_max_lcs = 5;  // characters

    /// Throws ConfigError unless 0 < pareto_fraction < 1 and genuine_max_lcs < bot_min_lcs.
    void validate() const;
};

struct SeedGroup {
    std::vector<std::size_t> species_ids;
    std::string group_lcs;  // LCS over every member DNA of the group

    bool empty() const { return species_ids.empty(); }
    bool operator==(const SeedGroup&) const = default;
};

struct InitialGroups {
    SeedGroup g_spambot;
    SeedGroup g_genuine;
    std::vector<std::size_t> unlabeled;  // descending impact
    std::vector<std::string> warnings;

    bool operator==(const InitialGroups&) const = default;
};

/// |members| x |species_lcs|
std::size_t species_impact(const Species& species);

/// All member ids of the given species, in species order.
std::vector<std::string> group_member_ids(std::span<const Species> species, std::span<const std::size_t> ids);

/**
 * Bot seed: the highest-impact species among those with an LCS of at least
 * bot_min_lcs, restricted to species holding at least pareto_fraction of all
 * accounts when any qualifies (otherwise the unrestricted choice, with a
 * warning). Genuine seed: every species whose LCS is at most genuine_max_lcs.
 * Throws PipelineError("no bot seed") when no species reaches bot_min_lcs.
 */
InitialGroups form_initial_groups(std::span<const Species> species, const DnaTable& dna,
                                  std::size_t total_accounts, const SeedParams& params);

}  // namespace dnabot
