#pragma once

#include "dnabot/dna_codec.hpp"
#include "dnabot/genetic_classifier.hpp"
#include "dnabot/seed_groups.hpp"
#include "dnabot/species_clustering.hpp"

#include <json.hpp>

#include <cstddef>
#include <string>
#include <string_view>

namespace dnabot {

using Json = nlohmann::ordered_json;

struct RunConfig {
    DnaAlphabet alphabet = DnaAlphabet::standard();
    std::size_t min_dna_length = 10;
    ClusteringParams clustering;
    SeedParams seeding;
    ScoringScheme scoring;
    AffinityParams affinity;
    std::string output_dir = "run";

    /// Throws ConfigError when any nested parameter set is invalid.
    void validate() const;
};

/**
 * Config document layout (every key optional, unknown keys rejected):
 *
 *   { "alphabet": {"tweet": "A", "retweet": "T", "reply": "C"},
 *     "min_dna_length": 10,
 *     "clustering": {"drop_threshold": 0.4, "min_species_size": 3, "min_lcs_length": 2, "max_rounds": 64},
 *     "seeding": {"pareto_fraction": 0.2, "bot_min_lcs": 20, "genuine_max_lcs": 5},
 *     "scoring": {"match": 2, "mismatch": -1, "gap": -2},
 *     "affinity": {"beta": 0.6},
 *     "output_dir": "run" }
 */
Json config_to_json(const RunConfig& config);
RunConfig config_from_json(const Json& doc);

/// Applies "dotted.key=value" to a config document. The value is parsed as JSON
/// when possible and taken as a string otherwise.
void apply_override(Json& doc, std::string_view assignment);

}  // namespace dnabot
