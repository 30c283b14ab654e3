#include "dnabot/species_clustering.hpp"

#include "dnabot/error.hpp"

#include <algorithm>

namespace dnabot {

void ClusteringParams::validate() const {
    if (!(drop_threshold > 0.0 && drop_threshold <= 1.0)) {
        throw ConfigError("clustering.drop_threshold must be in (0, 1]");
    }
    if (min_species_size == 0) throw ConfigError("clustering.min_species_size must be positive");
    if (min_lcs_length == 0) throw ConfigError("clustering.min_lcs_length must be positive");
    if (max_rounds == 0) throw ConfigError("clustering.max_rounds must be positive");
}

std::optional<DropPoint> detect_first_drop(const LcsCurve& curve, const ClusteringParams& params) {
    const auto& pts = curve.points;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const std::size_t before = pts[i].length;
        const std::size_t after = pts[i + 1].length;
        if (before == 0 || before < params.min_lcs_length || after >= before) continue;
        const double magnitude = static_cast<double>(before - after) / static_cast<double>(before);
        if (magnitude >= params.drop_threshold) {
            return DropPoint{pts[i].k, before, after, magnitude};
        }
    }
    return std::nullopt;
}

ClusteringResult cluster_into_species(std::span<const DnaSequence> accounts, const ClusteringParams& params) {
    params.validate();
    if (accounts.size() < 2) throw InputError("clustering needs at least 2 accounts");

    ClusteringResult result;
    // Indices into `accounts`, kept ascending so output follows input order.
    std::vector<std::size_t> remaining(accounts.size());
    for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;
    std::vector<std::size_t> leftovers;

    std::size_t round = 0;
    while (round < params.max_rounds && remaining.size() >= 2 * params.min_species_size) {
        std::vector<std::string> docs;
        docs.reserve(remaining.size());
        for (std::size_t idx : remaining) docs.push_back(accounts[idx].sequence);

        const CorpusIndex index(docs);
        ClusteringRound info{round, remaining.size(), lcs_curve(index), std::nullopt};
        info.drop = detect_first_drop(info.curve, params);
        const auto drop = info.drop;
        const auto& point = drop ? info.curve.at(drop->k_star) : info.curve.points.front();
        std::vector<std::size_t> carved_docs = drop ? point.witness_docs : std::vector<std::size_t>{};
        const std::string witness = point.witness;
        result.rounds.push_back(std::move(info));
        if (!drop) break;

        std::vector<std::size_t> carved;
        carved.reserve(carved_docs.size());
        for (std::size_t d : carved_docs) carved.push_back(remaining[d]);

        std::vector<std::size_t> kept;
        kept.reserve(remaining.size() - carved.size());
        std::set_difference(remaining.begin(), remaining.end(), carved.begin(), carved.end(),
                            std::back_inserter(kept));
        remaining = std::move(kept);

        if (carved.size() < params.min_species_size) {
            leftovers.insert(leftovers.end(), carved.begin(), carved.end());
        } else {
            Species s;
            s.species_id = result.species.size();
            for (std::size_t idx : carved) s.member_ids.push_back(accounts[idx].account_id);
            s.species_lcs = witness;
            s.birth_round = round;
            s.drop = drop;
            result.species.push_back(std::move(s));
        }
        ++round;
    }

    leftovers.insert(leftovers.end(), remaining.begin(), remaining.end());
    std::sort(leftovers.begin(), leftovers.end());
    if (!leftovers.empty()) {
        Species terminal;
        terminal.species_id = result.species.size();
        std::vector<std::string> docs;
        for (std::size_t idx : leftovers) {
            terminal.member_ids.push_back(accounts[idx].account_id);
            docs.push_back(accounts[idx].sequence);
        }
        terminal.species_lcs = lcs_of_set(std::span<const std::string>(docs));
        terminal.birth_round = round;
        result.species.push_back(std::move(terminal));
    }
    return result;
}

}  // namespace dnabot
