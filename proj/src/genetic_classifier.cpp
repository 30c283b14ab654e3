#include "dnabot/genetic_classifier.hpp"

#include "dnabot/error.hpp"
#include "dnabot/lcs_engine.hpp"
#include "dnabot/parallel.hpp"

#include <algorithm>

namespace dnabot {

void ScoringScheme::validate() const {
    if (match <= 0) throw ConfigError("scoring.match must be positive");
    if (mismatch > 0) throw ConfigError("scoring.mismatch must not be positive");
    if (gap >= 0) throw ConfigError("scoring.gap must be negative");
}

void AffinityParams::validate() const {
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("affinity.beta must be in [0, 1]");
}

// ============ Alignment ============

AlignmentResult align_global(std::string_view a, std::string_view b, const ScoringScheme& scoring) {
    const std::size_t rows = a.size() + 1;
    const std::size_t cols = b.size() + 1;
    // Reused across calls; scoring many short pairs is the hot path.
    thread_local std::vector<int> dp;
    dp.resize(rows * cols);
    auto at = [&](std::size_t i, std::size_t j) -> int& { return dp[i * cols + j]; };

    for (std::size_t i = 0; i < rows; ++i) at(i, 0) = static_cast<int>(i) * scoring.gap;
    for (std::size_t j = 0; j < cols; ++j) at(0, j) = static_cast<int>(j) * scoring.gap;
    for (std::size_t i = 1; i < rows; ++i) {
        for (std::size_t j = 1; j < cols; ++j) {
            const int diag = at(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? scoring.match : scoring.mismatch);
            const int up = at(i - 1, j) + scoring.gap;
            const int left = at(i, j - 1) + scoring.gap;
            at(i, j) = std::max({diag, up, left});
        }
    }

    AlignmentResult result;
    result.score = at(rows - 1, cols - 1);
    std::size_t i = a.size();
    std::size_t j = b.size();
    while (i > 0 || j > 0) {
        const int here = at(i, j);
        if (i > 0 && j > 0 && here == at(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? scoring.match : scoring.mismatch)) {
            result.aligned_a.push_back(a[i - 1]);
            result.aligned_b.push_back(b[j - 1]);
            if (a[i - 1] == b[j - 1]) ++result.matches;
            --i;
            --j;
        } else if (i > 0 && here == at(i - 1, j) + scoring.gap) {
            result.aligned_a.push_back(a[i - 1]);
            result.aligned_b.push_back('-');
            --i;
        } else {
            result.aligned_a.push_back('-');
            result.aligned_b.push_back(b[j - 1]);
            --j;
        }
    }
    std::reverse(result.aligned_a.begin(), result.aligned_a.end());
    std::reverse(result.aligned_b.begin(), result.aligned_b.end());
    result.aligned_length = result.aligned_a.size();
    result.identity = result.aligned_length == 0
                          ? 0.0
                          : static_cast<double>(result.matches) / static_cast<double>(result.aligned_length);
    return result;
}

double similarity(std::string_view a, std::string_view b, const ScoringScheme& scoring) {
    return align_global(a, b, scoring).identity;
}

// ============ Affinity ============

GroupProfile make_group_profile(std::span<const Species> species, const SeedGroup& group, const DnaTable& dna) {
    GroupProfile profile;
    profile.group_lcs = group.group_lcs;
    for (const auto& id : group_member_ids(species, group.species_ids)) profile.member_dna.push_back(dna.at(id));
    return profile;
}

double merge_retention(std::span<const std::string> species_dna, const GroupProfile& group) {
    if (group.group_lcs.empty()) return 0.0;
    std::vector<std::string> docs(group.member_dna.begin(), group.member_dna.end());
    docs.insert(docs.end(), species_dna.begin(), species_dna.end());
    if (docs.empty()) return 0.0;
    const std::string merged = lcs_of_set(std::span<const std::string>(docs));
    return static_cast<double>(merged.size()) / static_cast<double>(group.group_lcs.size());
}

double species_affinity(const Species& species, std::span<const std::string> species_dna, const GroupProfile& group,
                        std::size_t total_grouped, const AffinityParams& params, const ScoringScheme& scoring) {
    if (group.empty() || total_grouped == 0) return 0.0;
    const double sim = similarity(species.species_lcs, group.group_lcs, scoring);
    const double weight = static_cast<double>(group.member_dna.size()) / static_cast<double>(total_grouped);
    return params.beta * sim + (1.0 - params.beta) * merge_retention(species_dna, group) * weight;
}

std::vector<GroupAssignment> classify_species(std::span<const Species> unlabeled, const GroupProfile& bot,
                                              const GroupProfile& genuine, const DnaTable& dna,
                                              const AffinityParams& params, const ScoringScheme& scoring,
                                              std::size_t threads) {
    params.validate();
    scoring.validate();
    const std::size_t total_grouped = bot.member_dna.size() + genuine.member_dna.size();

    std::vector<GroupAssignment> out(unlabeled.size());
    parallel_for(unlabeled.size(), threads, [&](std::size_t i) {
        const Species& s = unlabeled[i];
        std::vector<std::string> member_dna;
        member_dna.reserve(s.member_ids.size());
        for (const auto& id : s.member_ids) member_dna.push_back(dna.at(id));

        GroupAssignment& a = out[i];
        a.species_id = s.species_id;
        a.affinity_bot = species_affinity(s, member_dna, bot, total_grouped, params, scoring);
        a.affinity_genuine = species_affinity(s, member_dna, genuine, total_grouped, params, scoring);
        a.tie = a.affinity_bot == a.affinity_genuine;
        a.assigned = a.affinity_bot > a.affinity_genuine ? Label::Bot : Label::Genuine;
    });
    return out;
}

}  // namespace dnabot
