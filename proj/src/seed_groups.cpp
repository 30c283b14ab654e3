#include "dnabot/seed_groups.hpp"

#include "dnabot/error.hpp"

#include <algorithm>

namespace dnabot {

void SeedParams::validate() const {
    if (!(pareto_fraction > 0.0 && pareto_fraction < 1.0)) {
        throw ConfigError("seeding.pareto_fraction must be in (0, 1)");
    }
    if (bot_min_lcs == 0) throw ConfigError("seeding.bot_min_lcs must be positive");
    if (genuine_max_lcs == 0) throw ConfigError("seeding.genuine_max_lcs must be positive");
    if (genuine_max_lcs >= bot_min_lcs) {
        throw ConfigError("seeding.genuine_max_lcs must be smaller than seeding.bot_min_lcs");
    }
}

std::size_t species_impact(const Species& species) {
    return species.member_ids.size() * species.species_lcs.size();
}

std::vector<std::string> group_member_ids(std::span<const Species> species, std::span<const std::size_t> ids) {
    std::vector<std::string> members;
    for (std::size_t id : ids) {
        auto it = std::find_if(species.begin(), species.end(), [&](const Species& s) { return s.species_id == id; });
        if (it == species.end()) throw InputError("unknown species id " + std::to_string(id));
        members.insert(members.end(), it->member_ids.begin(), it->member_ids.end());
    }
    return members;
}

namespace {

std::string group_lcs(std::span<const Species> species, std::span<const std::size_t> ids, const DnaTable& dna) {
    if (ids.empty()) return {};
    std::vector<std::string> docs;
    for (const auto& id : group_member_ids(species, ids)) docs.push_back(dna.at(id));
    if (docs.empty()) return {};
    return lcs_of_set(std::span<const std::string>(docs));
}

}  // namespace

InitialGroups form_initial_groups(std::span<const Species> species, const DnaTable& dna,
                                  std::size_t total_accounts, const SeedParams& params) {
    params.validate();
    if (species.empty()) throw InputError("no species to seed from");

    const double floor = params.pareto_fraction * static_cast<double>(total_accounts);
    const Species* best_any = nullptr;
    const Species* best_pareto = nullptr;
    for (const auto& s : species) {
        if (s.species_lcs.size() < params.bot_min_lcs) continue;
        const auto impact = species_impact(s);
        if (best_any == nullptr || impact > species_impact(*best_any)) best_any = &s;
        if (static_cast<double>(s.member_ids.size()) >= floor &&
            (best_pareto == nullptr || impact > species_impact(*best_pareto))) {
            best_pareto = &s;
        }
    }
    if (best_any == nullptr) {
        throw PipelineError("no bot seed: no species has an LCS of at least " + std::to_string(params.bot_min_lcs) +
                            " characters");
    }

    InitialGroups groups;
    const Species* seed = best_pareto;
    if (seed == nullptr) {
        seed = best_any;
        groups.warnings.push_back("no species holds " + std::to_string(params.pareto_fraction) +
                                  " of all accounts; bot seed is species " + std::to_string(seed->species_id) +
                                  " by impact alone");
    }
    groups.g_spambot.species_ids.push_back(seed->species_id);

    std::vector<const Species*> unlabeled;
    for (const auto& s : species) {
        if (&s == seed) continue;
        if (s.species_lcs.size() <= params.genuine_max_lcs) {
            groups.g_genuine.species_ids.push_back(s.species_id);
        } else {
            unlabeled.push_back(&s);
        }
    }
    std::stable_sort(unlabeled.begin(), unlabeled.end(), [](const Species* a, const Species* b) {
        return species_impact(*a) > species_impact(*b);
    });
    for (const Species* s : unlabeled) groups.unlabeled.push_back(s->species_id);

    if (groups.g_genuine.empty()) {
        groups.warnings.push_back("genuine seed group is empty; genuine affinities will be 0");
    }

    groups.g_spambot.group_lcs = group_lcs(species, groups.g_spambot.species_ids, dna);
    groups.g_genuine.group_lcs = group_lcs(species, groups.g_genuine.species_ids, dna);
    return groups;
}

}  // namespace dnabot
