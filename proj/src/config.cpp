#include "dnabot/config.hpp"

#include "dnabot/error.hpp"

namespace dnabot {

void RunConfig::validate() const {
    if (min_dna_length == 0) throw ConfigError("min_dna_length must be positive");
    clustering.validate();
    seeding.validate();
    scoring.validate();
    affinity.validate();
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

Json config_to_json(const RunConfig& config) {
    Json alphabet = Json::object();
    for (const auto& [kind, c] : config.alphabet.mapping()) alphabet[kind.token] = std::string(1, c);
    return Json{
        {"alphabet", alphabet},
        {"min_dna_length", config.min_dna_length},
        {"clustering",
         {{"drop_threshold", config.clustering.drop_threshold},
          {"min_species_size", config.clustering.min_species_size},
          {"min_lcs_length", config.clustering.min_lcs_length},
          {"max_rounds", config.clustering.max_rounds}}},
        {"seeding",
         {{"pareto_fraction", config.seeding.pareto_fraction},
          {"bot_min_lcs", config.seeding.bot_min_lcs},
          {"genuine_max_lcs", config.seeding.genuine_max_lcs}}},
        {"scoring",
         {{"match", config.scoring.match}, {"mismatch", config.scoring.mismatch}, {"gap", config.scoring.gap}}},
        {"affinity", {{"beta", config.affinity.beta}}},
        {"output_dir", config.output_dir},
    };
}

namespace {

void require_object(const Json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError("config: '" + path + "' must be an object");
}

/// Rejects keys of `doc` that do not appear in `reference` (one level).
void reject_unknown(const Json& doc, const Json& reference, const std::string& prefix) {
    for (const auto& [key, value] : doc.items()) {
        if (!reference.contains(key)) throw ConfigError("config: unknown key '" + prefix + key + "'");
    }
}

std::size_t read_count(const Json& j, const std::string& path) {
    if (!j.is_number_unsigned()) throw ConfigError("config: '" + path + "' must be a non-negative integer");
    return j.get<std::size_t>();
}

int read_int(const Json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError("config: '" + path + "' must be an integer");
    return j.get<int>();
}

double read_real(const Json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigError("config: '" + path + "' must be a number");
    return j.get<double>();
}

template <class Fn>
void with_section(const Json& doc, const Json& reference, const char* name, Fn&& fn) {
    auto it = doc.find(name);
    if (it == doc.end()) return;
    require_object(*it, name);
    reject_unknown(*it, reference.at(name), std::string(name) + ".");
    fn(*it);
}

}  // namespace

RunConfig config_from_json(const Json& doc) {
    RunConfig config;
    const Json reference = config_to_json(config);
    require_object(doc, "<root>");
    reject_unknown(doc, reference, "");

    if (auto it = doc.find("alphabet"); it != doc.end()) {
        require_object(*it, "alphabet");
        std::vector<std::pair<ActionKind, char>> mapping;
        for (const auto& [token, value] : it->items()) {
            if (!value.is_string() || value.get<std::string>().size() != 1) {
                throw ConfigError("config: 'alphabet." + token + "' must be a one-character string");
            }
            mapping.emplace_back(ActionKind{token}, value.get<std::string>()[0]);
        }
        config.alphabet = DnaAlphabet(std::move(mapping));
    }
    if (auto it = doc.find("min_dna_length"); it != doc.end()) {
        config.min_dna_length = read_count(*it, "min_dna_length");
    }
    with_section(doc, reference, "clustering", [&](const Json& s) {
        if (s.contains("drop_threshold")) {
            config.clustering.drop_threshold = read_real(s["drop_threshold"], "clustering.drop_threshold");
        }
        if (s.contains("min_species_size")) {
            config.clustering.min_species_size = read_count(s["min_species_size"], "clustering.min_species_size");
        }
        if (s.contains("min_lcs_length")) {
            config.clustering.min_lcs_length = read_count(s["min_lcs_length"], "clustering.min_lcs_length");
        }
        if (s.contains("max_rounds")) config.clustering.max_rounds = read_count(s["max_rounds"], "clustering.max_rounds");
    });
    with_section(doc, reference, "seeding", [&](const Json& s) {
        if (s.contains("pareto_fraction")) {
            config.seeding.pareto_fraction = read_real(s["pareto_fraction"], "seeding.pareto_fraction");
        }
        if (s.contains("bot_min_lcs")) config.seeding.bot_min_lcs = read_count(s["bot_min_lcs"], "seeding.bot_min_lcs");
        if (s.contains("genuine_max_lcs")) {
            config.seeding.genuine_max_lcs = read_count(s["genuine_max_lcs"], "seeding.genuine_max_lcs");
        }
    });
    with_section(doc, reference, "scoring", [&](const Json& s) {
        if (s.contains("match")) config.scoring.match = read_int(s["match"], "scoring.match");
        if (s.contains("mismatch")) config.scoring.mismatch = read_int(s["mismatch"], "scoring.mismatch");
        if (s.contains("gap")) config.scoring.gap = read_int(s["gap"], "scoring.gap");
    });
    with_section(doc, reference, "affinity", [&](const Json& s) {
        if (s.contains("beta")) config.affinity.beta = read_real(s["beta"], "affinity.beta");
    });
    if (auto it = doc.find("output_dir"); it != doc.end()) {
        if (!it->is_string()) throw ConfigError("config: 'output_dir' must be a string");
        config.output_dir = it->get<std::string>();
    }

    config.validate();
    return config;
}

void apply_override(Json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("override '" + std::string(assignment) + "' must look like key.path=value");
    }
    const std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));

    Json value;
    try {
        value = Json::parse(raw);
    } catch (const Json::parse_error&) {
        value = raw;
    }

    Json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ConfigError("override '" + key + "' has an empty path component");
        if (!node->is_object()) throw ConfigError("override '" + key + "' descends into a non-object");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        if (node->is_null()) *node = Json::object();
        start = dot + 1;
    }
}

}  // namespace dnabot
