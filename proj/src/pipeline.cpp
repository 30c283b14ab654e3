#include "dnabot/pipeline.hpp"

#include "dnabot/error.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace dnabot {

namespace {

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Json read_json(const fs::path& path) {
    try {
        return Json::parse(read_text(path));
    } catch (const Json::parse_error& e) {
        throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

/// Writes through a temporary sibling and renames, so a stage never leaves a
/// half-written artifact behind.
void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out.flush()) throw InputError("failed writing '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

void write_json(const fs::path& path, const Json& doc) { write_atomic(path, doc.dump(2) + "\n"); }

std::vector<DnaSequence> load_dna(const fs::path& path, const RunConfig& config) {
    std::istringstream in(read_text(path));
    try {
        return read_dna_file(in, config.alphabet);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

std::size_t read_count(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_unsigned()) {
        throw InputError(std::string("artifact field '") + key + "' must be a non-negative integer");
    }
    return it->get<std::size_t>();
}

std::string read_string(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) throw InputError(std::string("artifact field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::vector<std::size_t> read_ids(const Json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_array()) throw InputError(std::string("artifact field '") + key + "' must be an array");
    std::vector<std::size_t> ids;
    for (const auto& v : *it) {
        if (!v.is_number_unsigned()) throw InputError(std::string("artifact field '") + key + "' holds a non-id");
        ids.push_back(v.get<std::size_t>());
    }
    return ids;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

const char* group_name(Label label) { return label == Label::Bot ? "gSpamBot" : "gGenuine"; }

}  // namespace

std::string sha256_file(const fs::path& path) {
    const std::string data = read_text(path);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw PipelineError("SHA-256 failed for '" + path.string() + "'");
    }
    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof byte, "%02x", digest[i]);
        hex += byte;
    }
    return hex;
}

// ============ Artifact formats ============

std::string curve_to_csv(const LcsCurve& curve) {
    std::string out = "k,lcs_length,witness_doc_count\n";
    for (const auto& p : curve.points) {
        out += std::to_string(p.k) + ',' + std::to_string(p.length) + ',' + std::to_string(p.witness_docs.size()) + '\n';
    }
    return out;
}

Json curve_to_json(const LcsCurve& curve) {
    Json points = Json::array();
    for (const auto& p : curve.points) {
        points.push_back({{"k", p.k}, {"lcs_length", p.length}, {"witness", p.witness}, {"witness_docs", p.witness_docs}});
    }
    return points;
}

Json species_to_json(const std::vector<Species>& species, const ClusteringParams& params) {
    Json out = Json::array();
    for (const auto& s : species) {
        Json drop = nullptr;
        if (s.drop) {
            drop = {{"k_star", s.drop->k_star},
                    {"length_before", s.drop->length_before},
                    {"length_after", s.drop->length_after},
                    {"magnitude", s.drop->magnitude},
                    {"threshold", params.drop_threshold}};
        }
        out.push_back({{"species_id", s.species_id},
                       {"member_ids", s.member_ids},
                       {"species_lcs", s.species_lcs},
                       {"birth_round", s.birth_round},
                       {"terminal", s.terminal()},
                       {"drop", drop}});
    }
    return out;
}

std::vector<Species> species_from_json(const Json& doc) {
    if (!doc.is_array()) throw InputError("species document must be a JSON array");
    std::vector<Species> species;
    std::set<std::string> seen_members;
    for (const auto& j : doc) {
        if (!j.is_object()) throw InputError("species entry must be an object");
        Species s;
        s.species_id = read_count(j, "species_id");
        s.species_lcs = read_string(j, "species_lcs");
        s.birth_round = read_count(j, "birth_round");
        auto members = j.find("member_ids");
        if (members == j.end() || !members->is_array()) throw InputError("species entry without member_ids");
        for (const auto& m : *members) {
            if (!m.is_string()) throw InputError("member id must be a string");
            if (!seen_members.insert(m.get<std::string>()).second) {
                throw InputError("account '" + m.get<std::string>() + "' belongs to two species");
            }
            s.member_ids.push_back(m.get<std::string>());
        }
        if (auto drop = j.find("drop"); drop != j.end() && !drop->is_null()) {
            if (!drop->is_object() || !drop->contains("magnitude") || !(*drop)["magnitude"].is_number()) {
                throw InputError("malformed species drop record");
            }
            s.drop = DropPoint{read_count(*drop, "k_star"), read_count(*drop, "length_before"),
                               read_count(*drop, "length_after"), (*drop)["magnitude"].get<double>()};
        }
        species.push_back(std::move(s));
    }
    return species;
}

Json groups_to_json(const InitialGroups& groups) {
    auto group = [](const SeedGroup& g) { return Json{{"species_ids", g.species_ids}, {"group_lcs", g.group_lcs}}; };
    return Json{{"g_spambot", group(groups.g_spambot)},
                {"g_genuine", group(groups.g_genuine)},
                {"unlabeled", groups.unlabeled},
                {"warnings", groups.warnings}};
}

InitialGroups groups_from_json(const Json& doc) {
    if (!doc.is_object()) throw InputError("groups document must be a JSON object");
    auto group = [&](const char* key) {
        auto it = doc.find(key);
        if (it == doc.end() || !it->is_object()) throw InputError(std::string("groups document lacks '") + key + "'");
        return SeedGroup{read_ids(*it, "species_ids"), read_string(*it, "group_lcs")};
    };
    InitialGroups groups;
    groups.g_spambot = group("g_spambot");
    groups.g_genuine = group("g_genuine");
    groups.unlabeled = read_ids(doc, "unlabeled");
    if (auto w = doc.find("warnings"); w != doc.end() && w->is_array()) {
        for (const auto& s : *w) groups.warnings.push_back(s.get<std::string>());
    }
    return groups;
}

Json assignments_to_json(const std::vector<GroupAssignment>& assignments) {
    Json out = Json::array();
    for (const auto& a : assignments) {
        out.push_back({{"species_id", a.species_id},
                       {"assigned", group_name(a.assigned)},
                       {"affinity_bot", a.affinity_bot},
                       {"affinity_genuine", a.affinity_genuine},
                       {"tie", a.tie}});
    }
    return out;
}

Json metrics_to_json(const Metrics& m) {
    return Json{{"tp", m.tp},
                {"fp", m.fp},
                {"fn", m.fn},
                {"tn", m.tn},
                {"precision", m.precision},
                {"recall", m.recall},
                {"f1", m.f1},
                {"accuracy", m.accuracy},
                {"mcc", m.mcc},
                {"scored", m.scored()},
                {"quarantined", m.quarantined}};
}

std::vector<std::pair<std::string, Label>> account_predictions(const std::vector<DnaSequence>& accounts,
                                                               const std::vector<Species>& species,
                                                               const InitialGroups& groups,
                                                               const std::vector<GroupAssignment>& assignments) {
    std::map<std::size_t, Label> species_label;
    for (auto id : groups.g_spambot.species_ids) species_label[id] = Label::Bot;
    for (auto id : groups.g_genuine.species_ids) species_label[id] = Label::Genuine;
    for (const auto& a : assignments) species_label[a.species_id] = a.assigned;

    std::map<std::string, Label> by_account;
    for (const auto& s : species) {
        auto it = species_label.find(s.species_id);
        if (it == species_label.end()) throw InputError("species " + std::to_string(s.species_id) + " has no label");
        for (const auto& m : s.member_ids) by_account[m] = it->second;
    }
    std::vector<std::pair<std::string, Label>> out;
    for (const auto& dna : accounts) {
        if (auto it = by_account.find(dna.account_id); it != by_account.end()) out.emplace_back(dna.account_id, it->second);
    }
    return out;
}

std::string predictions_to_csv(const std::vector<std::pair<std::string, Label>>& predictions) {
    std::string out = "account_id,predicted_label\n";
    for (const auto& [id, label] : predictions) {
        out += id;
        out += ',';
        out += to_string(label);
        out += '\n';
    }
    return out;
}

LabelMap read_predictions(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::string line;
    std::size_t line_no = 0;
    LabelMap out;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line_no == 1 && line == "account_id,predicted_label")) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InputError("expected 'account_id,predicted_label'", line_no);
        const auto label = parse_label(line.substr(comma + 1));
        if (!label) throw InputError("unknown label '" + line.substr(comma + 1) + "'", line_no);
        if (!out.emplace(line.substr(0, comma), *label).second) {
            throw InputError("duplicate prediction for '" + line.substr(0, comma) + "'", line_no);
        }
    }
    return out;
}

// ============ Stages ============

void stage_synth(const SynthSpec& spec, const fs::path& out_dir) {
    const auto timelines = generate_synthetic(spec);
    std::ostringstream t, l;
    write_timelines(t, timelines);
    write_labels(l, timelines);
    write_atomic(out_dir / kTimelinesFile, t.str());
    write_atomic(out_dir / kLabelsFile, l.str());
}

void stage_encode(const fs::path& timelines, const RunConfig& config, const fs::path& out_dir, Diagnostics& diag) {
    std::istringstream in(read_text(timelines));
    std::vector<AccountTimeline> parsed;
    try {
        parsed = parse_timelines(in, config.alphabet);
    } catch (const InputError& e) {
        throw InputError(timelines.string() + ": " + e.what());
    }
    if (parsed.empty()) throw InputError(timelines.string() + ": no timeline records");

    const auto dna = encode_timelines(parsed, config.alphabet);
    const auto split = split_quarantine(dna, config.min_dna_length);
    if (!split.quarantined.empty()) {
        diag.warnings.push_back(std::to_string(split.quarantined.size()) + " account(s) shorter than " +
                                std::to_string(config.min_dna_length) + " actions quarantined");
    }
    std::ostringstream kept, quarantined;
    write_dna_file(kept, split.kept);
    write_dna_file(quarantined, split.quarantined);
    write_atomic(out_dir / kDnaFile, kept.str());
    write_atomic(out_dir / kQuarantineFile, quarantined.str());
}

void stage_curve(const fs::path& dna, const RunConfig& config, const fs::path& out_dir) {
    const auto seqs = load_dna(dna, config);
    const auto curve = lcs_curve(build_index(seqs));
    write_atomic(out_dir / kCurveCsvFile, curve_to_csv(curve));
    write_json(out_dir / kCurveJsonFile, curve_to_json(curve));
}

void stage_cluster(const fs::path& dna, const RunConfig& config, const fs::path& out_dir) {
    const auto seqs = load_dna(dna, config);
    const auto result = cluster_into_species(seqs, config.clustering);
    fs::remove_all(out_dir / kCurvesDir);
    for (const auto& round : result.rounds) {
        char name[32];
        std::snprintf(name, sizeof name, "round_%03zu.csv", round.round);
        write_atomic(out_dir / kCurvesDir / name, curve_to_csv(round.curve));
    }
    write_json(out_dir / kSpeciesFile, species_to_json(result.species, config.clustering));
}

void stage_seed(const fs::path& dna, const fs::path& species, const RunConfig& config, const fs::path& out_dir,
                Diagnostics& diag) {
    const DnaTable table(load_dna(dna, config));
    const auto sp = species_from_json(read_json(species));
    std::size_t total = 0;
    for (const auto& s : sp) total += s.member_ids.size();
    const auto groups = form_initial_groups(sp, table, total, config.seeding);
    diag.warnings.insert(diag.warnings.end(), groups.warnings.begin(), groups.warnings.end());
    write_json(out_dir / kGroupsFile, groups_to_json(groups));
}

void stage_classify(const fs::path& dna, const fs::path& species, const fs::path& groups, const RunConfig& config,
                    const fs::path& out_dir, std::size_t threads) {
    const auto accounts = load_dna(dna, config);
    const DnaTable table(accounts);
    const auto sp = species_from_json(read_json(species));
    const auto g = groups_from_json(read_json(groups));

    std::vector<Species> unlabeled;
    for (auto id : g.unlabeled) {
        auto it = std::find_if(sp.begin(), sp.end(), [&](const Species& s) { return s.species_id == id; });
        if (it == sp.end()) throw InputError("groups reference unknown species " + std::to_string(id));
        unlabeled.push_back(*it);
    }
    const auto bot = make_group_profile(sp, g.g_spambot, table);
    const auto genuine = make_group_profile(sp, g.g_genuine, table);
    const auto assignments = classify_species(unlabeled, bot, genuine, table, config.affinity, config.scoring, threads);

    write_json(out_dir / kAssignmentsFile, assignments_to_json(assignments));
    write_atomic(out_dir / kPredictionsFile, predictions_to_csv(account_predictions(accounts, sp, g, assignments)));
}

Metrics stage_evaluate(const fs::path& predictions, const fs::path& labels, const std::optional<fs::path>& quarantine,
                       const RunConfig& config, const fs::path& out_dir, Diagnostics& diag) {
    const LabelMap predicted = read_predictions(predictions);
    std::set<std::string> known;
    for (const auto& [id, label] : predicted) known.insert(id);
    std::size_t quarantined = 0;
    if (quarantine) {
        for (const auto& q : load_dna(*quarantine, config)) {
            known.insert(q.account_id);
            ++quarantined;
        }
    }
    std::istringstream in(read_text(labels));
    LabelMap truth;
    try {
        truth = load_labels(in, &known, &diag.warnings);
    } catch (const InputError& e) {
        throw InputError(labels.string() + ": " + e.what());
    }
    const Metrics m = evaluate_metrics(predicted, truth, quarantined);
    write_json(out_dir / kMetricsFile, metrics_to_json(m));
    return m;
}

RunResult run_pipeline(const fs::path& timelines, const std::optional<fs::path>& labels, const RunConfig& config,
                       std::size_t threads) {
    config.validate();
    RunResult result;
    const fs::path out = config.output_dir;
    fs::create_directories(out);

    // Validate labels up front so a bad file fails before any work.
    if (labels) {
        std::istringstream in(read_text(*labels));
        try {
            load_labels(in);
        } catch (const InputError& e) {
            throw InputError(labels->string() + ": " + e.what());
        }
    }

    stage_encode(timelines, config, out, result.diagnostics);
    stage_cluster(out / kDnaFile, config, out);
    stage_seed(out / kDnaFile, out / kSpeciesFile, config, out, result.diagnostics);
    stage_classify(out / kDnaFile, out / kSpeciesFile, out / kGroupsFile, config, out, threads);
    if (labels) {
        result.metrics = stage_evaluate(out / kPredictionsFile, *labels, out / kQuarantineFile, config, out,
                                        result.diagnostics);
    }

    Json inputs = {{"timelines", {{"path", timelines.string()}, {"sha256", sha256_file(timelines)}}}};
    if (labels) inputs["labels"] = {{"path", labels->string()}, {"sha256", sha256_file(*labels)}};

    Json artifacts = Json::object();
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(out)) {
        if (entry.is_regular_file() && entry.path().filename() != kManifestFile) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) artifacts[fs::relative(f, out).generic_string()] = sha256_file(f);

    const Json manifest = {
        {"tool", "dnabot"},
        {"version", kVersion},
        {"json_library", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                             "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"created_at", utc_timestamp()},
        {"threads", threads},
        {"config", config_to_json(config)},
        {"inputs", inputs},
        {"artifacts", artifacts},
        {"warnings", result.diagnostics.warnings},
    };
    write_json(out / kManifestFile, manifest);
    return result;
}

}  // namespace dnabot
