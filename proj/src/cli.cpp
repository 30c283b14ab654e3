#include "dnabot/cli.hpp"

#include "dnabot/config.hpp"
#include "dnabot/error.hpp"
#include "dnabot/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace dnabot {

namespace {

struct CommonOptions {
    std::optional<std::uint64_t> seed;
    std::size_t threads = 1;
    std::string config_path;
    std::string out;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, CommonOptions& c) {
    sub->add_option("--seed", c.seed, "Random seed (synthetic generation)");
    sub->add_option("--threads", c.threads, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);
    sub->add_option("--config", c.config_path, "JSON config document");
    sub->add_option("--out", c.out, "Output directory (overrides output_dir)");
    sub->add_option("--set", c.overrides, "Config override key.path=value (repeatable)");
}

RunConfig resolve_config(const CommonOptions& c) {
    Json doc = Json::object();
    if (!c.config_path.empty()) {
        std::ifstream in(c.config_path);
        if (!in) throw ConfigError("cannot open config '" + c.config_path + "'");
        try {
            doc = Json::parse(in);
        } catch (const Json::parse_error& e) {
            throw ConfigError("config '" + c.config_path + "' is not valid JSON: " + e.what());
        }
    }
    for (const auto& o : c.overrides) apply_override(doc, o);
    if (!c.out.empty()) doc["output_dir"] = c.out;
    return config_from_json(doc);
}

void print_warnings(const Diagnostics& diag) {
    for (const auto& w : diag.warnings) std::cerr << "warning: " << w << '\n';
}

fs::path or_default(const std::string& given, const fs::path& dir, const char* name) {
    return given.empty() ? dir / name : fs::path(given);
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"Hidden social bot detection from digital DNA timelines", "dnabot"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    CommonOptions common;

    SynthSpec synth_spec;
    auto* synth = app.add_subcommand("synth", "Generate a labeled synthetic dataset");
    synth->add_option("--n-bots", synth_spec.n_bots, "Planted bot accounts")->capture_default_str();
    synth->add_option("--n-genuine", synth_spec.n_genuine, "Genuine accounts")->capture_default_str();
    synth->add_option("--length", synth_spec.seq_length, "Actions per account")->capture_default_str();
    synth->add_option("--template", synth_spec.template_length, "Bot template length")->capture_default_str();
    synth->add_option("--noise", synth_spec.noise_rate, "Substitution rate outside the protected core")
        ->capture_default_str();
    add_common(synth, common);

    std::string timelines, labels, dna, species, groups, predictions, quarantine;

    auto* encode = app.add_subcommand("encode", "Encode timelines into DNA (dna.tsv, quarantine.tsv)");
    encode->add_option("--timelines", timelines, "Timelines JSONL")->required();
    add_common(encode, common);

    auto* curve = app.add_subcommand("curve", "LCS curve of a DNA file (curve.csv, curve.json)");
    curve->add_option("--dna", dna, "DNA TSV (default <out>/dna.tsv)");
    add_common(curve, common);

    auto* cluster = app.add_subcommand("cluster", "Cluster accounts into species (species.json, curves/)");
    cluster->add_option("--dna", dna, "DNA TSV (default <out>/dna.tsv)");
    add_common(cluster, common);

    auto* seed = app.add_subcommand("seed", "Form the initial bot and genuine groups (groups.json)");
    seed->add_option("--dna", dna, "DNA TSV (default <out>/dna.tsv)");
    seed->add_option("--species", species, "Species JSON (default <out>/species.json)");
    add_common(seed, common);

    auto* classify = app.add_subcommand("classify", "Classify unlabeled species (assignments.json, predictions.csv)");
    classify->add_option("--dna", dna, "DNA TSV (default <out>/dna.tsv)");
    classify->add_option("--species", species, "Species JSON (default <out>/species.json)");
    classify->add_option("--groups", groups, "Groups JSON (default <out>/groups.json)");
    add_common(classify, common);

    auto* evaluate = app.add_subcommand("evaluate", "Score predictions against labels (metrics.json)");
    evaluate->add_option("--predictions", predictions, "Predictions CSV (default <out>/predictions.csv)");
    evaluate->add_option("--labels", labels, "Ground-truth labels CSV")->required();
    evaluate->add_option("--quarantine", quarantine, "Quarantined DNA TSV, counted but not scored");
    add_common(evaluate, common);

    auto* run = app.add_subcommand("run", "Run every stage end to end");
    run->add_option("--timelines", timelines, "Timelines JSONL")->required();
    run->add_option("--labels", labels, "Ground-truth labels CSV (enables metrics.json)");
    add_common(run, common);

    bool defaults_only = false;
    auto* config = app.add_subcommand("config", "Print the effective config");
    config->add_flag("--defaults", defaults_only, "Print built-in defaults only");
    add_common(config, common);

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*config) {
            const RunConfig cfg = defaults_only ? RunConfig{} : resolve_config(common);
            std::cout << config_to_json(cfg).dump(2) << '\n';
            return kExitOk;
        }

        const RunConfig cfg = resolve_config(common);
        const fs::path out = cfg.output_dir;
        Diagnostics diag;

        if (*synth) {
            if (common.seed) synth_spec.rng_seed = *common.seed;
            stage_synth(synth_spec, out);
        } else if (*encode) {
            stage_encode(timelines, cfg, out, diag);
        } else if (*curve) {
            stage_curve(or_default(dna, out, kDnaFile), cfg, out);
        } else if (*cluster) {
            stage_cluster(or_default(dna, out, kDnaFile), cfg, out);
        } else if (*seed) {
            stage_seed(or_default(dna, out, kDnaFile), or_default(species, out, kSpeciesFile), cfg, out, diag);
        } else if (*classify) {
            stage_classify(or_default(dna, out, kDnaFile), or_default(species, out, kSpeciesFile),
                           or_default(groups, out, kGroupsFile), cfg, out, common.threads);
        } else if (*evaluate) {
            std::optional<fs::path> q;
            if (!quarantine.empty()) q = quarantine;
            const Metrics m = stage_evaluate(or_default(predictions, out, kPredictionsFile), labels, q, cfg, out, diag);
            std::cout << metrics_summary(m) << '\n';
        } else if (*run) {
            std::optional<fs::path> l;
            if (!labels.empty()) l = labels;
            const RunResult result = run_pipeline(timelines, l, cfg, common.threads);
            diag = result.diagnostics;
            if (result.metrics) std::cout << metrics_summary(*result.metrics) << '\n';
        }
        print_warnings(diag);
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const PipelineError& e) {
        std::cerr << "pipeline error: " << e.what() << '\n';
        return kExitPipeline;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace dnabot
