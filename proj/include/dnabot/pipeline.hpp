#pragma once

#include "dnabot/config.hpp"
#include "dnabot/genetic_classifier.hpp"
#include "dnabot/lcs_engine.hpp"
#include "dnabot/seed_groups.hpp"
#include "dnabot/species_clustering.hpp"
#include "dnabot/synth_bench.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dnabot {

namespace fs = std::filesystem;

inline constexpr const char* kVersion = "1.0.0";

// Artifact names inside a run directory.
inline constexpr const char* kTimelinesFile = "timelines.jsonl";
inline constexpr const char* kLabelsFile = "labels.csv";
inline constexpr const char* kDnaFile = "dna.tsv";
inline constexpr const char* kQuarantineFile = "quarantine.tsv";
inline constexpr const char* kCurveCsvFile = "curve.csv";
inline constexpr const char* kCurveJsonFile = "curve.json";
inline constexpr const char* kCurvesDir = "curves";
inline constexpr const char* kSpeciesFile = "species.json";
inline constexpr const char* kGroupsFile = "groups.json";
inline constexpr const char* kAssignmentsFile = "assignments.json";
inline constexpr const char* kPredictionsFile = "predictions.csv";
inline constexpr const char* kMetricsFile = "metrics.json";
inline constexpr const char* kManifestFile = "manifest.json";

/// Non-fatal notes collected across stages.
struct Diagnostics {
    std::vector<std::string> warnings;
};

// ============================================================================
// Artifact formats
// ============================================================================

/// "k,lcs_length,witness_doc_count" header plus one row per k.
std::string curve_to_csv(const LcsCurve& curve);
Json curve_to_json(const LcsCurve& curve);

Json species_to_json(const std::vector<Species>& species, const ClusteringParams& params);
std::vector<Species> species_from_json(const Json& doc);

Json groups_to_json(const InitialGroups& groups);
InitialGroups groups_from_json(const Json& doc);

Json assignments_to_json(const std::vector<GroupAssignment>& assignments);
Json metrics_to_json(const Metrics& metrics);

/// Per-account labels: seed groups label their species, unlabeled species take
/// their assignment. Rows follow `accounts` order; accounts outside every species
/// are omitted.
std::vector<std::pair<std::string, Label>> account_predictions(const std::vector<DnaSequence>& accounts,
                                                               const std::vector<Species>& species,
                                                               const InitialGroups& groups,
                                                               const std::vector<GroupAssignment>& assignments);
std::string predictions_to_csv(const std::vector<std::pair<std::string, Label>>& predictions);
LabelMap read_predictions(const fs::path& path);

// ============================================================================
// Stages (file in, file out)
// ============================================================================

/// Writes timelines.jsonl and labels.csv.
void stage_synth(const SynthSpec& spec, const fs::path& out_dir);
/// Writes dna.tsv (clusterable accounts) and quarantine.tsv. An input without any
/// record is an InputError.
void stage_encode(const fs::path& timelines, const RunConfig& config, const fs::path& out_dir, Diagnostics& diag);
/// Writes curve.csv and curve.json for the whole DNA file.
void stage_curve(const fs::path& dna, const RunConfig& config, const fs::path& out_dir);
/// Writes species.json and curves/round_NNN.csv.
void stage_cluster(const fs::path& dna, const RunConfig& config, const fs::path& out_dir);
/// Writes groups.json.
void stage_seed(const fs::path& dna, const fs::path& species, const RunConfig& config, const fs::path& out_dir,
                Diagnostics& diag);
/// Writes assignments.json and predictions.csv.
void stage_classify(const fs::path& dna, const fs::path& species, const fs::path& groups, const RunConfig& config,
                    const fs::path& out_dir, std::size_t threads);
/// Writes metrics.json. `quarantine` (a DNA TSV) only contributes the reported count.
Metrics stage_evaluate(const fs::path& predictions, const fs::path& labels, const std::optional<fs::path>& quarantine,
                       const RunConfig& config, const fs::path& out_dir, Diagnostics& diag);

struct RunResult {
    std::optional<Metrics> metrics;
    Diagnostics diagnostics;
};

/// encode -> cluster -> seed -> classify (-> evaluate when labels are given), all
/// into config.output_dir, followed by manifest.json.
RunResult run_pipeline(const fs::path& timelines, const std::optional<fs::path>& labels, const RunConfig& config,
                       std::size_t threads = 1);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const fs::path& path);

}  // namespace dnabot
