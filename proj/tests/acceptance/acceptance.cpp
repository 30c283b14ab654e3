// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "dnabot/genetic_classifier.hpp"
#include "dnabot/lcs_engine.hpp"
#include "dnabot/pipeline.hpp"
#include "dnabot/synth_bench.hpp"

#include "../oracles.hpp"
#include "../test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace dnabot;
namespace fs = std::filesystem;

namespace {

// ============ Pinned tolerances ============

constexpr int kOracleCorpora = 250;              // >= 200
constexpr std::size_t kOracleMaxDocs = 8;
constexpr std::size_t kOracleMaxLength = 30;
constexpr double kOracleBudgetSeconds = 60.0;
constexpr int kMonotonicCorpora = 1000;
constexpr std::size_t kAlignMaxLength = 8;
constexpr std::size_t kAlignExhaustiveLength = 5;  // reference DP is itself checked against full enumeration
constexpr double kPerfBudgetSeconds = 10.0;
constexpr double kGrowthTolerance = 2.0;
constexpr int kPerfRepeats = 5;
constexpr double kMinF1 = 0.95;
constexpr double kEndToEndBudgetSeconds = 30.0;
constexpr double kMetricsDecimals = 5e-4;  // 3 decimal places

const std::string kSymbols = "ATC";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(const std::string& name, const Outcome& o) {
    std::printf("%s  %-32s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
}

void run_criterion(const std::string& name, const std::function<Outcome()>& body) {
    try {
        report(name, body());
    } catch (const std::exception& e) {
        report(name, {false, std::string("exception: ") + e.what()});
    }
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// Every pipeline run made by this binary is checked for the partition and
// substring invariants as soon as it finishes.
struct InvariantLog {
    std::size_t runs = 0;
    std::size_t violations = 0;
    std::string first_problem;
} invariant_log;

RunResult tracked_run(const fs::path& timelines, const std::optional<fs::path>& labels, const fs::path& out,
                      std::size_t threads) {
    RunConfig cfg;
    cfg.output_dir = out.string();
    auto result = run_pipeline(timelines, labels, cfg, threads);
    ++invariant_log.runs;
    if (auto problem = support::check_run_invariants(out); !problem.empty()) {
        if (invariant_log.violations++ == 0) invariant_log.first_problem = out.string() + ": " + problem;
    }
    return result;
}

/// Writes the synthetic dataset for `spec` into `dir`.
void synth_into(const SynthSpec& spec, const fs::path& dir) { stage_synth(spec, dir); }

// ============ LCS oracle equivalence ============

Outcome lcs_oracle_equivalence() {
    const auto start = Clock::now();
    std::mt19937_64 rng(20240601);
    std::size_t points = 0;
    for (int c = 0; c < kOracleCorpora; ++c) {
        const std::size_t n = 2 + rng() % (kOracleMaxDocs - 1);
        std::vector<std::string> docs;
        for (std::size_t i = 0; i < n; ++i) docs.push_back(oracle::random_string(rng, kSymbols, rng() % (kOracleMaxLength + 1)));
        if (std::all_of(docs.begin(), docs.end(), [](const std::string& d) { return d.empty(); })) docs[0] = "A";

        const auto expected = oracle::lcs_curve(docs);
        const CorpusIndex index{std::span<const std::string>(docs)};
        const auto curve = lcs_curve(index);
        for (std::size_t k = 2; k <= n; ++k) {
            ++points;
            if (curve.at(k).length != expected[k - 2].length) {
                return {false, "corpus " + std::to_string(c) + " k=" + std::to_string(k) + ": length " +
                                   std::to_string(curve.at(k).length) + " != oracle " +
                                   std::to_string(expected[k - 2].length)};
            }
        }
        const std::string got = lcs_of_set(std::span<const std::string>(docs));
        if (got != oracle::lcs_of_set(docs)) {
            return {false, "corpus " + std::to_string(c) + ": lcs_of_set '" + got + "' != oracle '" +
                               oracle::lcs_of_set(docs) + "'"};
        }
    }
    const double elapsed = seconds_since(start);
    return {elapsed < kOracleBudgetSeconds, std::to_string(kOracleCorpora) + " corpora, " + std::to_string(points) +
                                                " curve points exact, " + fmt("%.2f s", elapsed) + " (budget " +
                                                fmt("%.0f s)", kOracleBudgetSeconds)};
}

// ============ Curve monotonicity ============

Outcome curve_monotonicity() {
    std::mt19937_64 rng(77001);
    std::size_t violations = 0, checked = 0;
    for (int c = 0; c < kMonotonicCorpora; ++c) {
        const std::size_t n = 2 + rng() % 30;
        std::vector<std::string> docs;
        const std::string shared = oracle::random_string(rng, kSymbols, rng() % 40);
        for (std::size_t i = 0; i < n; ++i) {
            std::string d = oracle::random_string(rng, kSymbols, 1 + rng() % 120);
            if (rng() % 3 == 0) d.insert(rng() % (d.size() + 1), shared);
            docs.push_back(d);
        }
        const auto lengths = lcs_curve(CorpusIndex{std::span<const std::string>(docs)}).lengths();
        for (std::size_t i = 1; i < lengths.size(); ++i) {
            ++checked;
            if (lengths[i - 1] < lengths[i]) ++violations;
        }
    }
    return {violations == 0, std::to_string(kMonotonicCorpora) + " corpora, " + std::to_string(checked) +
                                 " adjacent pairs, " + std::to_string(violations) + " violations"};
}

// ============ Alignment oracle equivalence ============

/// Textbook score-only DP, one full matrix per pair.
int reference_score(const std::string& a, const std::string& b, const ScoringScheme& sc) {
    std::vector<std::vector<int>> m(a.size() + 1, std::vector<int>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) m[i][0] = static_cast<int>(i) * sc.gap;
    for (std::size_t j = 0; j <= b.size(); ++j) m[0][j] = static_cast<int>(j) * sc.gap;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            m[i][j] = std::max({m[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? sc.match : sc.mismatch),
                                m[i - 1][j] + sc.gap, m[i][j - 1] + sc.gap});
        }
    }
    return m[a.size()][b.size()];
}

Outcome alignment_oracle_equivalence() {
    const ScoringScheme sc;
    const oracle::Scoring osc{sc.match, sc.mismatch, sc.gap};

    // Ground the reference DP in full path enumeration first.
    const auto small = oracle::all_strings(kSymbols, kAlignExhaustiveLength);
    std::mt19937_64 rng(4242);
    for (int i = 0; i < 20000; ++i) {
        const auto& a = small[rng() % small.size()];
        const auto& b = small[rng() % small.size()];
        if (reference_score(a, b, sc) != oracle::exhaustive_alignment_score(a, b, osc)) {
            return {false, "reference DP disagrees with enumeration on " + a + "/" + b};
        }
    }

    const auto strings = oracle::all_strings(kSymbols, kAlignMaxLength);
    // Reference scores for every pair share rows along common prefixes of `a`,
    // so one column-major sweep per `b` covers all `a` via the prefix tree order.
    std::size_t pairs = 0;
    for (const auto& b : strings) {
        // rows[i] holds the DP row for strings[i] against b; parent of strings[i]
        // is its prefix without the last character, which precedes it in order.
        std::vector<std::vector<int>> rows(strings.size());
        rows[0].resize(b.size() + 1);
        for (std::size_t j = 0; j <= b.size(); ++j) rows[0][j] = static_cast<int>(j) * sc.gap;
        std::size_t parent = 0;
        for (std::size_t i = 1; i < strings.size(); ++i) {
            const std::string& a = strings[i];
            // all_strings appends alphabet-many children per parent in order.
            parent = (i - 1) / kSymbols.size();
            const auto& up = rows[parent];
            auto& row = rows[i];
            row.resize(b.size() + 1);
            row[0] = static_cast<int>(a.size()) * sc.gap;
            const char c = a.back();
            for (std::size_t j = 1; j <= b.size(); ++j) {
                row[j] = std::max({up[j - 1] + (c == b[j - 1] ? sc.match : sc.mismatch), up[j] + sc.gap,
                                   row[j - 1] + sc.gap});
            }
        }
        for (std::size_t i = 0; i < strings.size(); ++i) {
            const std::string& a = strings[i];
            const auto r = align_global(a, b, sc);
            ++pairs;
            if (r.score != rows[i][b.size()]) {
                return {false, "score mismatch on '" + a + "'/'" + b + "': " + std::to_string(r.score) +
                                   " vs reference " + std::to_string(rows[i][b.size()])};
            }
            // The reported alignment must spell both inputs and earn the reported score.
            int rescored = 0;
            std::string sa, sb;
            std::size_t matches = 0;
            for (std::size_t col = 0; col < r.aligned_a.size(); ++col) {
                const char x = r.aligned_a[col], y = r.aligned_b[col];
                if (x != '-') sa += x;
                if (y != '-') sb += y;
                if (x == '-' || y == '-') {
                    rescored += sc.gap;
                } else {
                    rescored += x == y ? sc.match : sc.mismatch;
                    matches += x == y ? 1 : 0;
                }
            }
            if (sa != a || sb != b || rescored != r.score || matches != r.matches ||
                r.aligned_a.size() != r.aligned_b.size()) {
                return {false, "inconsistent alignment for '" + a + "'/'" + b + "'"};
            }
        }
    }
    return {true, std::to_string(pairs) + " pairs (|a|,|b| <= " + std::to_string(kAlignMaxLength) +
                      ") exact; reference DP checked against enumeration up to length " +
                      std::to_string(kAlignExhaustiveLength)};
}

// ============ Performance ============

std::vector<std::string> perf_corpus(std::size_t accounts, std::size_t length, std::uint64_t seed) {
    SynthSpec spec;
    spec.n_bots = accounts / 10;
    spec.n_genuine = accounts - spec.n_bots;
    spec.seq_length = length;
    spec.rng_seed = seed;
    std::vector<std::string> docs;
    for (const auto& d : encode_timelines(generate_synthetic(spec), DnaAlphabet::standard())) docs.push_back(d.sequence);
    return docs;
}

double best_time(const std::vector<std::string>& docs) {
    double best = std::numeric_limits<double>::max();
    for (int r = 0; r < kPerfRepeats; ++r) {
        const auto start = Clock::now();
        const CorpusIndex index{std::span<const std::string>(docs)};
        const auto curve = lcs_curve(index);
        best = std::min(best, seconds_since(start));
        if (curve.points.size() + 1 != docs.size()) throw std::runtime_error("curve has the wrong size");
    }
    return best;
}

Outcome performance() {
    const auto big = perf_corpus(1000, 1000, 1);
    const auto small = perf_corpus(100, 1000, 1);
    const double t_big = best_time(big);
    const double t_small = best_time(small);
    const double n_big = 1e6, n_small = 1e5;
    const double nlogn_ratio = (n_big * std::log(n_big)) / (n_small * std::log(n_small));
    const double allowed = kGrowthTolerance * nlogn_ratio;
    const double ratio = t_big / t_small;
    const bool ok = t_big < kPerfBudgetSeconds && ratio <= allowed;
    return {ok, "1000x1000 build+curve " + fmt("%.3f s", t_big) + " (budget " + fmt("%.0f s", kPerfBudgetSeconds) +
                    "); 1e5 " + fmt("%.3f s", t_small) + ", growth x" + fmt("%.2f", ratio) + " (allowed x" +
                    fmt("%.1f", allowed) + ")"};
}

// ============ End-to-end planted recovery ============

Outcome planted_recovery() {
    support::TempDir dir("accept_e2e");
    const SynthSpec spec{50, 50, 200, 40, 0.05, 42};
    synth_into(spec, dir.path());
    const auto start = Clock::now();
    const auto result = tracked_run(dir / kTimelinesFile, dir / kLabelsFile, dir.path(), 1);
    const double elapsed = seconds_since(start);
    if (!result.metrics) return {false, "no metrics produced"};

    std::ifstream labels_in(dir / kLabelsFile);
    const LabelMap truth = load_labels(labels_in);
    const auto species = species_from_json(Json::parse(support::read_file(dir / kSpeciesFile)));
    const auto groups = groups_from_json(Json::parse(support::read_file(dir / kGroupsFile)));
    const auto seed_members = group_member_ids(species, groups.g_spambot.species_ids);
    const bool seed_pure = !seed_members.empty() && std::all_of(seed_members.begin(), seed_members.end(), [&](const auto& id) {
        return truth.at(id) == Label::Bot;
    });
    const double f1 = result.metrics->f1;
    const bool ok = f1 >= kMinF1 && seed_pure && elapsed < kEndToEndBudgetSeconds;
    return {ok, "F1 " + fmt("%.3f", f1) + " (min " + fmt("%.2f", kMinF1) + "), bot seed " +
                    std::to_string(seed_members.size()) + " accounts " + (seed_pure ? "all planted" : "NOT pure") +
                    ", " + fmt("%.3f s", elapsed) + " (budget " + fmt("%.0f s)", kEndToEndBudgetSeconds)};
}

// ============ Determinism ============

Outcome determinism() {
    support::TempDir data("accept_det_data");
    synth_into(SynthSpec{50, 50, 200, 40, 0.05, 42}, data.path());
    std::vector<std::unique_ptr<support::TempDir>> runs;  // kept alive until compared
    std::vector<std::map<std::string, std::string>> outputs;
    for (std::size_t threads : {1, 1, 8, 8}) {
        runs.push_back(std::make_unique<support::TempDir>("accept_det_" + std::to_string(threads)));
        tracked_run(data / kTimelinesFile, data / kLabelsFile, runs.back()->path(), threads);
        outputs.push_back(support::artifacts(runs.back()->path()));
    }
    for (std::size_t i = 1; i < outputs.size(); ++i) {
        if (outputs[i] != outputs[0]) return {false, "run " + std::to_string(i) + " differs from run 0"};
    }
    return {true, "4 runs (threads 1,1,8,8), " + std::to_string(outputs[0].size()) +
                      " artifacts byte-identical, manifest excluded"};
}

// ============ Partition and substring invariants ============

Outcome partition_invariants() {
    // A spread of synthetic datasets on top of the runs made by earlier criteria.
    std::mt19937_64 rng(31337);
    for (int i = 0; i < 12; ++i) {
        SynthSpec spec;
        spec.n_bots = 10 + rng() % 40;
        spec.n_genuine = 5 + rng() % 60;
        spec.seq_length = 60 + rng() % 200;
        spec.template_length = 40 + rng() % 20;  // protected core of at least 20
        spec.noise_rate = static_cast<double>(rng() % 30) / 100.0;
        spec.rng_seed = rng();
        support::TempDir dir("accept_inv");
        synth_into(spec, dir.path());
        tracked_run(dir / kTimelinesFile, dir / kLabelsFile, dir.path(), 2);
    }
    if (invariant_log.violations > 0) {
        return {false, std::to_string(invariant_log.violations) + " of " + std::to_string(invariant_log.runs) +
                           " runs violate: " + invariant_log.first_problem};
    }
    return {true, std::to_string(invariant_log.runs) +
                      " pipeline runs: species partition the clustered accounts and every species LCS occurs in "
                      "100% of members"};
}

// ============ Metrics sanity ============

Outcome metrics_sanity() {
    auto near = [](double v, double want) { return std::abs(v - want) < kMetricsDecimals; };
    const auto m = metrics_from_counts(8, 2, 1, 9);
    bool ok = near(m.precision, 0.800) && near(m.recall, 0.889) && near(m.f1, 0.842);

    LabelMap truth, perfect, all_bot;
    for (int i = 0; i < 10; ++i) {
        const std::string id = "a" + std::to_string(i);
        truth[id] = i < 5 ? Label::Bot : Label::Genuine;
        perfect[id] = truth[id];
        all_bot[id] = Label::Bot;
    }
    const auto p = evaluate_metrics(perfect, truth);
    ok = ok && near(p.precision, 1.0) && near(p.recall, 1.0) && near(p.f1, 1.0) && near(p.accuracy, 1.0) &&
         near(p.mcc, 1.0);
    const auto b = evaluate_metrics(all_bot, truth);
    ok = ok && near(b.precision, 0.5) && near(b.recall, 1.0);
    return {ok, "(8,2,1,9) -> precision " + fmt("%.3f", m.precision) + " recall " + fmt("%.3f", m.recall) + " f1 " +
                    fmt("%.3f", m.f1) + "; perfect and all-bot cases to 3 decimals"};
}

}  // namespace

int main() {
    std::printf("dnabot acceptance suite\n");
    run_criterion("lcs-oracle-equivalence", lcs_oracle_equivalence);
    run_criterion("curve-monotonicity", curve_monotonicity);
    run_criterion("alignment-oracle-equivalence", alignment_oracle_equivalence);
    run_criterion("performance", performance);

    run_criterion("end-to-end-planted-recovery", planted_recovery);
    run_criterion("determinism", determinism);
    run_criterion("partition-and-substring", partition_invariants);
    run_criterion("metrics-sanity", metrics_sanity);

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
