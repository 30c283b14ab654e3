#include "dnabot/error.hpp"
#include "dnabot/synth_bench.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

using namespace dnabot;

namespace {

std::vector<std::string> bot_dna(const std::vector<AccountTimeline>& timelines) {
    std::vector<std::string> out;
    for (const auto& t : timelines) {
        if (t.label == Label::Bot) out.push_back(encode_timeline(t, DnaAlphabet::standard()).sequence);
    }
    return out;
}

}  // namespace

TEST_CASE("generate_synthetic bookkeeping") {
    const SynthSpec spec{5, 5, 100, 40, 0.05, 42};
    const auto timelines = generate_synthetic(spec);
    REQUIRE(timelines.size() == 10);
    std::size_t bots = 0;
    std::set<std::string> ids;
    for (const auto& t : timelines) {
        REQUIRE(t.label.has_value());
        bots += *t.label == Label::Bot ? 1 : 0;
        CHECK(t.actions.size() == 100);
        ids.insert(t.account_id);
    }
    CHECK(bots == 5);
    CHECK(ids.size() == 10);
    CHECK(timelines[0].account_id == "acct_00000");

    const auto again = generate_synthetic(spec);
    for (std::size_t i = 0; i < timelines.size(); ++i) {
        CHECK(again[i].account_id == timelines[i].account_id);
        CHECK(again[i].actions == timelines[i].actions);
        CHECK(again[i].label == timelines[i].label);
    }

    SynthSpec other = spec;
    other.rng_seed = 43;
    CHECK(encode_timelines(generate_synthetic(other), DnaAlphabet::standard())[0].sequence !=
          encode_timelines(timelines, DnaAlphabet::standard())[0].sequence);
}

TEST_CASE("generate_synthetic validation and degenerate specs") {
    CHECK_THROWS_AS(generate_synthetic({1, 1, 10, 20, 0.0, 1}), ConfigError);
    CHECK_THROWS_AS(generate_synthetic({1, 1, 10, 5, 1.0, 1}), ConfigError);
    CHECK_THROWS_AS(generate_synthetic({1, 1, 10, 5, -0.1, 1}), ConfigError);
    CHECK(generate_synthetic({0, 0, 10, 5, 0.1, 1}).empty());
    CHECK(generate_synthetic({0, 3, 10, 5, 0.1, 1}).size() == 3);
    CHECK(generate_synthetic({2, 0, 10, 10, 0.1, 1}).size() == 2);
}

TEST_CASE("bots share the protected core") {
    const SynthSpec spec{5, 5, 100, 40, 0.05, 42};
    const auto bots = bot_dna(generate_synthetic(spec));
    for (std::size_t i = 0; i < bots.size(); ++i) {
        for (std::size_t j = i + 1; j < bots.size(); ++j) {
            CHECK(oracle::lcs_of_set({bots[i], bots[j]}).size() >= 20);
        }
    }
    CHECK(oracle::lcs_of_set(bots).size() >= spec.protected_core_length());
}

TEST_CASE("planted-structure guarantee on small random specs") {
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 30; ++iter) {
        SynthSpec spec;
        spec.n_bots = 2 + rng() % 4;
        spec.n_genuine = rng() % 3;
        spec.seq_length = 10 + rng() % 40;
        spec.template_length = 1 + rng() % spec.seq_length;
        spec.noise_rate = static_cast<double>(rng() % 50) / 100.0;
        spec.rng_seed = rng();
        const auto bots = bot_dna(generate_synthetic(spec));
        REQUIRE(bots.size() == spec.n_bots);
        CHECK(oracle::lcs_of_set(bots).size() >= spec.protected_core_length());
    }
}

TEST_CASE("metrics examples") {
    auto m = metrics_from_counts(8, 2, 1, 9);
    CHECK(std::abs(m.precision - 0.800) < 5e-4);
    CHECK(std::abs(m.recall - 0.889) < 5e-4);
    CHECK(std::abs(m.f1 - 0.842) < 5e-4);
    CHECK(m.scored() == 20);
    CHECK(metrics_summary(m).find("precision=0.800 recall=0.889 f1=0.842") == 0);

    m = metrics_from_counts(5, 0, 0, 5);
    CHECK(m.precision == 1.0);
    CHECK(m.recall == 1.0);
    CHECK(m.f1 == 1.0);
    CHECK(m.accuracy == 1.0);
    CHECK(m.mcc == doctest::Approx(1.0));

    const LabelMap truth{{"a", Label::Bot}, {"b", Label::Bot}, {"c", Label::Genuine}, {"d", Label::Genuine}};
    const LabelMap all_bot{{"a", Label::Bot}, {"b", Label::Bot}, {"c", Label::Bot}, {"d", Label::Bot}};
    m = evaluate_metrics(all_bot, truth, 3);
    CHECK(m.precision == doctest::Approx(0.5));
    CHECK(m.recall == 1.0);
    CHECK(m.quarantined == 3);
    CHECK(m.scored() == 4);

    CHECK_THROWS_AS(evaluate_metrics({{"zz", Label::Bot}}, truth), InputError);
    m = metrics_from_counts(0, 0, 0, 0);
    CHECK(m.f1 == 0.0);
    CHECK(m.mcc == 0.0);
}

TEST_CASE("metric bounds and definitions") {
    std::mt19937_64 rng(3);
    for (int iter = 0; iter < 2000; ++iter) {
        const std::size_t tp = rng() % 20, fp = rng() % 20, fn = rng() % 20, tn = rng() % 20;
        const auto m = metrics_from_counts(tp, fp, fn, tn);
        for (double v : {m.precision, m.recall, m.f1, m.accuracy}) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
        CHECK(m.mcc >= -1.0 - 1e-12);
        CHECK(m.mcc <= 1.0 + 1e-12);
        if (m.precision > 0.0 && m.recall > 0.0) {
            CHECK(m.f1 == doctest::Approx(2.0 / (1.0 / m.precision + 1.0 / m.recall)));
        }
        if (tp + fp + fn + tn > 0) {
            CHECK(m.accuracy == doctest::Approx(static_cast<double>(tp + tn) / static_cast<double>(tp + fp + fn + tn)));
        }
    }
}
