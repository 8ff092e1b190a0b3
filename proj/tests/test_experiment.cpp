#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "powerlab/errors.hpp"
#include "powerlab/experiment.hpp"
#include "powerlab/rng.hpp"

using namespace powerlab;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.model_pair = "er_sbm";
    cfg.n = 300;
    cfg.a = 18.0;
    cfg.b = 2.0;
    cfg.r = 2;
    cfg.m = 4;
    cfg.methods = {"powered", "nonbacktracking", "cycle_count"};
    cfg.trials = 6;
    cfg.calibrate_trials = 10;
    cfg.quantile = 0.9;
    cfg.master_seed = 606060;
    cfg.threads = 1;
    return cfg;
}

}  // namespace

TEST_CASE("config json echo reloads equal") {
    ExperimentConfig cfg = small_config();
    cfg.c = 4;
    cfg.adversary = "uniform";
    cfg.record_wall_ms = true;
    nlohmann::json j = cfg.to_json();
    ExperimentConfig back = config_from_json(j);
    CHECK(back.to_json() == j);
    CHECK(back.model_pair == cfg.model_pair);
    CHECK(back.methods == cfg.methods);
    CHECK(back.master_seed == cfg.master_seed);
    CHECK(back.quantile == cfg.quantile);
    CHECK(back.c == 4);
}

TEST_CASE("config parsing is strict") {
    nlohmann::json j = small_config().to_json();
    j["model_par"] = "er_sbm";
    CHECK_THROWS_AS(config_from_json(j), validation_error);

    nlohmann::json bad_type = small_config().to_json();
    bad_type["trials"] = "many";
    CHECK_THROWS_AS(config_from_json(bad_type), validation_error);
}

TEST_CASE("config validation") {
    ExperimentConfig cfg = small_config();
    cfg.quantile = 1.2;
    CHECK_THROWS_AS(cfg.validate(), validation_error);

    cfg = small_config();
    cfg.trials = 0;
    CHECK_THROWS_AS(cfg.validate(), validation_error);

    cfg = small_config();
    cfg.methods = {"powered", "fourier"};
    CHECK_THROWS_AS(cfg.validate(), validation_error);

    cfg = small_config();
    cfg.model_pair = "rr_rsbm";
    cfg.a = 6.5;  // regular models need integer degrees
    cfg.b = 2.0;
    cfg.d = 8;
    CHECK_THROWS_AS(cfg.validate(), validation_error);

    cfg = small_config();
    cfg.model_pair = "er_rr";
    CHECK_THROWS_AS(cfg.validate(), validation_error);

    cfg = small_config();
    cfg.adversary = "stealth";
    cfg.c = 3;
    CHECK_THROWS_AS(cfg.validate(), validation_error);
}

TEST_CASE("experiment output is deterministic and thread-invariant") {
    ExperimentConfig cfg = small_config();
    ExperimentReport first = run_distinguish_experiment(cfg);
    ExperimentReport again = run_distinguish_experiment(cfg);
    CHECK(first.to_csv() == again.to_csv());
    CHECK(first.to_json() == again.to_json());

    ExperimentConfig threaded = cfg;
    threaded.threads = 4;
    ExperimentReport pooled = run_distinguish_experiment(threaded);
    CHECK(pooled.to_csv() == first.to_csv());
}

TEST_CASE("trial rows follow the seeded coin and score correctly") {
    ExperimentConfig cfg = small_config();
    ExperimentReport rep = run_distinguish_experiment(cfg);
    REQUIRE(rep.errors.empty());
    REQUIRE(rep.rows.size() == static_cast<std::size_t>(cfg.trials * 3));

    constexpr std::uint64_t kTagTrial = 0x747269616C;
    constexpr std::uint64_t kTagCoin = 0x636F696E;
    for (std::int64_t t = 0; t < cfg.trials; ++t) {
        std::uint64_t trial_seed = derive_seed(cfg.master_seed, kTagTrial, t);
        bool structured = RngStream(derive_seed(trial_seed, kTagCoin)).bit();
        const TrialRow& row = rep.rows[static_cast<std::size_t>(t * 3)];
        CHECK(row.trial == t);
        CHECK(row.seed == trial_seed);
        CHECK(row.truth == (structured ? "sbm" : "er"));
        CHECK(row.wall_ms == -1);
        // correct == decision matches truth arm
        bool said_structured = row.decision == "structured";
        CHECK(row.correct == (said_structured == structured));
    }

    // Method blocks appear in config order per trial.
    CHECK(rep.rows[0].method == "powered");
    CHECK(rep.rows[1].method == "nonbacktracking");
    CHECK(rep.rows[2].method == "cycle_count");

    // Per-method accuracy equals its row average.
    for (const std::string& m : cfg.methods) {
        double hits = 0, total = 0;
        for (const TrialRow& row : rep.rows)
            if (row.method == m) {
                total += 1.0;
                hits += row.correct ? 1.0 : 0.0;
            }
        CHECK(rep.accuracy.at(m) == doctest::Approx(hits / total));
    }

    CHECK(rep.powered_threshold_used.has_value());
    CHECK(rep.cycle_threshold_used.has_value());

    // Overlap is reported only for powered rows on structured draws.
    for (const TrialRow& row : rep.rows) {
        if (row.method == "powered" && row.truth == "sbm") CHECK(row.overlap >= 0.0);
        if (row.method != "powered") CHECK(row.overlap == -1.0);
    }
}

TEST_CASE("explicit thresholds skip calibration") {
    ExperimentConfig cfg = small_config();
    cfg.methods = {"powered"};
    cfg.powered_threshold = 1e9;
    ExperimentReport rep = run_distinguish_experiment(cfg);
    REQUIRE(rep.powered_threshold_used.has_value());
    CHECK(*rep.powered_threshold_used == 1e9);
    for (const TrialRow& row : rep.rows) CHECK(row.decision == "null");
}

TEST_CASE("csv shape is stable") {
    ExperimentConfig cfg = small_config();
    cfg.methods = {"powered"};
    cfg.trials = 3;
    ExperimentReport rep = run_distinguish_experiment(cfg);
    std::string csv = rep.to_csv();
    std::size_t lines = 0;
    for (char ch : csv)
        if (ch == '\n') ++lines;
    CHECK(lines == 4);  // header + one row per trial
    CHECK(csv.rfind("trial,", 0) == 0);
}

TEST_CASE("wall clock column is opt-in") {
    ExperimentConfig cfg = small_config();
    cfg.methods = {"powered"};
    cfg.trials = 2;
    cfg.record_wall_ms = true;
    ExperimentReport rep = run_distinguish_experiment(cfg);
    for (const TrialRow& row : rep.rows) CHECK(row.wall_ms >= 0);
}

TEST_CASE("rr_rsbm pair runs both arms with planted clique toggles") {
    ExperimentConfig cfg;
    cfg.model_pair = "rr_rsbm";
    cfg.n = 200;
    cfg.a = 6.0;
    cfg.b = 2.0;
    cfg.d = 8;
    cfg.c = 5;
    cfg.r = 2;
    cfg.methods = {"powered"};
    cfg.trials = 8;
    cfg.calibrate_trials = 10;
    cfg.quantile = 0.9;
    cfg.master_seed = 4321;
    cfg.threads = 1;
    ExperimentReport rep = run_distinguish_experiment(cfg);
    CHECK(rep.errors.empty());
    constexpr std::uint64_t kTagTrial = 0x747269616C;
    constexpr std::uint64_t kTagCoin = 0x636F696E;
    std::set<std::string> expected;
    for (std::int64_t t = 0; t < cfg.trials; ++t) {
        std::uint64_t trial_seed = derive_seed(cfg.master_seed, kTagTrial, t);
        bool structured = RngStream(derive_seed(trial_seed, kTagCoin)).bit();
        expected.insert(structured ? "rsbm" : "rr");
        CHECK(rep.rows[static_cast<std::size_t>(t)].truth == (structured ? "rsbm" : "rr"));
    }
    std::set<std::string> truths;
    for (const TrialRow& row : rep.rows) truths.insert(row.truth);
    CHECK(truths == expected);
    for (const std::string& truth : truths)
        CHECK(rep.mean_statistic.count("powered|" + truth) == 1);
}
