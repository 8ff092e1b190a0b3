#pragma once

// Monte Carlo distinguishing experiments. A config names a model pair, an
// optional clique (adversarial toggles for er_sbm, planted variants for
// rr_rsbm), the methods to score, and a master seed. Every trial flips a
// fair coin between the two arms, generates, tests, and scores; trials are
// independent jobs keyed by (master seed, trial index), so output is
// bit-identical across runs and thread counts.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "powerlab/detect.hpp"

namespace powerlab {

struct ExperimentConfig {
    std::string model_pair;  // "er_sbm" or "rr_rsbm"
    std::int64_t n = 0;
    double a = 0.0;          // structured-arm within intensity / degree
    double b = 0.0;          // structured-arm across intensity / degree
    std::int64_t d = 0;      // null-arm degree (rr_rsbm); er_sbm derives (a+b)/2
    std::int64_t c = 0;      // clique size, 0 = none
    std::string adversary = "targeted";  // er_sbm with c > 0: "uniform"/"targeted"
    std::int64_t r = 2;
    std::int64_t m = 5;      // cycle statistic length
    std::vector<std::string> methods{"powered"};
    std::int64_t trials = 0;
    double quantile = 0.95;
    std::int64_t calibrate_trials = 30;
    double nb_factor = 1.2;
    std::optional<double> powered_threshold;  // explicit values skip calibration
    std::optional<double> cycle_threshold;
    std::uint64_t master_seed = 0;
    std::int64_t threads = 0;  // 0 = POWERLAB_THREADS or hardware count
    bool record_wall_ms = false;
    std::string csv_path;   // empty = do not write
    std::string json_path;  // empty = do not write

    void validate() const;
    nlohmann::json to_json() const;  // full echo, reload-equal
};

// Strict parsing: unknown keys are rejected, every value type-checked.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

struct TrialRow {
    std::int64_t trial = 0;
    std::string truth;       // model tag of the generated arm
    std::string method;
    double statistic = 0.0;
    double threshold = 0.0;
    std::string decision;    // "null" or "structured"
    bool correct = false;
    double overlap = -1.0;   // scored only for powered rows on labeled draws
    std::uint64_t seed = 0;  // trial seed; rows are replayable from it
    std::int64_t wall_ms = -1;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<TrialRow> rows;                      // trial-major, method order
    std::map<std::string, double> accuracy;          // per method
    std::map<std::string, double> mean_statistic;    // key "method|truth"
    std::optional<double> powered_threshold_used;
    std::optional<double> cycle_threshold_used;
    std::vector<std::string> errors;                 // per-trial failures, non-fatal

    std::string to_csv() const;
    std::string to_json() const;  // config echo + rows + summary
};

// Calibrates whatever thresholds the method list needs (on the experiment's
// actual null arm, adversary included), then runs the trials on a worker
// pool and writes csv_path/json_path when set.
ExperimentReport run_distinguish_experiment(const ExperimentConfig& config);

}  // namespace powerlab
