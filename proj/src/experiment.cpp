#include "powerlab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

#include "powerlab/errors.hpp"
#include "powerlab/nonbacktracking.hpp"
#include "powerlab/rng.hpp"
#include "powerlab/spectral.hpp"

namespace powerlab {

namespace {

constexpr std::uint64_t kTagCalib = 0x63616C6962ULL;
constexpr std::uint64_t kTagTrial = 0x747269616CULL;
constexpr std::uint64_t kTagCoin = 0x636F696EULL;
constexpr std::uint64_t kTagGen = 0x67656EULL;
constexpr std::uint64_t kTagAdv = 0x616476ULL;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::int64_t resolve_threads(std::int64_t configured) {
    if (configured > 0) return configured;
    if (const char* env = std::getenv("POWERLAB_THREADS")) {
        const long long v = std::atoll(env);
        if (v > 0) return static_cast<std::int64_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<std::int64_t>(hw) : 1;
}

double nearest_rank_quantile(std::vector<double> values, double quantile) {
    std::sort(values.begin(), values.end());
    const std::int64_t n = static_cast<std::int64_t>(values.size());
    std::int64_t rank =
        static_cast<std::int64_t>(std::ceil(quantile * static_cast<double>(n)));
    rank = std::clamp<std::int64_t>(rank, 1, n);
    return values[rank - 1];
}

struct ArmDraw {
    Graph graph;
    std::string truth;
};

// Both pairs share the adversary: the base model is drawn first and the
// clique toggles are applied on top (the G+H composition), so c = 0 reduces
// to the plain two-model test.
ArmDraw draw_arm(const ExperimentConfig& cfg, bool structured, std::uint64_t seed) {
    const std::uint64_t gen_seed = derive_seed(seed, kTagGen);
    ArmDraw arm;
    if (cfg.model_pair == "er_sbm") {
        if (structured) {
            arm.graph = gen_sbm(cfg.n, cfg.a, cfg.b, gen_seed);
            arm.truth = "sbm";
        } else {
            arm.graph = gen_er(cfg.n, (cfg.a + cfg.b) / 2.0, gen_seed);
            arm.truth = "er";
        }
    } else {
        if (structured) {
            arm.graph = gen_rsbm(cfg.n, static_cast<std::int64_t>(cfg.a),
                                 static_cast<std::int64_t>(cfg.b), gen_seed);
            arm.truth = "rsbm";
        } else {
            arm.graph = gen_rr(cfg.n, cfg.d, gen_seed);
            arm.truth = "rr";
        }
    }
    if (cfg.c > 0) {
        const AdversaryMode mode = cfg.adversary == "uniform" ? AdversaryMode::kUniform
                                                              : AdversaryMode::kTargeted;
        const Perturbation h =
            gen_adversary_clique(arm.graph, cfg.c, mode, derive_seed(seed, kTagAdv));
        arm.graph = apply_perturbation(arm.graph, h);
    }
    return arm;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (model_pair != "er_sbm" && model_pair != "rr_rsbm")
        throw validation_error("config: model_pair must be er_sbm or rr_rsbm, got '" +
                               model_pair + "'");
    if (n < 2) throw validation_error("config: n must be >= 2, got " + std::to_string(n));
    if (trials < 1)
        throw validation_error("config: trials must be >= 1, got " + std::to_string(trials));
    if (!(a >= b && b >= 0.0))
        throw validation_error("config: need a >= b >= 0");
    if (c < 0 || c >= n)
        throw validation_error("config: need 0 <= c < n, got c = " + std::to_string(c));
    if (adversary != "uniform" && adversary != "targeted")
        throw validation_error("config: adversary must be uniform or targeted, got '" +
                               adversary + "'");
    if (r < 1) throw validation_error("config: r must be >= 1");
    if (m < 3) throw validation_error("config: m must be >= 3");
    if (methods.empty()) throw validation_error("config: methods must not be empty");
    std::set<std::string> seen;
    for (const std::string& name : methods) {
        parse_method(name);
        if (!seen.insert(name).second)
            throw validation_error("config: duplicate method '" + name + "'");
    }
    if (!(quantile > 0.0 && quantile < 1.0))
        throw validation_error("config: quantile must be in (0, 1)");
    if (calibrate_trials < 10)
        throw validation_error("config: calibrate_trials must be >= 10");
    if (!(nb_factor > 0.0)) throw validation_error("config: nb_factor must be positive");
    if (threads < 0) throw validation_error("config: threads must be >= 0");
    if (model_pair == "rr_rsbm") {
        if (static_cast<double>(static_cast<std::int64_t>(a)) != a ||
            static_cast<double>(static_cast<std::int64_t>(b)) != b)
            throw validation_error("config: rr_rsbm needs integer a and b");
        if (d != static_cast<std::int64_t>(a) + static_cast<std::int64_t>(b))
            throw validation_error("config: rr_rsbm needs d = a + b so both arms share "
                                   "the same degree");
    }
}

nlohmann::json ExperimentConfig::to_json() const {
    nlohmann::json j;
    j["model_pair"] = model_pair;
    j["n"] = n;
    j["a"] = a;
    j["b"] = b;
    j["d"] = d;
    j["c"] = c;
    j["adversary"] = adversary;
    j["r"] = r;
    j["m"] = m;
    j["methods"] = methods;
    j["trials"] = trials;
    j["quantile"] = quantile;
    j["calibrate_trials"] = calibrate_trials;
    j["nb_factor"] = nb_factor;
    if (powered_threshold) j["powered_threshold"] = *powered_threshold;
    if (cycle_threshold) j["cycle_threshold"] = *cycle_threshold;
    j["master_seed"] = master_seed;
    j["threads"] = threads;
    j["record_wall_ms"] = record_wall_ms;
    j["csv_path"] = csv_path;
    j["json_path"] = json_path;
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw validation_error("config: top level must be an object");
    static const std::set<std::string> kAllowed = {
        "model_pair", "n", "a", "b", "d", "c", "adversary", "r", "m",
        "methods", "trials", "quantile", "calibrate_trials", "nb_factor",
        "powered_threshold", "cycle_threshold", "master_seed", "threads",
        "record_wall_ms", "csv_path", "json_path"};
    for (const auto& item : j.items())
        if (!kAllowed.count(item.key()))
            throw validation_error("config: unknown key '" + item.key() + "'");

    ExperimentConfig cfg;
    auto get_str = [&](const char* key, std::string def) {
        if (!j.contains(key)) return def;
        if (!j.at(key).is_string())
            throw validation_error(std::string("config: ") + key + " must be a string");
        return j.at(key).get<std::string>();
    };
    auto get_int = [&](const char* key, std::int64_t def) {
        if (!j.contains(key)) return def;
        if (!j.at(key).is_number_integer())
            throw validation_error(std::string("config: ") + key + " must be an integer");
        return j.at(key).get<std::int64_t>();
    };
    auto get_num = [&](const char* key, double def) {
        if (!j.contains(key)) return def;
        if (!j.at(key).is_number())
            throw validation_error(std::string("config: ") + key + " must be a number");
        return j.at(key).get<double>();
    };
    auto get_bool = [&](const char* key, bool def) {
        if (!j.contains(key)) return def;
        if (!j.at(key).is_boolean())
            throw validation_error(std::string("config: ") + key + " must be a boolean");
        return j.at(key).get<bool>();
    };

    cfg.model_pair = get_str("model_pair", "");
    cfg.n = get_int("n", 0);
    cfg.a = get_num("a", 0.0);
    cfg.b = get_num("b", 0.0);
    cfg.d = get_int("d", 0);
    cfg.c = get_int("c", 0);
    cfg.adversary = get_str("adversary", "targeted");
    cfg.r = get_int("r", 2);
    cfg.m = get_int("m", 5);
    if (j.contains("methods")) {
        if (!j.at("methods").is_array())
            throw validation_error("config: methods must be an array of strings");
        cfg.methods.clear();
        for (const auto& entry : j.at("methods")) {
            if (!entry.is_string())
                throw validation_error("config: methods must be an array of strings");
            cfg.methods.push_back(entry.get<std::string>());
        }
    }
    cfg.trials = get_int("trials", 0);
    cfg.quantile = get_num("quantile", 0.95);
    cfg.calibrate_trials = get_int("calibrate_trials", 30);
    cfg.nb_factor = get_num("nb_factor", 1.2);
    if (j.contains("powered_threshold"))
        cfg.powered_threshold = get_num("powered_threshold", 0.0);
    if (j.contains("cycle_threshold"))
        cfg.cycle_threshold = get_num("cycle_threshold", 0.0);
    if (j.contains("master_seed")) {
        if (!j.at("master_seed").is_number_unsigned() &&
            !j.at("master_seed").is_number_integer())
            throw validation_error("config: master_seed must be an integer");
        cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
    }
    cfg.threads = get_int("threads", 0);
    cfg.record_wall_ms = get_bool("record_wall_ms", false);
    cfg.csv_path = get_str("csv_path", "");
    cfg.json_path = get_str("json_path", "");
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("config: cannot open '" + path + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error("config: " + std::string(e.what()));
    }
    return config_from_json(j);
}

std::string ExperimentReport::to_csv() const {
    std::string out =
        "trial,truth,method,statistic,threshold,decision,correct,overlap,seed,wall_ms\n";
    for (const TrialRow& row : rows) {
        out += std::to_string(row.trial);
        out += ',';
        out += row.truth;
        out += ',';
        out += row.method;
        out += ',';
        out += format_double(row.statistic);
        out += ',';
        out += format_double(row.threshold);
        out += ',';
        out += row.decision;
        out += ',';
        out += row.correct ? '1' : '0';
        out += ',';
        out += format_double(row.overlap);
        out += ',';
        out += std::to_string(row.seed);
        out += ',';
        out += std::to_string(row.wall_ms);
        out += '\n';
    }
    return out;
}

std::string ExperimentReport::to_json() const {
    nlohmann::json j;
    j["config"] = config.to_json();
    nlohmann::json rows_json = nlohmann::json::array();
    for (const TrialRow& row : rows) {
        rows_json.push_back({{"trial", row.trial},
                             {"truth", row.truth},
                             {"method", row.method},
                             {"statistic", row.statistic},
                             {"threshold", row.threshold},
                             {"decision", row.decision},
                             {"correct", row.correct},
                             {"overlap", row.overlap},
                             {"seed", row.seed},
                             {"wall_ms", row.wall_ms}});
    }
    j["rows"] = rows_json;
    j["summary"] = {{"accuracy", accuracy}, {"mean_statistic", mean_statistic}};
    if (powered_threshold_used) j["summary"]["powered_threshold"] = *powered_threshold_used;
    if (cycle_threshold_used) j["summary"]["cycle_threshold"] = *cycle_threshold_used;
    j["errors"] = errors;
    return j.dump();
}

ExperimentReport run_distinguish_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentReport report;
    report.config = config;

    bool want_powered = false, want_nb = false, want_cycle = false;
    for (const std::string& name : config.methods) {
        switch (parse_method(name)) {
            case Method::kPowered: want_powered = true; break;
            case Method::kNonbacktracking: want_nb = true; break;
            case Method::kCycleCount: want_cycle = true; break;
        }
    }

    // Thresholds: explicit values win; otherwise calibrate on the null arm
    // of this experiment (clique included), one shared set of draws.
    double powered_threshold = config.powered_threshold.value_or(0.0);
    double cycle_threshold = config.cycle_threshold.value_or(0.0);
    const bool calibrate_powered = want_powered && !config.powered_threshold;
    const bool calibrate_cycle = want_cycle && !config.cycle_threshold;
    if (calibrate_powered || calibrate_cycle) {
        std::vector<double> powered_stats, cycle_stats;
        for (std::int64_t i = 0; i < config.calibrate_trials; ++i) {
            const ArmDraw arm =
                draw_arm(config, false, derive_seed(config.master_seed, kTagCalib, i));
            if (calibrate_powered)
                powered_stats.push_back(lambda2_powered(arm.graph, config.r));
            if (calibrate_cycle)
                cycle_stats.push_back(cycle_count_statistic(arm.graph, config.m));
        }
        if (calibrate_powered)
            powered_threshold = nearest_rank_quantile(std::move(powered_stats),
                                                      config.quantile);
        if (calibrate_cycle)
            cycle_threshold =
                nearest_rank_quantile(std::move(cycle_stats), config.quantile);
    }
    if (want_powered) report.powered_threshold_used = powered_threshold;
    if (want_cycle) report.cycle_threshold_used = cycle_threshold;

    std::vector<std::vector<TrialRow>> slots(config.trials);
    std::vector<std::string> error_slots(config.trials);

    auto run_trial = [&](std::int64_t t) {
        const std::uint64_t trial_seed = derive_seed(config.master_seed, kTagTrial, t);
        try {
            RngStream coin(derive_seed(trial_seed, kTagCoin));
            const bool structured = coin.bit();
            const ArmDraw arm = draw_arm(config, structured, trial_seed);
            for (const std::string& name : config.methods) {
                const Method method = parse_method(name);
                TrialRow row;
                row.trial = t;
                row.truth = arm.truth;
                row.method = name;
                row.seed = trial_seed;
                const auto t0 = std::chrono::steady_clock::now();
                TestOutcome outcome;
                switch (method) {
                    case Method::kPowered: {
                        InducedSubgraph sub = largest_component(arm.graph);
                        const SpectrumResult spec =
                            powered_top_eigs(sub.graph, config.r, 2);
                        outcome = TestOutcome();
                        outcome.method = Method::kPowered;
                        outcome.statistic = spec.eigenvalues[1];
                        outcome.threshold = powered_threshold;
                        outcome.decision = outcome.statistic > powered_threshold
                                               ? Decision::kStructured
                                               : Decision::kNull;
                        if (!arm.graph.labels.empty()) {
                            std::vector<std::uint8_t> predicted(arm.graph.n, 0);
                            const std::vector<double>& v2 = spec.eigenvectors[1];
                            for (std::int64_t i = 0; i < sub.graph.n; ++i)
                                predicted[sub.original_ids[i]] = v2[i] >= 0.0 ? 1 : 2;
                            const OverlapReport rep =
                                score_overlap(predicted, arm.graph.labels);
                            if (rep.n_classified > 0) row.overlap = rep.overlap;
                        }
                        break;
                    }
                    case Method::kNonbacktracking:
                        outcome = nb_test(arm.graph, config.nb_factor);
                        break;
                    case Method::kCycleCount:
                        outcome = cycle_count_test(arm.graph, config.m, cycle_threshold);
                        break;
                }
                if (config.record_wall_ms) {
                    const auto t1 = std::chrono::steady_clock::now();
                    row.wall_ms =
                        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0)
                            .count();
                }
                row.statistic = outcome.statistic;
                row.threshold = outcome.threshold;
                row.decision = decision_name(outcome.decision);
                row.correct = (outcome.decision == Decision::kStructured) == structured;
                slots[t].push_back(std::move(row));
            }
        } catch (const std::exception& e) {
            error_slots[t] = "trial " + std::to_string(t) + ": " + e.what();
            slots[t].clear();
        }
    };

    const std::int64_t threads =
        std::min<std::int64_t>(resolve_threads(config.threads), config.trials);
    if (threads <= 1) {
        for (std::int64_t t = 0; t < config.trials; ++t) run_trial(t);
    } else {
        std::atomic<std::int64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (std::int64_t w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                while (true) {
                    const std::int64_t t = next.fetch_add(1);
                    if (t >= config.trials) break;
                    run_trial(t);
                }
            });
        }
        for (std::thread& th : pool) th.join();
    }

    std::map<std::string, std::pair<std::int64_t, std::int64_t>> correct_counts;
    std::map<std::string, std::pair<double, std::int64_t>> stat_sums;
    for (std::int64_t t = 0; t < config.trials; ++t) {
        if (!error_slots[t].empty()) report.errors.push_back(error_slots[t]);
        for (TrialRow& row : slots[t]) {
            auto& cc = correct_counts[row.method];
            cc.first += row.correct ? 1 : 0;
            cc.second += 1;
            auto& ss = stat_sums[row.method + "|" + row.truth];
            ss.first += row.statistic;
            ss.second += 1;
            report.rows.push_back(std::move(row));
        }
    }
    for (const auto& [name, cc] : correct_counts)
        report.accuracy[name] =
            static_cast<double>(cc.first) / static_cast<double>(cc.second);
    for (const auto& [key, ss] : stat_sums)
        report.mean_statistic[key] = ss.first / static_cast<double>(ss.second);

    if (!config.csv_path.empty()) {
        std::ofstream out(config.csv_path, std::ios::binary);
        if (!out) throw validation_error("experiment: cannot write '" + config.csv_path + "'");
        out << report.to_csv();
    }
    if (!config.json_path.empty()) {
        std::ofstream out(config.json_path, std::ios::binary);
        if (!out)
            throw validation_error("experiment: cannot write '" + config.json_path + "'");
        out << report.to_json();
    }
    return report;
}

}  // namespace powerlab
