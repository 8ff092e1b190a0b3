#include "powerlab/detect.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"

#include "powerlab/errors.hpp"
#include "powerlab/nonbacktracking.hpp"
#include "powerlab/rng.hpp"
#include "powerlab/spectral.hpp"

namespace powerlab {

namespace {

constexpr std::uint64_t kTagCalibrate = 0x63616C6962ULL;

double nearest_rank_quantile(std::vector<double> values, double quantile) {
    std::sort(values.begin(), values.end());
    const std::int64_t n = static_cast<std::int64_t>(values.size());
    std::int64_t rank = static_cast<std::int64_t>(
        std::ceil(quantile * static_cast<double>(n)));
    rank = std::clamp<std::int64_t>(rank, 1, n);
    return values[rank - 1];
}

void check_calibration_args(std::int64_t trials, double quantile) {
    if (trials < 10)
        throw validation_error("calibrate_threshold: trials must be >= 10, got " +
                               std::to_string(trials));
    if (!(quantile > 0.0 && quantile < 1.0))
        throw validation_error("calibrate_threshold: quantile must be in (0, 1)");
}

TestOutcome make_outcome(Method method, double statistic, double threshold,
                         std::int64_t r_or_m) {
    TestOutcome out;
    out.method = method;
    out.statistic = statistic;
    out.threshold = threshold;
    out.decision = statistic > threshold ? Decision::kStructured : Decision::kNull;
    out.r_or_m = r_or_m;
    return out;
}

}  // namespace

std::string method_name(Method method) {
    switch (method) {
        case Method::kPowered: return "powered";
        case Method::kNonbacktracking: return "nonbacktracking";
        case Method::kCycleCount: return "cycle_count";
    }
    throw validation_error("method_name: unknown method");
}

Method parse_method(const std::string& name) {
    if (name == "powered") return Method::kPowered;
    if (name == "nonbacktracking") return Method::kNonbacktracking;
    if (name == "cycle_count") return Method::kCycleCount;
    throw validation_error("parse_method: unknown method '" + name +
                           "' (expected powered, nonbacktracking, cycle_count)");
}

std::string decision_name(Decision decision) {
    return decision == Decision::kStructured ? "structured" : "null";
}

std::string TestOutcome::to_json() const {
    nlohmann::json j;
    j["method"] = method_name(method);
    j["statistic"] = statistic;
    j["threshold"] = threshold;
    j["decision"] = decision_name(decision);
    j["truth"] = truth;
    j["r_or_m"] = r_or_m;
    return j.dump();
}

double calibrate_threshold(const ModelParams& null_params, std::int64_t r,
                           std::int64_t trials, double quantile, std::uint64_t seed) {
    check_calibration_args(trials, quantile);
    std::vector<double> stats;
    stats.reserve(trials);
    for (std::int64_t i = 0; i < trials; ++i) {
        ModelParams draw = null_params;
        draw.seed = derive_seed(seed, kTagCalibrate, i);
        stats.push_back(lambda2_powered(generate(draw), r));
    }
    return nearest_rank_quantile(std::move(stats), quantile);
}

double calibrate_cycle_threshold(const ModelParams& null_params, std::int64_t m,
                                 std::int64_t trials, double quantile,
                                 std::uint64_t seed) {
    check_calibration_args(trials, quantile);
    std::vector<double> stats;
    stats.reserve(trials);
    for (std::int64_t i = 0; i < trials; ++i) {
        ModelParams draw = null_params;
        draw.seed = derive_seed(seed, kTagCalibrate, i);
        stats.push_back(cycle_count_statistic(generate(draw), m));
    }
    return nearest_rank_quantile(std::move(stats), quantile);
}

TestOutcome powered_test(const Graph& g, std::int64_t r, double threshold) {
    return make_outcome(Method::kPowered, lambda2_powered(g, r), threshold, r);
}

TestOutcome nb_test(const Graph& g, double threshold_factor) {
    if (!(threshold_factor > 0.0))
        throw validation_error("nb_test: threshold_factor must be positive");
    const NbSpectrum sp = nb_top_two(g);
    const double statistic =
        sp.lambda1 > 0.0 ? sp.abs_lambda2 / std::sqrt(sp.lambda1) : 0.0;
    return make_outcome(Method::kNonbacktracking, statistic, threshold_factor, 0);
}

TestOutcome cycle_count_test(const Graph& g, std::int64_t m, double threshold) {
    return make_outcome(Method::kCycleCount, cycle_count_statistic(g, m), threshold, m);
}

OverlapReport score_overlap(const std::vector<std::uint8_t>& predicted,
                            const std::vector<std::uint8_t>& truth) {
    if (predicted.size() != truth.size())
        throw validation_error("score_overlap: label vectors differ in length");
    std::int64_t agree = 0, counted = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if ((predicted[i] != 1 && predicted[i] != 2) || (truth[i] != 1 && truth[i] != 2))
            continue;
        ++counted;
        if (predicted[i] == truth[i]) ++agree;
    }
    OverlapReport report;
    report.n_classified = counted;
    report.overlap = counted > 0
                         ? static_cast<double>(std::max(agree, counted - agree)) /
                               static_cast<double>(counted)
                         : 0.0;
    return report;
}

RecoveryResult recover_communities(const Graph& g, std::int64_t r) {
    if (r < 1) throw validation_error("recover_communities: r must be >= 1");
    InducedSubgraph sub = largest_component(g);
    if (sub.graph.n < 2)
        throw validation_error(
            "recover_communities: largest component has fewer than 2 vertices");
    const SpectrumResult spec = powered_top_eigs(sub.graph, r, 2);
    const std::vector<double>& v2 = spec.eigenvectors[1];

    RecoveryResult result;
    result.labels.assign(g.n, 0);
    for (std::int64_t i = 0; i < sub.graph.n; ++i)
        result.labels[sub.original_ids[i]] = v2[i] >= 0.0 ? 1 : 2;

    if (!g.labels.empty()) {
        const OverlapReport report = score_overlap(result.labels, g.labels);
        if (report.n_classified > 0) {
            result.scored = true;
            result.report = report;
        }
    }
    return result;
}

}  // namespace powerlab
