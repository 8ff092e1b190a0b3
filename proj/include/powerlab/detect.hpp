#pragma once

// Hypothesis tests separating null draws (ER, RR, their planted-clique
// variants) from structured ones (SBM, RSBM): the powered-spectral statistic
// lambda_2(G^(r)), the nonbacktracking ratio |lambda_2(B)| / sqrt(lambda_1(B)),
// and the closed nonbacktracking m-walk count tr(B^m)/(2m). Thresholds come
// from seeded null Monte Carlo quantiles. recover_communities reads the two
// blocks off the sign of the powered second eigenvector.

#include <cstdint>
#include <string>
#include <vector>

#include "powerlab/graph.hpp"
#include "powerlab/models.hpp"

namespace powerlab {

enum class Decision { kNull, kStructured };
enum class Method { kPowered, kNonbacktracking, kCycleCount };

std::string method_name(Method method);  // powered, nonbacktracking, cycle_count
Method parse_method(const std::string& name);
std::string decision_name(Decision decision);

struct TestOutcome {
    Method method = Method::kPowered;
    double statistic = 0.0;
    double threshold = 0.0;
    Decision decision = Decision::kNull;  // structured iff statistic > threshold
    std::string truth;                    // model tag when known, else empty
    std::int64_t r_or_m = 0;              // r (powered), m (cycle), 0 (nb)
    std::string to_json() const;
};

struct OverlapReport {
    double overlap = 0.0;  // fraction agreeing after the better global flip
    std::int64_t n_classified = 0;
};

struct RecoveryResult {
    std::vector<std::uint8_t> labels;  // 1/2 on the classified component, 0 elsewhere
    bool scored = false;               // true when g carried planted labels
    OverlapReport report;
};

// Empirical `quantile` (nearest rank) of lambda_2(G^(r)) over `trials`
// seeded draws of the null model. Deterministic in (null_params, seed).
double calibrate_threshold(const ModelParams& null_params, std::int64_t r,
                           std::int64_t trials, double quantile, std::uint64_t seed);

// Same calibration for the cycle statistic tr(B^m)/(2m).
double calibrate_cycle_threshold(const ModelParams& null_params, std::int64_t m,
                                 std::int64_t trials, double quantile,
                                 std::uint64_t seed);

TestOutcome powered_test(const Graph& g, std::int64_t r, double threshold);
TestOutcome nb_test(const Graph& g, double threshold_factor = 1.2);
TestOutcome cycle_count_test(const Graph& g, std::int64_t m, double threshold);

// Agreement of two 1/2 labelings after the better global flip; positions
// where either side is 0 (unclassified) are skipped.
OverlapReport score_overlap(const std::vector<std::uint8_t>& predicted,
                            const std::vector<std::uint8_t>& truth);

// Second powered eigenvector on the largest component, signs as labels.
// Scoring (overlap after the better flip) happens when g has planted labels.
RecoveryResult recover_communities(const Graph& g, std::int64_t r);

}  // namespace powerlab
