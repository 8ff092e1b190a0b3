#pragma once

// Random graph models and adversarial perturbations.
//
// SBM(n, a, b): labels drawn 1/2 independently and uniformly, then each
// within-pair is an edge with probability a/n and each cross-pair with b/n.
// ER(n, d) is SBM with a = b = d. RR(n, d) pairs degree stubs uniformly and
// repairs collisions with degree-preserving switch moves (whole-sample
// rejection has acceptance probability ~exp(-(d-1)/2 - (d-1)^2/4), hopeless
// already at d = 8). RSBM(n, a, b) overlays an a-regular graph per community
// with a b-regular bipartite graph across. The _clique variants place a
// c-clique first and complete the residual degrees around it.
//
// A Perturbation is a set of edge toggles supported on c vertices; applying
// it takes the symmetric difference, so applying twice is the identity.

#include <cstdint>
#include <string>
#include <vector>

#include "powerlab/graph.hpp"

namespace powerlab {

struct Perturbation {
    std::vector<Vertex> vertices;  // sorted, distinct
    std::vector<Edge> toggles;     // normalized, sorted, within `vertices`
};

enum class ModelKind { kEr, kSbm, kRr, kRsbm, kRrClique, kRsbmClique };

// Names as they appear in configs and CSVs: er, sbm, rr, rsbm, rr_c, rsbm_c.
std::string model_kind_name(ModelKind kind);
ModelKind parse_model_kind(const std::string& name);

// a/b are SBM intensities (probabilities a/n, b/n) or RSBM integer degrees;
// d serves the regular models; c is the planted clique size (0 = none).
struct ModelParams {
    ModelKind model = ModelKind::kEr;
    std::int64_t n = 0;
    double a = 0.0;
    double b = 0.0;
    std::int64_t d = 0;
    std::int64_t c = 0;
    std::uint64_t seed = 0;
};

// Dispatch to the matching generator after validating the fields the model
// actually uses (integrality of a/b for RSBM, c < n for clique variants).
Graph generate(const ModelParams& params);

Graph gen_sbm(std::int64_t n, double a, double b, std::uint64_t seed);
Graph gen_er(std::int64_t n, double d, std::uint64_t seed);
Graph gen_rr(std::int64_t n, std::int64_t d, std::uint64_t seed);
Graph gen_rr_clique(std::int64_t n, std::int64_t d, std::int64_t c, std::uint64_t seed);
Graph gen_rsbm(std::int64_t n, std::int64_t a, std::int64_t b, std::uint64_t seed);
Graph gen_rsbm_clique(std::int64_t n, std::int64_t a, std::int64_t b, std::int64_t c,
                      std::uint64_t seed);

enum class AdversaryMode { kUniform, kTargeted };

// Chooses c vertices (uniformly, or the c highest-degree vertices with ties
// broken toward lower ids) and toggles exactly the pairs missing among them,
// so the perturbed graph contains a full c-clique.
Perturbation gen_adversary_clique(const Graph& g, std::int64_t c, AdversaryMode mode,
                                  std::uint64_t seed);

Graph apply_perturbation(const Graph& g, const Perturbation& h);

}  // namespace powerlab
