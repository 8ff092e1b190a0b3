// Command-line front end. Subcommands cover generation, powering, spectra,
// nonbacktracking statistics, bound reports, walk-count tables, single
// hypothesis tests, and full Monte Carlo experiments. Data goes to standard
// output (or --out files); logs go to standard error. Exit codes: 0 success,
// 2 invalid input, 3 numerical failure.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "powerlab/bounds.hpp"
#include "powerlab/detect.hpp"
#include "powerlab/errors.hpp"
#include "powerlab/experiment.hpp"
#include "powerlab/graph.hpp"
#include "powerlab/graph_io.hpp"
#include "powerlab/models.hpp"
#include "powerlab/nonbacktracking.hpp"
#include "powerlab/powering.hpp"
#include "powerlab/spectral.hpp"
#include "powerlab/walks.hpp"

namespace {

using namespace powerlab;

Graph load_graph(const std::string& path) { return read_edge_list_file(path).graph; }

std::vector<mpq_class> parse_rationals(const std::string& csv) {
    std::vector<mpq_class> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.emplace_back(item);
        } catch (const std::invalid_argument&) {
            throw validation_error("cannot parse rational '" + item + "'");
        }
    }
    if (out.empty()) throw validation_error("empty rational list");
    return out;
}

void setup_gen(CLI::App& app) {
    auto* cmd = app.add_subcommand("gen", "generate a model draw and write an edge list");
    auto model = std::make_shared<std::string>("er");
    auto params = std::make_shared<ModelParams>();
    auto out_path = std::make_shared<std::string>();
    auto labels_path = std::make_shared<std::string>();
    cmd->add_option("--model", *model, "er, sbm, rr, rsbm, rr_c, rsbm_c")->required();
    cmd->add_option("--n", params->n, "vertex count")->required();
    cmd->add_option("--a", params->a, "within intensity / degree");
    cmd->add_option("--b", params->b, "across intensity / degree");
    cmd->add_option("--d", params->d, "degree for regular models (er accepts it too)");
    cmd->add_option("--c", params->c, "planted clique size");
    cmd->add_option("--seed", params->seed, "generator seed");
    cmd->add_option("--out", *out_path, "edge-list output path")->required();
    cmd->add_option("--labels-out", *labels_path, "label output path (labeled models)");
    cmd->callback([=] {
        params->model = parse_model_kind(*model);
        const Graph g = generate(*params);
        write_edge_list_file(*out_path, g);
        if (!labels_path->empty()) {
            if (g.labels.empty())
                throw validation_error("gen: model '" + *model + "' carries no labels");
            write_labels_file(*labels_path, g.labels);
        }
        nlohmann::json j{{"model", *model},
                         {"n", g.n},
                         {"edges", g.edge_count()},
                         {"hash", graph_hash_hex(g)},
                         {"out", *out_path}};
        std::cout << j.dump() << "\n";
    });
}

void setup_power(CLI::App& app) {
    auto* cmd = app.add_subcommand("power", "materialize G^(r) and write it");
    auto in_path = std::make_shared<std::string>();
    auto out_path = std::make_shared<std::string>();
    auto r = std::make_shared<std::int64_t>(1);
    cmd->add_option("--in", *in_path, "edge-list input")->required();
    cmd->add_option("--r", *r, "power radius")->required();
    cmd->add_option("--out", *out_path, "edge-list output")->required();
    cmd->callback([=] {
        const Graph g = load_graph(*in_path);
        const PoweredGraph p = power_graph(g, *r);
        char hash_buf[17];
        std::snprintf(hash_buf, sizeof hash_buf, "%016llx",
                      static_cast<unsigned long long>(p.base_hash));
        const std::vector<std::string> comments{
            "power r=" + std::to_string(p.r) + " of " + hash_buf};
        write_edge_list_file(*out_path, p.graph, comments);
        nlohmann::json j{{"n", p.graph.n},
                         {"r", p.r},
                         {"edges", p.graph.edge_count()},
                         {"degenerate", p.degenerate},
                         {"out", *out_path}};
        std::cout << j.dump() << "\n";
    });
}

void setup_spectrum(CLI::App& app) {
    auto* cmd = app.add_subcommand("spectrum", "top-k eigenvalues of the adjacency");
    auto in_path = std::make_shared<std::string>();
    auto k = std::make_shared<std::int64_t>(2);
    auto tol = std::make_shared<double>(1e-8);
    auto seed = std::make_shared<std::uint64_t>(0);
    auto max_iter = std::make_shared<std::int64_t>(5000);
    auto vectors_out = std::make_shared<std::string>();
    cmd->add_option("--in", *in_path, "edge-list input")->required();
    cmd->add_option("--k", *k, "how many eigenvalues");
    cmd->add_option("--tol", *tol, "residual tolerance");
    cmd->add_option("--seed", *seed, "solver seed");
    cmd->add_option("--max-iter", *max_iter, "matvec budget");
    cmd->add_option("--vectors-out", *vectors_out, "binary eigenvector output");
    cmd->callback([=] {
        const Graph g = load_graph(*in_path);
        const SpectrumResult res =
            top_eigs_sym(csr_operator(g), *k, *tol, *max_iter, *seed);
        if (!vectors_out->empty()) write_vectors_binary(*vectors_out, res.eigenvectors);
        std::cout << res.to_json() << "\n";
    });
}

void setup_nb(CLI::App& app) {
    auto* cmd = app.add_subcommand("nb", "nonbacktracking lambda_1 and |lambda_2|");
    auto in_path = std::make_shared<std::string>();
    auto dense_cutoff = std::make_shared<std::int64_t>(2000);
    cmd->add_option("--in", *in_path, "edge-list input")->required();
    cmd->add_option("--dense-cutoff", *dense_cutoff,
                    "max n for the dense companion route");
    cmd->callback([=] {
        std::cout << nb_top_two(load_graph(*in_path), *dense_cutoff).to_json() << "\n";
    });
}

void setup_bound(CLI::App& app) {
    auto* cmd = app.add_subcommand("bound", "evaluate a bound report");
    auto name = std::make_shared<std::string>();
    auto in_path = std::make_shared<std::string>();
    auto pert_path = std::make_shared<std::string>();
    auto r = std::make_shared<std::int64_t>(1);
    auto k = std::make_shared<std::int64_t>(1);
    auto d = std::make_shared<std::int64_t>(3);
    auto c = std::make_shared<std::int64_t>(2);
    auto depth = std::make_shared<std::int64_t>(1);
    auto x = std::make_shared<double>(0.0);
    auto xs = std::make_shared<std::string>();
    auto two_n = std::make_shared<std::int64_t>(2);
    cmd->add_option("--name", *name,
                    "alon_boppana, walk_lower, tree_like, even_partition, girth_poly, "
                    "perturbation_power, tdc_band, tdc_lambda1")
        ->required();
    cmd->add_option("--in", *in_path, "edge-list input (graph bounds)");
    cmd->add_option("--pert", *pert_path, "perturbation file (perturbation_power)");
    cmd->add_option("--r", *r, "power radius");
    cmd->add_option("--k", *k, "walk depth parameter");
    cmd->add_option("--d", *d, "degree parameter");
    cmd->add_option("--c", *c, "clique size");
    cmd->add_option("--depth", *depth, "truncation depth");
    cmd->add_option("--x", *x, "evaluation point (girth_poly)");
    cmd->add_option("--xs", *xs, "comma-separated rationals (even_partition)");
    cmd->add_option("--two-n", *two_n, "even exponent (even_partition)");
    cmd->callback([=] {
        BoundReport rep;
        if (*name == "alon_boppana") {
            rep = alon_boppana_report(load_graph(*in_path), *r);
        } else if (*name == "walk_lower") {
            const Graph g = load_graph(*in_path);
            rep.bound_name = "walk_lower";
            rep.inputs = {{"n", g.n}, {"r", *r}, {"k", *k}};
            rep.value = lambda2_walk_lower_bound(g, *r, *k);
            rep.witness = {{"exponent", 2 * *k}};
        } else if (*name == "tree_like") {
            const Graph g = load_graph(*in_path);
            const DeltaProfile profile = delta_profile(g, static_cast<std::int32_t>(*r));
            rep.bound_name = "tree_like";
            rep.inputs = {{"n", g.n}, {"r", *r}, {"k", *k}};
            rep.value = tree_like_lower_bound(profile, *r, *k);
            rep.witness = {{"delta", profile.delta},
                           {"exact", tree_like_lower_bound_exact(profile, *r, *k).get_str()}};
        } else if (*name == "even_partition") {
            const auto values = parse_rationals(*xs);
            const auto [lhs, rhs] = even_partition_bound(values, *two_n);
            rep.bound_name = "even_partition";
            rep.inputs = {{"k", values.size()}, {"two_n", *two_n}};
            rep.value = lhs.get_d();
            rep.witness = {{"lhs", lhs.get_str()}, {"rhs", rhs.get_str()}};
        } else if (*name == "girth_poly") {
            rep.bound_name = "girth_poly";
            rep.inputs = {{"d", *d}, {"r", *r}, {"x", *x}};
            rep.value = girth_poly_bound(*d, *r, *x);
            rep.witness = {{"recursion", power_poly_eval(*r, *d, *x)},
                           {"sup_bound", power_poly_sup_bound(*r, *d)}};
        } else if (*name == "perturbation_power") {
            rep = perturbation_power_report(load_graph(*in_path),
                                            read_perturbation_file(*pert_path), *r);
        } else if (*name == "tdc_band") {
            const auto [lo, hi] = tdc_power_band(*d, *c, *r);
            rep.bound_name = "tdc_band";
            rep.inputs = {{"d", *d}, {"c", *c}, {"r", *r}};
            rep.value = lo;
            rep.witness = {{"lower", lo}, {"upper", hi}};
        } else if (*name == "tdc_lambda1") {
            rep.bound_name = "tdc_lambda1";
            rep.inputs = {{"d", *d}, {"c", *c}, {"depth", *depth}, {"r", *r}};
            rep.value = tdc_power_lambda1(*d, *c, *depth, *r);
            rep.witness = {{"method", "orbit_quotient"}};
        } else {
            throw validation_error("bound: unknown name '" + *name + "'");
        }
        std::cout << rep.to_json() << "\n";
    });
}

void setup_oracle(CLI::App& app) {
    auto* cmd = app.add_subcommand("oracle", "exact closed-walk count table");
    auto in_path = std::make_shared<std::string>();
    auto r = std::make_shared<std::int64_t>(1);
    auto k_max = std::make_shared<std::int64_t>(3);
    auto no_loops = std::make_shared<bool>(false);
    cmd->add_option("--in", *in_path, "edge-list input")->required();
    cmd->add_option("--r", *r, "power radius")->required();
    cmd->add_option("--k-max", *k_max, "table depth");
    cmd->add_flag("--no-loops", *no_loops, "drop the powered self-loops first");
    cmd->callback([=] {
        std::cout << closed_walk_counts(load_graph(*in_path), *r, *k_max, !*no_loops)
                         .to_json()
                  << "\n";
    });
}

void setup_detect(CLI::App& app) {
    auto* cmd = app.add_subcommand("detect", "run one hypothesis test");
    auto in_path = std::make_shared<std::string>();
    auto labels_path = std::make_shared<std::string>();
    auto method = std::make_shared<std::string>("powered");
    auto r = std::make_shared<std::int64_t>(2);
    auto m = std::make_shared<std::int64_t>(5);
    auto threshold = std::make_shared<double>(0.0);
    auto factor = std::make_shared<double>(1.2);
    auto recover = std::make_shared<bool>(false);
    cmd->add_option("--in", *in_path, "edge-list input")->required();
    cmd->add_option("--labels", *labels_path, "planted labels for scoring");
    cmd->add_option("--method", *method, "powered, nonbacktracking, cycle_count");
    cmd->add_option("--r", *r, "power radius (powered)");
    cmd->add_option("--m", *m, "cycle length (cycle_count)");
    cmd->add_option("--threshold", *threshold, "decision threshold");
    cmd->add_option("--factor", *factor, "nonbacktracking threshold factor");
    cmd->add_flag("--recover", *recover, "also report community recovery (powered)");
    cmd->callback([=] {
        Graph g = load_graph(*in_path);
        if (!labels_path->empty()) {
            auto labels = read_labels_file(*labels_path, g.n);
            g = with_labels(std::move(g), std::move(labels));
        }
        TestOutcome outcome;
        switch (parse_method(*method)) {
            case Method::kPowered: outcome = powered_test(g, *r, *threshold); break;
            case Method::kNonbacktracking: outcome = nb_test(g, *factor); break;
            case Method::kCycleCount: outcome = cycle_count_test(g, *m, *threshold); break;
        }
        nlohmann::json j = nlohmann::json::parse(outcome.to_json());
        if (*recover) {
            const RecoveryResult rec = recover_communities(g, *r);
            j["recovery"] = {{"scored", rec.scored},
                             {"overlap", rec.report.overlap},
                             {"n_classified", rec.report.n_classified}};
        }
        std::cout << j.dump() << "\n";
    });
}

void setup_experiment(CLI::App& app) {
    auto* cmd = app.add_subcommand("experiment", "run a Monte Carlo experiment config");
    auto config_path = std::make_shared<std::string>();
    cmd->add_option("--config", *config_path, "JSON config path")->required();
    cmd->callback([=] {
        const ExperimentConfig cfg = load_config(*config_path);
        const ExperimentReport report = run_distinguish_experiment(cfg);
        for (const std::string& err : report.errors) std::cerr << err << "\n";
        nlohmann::json j{{"config", cfg.to_json()},
                         {"accuracy", report.accuracy},
                         {"mean_statistic", report.mean_statistic},
                         {"trials", cfg.trials},
                         {"errors", report.errors.size()}};
        if (report.powered_threshold_used)
            j["powered_threshold"] = *report.powered_threshold_used;
        if (report.cycle_threshold_used)
            j["cycle_threshold"] = *report.cycle_threshold_used;
        std::cout << j.dump() << "\n";
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral graph-powering laboratory"};
    app.require_subcommand(1);
    setup_gen(app);
    setup_power(app);
    setup_spectrum(app);
    setup_nb(app);
    setup_bound(app);
    setup_oracle(app);
    setup_detect(app);
    setup_experiment(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const powerlab::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const powerlab::numerical_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
