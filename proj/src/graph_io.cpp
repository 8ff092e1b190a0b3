#include "powerlab/graph_io.hpp"

#include <bit>
#include <fstream>
#include <sstream>

#include "powerlab/errors.hpp"
#include "powerlab/models.hpp"

namespace powerlab {

namespace {

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw validation_error("cannot open '" + path + "' for reading");
    return f;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw validation_error("cannot open '" + path + "' for writing");
    return f;
}

[[noreturn]] void bad(const std::string& name, std::int64_t line, const std::string& what) {
    throw validation_error(name + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

EdgeListFile read_edge_list(std::istream& in, const std::string& name) {
    EdgeListFile out;
    std::string line;
    std::int64_t lineno = 0;
    std::int64_t n = -1, m = -1;
    std::vector<Edge> edges;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line[0] == '#') {
            std::size_t start = line.size() > 1 && line[1] == ' ' ? 2 : 1;
            out.comments.push_back(line.substr(start));
            continue;
        }
        if (line.empty()) continue;
        std::istringstream row(line);
        if (n < 0) {
            if (!(row >> n >> m) || n < 0 || m < 0)
                bad(name, lineno, "expected header 'n m'");
            edges.reserve(static_cast<std::size_t>(m));
            continue;
        }
        long long u, v;
        if (!(row >> u >> v)) bad(name, lineno, "expected 'u v'");
        std::string extra;
        if (row >> extra) bad(name, lineno, "trailing tokens after edge");
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    if (n < 0) throw validation_error(name + ": missing 'n m' header");
    if (static_cast<std::int64_t>(edges.size()) != m)
        throw validation_error(name + ": header promises " + std::to_string(m) + " edges, found " +
                               std::to_string(edges.size()));
    out.graph = build_graph(n, edges);
    return out;
}

EdgeListFile read_edge_list_file(const std::string& path) {
    auto f = open_in(path);
    return read_edge_list(f, path);
}

void write_edge_list(std::ostream& out, const Graph& g, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << "\n";
    auto edges = g.edges();
    out << g.n << " " << edges.size() << "\n";
    for (auto [u, v] : edges) out << u << " " << v << "\n";
}

void write_edge_list_file(const std::string& path, const Graph& g,
                          const std::vector<std::string>& comments) {
    auto f = open_out(path);
    write_edge_list(f, g, comments);
}

std::vector<std::uint8_t> read_labels(std::istream& in, std::int64_t n, const std::string& name) {
    std::vector<std::uint8_t> labels;
    labels.reserve(static_cast<std::size_t>(n));
    std::string line;
    std::int64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line != "1" && line != "2") bad(name, lineno, "labels must be '1' or '2'");
        labels.push_back(line == "1" ? 1 : 2);
    }
    if (static_cast<std::int64_t>(labels.size()) != n)
        throw validation_error(name + ": expected " + std::to_string(n) + " labels, found " +
                               std::to_string(labels.size()));
    return labels;
}

std::vector<std::uint8_t> read_labels_file(const std::string& path, std::int64_t n) {
    auto f = open_in(path);
    return read_labels(f, n, path);
}

void write_labels(std::ostream& out, const std::vector<std::uint8_t>& labels) {
    for (std::uint8_t l : labels) out << static_cast<int>(l) << "\n";
}

void write_labels_file(const std::string& path, const std::vector<std::uint8_t>& labels) {
    auto f = open_out(path);
    write_labels(f, labels);
}

Perturbation read_perturbation(std::istream& in, const std::string& name) {
    Perturbation h;
    std::string token;
    std::int64_t c = 0;
    if (!(in >> token) || token != "c" || !(in >> c) || c < 0)
        throw validation_error(name + ": expected 'c <count>'");
    if (!(in >> token) || token != "vertices")
        throw validation_error(name + ": expected 'vertices' line");
    h.vertices.resize(static_cast<std::size_t>(c));
    for (auto& v : h.vertices)
        if (!(in >> v)) throw validation_error(name + ": truncated vertex list");
    std::int64_t t = 0;
    if (!(in >> token) || token != "toggles" || !(in >> t) || t < 0)
        throw validation_error(name + ": expected 'toggles <count>'");
    h.toggles.resize(static_cast<std::size_t>(t));
    for (auto& [u, v] : h.toggles)
        if (!(in >> u >> v)) throw validation_error(name + ": truncated toggle list");
    return h;
}

Perturbation read_perturbation_file(const std::string& path) {
    auto f = open_in(path);
    return read_perturbation(f, path);
}

void write_perturbation(std::ostream& out, const Perturbation& h) {
    out << "c " << h.vertices.size() << "\n";
    out << "vertices";
    for (Vertex v : h.vertices) out << " " << v;
    out << "\n";
    out << "toggles " << h.toggles.size() << "\n";
    for (auto [u, v] : h.toggles) out << u << " " << v << "\n";
}

void write_perturbation_file(const std::string& path, const Perturbation& h) {
    auto f = open_out(path);
    write_perturbation(f, h);
}

void write_vectors_binary(const std::string& path, const std::vector<std::vector<double>>& rows) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw validation_error("cannot open '" + path + "' for writing");
    static_assert(std::endian::native == std::endian::little,
                  "eigenvector sidecars assume a little-endian host");
    for (const auto& row : rows)
        f.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(double)));
}

}  // namespace powerlab
