#pragma once

// Plain-text interchange formats.
//
// Edge list: optional '#' comment lines, then a header "n m", then m lines
// "u v" with 0-based endpoints. Writers emit normalized (u <= v) pairs in
// sorted order so that write(read(f)) == f byte for byte. Powered graphs are
// written with a leading "# power r=<r> of <base-hash>" comment.
//
// Label file: n lines, each "1" or "2".
//
// Perturbation block:
//   c <count>
//   vertices <v0> <v1> ...
//   toggles <count>
//   u v          (one per line, normalized, sorted)

#include <iosfwd>
#include <string>
#include <vector>

#include "powerlab/graph.hpp"

namespace powerlab {

struct EdgeListFile {
    Graph graph;
    std::vector<std::string> comments;  // without the leading "# "
};

EdgeListFile read_edge_list(std::istream& in, const std::string& name = "<stream>");
EdgeListFile read_edge_list_file(const std::string& path);
void write_edge_list(std::ostream& out, const Graph& g,
                     const std::vector<std::string>& comments = {});
void write_edge_list_file(const std::string& path, const Graph& g,
                          const std::vector<std::string>& comments = {});

std::vector<std::uint8_t> read_labels(std::istream& in, std::int64_t n,
                                      const std::string& name = "<stream>");
std::vector<std::uint8_t> read_labels_file(const std::string& path, std::int64_t n);
void write_labels(std::ostream& out, const std::vector<std::uint8_t>& labels);
void write_labels_file(const std::string& path, const std::vector<std::uint8_t>& labels);

struct Perturbation;  // defined in models.hpp

Perturbation read_perturbation(std::istream& in, const std::string& name = "<stream>");
Perturbation read_perturbation_file(const std::string& path);
void write_perturbation(std::ostream& out, const Perturbation& h);
void write_perturbation_file(const std::string& path, const Perturbation& h);

// Little-endian float64, row-major, k rows of dim entries.
void write_vectors_binary(const std::string& path, const std::vector<std::vector<double>>& rows);

}  // namespace powerlab
