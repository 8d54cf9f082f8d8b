#pragma once

// Directed graph of successive AND output differences along playouts.

#include "difftrail/cipher.hpp"
#include "difftrail/pool.hpp"
#include "difftrail/search.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace difftrail {

struct DiffGraph {
    std::set<Word> nodes;
    std::map<std::pair<Word, Word>, std::uint64_t> edges; // (from, to) -> frequency
    bool directed = true;
    friend bool operator==(const DiffGraph&, const DiffGraph&) = default;
};

// A node per distinct c, an edge per consecutive pair within a path.
DiffGraph build_graph(const std::vector<std::vector<Word>>& paths);

// Splits a pool back into the playouts that produced it.
std::vector<std::vector<Word>> pool_paths(const DifferentialPool& pool);

// `playouts` random forward playouts of `rounds` rounds drawing from `ctx`.
std::vector<std::vector<Word>> context_paths(const DiffState& start, int rounds, std::int64_t playouts,
                                             const SamplingContext& ctx, const CipherSpec& spec, std::uint64_t seed);

struct GraphMetrics {
    std::size_t node_count = 0;
    std::size_t edge_count = 0; // distinct edges, self-loops included
    std::size_t self_loops = 0;
    double density = 0;         // non-loop edges / (V * (V - 1))
    std::size_t max_degree = 0; // in + out over distinct edges
    std::size_t weakly_connected_components = 0;
};

GraphMetrics graph_metrics(const DiffGraph& g);

enum class GraphFormat { dot, edge_csv };
GraphFormat parse_graph_format(std::string_view s);

std::string to_dot(const DiffGraph& g, int word_bits);
std::string to_edge_csv(const DiffGraph& g, int word_bits);
// Nodes without any edge are written as rows with empty `to` and `frequency`.
DiffGraph from_edge_csv(std::string_view text, const std::string& source = "edges");

void export_graph(const DiffGraph& g, GraphFormat format, const std::filesystem::path& path, int word_bits = 16);
DiffGraph import_edge_csv(const std::filesystem::path& path);

} // namespace difftrail
