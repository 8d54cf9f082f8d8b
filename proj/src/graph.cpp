#include "difftrail/graph.hpp"

#include "difftrail/error.hpp"
#include "difftrail/io.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace difftrail {

DiffGraph build_graph(const std::vector<std::vector<Word>>& paths)
{
    if (paths.empty()) throw ParameterError("graph needs at least one path");
    DiffGraph g;
    for (const auto& path : paths) {
        for (std::size_t i = 0; i < path.size(); ++i) {
            g.nodes.insert(path[i]);
            if (i + 1 < path.size()) ++g.edges[{path[i], path[i + 1]}];
        }
    }
    if (g.nodes.empty()) throw ParameterError("graph needs at least one node");
    return g;
}

std::vector<std::vector<Word>> pool_paths(const DifferentialPool& pool)
{
    const auto len = static_cast<std::size_t>(pool.provenance.rounds);
    if (len == 0 || pool.records.size() % len != 0)
        throw ParameterError("pool size is not a whole number of playouts");
    std::vector<std::vector<Word>> paths;
    for (std::size_t i = 0; i < pool.records.size(); i += len) {
        std::vector<Word> p;
        for (std::size_t j = i; j < i + len; ++j) p.push_back(pool.records[j].c);
        paths.push_back(std::move(p));
    }
    return paths;
}

std::vector<std::vector<Word>> context_paths(const DiffState& start, int rounds, std::int64_t playouts,
                                             const SamplingContext& ctx, const CipherSpec& spec, std::uint64_t seed)
{
    Rng rng(seed);
    std::vector<std::vector<Word>> paths;
    paths.reserve(static_cast<std::size_t>(playouts));
    for (std::int64_t i = 0; i < playouts; ++i) paths.push_back(random_path(start, rounds, ctx, rng, spec).path);
    return paths;
}

GraphMetrics graph_metrics(const DiffGraph& g)
{
    if (g.nodes.empty()) throw ParameterError("metrics of an empty graph");
    GraphMetrics m;
    m.node_count = g.nodes.size();
    m.edge_count = g.edges.size();

    const std::vector<Word> order(g.nodes.begin(), g.nodes.end());
    auto index = [&](Word w) {
        return static_cast<std::size_t>(std::lower_bound(order.begin(), order.end(), w) - order.begin());
    };
    std::vector<std::size_t> degree(order.size(), 0);
    std::vector<std::size_t> parent(order.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [edge, freq] : g.edges) {
        (void)freq;
        const auto u = index(edge.first);
        const auto v = index(edge.second);
        ++degree[u];
        ++degree[v];
        if (u == v) {
            ++m.self_loops;
            continue;
        }
        parent[find(u)] = find(v);
    }
    m.max_degree = *std::max_element(degree.begin(), degree.end());
    for (std::size_t i = 0; i < order.size(); ++i)
        if (find(i) == i) ++m.weakly_connected_components;
    const double v = static_cast<double>(m.node_count);
    m.density = m.node_count < 2 ? 0.0 : static_cast<double>(m.edge_count - m.self_loops) / (v * (v - 1));
    return m;
}

GraphFormat parse_graph_format(std::string_view s)
{
    if (s == "dot") return GraphFormat::dot;
    if (s == "edge-csv" || s == "csv") return GraphFormat::edge_csv;
    throw ParameterError("unknown graph format '" + std::string(s) + "'");
}

std::string to_dot(const DiffGraph& g, int word_bits)
{
    std::ostringstream out;
    out << "digraph differentials {\n";
    for (Word n : g.nodes) out << "  \"" << hex_word(n, word_bits) << "\";\n";
    for (const auto& [e, f] : g.edges)
        out << "  \"" << hex_word(e.first, word_bits) << "\" -> \"" << hex_word(e.second, word_bits)
            << "\" [weight=" << f << "];\n";
    out << "}\n";
    return out.str();
}

std::string to_edge_csv(const DiffGraph& g, int word_bits)
{
    std::set<Word> linked;
    for (const auto& [e, f] : g.edges) {
        (void)f;
        linked.insert(e.first);
        linked.insert(e.second);
    }
    std::ostringstream out;
    out << "from,to,frequency\n";
    for (Word n : g.nodes)
        if (!linked.count(n)) out << hex_word(n, word_bits) << ",,\n";
    for (const auto& [e, f] : g.edges)
        out << hex_word(e.first, word_bits) << ',' << hex_word(e.second, word_bits) << ',' << f << '\n';
    return out.str();
}

DiffGraph from_edge_csv(std::string_view text, const std::string& source)
{
    const auto lines = split_lines(text);
    if (lines.empty() || trim(lines[0]) != "from,to,frequency")
        throw ParseError(source + ":1: expected header 'from,to,frequency'");
    DiffGraph g;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string at = source + ":" + std::to_string(i + 1) + ": ";
        const auto f = split(lines[i], ',');
        if (f.size() != 3) throw ParseError(at + "expected 3 fields");
        const auto from = parse_hex_word(trim(f[0]));
        if (!from) throw ParseError(at + "bad node '" + f[0] + "'");
        g.nodes.insert(*from);
        if (trim(f[1]).empty() && trim(f[2]).empty()) continue;
        const auto to = parse_hex_word(trim(f[1]));
        const auto freq = parse_uint(trim(f[2]));
        if (!to) throw ParseError(at + "bad node '" + f[1] + "'");
        if (!freq || *freq < 1) throw ParseError(at + "bad frequency '" + f[2] + "'");
        g.nodes.insert(*to);
        if (!g.edges.emplace(std::pair{*from, *to}, *freq).second) throw ParseError(at + "duplicate edge");
    }
    if (g.nodes.empty()) throw ParseError(source + ": graph has no nodes");
    return g;
}

void export_graph(const DiffGraph& g, GraphFormat format, const std::filesystem::path& path, int word_bits)
{
    write_file_atomic(path, format == GraphFormat::dot ? to_dot(g, word_bits) : to_edge_csv(g, word_bits));
}

DiffGraph import_edge_csv(const std::filesystem::path& path)
{
    return from_edge_csv(read_file(path), path.string());
}

} // namespace difftrail
