#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "multicolor/errors.hpp"

namespace multicolor {

// Simple undirected graph. Edges are stored canonically: u < v, sorted,
// no duplicates, no loops.
struct Graph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;

    static Graph from_edges(int vertex_count, std::vector<std::pair<int, int>> raw) {
        if (vertex_count < 0)
            throw invalid_parameters("graph: negative vertex count");
        for (auto& [u, v] : raw) {
            if (u == v) throw invalid_parameters("graph: loop at vertex " + std::to_string(u));
            if (u > v) std::swap(u, v);
            if (u < 0 || v >= vertex_count)
                throw invalid_parameters("graph: edge endpoint out of range");
        }
        std::sort(raw.begin(), raw.end());
        auto dup = std::adjacent_find(raw.begin(), raw.end());
        if (dup != raw.end())
            throw invalid_parameters("graph: duplicate edge");
        Graph g;
        g.n = vertex_count;
        g.edges = std::move(raw);
        return g;
    }

    bool has_edge(int u, int v) const {
        if (u == v) return false;
        if (u > v) std::swap(u, v);
        return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
    }

    std::vector<std::vector<int>> adjacency() const {
        std::vector<std::vector<int>> adj(n);
        for (auto [u, v] : edges) {
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        return adj;
    }

    int max_degree() const {
        std::vector<int> deg(n, 0);
        for (auto [u, v] : edges) {
            ++deg[u];
            ++deg[v];
        }
        return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
    }

    bool operator==(const Graph& other) const = default;
};

// Proper coloring: one color per vertex, adjacent vertices differ.
struct ProperColoring {
    std::vector<int> colors;
    int color_count = 0;
};

inline bool is_proper(const Graph& g, const ProperColoring& c) {
    if (static_cast<int>(c.colors.size()) != g.n) return false;
    for (auto [u, v] : g.edges)
        if (c.colors[u] == c.colors[v]) return false;
    return true;
}

// Kneser graph together with the subset label of each vertex.
struct KneserGraph {
    Graph graph;
    std::vector<std::vector<int>> labels; // sorted b-subsets of [a], lex order
};

// All b-subsets of [a] in lexicographic order; edge iff labels are disjoint.
inline KneserGraph kneser_graph(int a, int b) {
    if (b <= 0 || b > a)
        throw invalid_parameters("kneser_graph: need 0 < b <= a, got a=" + std::to_string(a) +
                                 " b=" + std::to_string(b));
    if (a > 63)
        throw capacity_error("kneser_graph: palette above 63 colors");

    KneserGraph k;
    std::vector<int> cur(b);
    for (int i = 0; i < b; ++i) cur[i] = i;
    std::vector<uint64_t> masks;
    while (true) {
        k.labels.push_back(cur);
        uint64_t m = 0;
        for (int x : cur) m |= uint64_t{1} << x;
        masks.push_back(m);
        int i = b - 1;
        while (i >= 0 && cur[i] == a - b + i) --i;
        if (i < 0) break;
        ++cur[i];
        for (int j = i + 1; j < b; ++j) cur[j] = cur[j - 1] + 1;
    }

    int m = static_cast<int>(k.labels.size());
    std::vector<std::pair<int, int>> edges;
    if (a >= 2 * b) { // C(a,b) * C(a-b,b) / 2 edges
        uint64_t count = 1;
        for (int i = 1; i <= b; ++i)
            count = count * static_cast<uint64_t>(a - b - i + 1) / static_cast<uint64_t>(i);
        edges.reserve(static_cast<size_t>(m) * count / 2);
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if ((masks[i] & masks[j]) == 0) edges.emplace_back(i, j);
    k.graph = Graph::from_edges(m, std::move(edges));
    return k;
}

// Greedy coloring along the given vertex order; each vertex takes the least
// color not used by an already-colored neighbor.
inline ProperColoring greedy_color(const Graph& g, const std::vector<int>& order) {
    if (static_cast<int>(order.size()) != g.n)
        throw invalid_parameters("greedy_color: order size mismatch");
    std::vector<bool> seen(g.n, false);
    for (int v : order) {
        if (v < 0 || v >= g.n || seen[v])
            throw invalid_parameters("greedy_color: order is not a permutation");
        seen[v] = true;
    }

    auto adj = g.adjacency();
    ProperColoring out;
    out.colors.assign(g.n, -1);
    std::vector<char> used;
    for (int v : order) {
        used.assign(g.n + 1, 0);
        for (int w : adj[v])
            if (out.colors[w] >= 0) used[out.colors[w]] = 1;
        int c = 0;
        while (used[c]) ++c;
        out.colors[v] = c;
        out.color_count = std::max(out.color_count, c + 1);
    }
    return out;
}

inline ProperColoring greedy_color(const Graph& g) {
    std::vector<int> order(g.n);
    for (int i = 0; i < g.n; ++i) order[i] = i;
    return greedy_color(g, order);
}

inline std::vector<uint64_t> adjacency_masks(const Graph& g) {
    if (g.n > 63) throw capacity_error("adjacency_masks: more than 63 vertices");
    std::vector<uint64_t> adj(g.n, 0);
    for (auto [u, v] : g.edges) {
        adj[u] |= uint64_t{1} << v;
        adj[v] |= uint64_t{1} << u;
    }
    return adj;
}

// All independent sets as bitmasks, in increasing mask order (so the empty
// set comes first). Capped because the output is exponential.
inline std::vector<uint64_t> independent_set_masks(const Graph& g,
                                                   uint64_t set_cap = uint64_t{1} << 22) {
    if (g.n > 63 || (uint64_t{1} << g.n) > set_cap)
        throw capacity_error("independent_sets: 2^" + std::to_string(g.n) +
                             " subsets exceed the enumeration cap");
    auto adj = adjacency_masks(g);
    std::vector<uint64_t> out;
    for (uint64_t mask = 0; mask < (uint64_t{1} << g.n); ++mask) {
        bool ok = true;
        uint64_t rest = mask;
        while (rest) {
            int v = __builtin_ctzll(rest);
            rest &= rest - 1;
            if (adj[v] & mask) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(mask);
    }
    return out;
}

inline std::vector<std::vector<int>> independent_sets(const Graph& g,
                                                      uint64_t set_cap = uint64_t{1} << 22) {
    std::vector<std::vector<int>> out;
    for (uint64_t mask : independent_set_masks(g, set_cap)) {
        std::vector<int> s;
        for (uint64_t rest = mask; rest; rest &= rest - 1)
            s.push_back(__builtin_ctzll(rest));
        out.push_back(std::move(s));
    }
    return out;
}

// True iff every edge of g maps to an edge of h. Mapping an edge onto a
// single vertex fails (h has no loops).
inline bool check_homomorphism(const Graph& g, const Graph& h, const std::vector<int>& map) {
    if (static_cast<int>(map.size()) != g.n)
        throw invalid_mapping("check_homomorphism: mapping is not total");
    for (int img : map)
        if (img < 0 || img >= h.n)
            throw invalid_mapping("check_homomorphism: image out of range");
    for (auto [u, v] : g.edges)
        if (!h.has_edge(map[u], map[v])) return false;
    return true;
}

// ---- JSON interface: {"n": int, "edges": [[u,v], ...]}, u < v, sorted. ----

inline nlohmann::json graph_to_json(const Graph& g) {
    nlohmann::json j;
    j["n"] = g.n;
    auto edges = nlohmann::json::array();
    for (auto [u, v] : g.edges) edges.push_back({u, v});
    j["edges"] = edges;
    return j;
}

namespace detail {

// Streaming writers producing exactly the compact nlohmann encoding (keys in
// alphabetical order, no whitespace); the DOM route is too slow for the
// multi-million-edge Kneser instances.
inline void append_edges(std::string& out, const std::vector<std::pair<int, int>>& edges) {
    out += '[';
    bool first = true;
    for (auto [u, v] : edges) {
        if (!first) out += ',';
        first = false;
        out += '[';
        out += std::to_string(u);
        out += ',';
        out += std::to_string(v);
        out += ']';
    }
    out += ']';
}

inline void append_int_array(std::string& out, const std::vector<int>& values) {
    out += '[';
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    out += ']';
}

} // namespace detail

// Byte-identical to graph_to_json(g).dump().
inline std::string graph_json_text(const Graph& g) {
    std::string out;
    out.reserve(32 + 16 * g.edges.size());
    out += "{\"edges\":";
    detail::append_edges(out, g.edges);
    out += ",\"n\":";
    out += std::to_string(g.n);
    out += '}';
    return out;
}

inline Graph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw parse_error("graph JSON: expected {\"n\", \"edges\"}");
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 2)
            throw parse_error("graph JSON: edge is not a pair");
        edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return Graph::from_edges(j.at("n").get<int>(), std::move(edges));
}

} // namespace multicolor
