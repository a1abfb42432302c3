#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "multicolor/errors.hpp"
#include "multicolor/graph.hpp"

namespace multicolor {

// One instance type covers the plain, list, and nonuniform-list variants:
// absent lists mean "full palette", absent demands mean "uniformly b".
struct MulticolorInstance {
    Graph graph;
    int a = 0; // palette size
    int b = 0; // uniform demand (upper bound on demands in the nonuniform case)
    std::optional<std::vector<std::vector<int>>> lists;   // sorted subsets of [a]
    std::optional<std::vector<int>> demands;

    static MulticolorInstance plain(Graph g, int a, int b) {
        MulticolorInstance inst;
        inst.graph = std::move(g);
        inst.a = a;
        inst.b = b;
        inst.validate();
        return inst;
    }

    bool is_plain() const { return !lists && !demands; }

    std::vector<int> list_of(int v) const {
        if (lists) return (*lists)[v];
        std::vector<int> full(a);
        for (int j = 0; j < a; ++j) full[j] = j;
        return full;
    }

    int demand_of(int v) const { return demands ? (*demands)[v] : b; }

    int max_demand() const {
        int m = 0;
        for (int v = 0; v < graph.n; ++v) m = std::max(m, demand_of(v));
        return m;
    }

    void validate() const {
        if (a < 1) throw invalid_parameters("instance: palette size must be at least 1");
        if (b < 0) throw invalid_parameters("instance: negative demand");
        if (lists && static_cast<int>(lists->size()) != graph.n)
            throw invalid_parameters("instance: lists size mismatch");
        if (demands && static_cast<int>(demands->size()) != graph.n)
            throw invalid_parameters("instance: demands size mismatch");
        if (lists)
            for (const auto& l : *lists) {
                for (int c : l)
                    if (c < 0 || c >= a)
                        throw invalid_parameters("instance: list color out of range");
                auto sorted = l;
                std::sort(sorted.begin(), sorted.end());
                if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                    throw invalid_parameters("instance: duplicate color in a list");
            }
        if (demands)
            for (int d : *demands)
                if (d < 0) throw invalid_parameters("instance: negative demand");
    }
};

// Assignment of a color set to every vertex.
struct MultiColoring {
    std::vector<std::vector<int>> assignment; // sorted color sets
};

struct CheckResult {
    bool ok = true;
    std::string violation; // empty when ok; otherwise the first violation found

    explicit operator bool() const { return ok; }
};

// The three conditions of an L-(a:beta)-coloring: list containment, exact
// demand cardinality, disjointness across every edge. Stops at the first
// violation and reports it.
inline CheckResult check_multicoloring(const MulticolorInstance& inst, const MultiColoring& col) {
    if (static_cast<int>(col.assignment.size()) != inst.graph.n)
        return {false, "assignment does not cover every vertex"};
    for (int v = 0; v < inst.graph.n; ++v) {
        for (int c : col.assignment[v])
            if (c < 0 || c >= inst.a)
                throw invalid_coloring("vertex " + std::to_string(v) + " uses color " +
                                       std::to_string(c) + " outside palette of " +
                                       std::to_string(inst.a));
        auto set = col.assignment[v];
        std::sort(set.begin(), set.end());
        if (std::adjacent_find(set.begin(), set.end()) != set.end())
            return {false, "vertex " + std::to_string(v) + " repeats a color"};
        if (static_cast<int>(set.size()) != inst.demand_of(v))
            return {false, "vertex " + std::to_string(v) + " has " +
                               std::to_string(set.size()) + " colors, demand is " +
                               std::to_string(inst.demand_of(v))};
        auto list = inst.list_of(v);
        if (!std::includes(list.begin(), list.end(), set.begin(), set.end()))
            return {false, "vertex " + std::to_string(v) + " leaves its list"};
    }
    for (auto [u, v] : inst.graph.edges) {
        const auto& cu = col.assignment[u];
        const auto& cv = col.assignment[v];
        for (int c : cu)
            if (std::find(cv.begin(), cv.end(), c) != cv.end())
                return {false, "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                   ") shares color " + std::to_string(c)};
    }
    return {};
}

// ---- JSON interface ----
// {"n", "edges", "a", "b", "lists": optional, "demands": optional}

inline nlohmann::json instance_to_json(const MulticolorInstance& inst) {
    nlohmann::json j = graph_to_json(inst.graph);
    j["a"] = inst.a;
    j["b"] = inst.b;
    if (inst.lists) j["lists"] = *inst.lists;
    if (inst.demands) j["demands"] = *inst.demands;
    return j;
}

// Byte-identical to instance_to_json(inst).dump(); keys in alphabetical
// order: a, b, demands, edges, lists, n.
inline std::string instance_json_text(const MulticolorInstance& inst) {
    std::string out;
    out.reserve(64 + 16 * inst.graph.edges.size() +
                (inst.lists ? 4 * inst.graph.n * (inst.a + 1) : 0));
    out += "{\"a\":";
    out += std::to_string(inst.a);
    out += ",\"b\":";
    out += std::to_string(inst.b);
    if (inst.demands) {
        out += ",\"demands\":";
        detail::append_int_array(out, *inst.demands);
    }
    out += ",\"edges\":";
    detail::append_edges(out, inst.graph.edges);
    if (inst.lists) {
        out += ",\"lists\":[";
        for (size_t i = 0; i < inst.lists->size(); ++i) {
            if (i) out += ',';
            detail::append_int_array(out, (*inst.lists)[i]);
        }
        out += ']';
    }
    out += ",\"n\":";
    out += std::to_string(inst.graph.n);
    out += '}';
    return out;
}

inline MulticolorInstance instance_from_json(const nlohmann::json& j) {
    MulticolorInstance inst;
    inst.graph = graph_from_json(j);
    if (!j.contains("a") || !j.contains("b"))
        throw parse_error("instance JSON: expected \"a\" and \"b\"");
    inst.a = j.at("a").get<int>();
    inst.b = j.at("b").get<int>();
    if (j.contains("lists")) {
        inst.lists = j.at("lists").get<std::vector<std::vector<int>>>();
        for (auto& l : *inst.lists) std::sort(l.begin(), l.end());
    }
    if (j.contains("demands")) inst.demands = j.at("demands").get<std::vector<int>>();
    inst.validate();
    return inst;
}

inline nlohmann::json coloring_to_json(const MultiColoring& col) {
    nlohmann::json j;
    j["assignment"] = col.assignment;
    return j;
}

inline MultiColoring coloring_from_json(const nlohmann::json& j) {
    MultiColoring col;
    col.assignment = j.at("assignment").get<std::vector<std::vector<int>>>();
    return col;
}

} // namespace multicolor
