#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "multicolor/cnf.hpp"
#include "multicolor/detecting.hpp"
#include "multicolor/errors.hpp"
#include "multicolor/graph.hpp"
#include "multicolor/instance.hpp"
#include "multicolor/rand.hpp"

namespace multicolor {

// (3,4) formula with variables and clauses partitioned into groups, plus the
// sigma coloring of variable groups. Condition (*) on the output: within any
// clause group all occurring variables are distinct, lie in distinct variable
// groups, and those groups take distinct sigma values.
struct GroupedFormula {
    CnfFormula formula;
    int b = 0;
    std::vector<std::vector<int>> variable_groups; // sorted variable ids (1-based)
    std::vector<std::vector<int>> clause_groups;   // sorted clause indices
    std::vector<int> var_group;                    // variable id -> group index
    std::vector<int> sigma;                        // group index -> color class
    int sigma_range = 0;

    std::vector<int> index_set(int j) const { // I_j: groups touched by C_j
        std::vector<int> groups;
        for (int ci : clause_groups[j])
            for (int v : clause_variables(formula.clauses[ci]))
                groups.push_back(var_group[v]);
        std::sort(groups.begin(), groups.end());
        groups.erase(std::unique(groups.begin(), groups.end()), groups.end());
        return groups;
    }
};

namespace detail {

inline std::vector<std::vector<int>> refine_classes(const ProperColoring& coloring,
                                                    int element_count, int chunk) {
    std::vector<std::vector<int>> classes(coloring.color_count);
    for (int e = 0; e < element_count; ++e) classes[coloring.colors[e]].push_back(e);
    std::vector<std::vector<int>> groups;
    for (auto& cls : classes) {
        for (size_t pos = 0; pos < cls.size(); pos += chunk) {
            std::vector<int> g(cls.begin() + pos,
                               cls.begin() + std::min(cls.size(), pos + chunk));
            groups.push_back(std::move(g));
        }
    }
    return groups;
}

} // namespace detail

// Partition variables into groups of size <= floor(log2 b) via a greedy
// coloring of the primal graph G1, clauses into groups of size <= b via the
// conflict graph G2 (clauses clash when they touch a common variable group),
// and color the group-conflict graph G3 to obtain sigma.
inline GroupedFormula group_formula(const CnfFormula& f, int b) {
    if (!is_34_form(f)) throw invalid_parameters("group_formula: formula not in (3,4) form");
    if (b < 2) throw invalid_parameters("group_formula: need b >= 2");

    int n = f.variable_count;
    int m = static_cast<int>(f.clauses.size());
    int group_cap = 0;
    while ((1 << (group_cap + 1)) <= b) ++group_cap; // floor(log2 b)

    GroupedFormula g;
    g.formula = f;
    g.b = b;

    // G1: primal graph, max degree <= 8 in (3,4) form.
    {
        std::vector<std::pair<int, int>> edges;
        for (const auto& c : f.clauses) {
            auto vars = clause_variables(c);
            for (size_t i = 0; i < vars.size(); ++i)
                for (size_t j = i + 1; j < vars.size(); ++j)
                    edges.emplace_back(vars[i] - 1, vars[j] - 1);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        Graph g1 = Graph::from_edges(n, std::move(edges));
        auto groups0 = detail::refine_classes(greedy_color(g1), n, group_cap);
        g.var_group.assign(n + 1, -1);
        for (auto& grp : groups0) {
            for (int& v : grp) ++v; // to 1-based variable ids
            for (int v : grp) g.var_group[v] = static_cast<int>(g.variable_groups.size());
            g.variable_groups.push_back(std::move(grp));
        }
    }

    // G2: clauses clash when any of their variables share a variable group
    // (sharing a variable is the special case of sharing its group).
    {
        std::vector<std::vector<int>> touching(g.variable_groups.size());
        for (int ci = 0; ci < m; ++ci)
            for (int v : clause_variables(f.clauses[ci]))
                touching[g.var_group[v]].push_back(ci);
        std::vector<std::pair<int, int>> edges;
        for (const auto& list : touching)
            for (size_t i = 0; i < list.size(); ++i)
                for (size_t j = i + 1; j < list.size(); ++j)
                    edges.emplace_back(list[i], list[j]);
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        Graph g2 = Graph::from_edges(m, std::move(edges));
        g.clause_groups = detail::refine_classes(greedy_color(g2), m, b);
    }

    // G3: variable groups clash when a common clause group touches both.
    {
        int ng = static_cast<int>(g.variable_groups.size());
        std::vector<std::pair<int, int>> edges;
        for (int j = 0; j < static_cast<int>(g.clause_groups.size()); ++j) {
            auto groups = g.index_set(j);
            for (size_t i = 0; i < groups.size(); ++i)
                for (size_t k = i + 1; k < groups.size(); ++k)
                    edges.emplace_back(groups[i], groups[k]);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
        Graph g3 = Graph::from_edges(ng, std::move(edges));
        auto coloring = greedy_color(g3);
        g.sigma = coloring.colors;
        g.sigma_range = coloring.color_count;
    }

    return g;
}

// Condition (*): per clause group, occurring variables all distinct, in
// pairwise distinct variable groups, and sigma injective on those groups.
inline bool check_maltese(const GroupedFormula& g) {
    for (const auto& cg : g.clause_groups) {
        std::vector<int> vars;
        for (int ci : cg)
            for (int v : clause_variables(g.formula.clauses[ci])) vars.push_back(v);
        std::vector<int> sorted_vars = vars;
        std::sort(sorted_vars.begin(), sorted_vars.end());
        if (std::adjacent_find(sorted_vars.begin(), sorted_vars.end()) != sorted_vars.end())
            return false;
        std::vector<int> groups, sigmas;
        for (int v : vars) {
            groups.push_back(g.var_group[v]);
            sigmas.push_back(g.sigma[g.var_group[v]]);
        }
        std::sort(groups.begin(), groups.end());
        if (std::adjacent_find(groups.begin(), groups.end()) != groups.end()) return false;
        std::sort(sigmas.begin(), sigmas.end());
        if (std::adjacent_find(sigmas.begin(), sigmas.end()) != sigmas.end()) return false;
    }
    return true;
}

// Everything needed to move witnesses across the gadget construction.
struct ReductionArtifacts {
    GroupedFormula grouped;
    int b = 0;     // construction parameter; demands range up to 2b
    int a = 0;     // palette actually used: b * sigma_range
    int n_F = 0;   // uniform detecting-family size after padding
    std::vector<std::vector<std::vector<int>>> family_sets; // per group j: 2*n_F sets of clause ids
    std::vector<std::vector<int>> index_sets;               // I_j
    std::vector<std::vector<int>> u_vertex;                 // per group j, per k: vertex id or -1
    std::vector<int> w_vertex;                              // per group j
    std::vector<int> roles;                                 // 0 = v_i, 1 = u_{j,k}, 2 = w_j
    ProperColoring three_coloring;

    std::vector<int> v_list(int i) const { // L(v_i)
        std::vector<int> list;
        for (int x = 0; x < b; ++x) list.push_back(b * grouped.sigma[i] + x);
        return list;
    }
};

// Per variable group i, an integer x_i in [b] whose low |V_i| bits encode the
// truth values of the group's variables (sorted by index, least significant
// bit first).
struct WitnessCode {
    std::vector<int> x;
};

inline WitnessCode witness_code(const Assignment& assignment, const GroupedFormula& g) {
    WitnessCode code;
    code.x.assign(g.variable_groups.size(), 0);
    for (size_t i = 0; i < g.variable_groups.size(); ++i) {
        const auto& vars = g.variable_groups[i];
        for (size_t t = 0; t < vars.size(); ++t)
            if (assignment.value(vars[t])) code.x[i] |= 1 << t;
    }
    return code;
}

namespace detail {

// Does assignment code x on variable group `vars` (sorted, LSB-first bits)
// satisfy clause c?
inline bool code_satisfies_clause(const std::vector<int>& vars, int x,
                                  const std::vector<int>& clause) {
    for (int l : clause) {
        int v = std::abs(l);
        auto it = std::lower_bound(vars.begin(), vars.end(), v);
        if (it == vars.end() || *it != v) continue;
        bool value = (x >> (it - vars.begin())) & 1;
        if ((l > 0) == value) return true;
    }
    return false;
}

} // namespace detail

// The gadget construction: one vertex v_i per variable group with demand b-1
// (the missed color encodes an assignment), per clause group a block of
// u-vertices tied to a 4-detecting family and its complements, and one
// w-vertex absorbing the unchosen missing colors. u-vertices whose set is
// empty are omitted; a demand-0 vertex constrains nothing.
inline std::pair<MulticolorInstance, ReductionArtifacts>
build_nonuniform(const GroupedFormula& g, uint64_t seed = 0) {
    if (!check_maltese(g))
        throw invalid_parameters("build_nonuniform: grouping does not satisfy (*)");
    int b = g.b;
    int n_V = static_cast<int>(g.variable_groups.size());
    int n_C = static_cast<int>(g.clause_groups.size());

    ReductionArtifacts art;
    art.grouped = g;
    art.b = b;
    art.a = b * g.sigma_range;

    // Verified 4-detecting family per clause group, padded to a uniform n_F
    // with copies of the full group (their complements are empty).
    std::vector<DetectingFamily> families;
    int n_F = 0;
    for (int j = 0; j < n_C; ++j) {
        int mj = static_cast<int>(g.clause_groups[j].size());
        families.push_back(build_family(mj, 4, SplitMix64::mix(seed, j), mj));
        n_F = std::max(n_F, static_cast<int>(families.back().sets.size()));
    }
    art.n_F = n_F;
    for (int j = 0; j < n_C; ++j) {
        const auto& cg = g.clause_groups[j];
        int mj = static_cast<int>(cg.size());
        std::vector<std::vector<int>> local = families[j].sets;
        std::vector<int> full(mj);
        std::iota(full.begin(), full.end(), 0);
        while (static_cast<int>(local.size()) < n_F) local.push_back(full);
        std::vector<std::vector<int>> sets;
        for (int k = 0; k < 2 * n_F; ++k) {
            std::vector<int> s;
            if (k < n_F) {
                s = local[k];
            } else {
                std::vector<char> in(mj, 0);
                for (int e : local[k - n_F]) in[e] = 1;
                for (int e = 0; e < mj; ++e)
                    if (!in[e]) s.push_back(e);
            }
            std::vector<int> global;
            for (int e : s) global.push_back(cg[e]);
            sets.push_back(std::move(global));
        }
        art.family_sets.push_back(std::move(sets));
        art.index_sets.push_back(g.index_set(j));
    }

    // Vertices: v_0..v_{n_V-1}, then per clause group its u-block and w.
    std::vector<std::vector<int>> lists;
    std::vector<int> demands;
    std::vector<std::pair<int, int>> edges;

    for (int i = 0; i < n_V; ++i) {
        lists.push_back(art.v_list(i));
        demands.push_back(b - 1);
        art.roles.push_back(0);
    }

    art.u_vertex.assign(n_C, {});
    art.w_vertex.assign(n_C, -1);
    int next = n_V;
    for (int j = 0; j < n_C; ++j) {
        const auto& I = art.index_sets[j];
        for (int k = 0; k < 2 * art.n_F; ++k) {
            const auto& S = art.family_sets[j][k];
            if (S.empty()) {
                art.u_vertex[j].push_back(-1);
                continue;
            }
            std::vector<int> list;
            for (int i : I) {
                const auto& vars = g.variable_groups[i];
                int codes = 1 << vars.size();
                for (int x = 0; x < codes; ++x) {
                    bool hits = false;
                    for (int ci : S)
                        if (detail::code_satisfies_clause(vars, x, g.formula.clauses[ci])) {
                            hits = true;
                            break;
                        }
                    if (hits) list.push_back(b * g.sigma[i] + x);
                }
            }
            std::sort(list.begin(), list.end());
            int u = next++;
            art.u_vertex[j].push_back(u);
            art.roles.push_back(1);
            lists.push_back(std::move(list));
            demands.push_back(static_cast<int>(S.size()));
            for (int i : I) edges.emplace_back(i, u);
        }
        int w = next++;
        art.w_vertex[j] = w;
        art.roles.push_back(2);
        std::vector<int> wlist;
        for (int i : I)
            for (int x = 0; x < b; ++x) wlist.push_back(b * g.sigma[i] + x);
        std::sort(wlist.begin(), wlist.end());
        lists.push_back(std::move(wlist));
        demands.push_back(2 * static_cast<int>(g.clause_groups[j].size()));
        for (int i : I) edges.emplace_back(i, w);
        for (int u : art.u_vertex[j])
            if (u >= 0) edges.emplace_back(u, w);
    }

    MulticolorInstance inst;
    inst.graph = Graph::from_edges(next, std::move(edges));
    inst.a = std::max(1, art.a);
    inst.b = 2 * b;
    inst.lists = std::move(lists);
    inst.demands = std::move(demands);
    inst.validate();

    art.three_coloring.colors = art.roles;
    art.three_coloring.color_count = 3;
    return {std::move(inst), std::move(art)};
}

// Lemma "satisfiable formula gives a coloring": the missed color of v_i
// encodes the assignment on V_i; for every clause one satisfied literal is
// chosen (smallest variable index), its group's missing color goes to the
// u-vertices whose set contains the clause, and w_j takes the rest.
inline MultiColoring encode_witness(const Assignment& assignment, const ReductionArtifacts& art) {
    const auto& g = art.grouped;
    if (!satisfies(g.formula, assignment))
        throw witness_error("encode_witness: assignment does not satisfy the formula");
    int b = art.b;
    int n_V = static_cast<int>(g.variable_groups.size());
    std::vector<int> code = witness_code(assignment, g).x;

    int m = static_cast<int>(g.formula.clauses.size());
    std::vector<int> chosen_group(m, -1); // i_c
    for (int c = 0; c < m; ++c) {
        for (int l : g.formula.clauses[c]) {
            int v = std::abs(l);
            if ((l > 0) == assignment.value(v)) {
                chosen_group[c] = g.var_group[v];
                break; // canonical clause order puts the smallest variable first
            }
        }
    }

    int total = n_V;
    for (int j = 0; j < static_cast<int>(g.clause_groups.size()); ++j) {
        for (int u : art.u_vertex[j])
            if (u >= 0) ++total;
        ++total;
    }

    MultiColoring col;
    col.assignment.resize(total);
    for (int i = 0; i < n_V; ++i) {
        std::vector<int> set;
        int missing = b * g.sigma[i] + code[i];
        for (int color : art.v_list(i))
            if (color != missing) set.push_back(color);
        col.assignment[i] = std::move(set);
    }
    for (int j = 0; j < static_cast<int>(g.clause_groups.size()); ++j) {
        for (int k = 0; k < 2 * art.n_F; ++k) {
            int u = art.u_vertex[j][k];
            if (u < 0) continue;
            std::vector<int> set;
            for (int ci : art.family_sets[j][k]) {
                int i = chosen_group[ci];
                set.push_back(b * g.sigma[i] + code[i]);
            }
            std::sort(set.begin(), set.end());
            col.assignment[u] = std::move(set);
        }
        std::vector<char> is_chosen(n_V, 0);
        for (int ci : g.clause_groups[j]) is_chosen[chosen_group[ci]] = 1;
        std::vector<int> set;
        for (int i : art.index_sets[j])
            if (!is_chosen[i]) set.push_back(b * g.sigma[i] + code[i]);
        std::sort(set.begin(), set.end());
        col.assignment[art.w_vertex[j]] = std::move(set);
    }
    return col;
}

// Lemma "coloring gives a satisfying assignment": read x_i off the unique
// color of L(v_i) absent from the coloring, reduce modulo 2^|V_i| (distinct
// integers in [b] may encode the same assignment), and take the low bits.
inline Assignment decode_witness(const MultiColoring& col, const ReductionArtifacts& art) {
    const auto& g = art.grouped;
    int b = art.b;
    int n_V = static_cast<int>(g.variable_groups.size());
    if (static_cast<int>(col.assignment.size()) < n_V)
        throw witness_error("decode_witness: coloring does not cover the v-vertices");

    Assignment out;
    out.values.assign(g.formula.variable_count, false);
    for (int i = 0; i < n_V; ++i) {
        std::vector<int> missing;
        const auto& assigned = col.assignment[i];
        for (int color : art.v_list(i))
            if (std::find(assigned.begin(), assigned.end(), color) == assigned.end())
                missing.push_back(color);
        if (missing.size() != 1)
            throw witness_error("decode_witness: v-vertex " + std::to_string(i) +
                                " misses " + std::to_string(missing.size()) +
                                " colors instead of one");
        int x = missing[0] - b * g.sigma[i];
        const auto& vars = g.variable_groups[i];
        x &= (1 << vars.size()) - 1;
        for (size_t t = 0; t < vars.size(); ++t)
            out.values[vars[t] - 1] = (x >> t) & 1;
    }
    if (!satisfies(g.formula, out))
        throw witness_error("decode_witness: decoded assignment does not satisfy the formula");
    return out;
}

// Filling colors: raise every demand to the uniform b using a fresh color
// block per class of the proper coloring, so padded colors never clash.
inline MulticolorInstance uniformize(const MulticolorInstance& inst,
                                     const ProperColoring& coloring) {
    inst.validate();
    if (!is_proper(inst.graph, coloring))
        throw invalid_parameters("uniformize: coloring is not proper");
    int b = inst.b;
    if (inst.max_demand() > b)
        throw invalid_parameters("uniformize: some demand exceeds the uniform target");

    int t = coloring.color_count;
    MulticolorInstance out;
    out.graph = inst.graph;
    out.a = inst.a + t * b;
    out.b = b;
    std::vector<std::vector<int>> lists;
    for (int v = 0; v < inst.graph.n; ++v) {
        auto list = inst.list_of(v);
        int beta = inst.demand_of(v);
        for (int i = 0; i < b - beta; ++i)
            list.push_back(inst.a + coloring.colors[v] * b + i);
        std::sort(list.begin(), list.end());
        lists.push_back(std::move(list));
    }
    out.lists = std::move(lists);
    out.validate();
    return out;
}

inline uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        if (r > (~uint64_t{0}) / static_cast<uint64_t>(n - k + i))
            throw capacity_error("binomial: overflow");
        r = r * static_cast<uint64_t>(n - k + i) / static_cast<uint64_t>(i);
    }
    return r;
}

// List removal: glue in KG_{a+b,b} and wire v to every Kneser vertex whose
// label avoids L(v). In any coloring the Kneser part is an automorphism of
// KG_{a+b,b}, which pins the lists back onto the original vertices. The
// automorphism theorem needs a+b > 2b, hence the a > b precondition.
inline MulticolorInstance remove_lists(const MulticolorInstance& inst,
                                       uint64_t kneser_cap = 200'000) {
    inst.validate();
    if (inst.demands)
        for (int d : *inst.demands)
            if (d != inst.b)
                throw invalid_parameters("remove_lists: instance must have uniform demand");
    if (inst.a <= inst.b)
        throw invalid_parameters("remove_lists: need a > b");
    int a = inst.a;
    int b = inst.b;
    if (binomial(a + b, b) > kneser_cap)
        throw capacity_error("remove_lists: C(a+b,b) exceeds the Kneser cap");

    KneserGraph k = kneser_graph(a + b, b);
    int n = inst.graph.n;
    int kn = k.graph.n;

    std::vector<std::pair<int, int>> edges = inst.graph.edges;
    edges.reserve(edges.size() + k.graph.edges.size() +
                  static_cast<size_t>(n) * static_cast<size_t>(kn));
    for (auto [x, y] : k.graph.edges) edges.emplace_back(n + x, n + y);

    std::vector<uint64_t> label_mask(kn, 0);
    for (int x = 0; x < kn; ++x)
        for (int c : k.labels[x]) label_mask[x] |= uint64_t{1} << c;
    for (int v = 0; v < n; ++v) {
        uint64_t lmask = 0;
        for (int c : inst.list_of(v)) lmask |= uint64_t{1} << c;
        for (int x = 0; x < kn; ++x)
            if ((lmask & label_mask[x]) == 0) edges.emplace_back(v, n + x);
    }

    MulticolorInstance out;
    out.graph = Graph::from_edges(n + kn, std::move(edges));
    out.a = a + b;
    out.b = b;
    out.validate();
    return out;
}

struct PipelineStats {
    int n_V = 0;
    int n_C = 0;
    int n_F = 0;
    int sigma_range = 0;
    int a = 0; // nonuniform-stage palette
    std::vector<int> vertices_per_stage;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["n_V"] = n_V;
        j["n_C"] = n_C;
        j["n_F"] = n_F;
        j["sigma_range"] = sigma_range;
        j["a"] = a;
        j["vertices_per_stage"] = vertices_per_stage;
        return j;
    }
};

enum class PipelineStage { nonuniform, uniform, plain };

struct PipelineResult {
    CnfFormula regularized;
    GroupedFormula grouped;
    ReductionArtifacts artifacts;
    MulticolorInstance nonuniform;
    std::optional<MulticolorInstance> uniform;
    std::optional<MulticolorInstance> plain;
    PipelineStats stats;

    const MulticolorInstance& stage_instance(PipelineStage s) const {
        switch (s) {
            case PipelineStage::nonuniform: return nonuniform;
            case PipelineStage::uniform: return *uniform;
            default: return *plain;
        }
    }
};

namespace detail {

template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) {
    try {
        return fn();
    } catch (const capacity_error& e) {
        throw capacity_error(std::string(stage) + " stage: " + e.what());
    } catch (const invalid_parameters& e) {
        throw invalid_parameters(std::string(stage) + " stage: " + e.what());
    }
}

} // namespace detail

// SAT -> (3,4)-SAT -> nonuniform list -> uniform list -> plain (a:b)-coloring.
inline PipelineResult full_pipeline(const CnfFormula& f, int b, uint64_t seed = 0,
                                    PipelineStage until = PipelineStage::plain,
                                    uint64_t kneser_cap = 200'000) {
    PipelineResult r;
    r.regularized = detail::run_stage("regularize", [&] { return tovey_regularize(f); });
    r.grouped = detail::run_stage("group", [&] { return group_formula(r.regularized, b); });
    detail::run_stage("nonuniform", [&] {
        auto [inst, art] = build_nonuniform(r.grouped, seed);
        r.nonuniform = std::move(inst);
        r.artifacts = std::move(art);
        return 0;
    });
    r.stats.n_V = static_cast<int>(r.grouped.variable_groups.size());
    r.stats.n_C = static_cast<int>(r.grouped.clause_groups.size());
    r.stats.n_F = r.artifacts.n_F;
    r.stats.sigma_range = r.grouped.sigma_range;
    r.stats.a = r.artifacts.a;
    r.stats.vertices_per_stage.push_back(r.nonuniform.graph.n);
    if (until == PipelineStage::nonuniform) return r;

    r.uniform = detail::run_stage("uniform", [&] {
        return uniformize(r.nonuniform, r.artifacts.three_coloring);
    });
    r.stats.vertices_per_stage.push_back(r.uniform->graph.n);
    if (until == PipelineStage::uniform) return r;

    r.plain = detail::run_stage("plain", [&] { return remove_lists(*r.uniform, kneser_cap); });
    r.stats.vertices_per_stage.push_back(r.plain->graph.n);
    return r;
}

} // namespace multicolor
