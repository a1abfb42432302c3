#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "multicolor/errors.hpp"
#include "multicolor/graph.hpp"
#include "multicolor/instance.hpp"

namespace multicolor {

// eta of the dynamic program: how many more times each vertex must be covered.
using DemandVector = std::vector<int>;

struct SolverLimits {
    uint64_t node_budget = 20'000'000;      // backtracking candidate trials
    uint64_t dp_state_cap = 100'000'000;    // (b+1)^n * a
    uint64_t set_cap = uint64_t{1} << 22;   // independent-set enumeration
};

namespace detail {

inline uint64_t color_mask(const std::vector<int>& colors) {
    uint64_t m = 0;
    for (int c : colors) m |= uint64_t{1} << c;
    return m;
}

// demand-subsets of the list in lexicographic order, as color masks
inline std::vector<uint64_t> candidate_masks(const std::vector<int>& list, int demand) {
    std::vector<uint64_t> out;
    int m = static_cast<int>(list.size());
    if (demand > m) return out;
    if (demand == 0) {
        out.push_back(0);
        return out;
    }
    std::vector<int> idx(demand);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        uint64_t mask = 0;
        for (int i : idx) mask |= uint64_t{1} << list[i];
        out.push_back(mask);
        int i = demand - 1;
        while (i >= 0 && idx[i] == m - demand + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < demand; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

inline std::vector<int> mask_to_colors(uint64_t mask) {
    std::vector<int> out;
    for (uint64_t rest = mask; rest; rest &= rest - 1)
        out.push_back(__builtin_ctzll(rest));
    return out;
}

} // namespace detail

// Exhaustive search for a multicoloring. Decisions follow a static order of
// ascending slack |list(v)| - demand(v) (ties by index), candidate color sets
// in lexicographic order, so the returned witness is a deterministic function
// of the instance. Forward checking prunes dead branches and vertices left
// with a single live candidate are assigned immediately; both only apply
// forced information, so the witness found first never changes.
namespace detail {

class ColoringSearch {
public:
    ColoringSearch(const MulticolorInstance& inst, const SolverLimits& limits)
        : inst_(inst), limits_(limits), n_(inst.graph.n), adj_(inst.graph.adjacency()) {
        cands_.resize(n_);
        forbidden_.assign(n_, 0);
        chosen_.assign(n_, 0);
        assigned_.assign(n_, false);
        alive_.resize(n_);
        order_.resize(n_);
        std::iota(order_.begin(), order_.end(), 0);
        for (int v = 0; v < n_; ++v)
            cands_[v] = candidate_masks(inst.list_of(v), inst.demand_of(v));
        std::stable_sort(order_.begin(), order_.end(), [&](int u, int v) {
            int su = static_cast<int>(inst.list_of(u).size()) - inst.demand_of(u);
            int sv = static_cast<int>(inst.list_of(v).size()) - inst.demand_of(v);
            return su < sv;
        });
        for (int v = 0; v < n_; ++v) alive_[v] = static_cast<int>(cands_[v].size());
    }

    std::optional<MultiColoring> run() {
        for (int v = 0; v < n_; ++v)
            if (alive_[v] == 0) return std::nullopt;
        // vertices forced from the start (single candidate: e.g. demand 0)
        Trail root;
        if (!settle_singletons(root)) return std::nullopt;
        if (!search(0)) return std::nullopt;
        MultiColoring col;
        col.assignment.resize(n_);
        for (int v = 0; v < n_; ++v) col.assignment[v] = mask_to_colors(chosen_[v]);
        return col;
    }

private:
    struct Trail {
        std::vector<int> assigned;                     // vertices set by this step
        std::vector<std::pair<int, uint64_t>> masks;   // (vertex, previous forbidden)
    };

    const MulticolorInstance& inst_;
    const SolverLimits& limits_;
    int n_;
    std::vector<std::vector<int>> adj_;
    std::vector<std::vector<uint64_t>> cands_;
    std::vector<uint64_t> forbidden_, chosen_;
    std::vector<char> assigned_;
    std::vector<int> alive_, order_;
    uint64_t nodes_ = 0;

    void recount(int v) {
        int k = 0;
        for (uint64_t c : cands_[v])
            if ((c & forbidden_[v]) == 0) ++k;
        alive_[v] = k;
    }

    uint64_t first_live(int v) const {
        for (uint64_t c : cands_[v])
            if ((c & forbidden_[v]) == 0) return c;
        return 0;
    }

    // Assign v := mask, update neighbors; false on a wipe-out.
    bool assign(int v, uint64_t mask, Trail& trail) {
        chosen_[v] = mask;
        assigned_[v] = true;
        trail.assigned.push_back(v);
        for (int w : adj_[v]) {
            if (assigned_[w]) {
                if (chosen_[w] & mask) return false; // earlier-forced neighbor clashes
                continue;
            }
            if (mask & ~forbidden_[w]) {
                trail.masks.emplace_back(w, forbidden_[w]);
                forbidden_[w] |= mask;
                recount(w);
                if (alive_[w] == 0) return false;
            }
        }
        return true;
    }

    // Fixpoint: assign every unassigned vertex with exactly one live candidate.
    bool settle_singletons(Trail& trail) {
        bool progressed = true;
        while (progressed) {
            progressed = false;
            for (int i = 0; i < n_; ++i) {
                int v = order_[i];
                if (assigned_[v] || alive_[v] != 1) continue;
                if (!assign(v, first_live(v), trail)) return false;
                progressed = true;
            }
        }
        return true;
    }

    void undo(const Trail& trail) {
        for (auto it = trail.assigned.rbegin(); it != trail.assigned.rend(); ++it)
            assigned_[*it] = false;
        for (auto it = trail.masks.rbegin(); it != trail.masks.rend(); ++it) {
            forbidden_[it->first] = it->second;
            recount(it->first);
        }
    }

    bool search(int depth) {
        int v = -1;
        for (int i = depth; i < n_; ++i)
            if (!assigned_[order_[i]]) {
                v = order_[i];
                depth = i;
                break;
            }
        if (v < 0) return true;
        for (uint64_t c : cands_[v]) {
            if (c & forbidden_[v]) continue;
            if (++nodes_ > limits_.node_budget)
                throw capacity_error("solve_backtracking: node budget exceeded");
            Trail trail;
            if (assign(v, c, trail) && settle_singletons(trail) && search(depth + 1))
                return true;
            undo(trail);
        }
        return false;
    }
};

} // namespace detail

inline std::optional<MultiColoring> solve_backtracking(const MulticolorInstance& inst,
                                                       const SolverLimits& limits = {}) {
    inst.validate();
    if (inst.a > 63) throw capacity_error("solve_backtracking: palette above 63 colors");
    detail::ColoringSearch search(inst, limits);
    return search.run();
}

// The D[eta,k] dynamic program for plain instances: D[eta,k] holds iff k
// independent sets can be chosen covering every vertex v exactly eta(v)
// times. The instance is (a:b)-colorable iff D[eta_b, k] for some k <= a;
// since the empty set is independent, that equals D[eta_b, a]. Layer k is
// computed from layer k-1 only.
inline bool solve_dp(const MulticolorInstance& inst, const SolverLimits& limits = {}) {
    inst.validate();
    if (!inst.is_plain())
        throw invalid_parameters("solve_dp: only plain instances (no lists, uniform demand)");
    int n = inst.graph.n;
    int b = inst.b;
    if (n == 0) return true;

    uint64_t states = 1;
    for (int v = 0; v < n; ++v) {
        states *= static_cast<uint64_t>(b + 1);
        if (states > limits.dp_state_cap)
            throw capacity_error("solve_dp: state space exceeds cap");
    }
    if (states * static_cast<uint64_t>(inst.a) > limits.dp_state_cap)
        throw capacity_error("solve_dp: state space exceeds cap");

    auto sets = independent_set_masks(inst.graph, limits.set_cap);
    std::vector<uint64_t> place(n);
    place[0] = 1;
    for (int v = 1; v < n; ++v) place[v] = place[v - 1] * static_cast<uint64_t>(b + 1);

    struct SetInfo {
        std::vector<int> vertices;
        uint64_t offset;
    };
    std::vector<SetInfo> infos;
    for (uint64_t mask : sets) {
        SetInfo si;
        si.offset = 0;
        for (uint64_t rest = mask; rest; rest &= rest - 1) {
            int v = __builtin_ctzll(rest);
            si.vertices.push_back(v);
            si.offset += place[v];
        }
        infos.push_back(std::move(si));
    }

    // one bitset per layer; layer k is computed from layer k-1 only
    std::vector<bool> prev(states, false), next(states, false);
    prev[0] = true; // zero sets cover nothing
    uint64_t full = states - 1;

    for (int k = 1; k <= inst.a; ++k) {
        std::fill(next.begin(), next.end(), false);
        DemandVector eta(n, 0);
        for (uint64_t idx = 0; idx < states; ++idx) {
            for (const auto& si : infos) {
                bool feasible = true;
                for (int v : si.vertices)
                    if (eta[v] == 0) {
                        feasible = false;
                        break;
                    }
                if (feasible && prev[idx - si.offset]) {
                    next[idx] = true;
                    break;
                }
            }
            // odometer over {0..b}^n
            for (int v = 0; v < n; ++v) {
                if (++eta[v] <= b) break;
                eta[v] = 0;
            }
        }
        if (next[full]) return true;
        std::swap(prev, next);
    }
    return prev[full];
}

struct MinColorsResult {
    int a = 0;                 // the b-fold chromatic number
    MultiColoring witness;     // a coloring at a; a-1 admits none
};

// Smallest palette admitting an (a:b)-coloring of g.
inline MinColorsResult min_colors(const Graph& g, int b, const SolverLimits& limits = {}) {
    if (b < 1) throw invalid_parameters("min_colors: demand must be positive");
    for (int a = std::max(1, b);; ++a) {
        if (a > 63) throw capacity_error("min_colors: exceeded palette cap");
        auto inst = MulticolorInstance::plain(g, a, b);
        if (auto col = solve_backtracking(inst, limits))
            return {a, std::move(*col)};
    }
}

} // namespace multicolor
