#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "multicolor/errors.hpp"

namespace multicolor {

// CNF formula over variables 1..variable_count, literals in DIMACS
// convention (+v / -v). Clauses are kept canonical: literals deduplicated and
// sorted by (variable, sign) with the positive literal first.
struct CnfFormula {
    int variable_count = 0;
    std::vector<std::vector<int>> clauses;

    static std::vector<int> canonical_clause(std::vector<int> lits) {
        for (int l : lits)
            if (l == 0) throw invalid_parameters("clause: zero literal");
        std::sort(lits.begin(), lits.end(), [](int a, int b) {
            if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
            return a > b; // +v before -v
        });
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        return lits;
    }

    void add_clause(std::vector<int> lits) {
        auto c = canonical_clause(std::move(lits));
        for (int l : c)
            if (std::abs(l) > variable_count)
                throw invalid_parameters("clause: variable out of range");
        clauses.push_back(std::move(c));
    }

    bool operator==(const CnfFormula& other) const = default;
};

struct Assignment {
    std::vector<bool> values; // values[v-1] is the value of variable v

    bool value(int var) const { return values[static_cast<size_t>(var) - 1]; }
};

inline bool satisfies(const CnfFormula& f, const Assignment& a) {
    if (static_cast<int>(a.values.size()) != f.variable_count) return false;
    for (const auto& clause : f.clauses) {
        bool sat = false;
        for (int l : clause) {
            if ((l > 0) == a.value(std::abs(l))) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

// ---- DIMACS ----

inline CnfFormula parse_dimacs(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int nvars = -1, nclauses = -1;
    CnfFormula f;
    std::vector<int> cur;
    int clause_open_line = 0;

    while (std::getline(in, line)) {
        ++lineno;
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue;
        if (line[pos] == 'c') continue;
        if (line[pos] == 'p') {
            if (nvars >= 0) throw parse_error("duplicate header", lineno);
            std::istringstream hs(line.substr(pos));
            std::string p, fmt;
            if (!(hs >> p >> fmt >> nvars >> nclauses) || fmt != "cnf" || nvars < 0 || nclauses < 0)
                throw parse_error("malformed header", lineno);
            f.variable_count = nvars;
            continue;
        }
        if (nvars < 0) throw parse_error("clause before header", lineno);
        std::istringstream ls(line.substr(pos));
        std::string tok;
        while (ls >> tok) {
            int lit;
            try {
                size_t used = 0;
                lit = std::stoi(tok, &used);
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw parse_error("bad literal token '" + tok + "'", lineno);
            }
            if (lit == 0) {
                f.clauses.push_back(CnfFormula::canonical_clause(cur));
                cur.clear();
                clause_open_line = 0;
            } else {
                if (std::abs(lit) > nvars)
                    throw parse_error("literal " + std::to_string(lit) + " out of range", lineno);
                if (cur.empty()) clause_open_line = lineno;
                cur.push_back(lit);
            }
        }
    }
    if (!cur.empty())
        throw parse_error("missing terminating 0", clause_open_line);
    if (nvars < 0) throw parse_error("missing header", lineno);
    if (static_cast<int>(f.clauses.size()) != nclauses)
        throw parse_error("clause count " + std::to_string(f.clauses.size()) +
                              " does not match header " + std::to_string(nclauses),
                          lineno);
    return f;
}

inline std::string render_dimacs(const CnfFormula& f) {
    std::ostringstream out;
    out << "p cnf " << f.variable_count << ' ' << f.clauses.size() << '\n';
    for (const auto& c : f.clauses) {
        for (int l : c) out << l << ' ';
        out << "0\n";
    }
    return out.str();
}

// ---- Satisfiability oracle ----
//
// Ordered backtracking with unit propagation and conflict-directed
// backjumping. Branches highest variable first, false before true, so the
// first model found is the least assignment in binary order (variable 1 =
// least significant bit). Propagation only assigns forced values and
// backjumping only skips regions whose refutation did not involve the
// skipped decision, so no model is ever passed over.

namespace detail {

class SatSearch {
public:
    explicit SatSearch(const CnfFormula& f)
        : f_(f),
          value_(f.variable_count, -1),
          reason_(f.variable_count, -1),
          occ_(f.variable_count) {
        for (int ci = 0; ci < static_cast<int>(f.clauses.size()); ++ci)
            for (int l : f.clauses[ci]) occ_[std::abs(l) - 1].push_back(ci);
    }

    std::optional<Assignment> run() {
        // root-level units
        for (int ci = 0; ci < static_cast<int>(f_.clauses.size()); ++ci)
            if (int conflict = examine(ci); conflict >= 0) return std::nullopt;
        if (propagate(0) >= 0) return std::nullopt;
        if (!probe_fixpoint()) return std::nullopt;
        root_fixed_.assign(f_.variable_count, 0);
        for (int v : trail_) root_fixed_[v - 1] = 1;
        if (!solve()) return std::nullopt;
        Assignment a;
        a.values.resize(f_.variable_count);
        for (int v = 0; v < f_.variable_count; ++v) a.values[v] = value_[v] == 1;
        return a;
    }

private:
    const CnfFormula& f_;
    std::vector<int> value_;            // -1 unassigned, 0 false, 1 true
    std::vector<int> reason_;           // clause that forced the variable, -1 for decisions
    std::vector<std::vector<int>> occ_; // variable -> clauses containing it
    std::vector<int> trail_;            // assigned variables in order
    std::vector<char> root_fixed_;      // entailed at level 0: never in conflict sets
    size_t queue_head_ = 0;

    bool lit_true(int l) const {
        int v = value_[std::abs(l) - 1];
        return v >= 0 && (l > 0) == (v == 1);
    }
    bool lit_false(int l) const {
        int v = value_[std::abs(l) - 1];
        return v >= 0 && (l > 0) != (v == 1);
    }

    void assign(int lit, int reason) {
        int v = std::abs(lit);
        value_[v - 1] = lit > 0 ? 1 : 0;
        reason_[v - 1] = reason;
        trail_.push_back(v);
    }

    // Look at one clause: satisfied or >= 2 unassigned -> nothing; exactly
    // one unassigned -> propagate it; all false -> report the clause.
    int examine(int ci) {
        const auto& c = f_.clauses[ci];
        int unassigned = 0, last = 0;
        for (int l : c) {
            if (lit_true(l)) return -1;
            if (!lit_false(l)) {
                if (++unassigned > 1) return -1;
                last = l;
            }
        }
        if (unassigned == 0) return ci;
        assign(last, ci);
        return -1;
    }

    // Queue-driven propagation from trail position `from`; returns the
    // conflicting clause or -1.
    int propagate(size_t from) {
        queue_head_ = from;
        while (queue_head_ < trail_.size()) {
            int v = trail_[queue_head_++];
            for (int ci : occ_[v - 1])
                if (int conflict = examine(ci); conflict >= 0) return conflict;
        }
        return -1;
    }

    void undo(size_t mark) {
        while (trail_.size() > mark) {
            int v = trail_.back();
            trail_.pop_back();
            value_[v - 1] = -1;
            reason_[v - 1] = -1;
        }
    }

    // Decision variables a falsified clause transitively depends on.
    std::set<int> conflict_deps(int ci) {
        std::set<int> out;
        std::vector<char> seen(f_.variable_count + 1, 0);
        std::vector<int> stack;
        for (int l : f_.clauses[ci]) stack.push_back(std::abs(l));
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (seen[v]) continue;
            seen[v] = 1;
            if (root_fixed_[v - 1]) continue; // level-0 facts hold unconditionally
            if (reason_[v - 1] < 0) {
                out.insert(v);
            } else {
                for (int l : f_.clauses[reason_[v - 1]])
                    if (std::abs(l) != v) stack.push_back(std::abs(l));
            }
        }
        return out;
    }

    // Root-level lookahead: a literal whose assumption is refuted by unit
    // propagation plus local failed-literal forcing is entailed false, so its
    // negation becomes a level-0 fact. This keeps the auxiliary variables of
    // regularized formulas (forced-false paddings and their gadgets) out of
    // every conflict set.
    bool probe_fixpoint() {
        bool changed = true;
        while (changed) {
            changed = false;
            for (int v = 1; v <= f_.variable_count; ++v) {
                if (value_[v - 1] >= 0) continue;
                for (int val : {1, 0}) {
                    if (!probe_refutes(v, val)) continue;
                    size_t mark = trail_.size();
                    assign(val == 1 ? -v : v, -1);
                    if (propagate(mark) >= 0) return false; // both polarities dead
                    changed = true;
                    break;
                }
            }
        }
        return true;
    }

    void touch_neighbors(size_t from, std::set<int>& candidates) {
        for (size_t i = from; i < trail_.size(); ++i)
            for (int ci : occ_[trail_[i] - 1])
                for (int l : f_.clauses[ci])
                    if (value_[std::abs(l) - 1] < 0) candidates.insert(std::abs(l));
    }

    bool probe_refutes(int v, int val) {
        size_t mark = trail_.size();
        assign(val == 1 ? v : -v, -1);
        if (propagate(mark) >= 0) {
            undo(mark);
            return true;
        }
        std::set<int> candidates;
        touch_neighbors(mark, candidates);
        bool progressed = true;
        while (progressed) {
            progressed = false;
            for (auto it = candidates.begin(); it != candidates.end();) {
                int w = *it;
                if (value_[w - 1] >= 0) {
                    it = candidates.erase(it);
                    continue;
                }
                int dead = -1; // refuted value of w under the probe, if any
                for (int wval : {1, 0}) {
                    size_t mark2 = trail_.size();
                    assign(wval == 1 ? w : -w, -1);
                    bool conflict = propagate(mark2) >= 0;
                    undo(mark2);
                    if (conflict) {
                        dead = wval;
                        break;
                    }
                }
                if (dead >= 0) {
                    size_t before = trail_.size();
                    assign(dead == 1 ? -w : w, -1);
                    if (propagate(before) >= 0) {
                        undo(mark);
                        return true;
                    }
                    touch_neighbors(before, candidates);
                    progressed = true;
                }
                ++it;
            }
        }
        undo(mark);
        return false;
    }

    bool all_satisfied() const {
        for (const auto& c : f_.clauses) {
            bool sat = false;
            for (int l : c)
                if (lit_true(l)) {
                    sat = true;
                    break;
                }
            if (!sat) return false;
        }
        return true;
    }

    // nullopt = model found (in value_); otherwise the set of decision
    // variables the refutation of this subtree depends on.
    std::optional<std::set<int>> solve_sub() {
        if (all_satisfied()) {
            for (auto& v : value_)
                if (v < 0) v = 0;
            return std::nullopt;
        }
        int branch = -1;
        for (int v = f_.variable_count; v >= 1; --v)
            if (value_[v - 1] < 0) {
                branch = v;
                break;
            }
        std::set<int> combined;
        for (int val : {0, 1}) {
            size_t mark = trail_.size();
            assign(val == 1 ? branch : -branch, -1);
            std::optional<std::set<int>> sub;
            if (int conflict = propagate(mark); conflict >= 0)
                sub = conflict_deps(conflict);
            else
                sub = solve_sub();
            if (!sub) return std::nullopt;
            undo(mark);
            if (!sub->count(branch)) return sub; // this value was irrelevant: backjump
            sub->erase(branch);
            combined.insert(sub->begin(), sub->end());
        }
        return combined;
    }

    bool solve() { return !solve_sub().has_value(); }
};

} // namespace detail

// Returns the least satisfying assignment in binary order, or nullopt.
inline std::optional<Assignment> brute_force_sat(const CnfFormula& f, int var_cap = 24) {
    if (f.variable_count > var_cap)
        throw capacity_error("brute_force_sat: " + std::to_string(f.variable_count) +
                             " variables exceed cap " + std::to_string(var_cap));
    return detail::SatSearch(f).run();
}

// ---- (3,4)-SAT ----

inline std::vector<int> clause_variables(const std::vector<int>& clause) {
    std::vector<int> vars;
    for (int l : clause) vars.push_back(std::abs(l));
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
}

// Exactly 3 distinct variables per clause, every variable in at most 4 clauses.
inline bool is_34_form(const CnfFormula& f) {
    std::vector<int> occ(f.variable_count, 0);
    for (const auto& c : f.clauses) {
        auto vars = clause_variables(c);
        if (vars.size() != 3 || c.size() != 3) return false;
        for (int v : vars)
            if (++occ[v - 1] > 4) return false;
    }
    return true;
}

namespace detail {

// Supply of variables that are false in every model of the emitted clauses.
//
// The base gadget forces A false with only three occurrences of A: under
// A = true its three residual binary clauses together with the two entailed
// implications (each realized by a doubled ternary clause) form an
// unsatisfiable 2-CNF. Every gadget variable stays within four clause
// memberships, so one occurrence of A remains free for use as a padding
// literal. Further false variables come one clause apiece: (-z | g | h) with
// g, h already forced false forces z false.
class FalseSupply {
public:
    FalseSupply(int& nvars, std::vector<std::vector<int>>& clauses)
        : nvars_(nvars), clauses_(clauses) {}

    // One padding literal (a variable forced false with a spare occurrence).
    int take() {
        int idx = first_available();
        if (idx < 0) {
            grow();
            idx = first_available();
        }
        --pool_[idx].second;
        return pool_[idx].first;
    }

    // Two padding literals over distinct variables.
    std::pair<int, int> take_pair() {
        while (count_available() < 2) pool_.emplace_back(bootstrap(), 1);
        int i = first_available();
        int j = first_available(i + 1);
        --pool_[i].second;
        --pool_[j].second;
        return {pool_[i].first, pool_[j].first};
    }

    int bootstrap() {
        int a = fresh(), v1 = fresh(), v2 = fresh(), v3 = fresh(), v4 = fresh();
        int s1 = fresh(), s2 = fresh();
        emit({-a, -v2, v3});
        emit({-a, v1, v2});
        emit({-a, -v3, -v4});
        emit({-v1, v2, s1});
        emit({-v1, v2, -s1});
        emit({-v3, v4, s2});
        emit({-v3, v4, -s2});
        return a;
    }

private:
    int& nvars_;
    std::vector<std::vector<int>>& clauses_;
    std::vector<std::pair<int, int>> pool_; // (variable, spare occurrences)

    int fresh() { return ++nvars_; }
    void emit(std::vector<int> c) { clauses_.push_back(CnfFormula::canonical_clause(std::move(c))); }

    int first_available(int from = 0) const {
        for (int i = from; i < static_cast<int>(pool_.size()); ++i)
            if (pool_[i].second > 0) return i;
        return -1;
    }
    int count_available() const {
        int k = 0;
        for (const auto& [var, spare] : pool_)
            if (spare > 0) ++k;
        return k;
    }

    void grow() {
        while (count_available() < 2) pool_.emplace_back(bootstrap(), 1);
        int i = first_available();
        int j = first_available(i + 1);
        int z = fresh();
        emit({-z, pool_[i].first, pool_[j].first});
        --pool_[i].second;
        --pool_[j].second;
        pool_.emplace_back(z, 3);
    }
};

} // namespace detail

// Equisatisfiable (3,4)-SAT formula: every clause gets exactly 3 distinct
// variables, every variable occurs in at most 4 clauses. Long clauses are
// split with fresh connectors, short clauses padded with forced-false
// variables, and each over-occurring variable is replaced by one copy per
// occurrence linked through an implication cycle (the cycle clauses are
// padded the same way).
inline CnfFormula tovey_regularize(const CnfFormula& f) {
    // Clean: deduplicate (canonical form already does), drop tautologies,
    // and short-circuit on an empty clause.
    std::vector<std::vector<int>> work;
    bool has_empty = false;
    for (const auto& c : f.clauses) {
        auto vars = clause_variables(c);
        if (vars.size() < c.size()) continue; // x and -x together: tautology
        if (c.empty()) {
            has_empty = true;
            break;
        }
        work.push_back(c);
    }

    int nvars = f.variable_count;
    std::vector<std::vector<int>> out;

    if (has_empty) {
        // Canonically unsatisfiable (3,4) formula: three forced-false
        // variables required to cover a clause.
        nvars = 0;
        detail::FalseSupply supply(nvars, out);
        int a = supply.bootstrap();
        int b = supply.bootstrap();
        int c = supply.bootstrap();
        out.push_back(CnfFormula::canonical_clause({a, b, c}));
        CnfFormula g;
        g.variable_count = nvars;
        g.clauses = std::move(out);
        return g;
    }

    // Split clauses with more than 3 variables into ternary chains.
    std::vector<std::vector<int>> sized;
    for (auto& c : work) {
        if (c.size() <= 3) {
            sized.push_back(std::move(c));
            continue;
        }
        size_t k = c.size();
        int prev = 0; // literal carried into the next link
        for (size_t i = 0; i + 1 < k;) {
            if (prev == 0) {
                int conn = ++nvars;
                sized.push_back({c[0], c[1], conn});
                prev = -conn;
                i = 2;
            } else if (k - i == 2) {
                sized.push_back({prev, c[i], c[i + 1]});
                i = k;
            } else {
                int conn = ++nvars;
                sized.push_back({prev, c[i], conn});
                prev = -conn;
                i += 1;
            }
        }
    }

    // Pad 1- and 2-literal clauses to exactly 3 distinct variables.
    detail::FalseSupply supply(nvars, out);
    for (auto& c : sized) {
        if (c.size() == 2) {
            c.push_back(supply.take());
        } else if (c.size() == 1) {
            auto [p, q] = supply.take_pair();
            c.push_back(p);
            c.push_back(q);
        }
        out.push_back(CnfFormula::canonical_clause(std::move(c)));
    }

    // Replace each variable occurring in more than 4 clauses by one copy per
    // occurrence; an implication cycle keeps all copies equal.
    std::vector<std::vector<int>> occ(nvars + 1);
    for (int ci = 0; ci < static_cast<int>(out.size()); ++ci)
        for (int l : out[ci]) occ[std::abs(l)].push_back(ci);

    int base_vars = nvars;
    for (int v = 1; v <= base_vars; ++v) {
        if (static_cast<int>(occ[v].size()) <= 4) continue;
        int k = static_cast<int>(occ[v].size());
        std::vector<int> copies(k);
        copies[0] = v; // first occurrence keeps the original id
        for (int i = 1; i < k; ++i) copies[i] = ++nvars;
        for (int i = 0; i < k; ++i) {
            for (int& l : out[occ[v][i]])
                if (std::abs(l) == v) l = l > 0 ? copies[i] : -copies[i];
        }
        for (int i = 0; i < k; ++i) {
            int next = copies[(i + 1) % k];
            out.push_back(
                CnfFormula::canonical_clause({-copies[i], next, supply.take()}));
        }
    }

    CnfFormula g;
    g.variable_count = nvars;
    for (auto& c : out) g.clauses.push_back(CnfFormula::canonical_clause(std::move(c)));
    return g;
}

} // namespace multicolor
