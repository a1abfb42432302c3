#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "multicolor/cnf.hpp"
#include "multicolor/errors.hpp"
#include "multicolor/graph.hpp"
#include "multicolor/instance.hpp"

namespace multicolor {

// Arithmetic circuit over F_p with non-cancelling gates only: input,
// constant, addition, multiplication. Gate operands point backward.
struct Circuit {
    enum class Kind { input, constant, add, mul };
    struct Gate {
        Kind kind;
        int a = -1; // variable id (input), value (constant), or left operand
        int b = -1; // right operand
    };

    int64_t modulus = 2;
    std::vector<Gate> gates;
    int output = -1;

    int add_input(int var) {
        if (var < 0) throw invalid_parameters("circuit: negative variable id");
        gates.push_back({Kind::input, var, -1});
        return static_cast<int>(gates.size()) - 1;
    }
    int add_const(int64_t value) {
        int64_t v = ((value % modulus) + modulus) % modulus;
        gates.push_back({Kind::constant, static_cast<int>(v), -1});
        return static_cast<int>(gates.size()) - 1;
    }
    int add_add(int l, int r) {
        check_ref(l);
        check_ref(r);
        gates.push_back({Kind::add, l, r});
        return static_cast<int>(gates.size()) - 1;
    }
    int add_mul(int l, int r) {
        check_ref(l);
        check_ref(r);
        gates.push_back({Kind::mul, l, r});
        return static_cast<int>(gates.size()) - 1;
    }

    void check_ref(int g) const {
        if (g < 0 || g >= static_cast<int>(gates.size()))
            throw invalid_parameters("circuit: gate reference must point backward");
    }

    void set_output(int g) {
        check_ref(g);
        output = g;
    }
};

// Value by gate-order evaluation mod p. point[var] is the value of variable
// var; a variable beyond the vector is unassigned.
inline int64_t eval_circuit(const Circuit& c, const std::vector<int64_t>& point) {
    if (c.output < 0) throw invalid_parameters("eval_circuit: no output gate");
    int64_t p = c.modulus;
    std::vector<int64_t> val(c.gates.size(), 0);
    for (size_t i = 0; i < c.gates.size(); ++i) {
        const auto& g = c.gates[i];
        switch (g.kind) {
            case Circuit::Kind::input:
                if (g.a >= static_cast<int>(point.size()))
                    throw evaluation_error("eval_circuit: variable " + std::to_string(g.a) +
                                           " unassigned");
                val[i] = ((point[g.a] % p) + p) % p;
                break;
            case Circuit::Kind::constant: val[i] = g.a % p; break;
            case Circuit::Kind::add: val[i] = (val[g.a] + val[g.b]) % p; break;
            case Circuit::Kind::mul: val[i] = (val[g.a] * val[g.b]) % p; break;
        }
    }
    return val[c.output];
}

// Explicit monomial expansion; exponent vectors are sorted (variable, degree)
// pairs and coefficients are nonzero residues.
struct SparsePolynomial {
    using Term = std::vector<std::pair<int, int64_t>>; // (variable, degree > 0)
    int64_t modulus = 2;
    std::map<Term, int64_t> terms;

    int64_t total_degree(const Term& t) const {
        int64_t d = 0;
        for (auto [v, e] : t) d += e;
        return d;
    }

    bool operator==(const SparsePolynomial& other) const {
        return modulus == other.modulus && terms == other.terms;
    }
};

namespace detail {

inline void poly_add_term(SparsePolynomial& p, const SparsePolynomial::Term& t, int64_t coeff) {
    int64_t c = ((coeff % p.modulus) + p.modulus) % p.modulus;
    if (c == 0) return;
    auto it = p.terms.find(t);
    if (it == p.terms.end()) {
        p.terms.emplace(t, c);
    } else {
        it->second = (it->second + c) % p.modulus;
        if (it->second == 0) p.terms.erase(it);
    }
}

inline SparsePolynomial poly_add(const SparsePolynomial& x, const SparsePolynomial& y) {
    SparsePolynomial out = x;
    for (const auto& [t, c] : y.terms) poly_add_term(out, t, c);
    return out;
}

inline SparsePolynomial::Term term_mul(const SparsePolynomial::Term& s,
                                       const SparsePolynomial::Term& t) {
    SparsePolynomial::Term out;
    size_t i = 0, j = 0;
    while (i < s.size() || j < t.size()) {
        if (j == t.size() || (i < s.size() && s[i].first < t[j].first)) {
            out.push_back(s[i++]);
        } else if (i == s.size() || t[j].first < s[i].first) {
            out.push_back(t[j++]);
        } else {
            out.emplace_back(s[i].first, s[i].second + t[j].second);
            ++i;
            ++j;
        }
    }
    return out;
}

inline SparsePolynomial poly_mul(const SparsePolynomial& x, const SparsePolynomial& y,
                                 uint64_t term_cap) {
    SparsePolynomial out;
    out.modulus = x.modulus;
    for (const auto& [s, cs] : x.terms)
        for (const auto& [t, ct] : y.terms) {
            poly_add_term(out, term_mul(s, t), cs * ct);
            if (out.terms.size() > term_cap)
                throw capacity_error("expand_circuit: term cap exceeded");
        }
    return out;
}

} // namespace detail

// Exact expansion of the circuit's output polynomial.
inline SparsePolynomial expand_circuit(const Circuit& c, uint64_t term_cap = 200'000) {
    if (c.output < 0) throw invalid_parameters("expand_circuit: no output gate");
    std::vector<SparsePolynomial> poly(c.gates.size());
    for (size_t i = 0; i < c.gates.size(); ++i) {
        const auto& g = c.gates[i];
        poly[i].modulus = c.modulus;
        switch (g.kind) {
            case Circuit::Kind::input:
                detail::poly_add_term(poly[i], {{g.a, 1}}, 1);
                break;
            case Circuit::Kind::constant:
                detail::poly_add_term(poly[i], {}, g.a);
                break;
            case Circuit::Kind::add:
                poly[i] = detail::poly_add(poly[g.a], poly[g.b]);
                break;
            case Circuit::Kind::mul:
                poly[i] = detail::poly_mul(poly[g.a], poly[g.b], term_cap);
                break;
        }
        if (poly[i].terms.size() > term_cap)
            throw capacity_error("expand_circuit: term cap exceeded");
    }
    return poly[c.output];
}

// Homogeneous-degree filter: split every gate into per-degree copies in a
// bottom-up fashion (addition gates degree-wise, multiplication gates into
// convolution pairs feeding the matching sum). Degrees above k cannot reach a
// degree-k output in a non-cancelling circuit, so only degrees <= k are kept.
inline Circuit degree_filter(const Circuit& c, int64_t k, int64_t max_degree) {
    if (c.output < 0) throw invalid_parameters("degree_filter: no output gate");
    if (k < 0 || k > max_degree)
        throw invalid_parameters("degree_filter: need 0 <= k <= max_degree");

    Circuit out;
    out.modulus = c.modulus;
    std::vector<std::map<int64_t, int>> copies(c.gates.size()); // degree -> gate in out
    for (size_t i = 0; i < c.gates.size(); ++i) {
        const auto& g = c.gates[i];
        switch (g.kind) {
            case Circuit::Kind::input:
                if (k >= 1) copies[i][1] = out.add_input(g.a);
                break;
            case Circuit::Kind::constant:
                copies[i][0] = out.add_const(g.a);
                break;
            case Circuit::Kind::add: {
                const auto& l = copies[g.a];
                const auto& r = copies[g.b];
                for (const auto& [d, gl] : l) {
                    auto it = r.find(d);
                    copies[i][d] = (it == r.end()) ? gl : out.add_add(gl, it->second);
                }
                for (const auto& [d, gr] : r)
                    if (!l.count(d)) copies[i][d] = gr;
                break;
            }
            case Circuit::Kind::mul: {
                const auto& l = copies[g.a];
                const auto& r = copies[g.b];
                std::map<int64_t, int> acc;
                for (const auto& [dl, gl] : l)
                    for (const auto& [dr, gr] : r) {
                        if (dl + dr > k) continue;
                        int prod = out.add_mul(gl, gr);
                        auto it = acc.find(dl + dr);
                        if (it == acc.end())
                            acc[dl + dr] = prod;
                        else
                            it->second = out.add_add(it->second, prod);
                    }
                copies[i] = std::move(acc);
                break;
            }
        }
    }
    auto it = copies[c.output].find(k);
    out.set_output(it == copies[c.output].end() ? out.add_const(0) : it->second);
    return out;
}

inline bool has_r_monomial(const SparsePolynomial& poly, int64_t r) {
    for (const auto& [t, c] : poly.terms) {
        bool ok = true;
        for (auto [v, e] : t)
            if (e > r) {
                ok = false;
                break;
            }
        if (ok) return true;
    }
    return false;
}

// ---- The coloring polynomials q_G and p_G ----
//
// Variable numbering inside the circuits: x_v = v for v in [n],
// y_{v,j} = n + v*a + j.

inline int qg_x_var(int v) { return v; }
inline int qg_y_var(const MulticolorInstance& inst, int v, int j) {
    return inst.graph.n + v * inst.a + j;
}

// q_G = prod over colors j of (sum over independent sets I of the subgraph
// induced on {v : j in L(v)} of prod_{v in I} x_v y_{v,j}). Restricting the
// color-j sum to vertices listing j is what makes the degree-filtered version
// agree with p_G on list instances.
inline Circuit build_qG(const MulticolorInstance& inst, uint64_t set_cap = uint64_t{1} << 22) {
    inst.validate();
    int n = inst.graph.n;
    if (n < 1) throw invalid_parameters("build_qG: empty graph");

    Circuit c;
    c.modulus = 2;
    std::vector<int> x_gate(n, -1);
    for (int v = 0; v < n; ++v) x_gate[v] = c.add_input(qg_x_var(v));

    int product = -1;
    for (int j = 0; j < inst.a; ++j) {
        std::vector<int> allowed;
        for (int v = 0; v < n; ++v) {
            auto list = inst.list_of(v);
            if (std::binary_search(list.begin(), list.end(), j)) allowed.push_back(v);
        }
        std::vector<std::pair<int, int>> sub_edges;
        for (size_t p = 0; p < allowed.size(); ++p)
            for (size_t q = p + 1; q < allowed.size(); ++q)
                if (inst.graph.has_edge(allowed[p], allowed[q]))
                    sub_edges.emplace_back(static_cast<int>(p), static_cast<int>(q));
        Graph sub = Graph::from_edges(static_cast<int>(allowed.size()), std::move(sub_edges));

        int factor = c.add_const(1); // the empty independent set
        for (uint64_t mask : independent_set_masks(sub, set_cap)) {
            if (mask == 0) continue;
            int prod = -1;
            for (uint64_t rest = mask; rest; rest &= rest - 1) {
                int v = allowed[__builtin_ctzll(rest)];
                int pair = c.add_mul(x_gate[v], c.add_input(qg_y_var(inst, v, j)));
                prod = prod < 0 ? pair : c.add_mul(prod, pair);
            }
            factor = c.add_add(factor, prod);
        }
        product = product < 0 ? factor : c.add_mul(product, factor);
    }
    c.set_output(product);
    return c;
}

// p_G: the degree-2bn homogeneous part of q_G; its b-monomials are exactly
// the list (a:b)-colorings.
inline Circuit build_pG(const MulticolorInstance& inst, uint64_t set_cap = uint64_t{1} << 22) {
    int n = inst.graph.n;
    Circuit q = build_qG(inst, set_cap);
    return degree_filter(q, int64_t{2} * inst.b * n, int64_t{2} * inst.a * n);
}

// ---- Carry-Less Subset Sum ----

// Numbers and target are decimal strings (most significant digit first), all
// of length n = number count; every column sums below 10 so addition never
// carries.
struct CarryLessInstance {
    int n = 0;
    std::string target;
    std::vector<std::string> numbers;

    int digit(const std::string& s, int position) const { // position 0 = least significant
        return s[static_cast<size_t>(n) - 1 - position] - '0';
    }

    void validate() const {
        if (static_cast<int>(numbers.size()) != n)
            throw invalid_parameters("carry-less: need exactly n numbers");
        if (static_cast<int>(target.size()) != n && n > 0)
            throw invalid_parameters("carry-less: target must have n digits");
        for (const auto& s : numbers)
            if (static_cast<int>(s.size()) != n)
                throw invalid_parameters("carry-less: every number must have n digits");
        for (const auto& s : numbers)
            for (char ch : s)
                if (ch < '0' || ch > '9')
                    throw invalid_parameters("carry-less: non-digit character");
        for (char ch : target)
            if (ch < '0' || ch > '9')
                throw invalid_parameters("carry-less: non-digit character");
        for (int p = 0; p < n; ++p) {
            int sum = 0;
            for (const auto& s : numbers) sum += digit(s, p);
            if (sum >= 10)
                throw invalid_parameters("carry-less: column " + std::to_string(p) +
                                         " sums to " + std::to_string(sum));
        }
    }
};

// Standard Subset Sum encoding of 3-SAT, which is carry-less out of the box:
// one digit per variable (forcing the true/false choice) and one per clause
// (target 4, slack digits 1 and 2, so the clause needs a satisfied literal).
// Column sums stay at most 3 + 1 + 2 = 6. Zero-padded square to make the
// digit length equal the number count.
inline CarryLessInstance sat_to_carryless(const CnfFormula& f) {
    for (const auto& c : f.clauses)
        if (c.size() > 3)
            throw invalid_parameters("sat_to_carryless: formula must be 3-CNF");
    int nv = f.variable_count;
    int mc = static_cast<int>(f.clauses.size());
    int digits = nv + mc;
    int count = 2 * nv + 2 * mc;
    int n = std::max(digits, count); // = count unless both are zero

    CarryLessInstance inst;
    inst.n = n;
    auto blank = std::string(static_cast<size_t>(n), '0');
    auto set_digit = [&](std::string& s, int position, int value) {
        s[static_cast<size_t>(n) - 1 - position] = static_cast<char>('0' + value);
    };

    inst.target = blank;
    for (int v = 0; v < nv; ++v) set_digit(inst.target, v, 1);
    for (int j = 0; j < mc; ++j) set_digit(inst.target, nv + j, 4);

    for (int v = 1; v <= nv; ++v) { // "variable v true"
        std::string s = blank;
        set_digit(s, v - 1, 1);
        for (int j = 0; j < mc; ++j)
            for (int l : f.clauses[j])
                if (l == v) set_digit(s, nv + j, 1);
        inst.numbers.push_back(std::move(s));
    }
    for (int v = 1; v <= nv; ++v) { // "variable v false"
        std::string s = blank;
        set_digit(s, v - 1, 1);
        for (int j = 0; j < mc; ++j)
            for (int l : f.clauses[j])
                if (l == -v) set_digit(s, nv + j, 1);
        inst.numbers.push_back(std::move(s));
    }
    for (int j = 0; j < mc; ++j) {
        std::string s1 = blank, s2 = blank;
        set_digit(s1, nv + j, 1);
        set_digit(s2, nv + j, 2);
        inst.numbers.push_back(std::move(s1));
        inst.numbers.push_back(std::move(s2));
    }
    inst.validate();
    return inst;
}

// Lexicographically least solving index sequence (1-based), or nullopt.
// Carry-less addition makes the columns independent, so a branch dies as
// soon as a column overshoots or cannot be completed.
inline std::optional<std::vector<int>> solve_carryless(const CarryLessInstance& inst,
                                                       int subset_cap_bits = 24) {
    inst.validate();
    int n = inst.n;
    if (n > subset_cap_bits)
        throw capacity_error("solve_carryless: 2^" + std::to_string(n) + " subsets exceed cap");

    std::vector<std::vector<int>> cols(n, std::vector<int>(n, 0)); // [number][position]
    std::vector<int> target(n, 0);
    for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p) cols[i][p] = inst.digit(inst.numbers[i], p);
    for (int p = 0; p < n; ++p) target[p] = inst.digit(inst.target, p);

    // suffix[i][p]: digit sum of numbers i..n-1 at position p
    std::vector<std::vector<int>> suffix(n + 1, std::vector<int>(n, 0));
    for (int i = n - 1; i >= 0; --i)
        for (int p = 0; p < n; ++p) suffix[i][p] = suffix[i + 1][p] + cols[i][p];

    std::vector<int> partial(n, 0), picked;
    auto dfs = [&](auto&& self, int next) -> bool {
        if (partial == target) return true;
        for (int i = next; i < n; ++i) {
            bool feasible = true;
            for (int p = 0; p < n && feasible; ++p) {
                int v = partial[p] + cols[i][p];
                if (v > target[p]) feasible = false;
                if (v + suffix[i + 1][p] < target[p]) feasible = false;
            }
            if (!feasible) continue;
            for (int p = 0; p < n; ++p) partial[p] += cols[i][p];
            picked.push_back(i + 1);
            if (self(self, i + 1)) return true;
            picked.pop_back();
            for (int p = 0; p < n; ++p) partial[p] -= cols[i][p];
        }
        return false;
    };
    if (dfs(dfs, 0)) return picked;
    return std::nullopt;
}

// ---- The subset-sum polynomial p_S ----

struct PsCircuit {
    Circuit circuit; // already degree-filtered at k
    int q = 0;       // block width in digits
    int64_t r = 0;   // 10^q - 1: individual degree bound
    int64_t k = 0;   // t*r + n: homogeneous degree
};

namespace detail {

inline int power_gate(Circuit& c, int base, int64_t e) {
    if (e == 0) return c.add_const(1);
    // square-and-multiply keeps the gate chain logarithmic in e
    int result = -1;
    int sq = base;
    while (e > 0) {
        if (e & 1) result = result < 0 ? sq : c.add_mul(result, sq);
        e >>= 1;
        if (e > 0) sq = c.add_mul(sq, sq);
    }
    return result;
}

inline int64_t block_value(const CarryLessInstance& inst, const std::string& s, int j, int q) {
    // block j (1-based) covers positions (j-1)q .. jq-1; missing high
    // positions read as zero-padding
    int64_t v = 0;
    for (int p = j * q - 1; p >= (j - 1) * q; --p) {
        v *= 10;
        if (p < inst.n) v += inst.digit(s, p);
    }
    return v;
}

} // namespace detail

// q_S = prod_i (y_i + z_i prod_j x_j^{a_i^[j]}) * prod_j x_j^{r - s^[j]},
// filtered to total degree k = t r + n. Variables: x_j = j-1, y_i = t+i-1,
// z_i = t+n+i-1.
inline PsCircuit build_pS(const CarryLessInstance& inst, int t) {
    inst.validate();
    int n = inst.n;
    if (t < 1 || t > n) throw invalid_parameters("build_pS: need 1 <= t <= n");
    int q = (n + t - 1) / t; // digits are zero-padded so t divides the length
    if (q > 6) throw capacity_error("build_pS: block width above 6 digits");
    int64_t r = 1;
    for (int i = 0; i < q; ++i) r *= 10;
    r -= 1;
    int64_t k = static_cast<int64_t>(t) * r + n;

    Circuit c;
    c.modulus = 2;
    std::vector<int> x_gate(t);
    for (int j = 0; j < t; ++j) x_gate[j] = c.add_input(j);

    int product = -1;
    for (int i = 1; i <= n; ++i) {
        int y = c.add_input(t + i - 1);
        int z = c.add_input(t + n + i - 1);
        int term = z;
        for (int j = 1; j <= t; ++j) {
            int64_t e = detail::block_value(inst, inst.numbers[i - 1], j, q);
            if (e > 0) term = c.add_mul(term, detail::power_gate(c, x_gate[j - 1], e));
        }
        int factor = c.add_add(y, term);
        product = product < 0 ? factor : c.add_mul(product, factor);
    }
    for (int j = 1; j <= t; ++j) {
        int64_t e = r - detail::block_value(inst, inst.target, j, q);
        if (e > 0) {
            int pw = detail::power_gate(c, x_gate[j - 1], e);
            product = product < 0 ? pw : c.add_mul(product, pw);
        }
    }
    if (product < 0) product = c.add_const(1); // n = 0: empty products
    c.set_output(product);

    PsCircuit out;
    out.circuit = degree_filter(c, k, k);
    out.q = q;
    out.r = r;
    out.k = k;
    return out;
}

// ---- Block parameter search for the monomial lower bound ----

inline bool block_t_valid(int n, double sigma, int t) {
    int q = (n + t - 1) / t;
    long double log10_r, log10_k;
    if (q <= 30) {
        long double r = powl(10.0L, q) - 1.0L;
        long double k = static_cast<long double>(t) * r + n;
        log10_r = log10l(r);
        log10_k = log10l(k);
    } else { // 10^q dwarfs n; work in logs
        log10_r = q;
        log10_k = log10l(static_cast<long double>(t)) + q;
    }
    long double log_ratio = log10_r - static_cast<long double>(sigma) * log10_k;
    long double bound = log10l(2.0L);
    return -bound <= log_ratio && log_ratio <= bound;
}

// Smallest t in 1..n with 1/2 <= (10^ceil(n/t) - 1) / k^sigma <= 2 where
// k = t (10^ceil(n/t) - 1) + n, or nullopt when no t qualifies.
inline std::optional<int> choose_block_t(int n, double sigma) {
    for (int t = 1; t <= n; ++t)
        if (block_t_valid(n, sigma, t)) return t;
    return std::nullopt;
}

// ---- circuit text format ----
// one gate per line: "in v3" / "const 1" / "add g4 g7" / "mul g2 g2",
// final line "out gN"

inline std::string circuit_to_text(const Circuit& c) {
    std::ostringstream out;
    for (const auto& g : c.gates) {
        switch (g.kind) {
            case Circuit::Kind::input: out << "in v" << g.a << '\n'; break;
            case Circuit::Kind::constant: out << "const " << g.a << '\n'; break;
            case Circuit::Kind::add: out << "add g" << g.a << " g" << g.b << '\n'; break;
            case Circuit::Kind::mul: out << "mul g" << g.a << " g" << g.b << '\n'; break;
        }
    }
    out << "out g" << c.output << '\n';
    return out.str();
}

inline Circuit circuit_from_text(const std::string& text, int64_t modulus = 2) {
    Circuit c;
    c.modulus = modulus;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto gate_ref = [&](const std::string& tok) {
        if (tok.size() < 2 || tok[0] != 'g') throw parse_error("expected gate ref", lineno);
        int g = std::atoi(tok.c_str() + 1);
        if (g < 0 || g >= static_cast<int>(c.gates.size()))
            throw parse_error("gate reference out of range", lineno);
        return g;
    };
    bool has_output = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string op;
        if (!(ls >> op)) continue;
        if (op == "in") {
            std::string v;
            ls >> v;
            if (v.size() < 2 || v[0] != 'v') throw parse_error("expected variable", lineno);
            c.add_input(std::atoi(v.c_str() + 1));
        } else if (op == "const") {
            int64_t value;
            if (!(ls >> value)) throw parse_error("expected constant value", lineno);
            c.add_const(value);
        } else if (op == "add" || op == "mul") {
            std::string l, r;
            if (!(ls >> l >> r)) throw parse_error("expected two gate refs", lineno);
            if (op == "add")
                c.add_add(gate_ref(l), gate_ref(r));
            else
                c.add_mul(gate_ref(l), gate_ref(r));
        } else if (op == "out") {
            std::string o;
            if (!(ls >> o)) throw parse_error("expected output ref", lineno);
            c.set_output(gate_ref(o));
            has_output = true;
        } else {
            throw parse_error("unknown op '" + op + "'", lineno);
        }
    }
    if (!has_output) throw parse_error("missing output line", lineno);
    return c;
}

// ---- carry-less JSON: [target, number, number, ...] ----

inline nlohmann::json carryless_to_json(const CarryLessInstance& inst) {
    nlohmann::json j = nlohmann::json::array();
    j.push_back(inst.target);
    for (const auto& s : inst.numbers) j.push_back(s);
    return j;
}

inline CarryLessInstance carryless_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty())
        throw parse_error("carry-less JSON: expected [target, numbers...]");
    CarryLessInstance inst;
    inst.target = j[0].get<std::string>();
    for (size_t i = 1; i < j.size(); ++i) inst.numbers.push_back(j[i].get<std::string>());
    inst.n = static_cast<int>(inst.numbers.size());
    inst.validate();
    return inst;
}

inline std::string poly_to_string(const SparsePolynomial& p) {
    if (p.terms.empty()) return "0";
    std::ostringstream out;
    bool first_term = true;
    for (const auto& [t, c] : p.terms) {
        if (!first_term) out << " + ";
        first_term = false;
        bool printed = false;
        if (c != 1 || t.empty()) {
            out << c;
            printed = true;
        }
        for (auto [v, e] : t) {
            if (printed) out << '*';
            out << 'v' << v;
            if (e > 1) out << '^' << e;
            printed = true;
        }
    }
    return out.str();
}

} // namespace multicolor
