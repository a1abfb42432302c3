#include <catch2/catch_amalgamated.hpp>

#include "multicolor/cnf.hpp"
#include "multicolor/rand.hpp"

using namespace multicolor;

namespace {

CnfFormula make(int n, std::vector<std::vector<int>> clauses) {
    CnfFormula f;
    f.variable_count = n;
    for (auto& c : clauses) f.add_clause(std::move(c));
    return f;
}

// every model, by exhaustive scan (test-side oracle, independent of the
// solver's search order)
std::vector<Assignment> all_models(const CnfFormula& f) {
    REQUIRE(f.variable_count <= 20);
    std::vector<Assignment> out;
    for (uint64_t mask = 0; mask < (uint64_t{1} << f.variable_count); ++mask) {
        Assignment a;
        for (int v = 0; v < f.variable_count; ++v) a.values.push_back(mask >> v & 1);
        if (satisfies(f, a)) out.push_back(std::move(a));
    }
    return out;
}

CnfFormula random_formula(SplitMix64& rng, int max_n = 10, int max_m = 15) {
    int n = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(max_n)));
    int m = static_cast<int>(rng.below(static_cast<uint64_t>(max_m + 1)));
    CnfFormula f;
    f.variable_count = n;
    for (int i = 0; i < m; ++i) {
        int len = 1 + static_cast<int>(rng.below(4)); // lengths 1..4 exercise pad and split
        std::vector<int> lits;
        for (int j = 0; j < len; ++j) {
            int v = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(n)));
            lits.push_back(rng.coin() ? v : -v);
        }
        f.add_clause(std::move(lits));
    }
    return f;
}

} // namespace

TEST_CASE("dimacs parsing") {
    auto f = parse_dimacs("p cnf 2 1\n1 -2 0\n");
    CHECK(f.variable_count == 2);
    REQUIRE(f.clauses.size() == 1);
    CHECK(f.clauses[0] == std::vector<int>{1, -2});

    auto g = parse_dimacs("c a comment\nc another\np cnf 3 2\n1 2 3 0\n-1 -3 0\n");
    CHECK(g.variable_count == 3);
    CHECK(g.clauses.size() == 2);

    // clauses may span lines and several may share one line
    auto h = parse_dimacs("p cnf 3 2\n1 2\n3 0 -1 -3 0\n");
    CHECK(h == g);

    SECTION("errors carry line numbers") {
        CHECK_THROWS_AS(parse_dimacs("p cnf 1 1\n2 0\n"), parse_error);
        try {
            parse_dimacs("c ok\np cnf 1 1\n2 0\n");
        } catch (const parse_error& e) {
            CHECK(e.line() == 3);
        }
        CHECK_THROWS_AS(parse_dimacs("p dnf 1 1\n1 0\n"), parse_error);
        CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 -2\n"), parse_error); // missing 0
        CHECK_THROWS_AS(parse_dimacs("p cnf 2 2\n1 0\n"), parse_error);  // count mismatch
        CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 x 0\n"), parse_error);
        CHECK_THROWS_AS(parse_dimacs(""), parse_error);
    }
}

TEST_CASE("dimacs round trip reproduces the formula exactly") {
    SplitMix64 rng(5);
    for (int i = 0; i < 50; ++i) {
        auto f = random_formula(rng);
        auto back = parse_dimacs(render_dimacs(f));
        CHECK(back == f);
    }
}

TEST_CASE("brute force sat examples") {
    auto f = make(2, {{1, 2}, {-1, 2}});
    auto a = brute_force_sat(f);
    REQUIRE(a.has_value());
    CHECK(a->value(2) == true);
    CHECK(a->value(1) == false); // least assignment in binary order

    CHECK(!brute_force_sat(make(1, {{1}, {-1}})).has_value());

    auto empty = brute_force_sat(make(3, {}));
    REQUIRE(empty.has_value());
    CHECK(empty->values == std::vector<bool>{false, false, false});

    CnfFormula big;
    big.variable_count = 25;
    CHECK_THROWS_AS(brute_force_sat(big), capacity_error);
    CHECK_NOTHROW(brute_force_sat(big, 25));
}

TEST_CASE("brute force returns the least model in binary order") {
    SplitMix64 rng(17);
    for (int i = 0; i < 80; ++i) {
        auto f = random_formula(rng, 8, 10);
        auto got = brute_force_sat(f);
        auto models = all_models(f);
        if (models.empty()) {
            CHECK(!got.has_value());
        } else {
            REQUIRE(got.has_value());
            CHECK(got->values == models.front().values); // scan order is binary order
        }
    }
}

TEST_CASE("(3,4) form recognition") {
    CHECK(is_34_form(make(3, {{1, 2, 3}})));
    CHECK(!is_34_form(make(2, {{1, 2}})));
    CHECK(!is_34_form(make(3, {{1, -1, 2}}))); // only two distinct variables

    CnfFormula f = make(7, {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {1, 2, 5}});
    CHECK(is_34_form(f));
    f.add_clause({1, 6, 7});
    CHECK(!is_34_form(f)); // variable 1 now occurs five times
}

TEST_CASE("tovey regularization leaves (3,4) formulas untouched") {
    auto f = make(6, {{1, 2, 3}, {4, 5, 6}, {1, 2, 4}});
    CHECK(tovey_regularize(f) == f);
}

TEST_CASE("tovey regularization outputs (3,4) form on the spec shapes") {
    SECTION("a variable occurring five times") {
        auto f = make(7, {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {1, 2, 5}, {1, 6, 7}});
        auto g = tovey_regularize(f);
        CHECK(is_34_form(g));
        CHECK(brute_force_sat(f).has_value() ==
              brute_force_sat(g, g.variable_count).has_value());
    }
    SECTION("a two-literal clause") {
        auto f = make(2, {{1, 2}});
        auto g = tovey_regularize(f);
        CHECK(is_34_form(g));
        CHECK(brute_force_sat(g, g.variable_count).has_value());
    }
    SECTION("tautologies are dropped") {
        auto f = make(2, {{1, -1, 2}});
        auto g = tovey_regularize(f);
        CHECK(g.clauses.empty());
    }
    SECTION("an empty clause yields a canonical unsatisfiable (3,4) formula") {
        CnfFormula f;
        f.variable_count = 1;
        f.clauses.push_back({});
        auto g = tovey_regularize(f);
        CHECK(is_34_form(g));
        CHECK(!brute_force_sat(g, g.variable_count).has_value());
    }
    SECTION("long clauses split into equisatisfiable ternary chains") {
        auto wide = make(6, {{1, 2, 3, 4, 5, 6}});
        auto g = tovey_regularize(wide);
        CHECK(is_34_form(g));
        CHECK(brute_force_sat(g, g.variable_count).has_value());

        // force every literal of the wide clause false: unsatisfiable
        auto blocked = make(6, {{1, 2, 3, 4, 5, 6}});
        for (int v = 1; v <= 6; ++v) blocked.add_clause({-v});
        auto h = tovey_regularize(blocked);
        CHECK(is_34_form(h));
        CHECK(!brute_force_sat(blocked, 6).has_value());
        CHECK(!brute_force_sat(h, h.variable_count).has_value());

        // and with one literal allowed, satisfiable again
        auto open = make(6, {{1, 2, 3, 4, 5, 6}});
        for (int v = 1; v <= 5; ++v) open.add_clause({-v});
        auto k = tovey_regularize(open);
        CHECK(is_34_form(k));
        CHECK(brute_force_sat(k, k.variable_count).has_value());
    }
}

TEST_CASE("padding variables are false in every model") {
    auto f = make(1, {{1}});
    auto g = tovey_regularize(f);
    CHECK(is_34_form(g));
    // the clause mentioning x reads (x | p | q) for padding variables p, q
    std::vector<int> padded;
    for (const auto& c : g.clauses)
        for (int l : c)
            if (std::abs(l) == 1) padded = c;
    REQUIRE(padded.size() == 3);
    auto models = all_models(g);
    REQUIRE(!models.empty());
    for (const auto& m : models) {
        CHECK(m.value(1) == true); // forced: the padding cannot carry the clause
        for (int l : padded)
            if (std::abs(l) != 1) CHECK(m.value(std::abs(l)) == false);
    }
}

TEST_CASE("tovey regularization is equisatisfiable on 200 random formulas") {
    SplitMix64 rng(2024);
    int interesting = 0;
    for (int i = 0; i < 200; ++i) {
        auto f = random_formula(rng);
        auto g = tovey_regularize(f);
        CHECK(is_34_form(g));
        if (g.variable_count > f.variable_count) ++interesting;
        bool sat_f = brute_force_sat(f).has_value();
        bool sat_g = brute_force_sat(g, g.variable_count).has_value();
        CHECK(sat_f == sat_g);
    }
    CHECK(interesting > 100); // the generator must actually exercise the machinery
}

TEST_CASE("tovey regularization is idempotent") {
    SplitMix64 rng(31);
    for (int i = 0; i < 30; ++i) {
        auto g = tovey_regularize(random_formula(rng));
        CHECK(tovey_regularize(g) == g);
    }
}
