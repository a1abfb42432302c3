// Command-line front end: solvers, the reduction pipeline, detecting
// families, Kneser graphs, and the monomial-testing circuits.
//
// Exit codes: 0 = YES (or success for generators), 1 = NO, 2 = error.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "multicolor/multicolor.hpp"

namespace mc = multicolor;
using nlohmann::json;

namespace {

struct RunReport {
    std::string command;
    json inputs = json::object();
    std::string result;
    json stats = json::object();
    long long elapsed_ms = 0;

    json to_json() const {
        json j;
        j["command"] = command;
        j["inputs"] = inputs;
        j["result"] = result;
        j["stats"] = stats;
        j["elapsed_ms"] = elapsed_ms;
        return j;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mc::error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mc::error("cannot write " + path);
    out << content;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw mc::parse_error(e.what());
    }
}

struct Caps {
    int sat_vars = 24;
    uint64_t nodes = 20'000'000;
    uint64_t dp_states = 100'000'000;
    uint64_t sets = uint64_t{1} << 22;
    uint64_t kernel = 100'000'000;
    uint64_t kneser = 200'000;
    uint64_t terms = 200'000;

    mc::SolverLimits solver_limits() const { return {nodes, dp_states, sets}; }
};

void add_cap_flags(CLI::App* cmd, Caps& caps) {
    cmd->add_option("--cap-sat-vars", caps.sat_vars, "Brute-force SAT variable cap");
    cmd->add_option("--cap-nodes", caps.nodes, "Backtracking node budget");
    cmd->add_option("--cap-dp", caps.dp_states, "DP state cap");
    cmd->add_option("--cap-sets", caps.sets, "Independent-set enumeration cap");
    cmd->add_option("--cap-kernel", caps.kernel, "Detecting-family kernel cap");
    cmd->add_option("--cap-kneser", caps.kneser, "Kneser vertex cap for list removal");
    cmd->add_option("--cap-terms", caps.terms, "Polynomial expansion term cap");
}

int finish(const RunReport& report, bool as_json, int exit_code) {
    if (as_json)
        std::cout << report.to_json().dump() << '\n';
    else if (!report.result.empty() && report.result != "stdout")
        std::cout << report.result << '\n'; // payload already went to stdout
    return exit_code;
}

mc::PipelineStage parse_stage(const std::string& name) {
    if (name == "nonuniform") return mc::PipelineStage::nonuniform;
    if (name == "uniform") return mc::PipelineStage::uniform;
    if (name == "plain") return mc::PipelineStage::plain;
    throw mc::invalid_parameters("unknown stage '" + name + "'");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact multicoloring solvers and the SAT-to-multicoloring reduction chain"};
    app.require_subcommand(1);
    app.fallthrough(); // let --json/--seed/--cap-* appear after the subcommand too

    bool as_json = false;
    uint64_t seed = 0;
    Caps caps;
    app.add_flag("--json", as_json, "Emit the run report as JSON");
    app.add_option("--seed", seed, "Seed for randomized constructions");

    std::function<int(RunReport&)> action;

    // ---- solve ----
    auto* solve = app.add_subcommand("solve", "Decide an instance file (YES/NO)");
    static std::string solve_file, engine = "backtracking", witness_path;
    solve->add_option("instance", solve_file, "Instance JSON file")->required();
    solve->add_option("--engine", engine, "backtracking|dp")
        ->check(CLI::IsMember({"backtracking", "dp"}));
    solve->add_option("--witness", witness_path, "Write the coloring JSON here on YES");
    add_cap_flags(solve, caps);
    solve->callback([&]() {
        action = [&](RunReport& r) {
            auto inst = mc::instance_from_json(parse_json(read_file(solve_file)));
            r.inputs = {{"instance", solve_file}, {"engine", engine}};
            bool yes;
            if (engine == "dp") {
                if (!witness_path.empty())
                    throw mc::invalid_parameters("solve: the dp engine decides only; "
                                                 "use --engine backtracking for a witness");
                yes = mc::solve_dp(inst, caps.solver_limits());
            } else {
                auto col = mc::solve_backtracking(inst, caps.solver_limits());
                yes = col.has_value();
                if (yes && !witness_path.empty())
                    write_file(witness_path, mc::coloring_to_json(*col).dump() + "\n");
            }
            r.stats = {{"n", inst.graph.n}, {"a", inst.a}, {"b", inst.b}};
            r.result = yes ? "YES" : "NO";
            return yes ? 0 : 1;
        };
    });

    // ---- reduce ----
    auto* reduce = app.add_subcommand("reduce", "Run the reduction pipeline on a DIMACS file");
    static std::string reduce_file, stage_name = "plain", out_path = "instance.json",
                       stats_path;
    static int reduce_b = 2;
    reduce->add_option("formula", reduce_file, "DIMACS CNF file")->required();
    reduce->add_option("--b", reduce_b, "Demand parameter b >= 2")->required();
    reduce->add_option("--stage", stage_name, "nonuniform|uniform|plain")
        ->check(CLI::IsMember({"nonuniform", "uniform", "plain"}));
    reduce->add_option("--out", out_path, "Instance output path");
    reduce->add_option("--stats-out", stats_path, "Also write the stage statistics here");
    add_cap_flags(reduce, caps);
    reduce->callback([&]() {
        action = [&](RunReport& r) {
            if (reduce_b < 2) throw mc::invalid_parameters("reduce: need b >= 2");
            auto f = mc::parse_dimacs(read_file(reduce_file));
            auto stage = parse_stage(stage_name);
            auto result = mc::full_pipeline(f, reduce_b, seed, stage, caps.kneser);
            write_file(out_path, mc::instance_json_text(result.stage_instance(stage)) + "\n");
            r.inputs = {{"formula", reduce_file}, {"b", reduce_b}, {"stage", stage_name},
                        {"seed", seed}};
            r.stats = result.stats.to_json();
            if (!stats_path.empty()) write_file(stats_path, r.stats.dump() + "\n");
            r.result = out_path;
            return 0;
        };
    });

    // ---- verify ----
    auto* verify = app.add_subcommand(
        "verify", "Check SAT vs. reduced-instance agreement plus witness round-trips");
    static std::string verify_file;
    static int verify_b = 2;
    verify->add_option("formula", verify_file, "DIMACS CNF file")->required();
    verify->add_option("--b", verify_b, "Demand parameter b >= 2")->required();
    add_cap_flags(verify, caps);
    verify->callback([&]() {
        action = [&](RunReport& r) {
            if (verify_b < 2) throw mc::invalid_parameters("verify: need b >= 2");
            auto f = mc::parse_dimacs(read_file(verify_file));
            auto sat = mc::brute_force_sat(f, caps.sat_vars);
            auto pipe = mc::full_pipeline(f, verify_b, seed, mc::PipelineStage::nonuniform,
                                          caps.kneser);
            auto col = mc::solve_backtracking(pipe.nonuniform, caps.solver_limits());
            bool agree = sat.has_value() == col.has_value();
            bool round_trips = true;
            if (agree && col) {
                auto reg_sat = mc::brute_force_sat(pipe.regularized,
                                                   std::max(caps.sat_vars,
                                                            pipe.regularized.variable_count));
                auto encoded = mc::encode_witness(*reg_sat, pipe.artifacts);
                round_trips = bool(mc::check_multicoloring(pipe.nonuniform, encoded));
                auto decoded = mc::decode_witness(*col, pipe.artifacts);
                round_trips = round_trips && mc::satisfies(pipe.regularized, decoded);
            }
            r.inputs = {{"formula", verify_file}, {"b", verify_b}, {"seed", seed}};
            r.stats = {{"sat", sat.has_value()},
                       {"instance_sat", col.has_value()},
                       {"round_trips", round_trips}};
            bool ok = agree && round_trips;
            r.result = ok ? "YES" : "NO";
            return ok ? 0 : 1;
        };
    });

    // ---- detect ----
    auto* detect = app.add_subcommand("detect", "Build or verify d-detecting families");
    detect->require_subcommand(1);
    auto* dbuild = detect->add_subcommand("build", "Construct a verified family");
    static int d_universe = 1, d_value = 2, d_size = 0;
    static std::string d_out = "family.txt";
    dbuild->add_option("--universe", d_universe, "Universe size")->required();
    dbuild->add_option("--d", d_value, "Detection bound d >= 2")->required();
    dbuild->add_option("--size", d_size, "Target family size (default: universe size)");
    dbuild->add_option("--out", d_out, "Output path");
    add_cap_flags(dbuild, caps);
    dbuild->callback([&]() {
        action = [&](RunReport& r) {
            int target = d_size > 0 ? d_size : d_universe;
            auto fam = mc::build_family(d_universe, d_value, seed, target, 64, caps.kernel);
            write_file(d_out, mc::family_to_text(fam));
            r.inputs = {{"universe", d_universe}, {"d", d_value}, {"size", target},
                        {"seed", seed}};
            r.stats = {{"sets", fam.sets.size()}, {"verified", fam.verified}};
            r.result = d_out;
            return 0;
        };
    });
    auto* dverify = detect->add_subcommand("verify", "Verify a family file");
    static std::string d_in;
    dverify->add_option("family", d_in, "Family text file")->required();
    add_cap_flags(dverify, caps);
    dverify->callback([&]() {
        action = [&](RunReport& r) {
            auto fam = mc::family_from_text(read_file(d_in));
            bool ok = mc::verify_family(fam, caps.kernel);
            r.inputs = {{"family", d_in}};
            r.stats = {{"universe", fam.universe_size}, {"d", fam.d}, {"sets", fam.sets.size()}};
            r.result = ok ? "YES" : "NO";
            return ok ? 0 : 1;
        };
    });

    // ---- kneser ----
    auto* kneser = app.add_subcommand("kneser", "Emit a Kneser graph as graph JSON");
    static int k_a = 5, k_b = 2;
    static std::string k_out;
    kneser->add_option("--a", k_a, "Ground-set size")->required();
    kneser->add_option("--b", k_b, "Subset size")->required();
    kneser->add_option("--out", k_out, "Output path (default stdout)");
    kneser->callback([&]() {
        action = [&](RunReport& r) {
            auto k = mc::kneser_graph(k_a, k_b);
            std::string text = mc::graph_json_text(k.graph) + "\n";
            if (k_out.empty())
                std::cout << text;
            else
                write_file(k_out, text);
            r.inputs = {{"a", k_a}, {"b", k_b}};
            r.stats = {{"vertices", k.graph.n}, {"edges", k.graph.edges.size()}};
            r.result = k_out.empty() ? "stdout" : k_out;
            return 0;
        };
    });

    // ---- circuit ----
    auto* circuit = app.add_subcommand("circuit", "Build, expand, filter, or test circuits");
    circuit->require_subcommand(1);

    auto* cqg = circuit->add_subcommand("build-qg", "q_G circuit of a list instance");
    auto* cpg = circuit->add_subcommand("build-pg", "p_G circuit of a list instance");
    static std::string c_instance, c_out = "circuit.txt";
    for (auto* sub : {cqg, cpg}) {
        sub->add_option("instance", c_instance, "Instance JSON file")->required();
        sub->add_option("--out", c_out, "Circuit output path");
        add_cap_flags(sub, caps);
    }
    cqg->callback([&]() {
        action = [&](RunReport& r) {
            auto inst = mc::instance_from_json(parse_json(read_file(c_instance)));
            auto c = mc::build_qG(inst, caps.sets);
            write_file(c_out, mc::circuit_to_text(c));
            r.inputs = {{"instance", c_instance}};
            r.stats = {{"gates", c.gates.size()}};
            r.result = c_out;
            return 0;
        };
    });
    cpg->callback([&]() {
        action = [&](RunReport& r) {
            auto inst = mc::instance_from_json(parse_json(read_file(c_instance)));
            auto c = mc::build_pG(inst, caps.sets);
            write_file(c_out, mc::circuit_to_text(c));
            r.inputs = {{"instance", c_instance}};
            r.stats = {{"gates", c.gates.size()},
                       {"k", int64_t{2} * inst.b * inst.graph.n}};
            r.result = c_out;
            return 0;
        };
    });

    auto* cps = circuit->add_subcommand("build-ps", "p_S circuit of a carry-less instance");
    static std::string cps_file;
    static int cps_t = 1;
    cps->add_option("carryless", cps_file, "Carry-less JSON file")->required();
    cps->add_option("--t", cps_t, "Block count")->required();
    cps->add_option("--out", c_out, "Circuit output path");
    cps->callback([&]() {
        action = [&](RunReport& r) {
            auto inst = mc::carryless_from_json(parse_json(read_file(cps_file)));
            auto ps = mc::build_pS(inst, cps_t);
            write_file(c_out, mc::circuit_to_text(ps.circuit));
            r.inputs = {{"carryless", cps_file}, {"t", cps_t}};
            r.stats = {{"gates", ps.circuit.gates.size()}, {"q", ps.q}, {"r", ps.r},
                       {"k", ps.k}};
            r.result = c_out;
            return 0;
        };
    });

    auto* cexpand = circuit->add_subcommand("expand", "Expand a circuit into monomials");
    static std::string cx_in;
    cexpand->add_option("circuit", cx_in, "Circuit text file")->required();
    add_cap_flags(cexpand, caps);
    cexpand->callback([&]() {
        action = [&](RunReport& r) {
            auto c = mc::circuit_from_text(read_file(cx_in));
            auto poly = mc::expand_circuit(c, caps.terms);
            std::cout << mc::poly_to_string(poly) << '\n';
            r.inputs = {{"circuit", cx_in}};
            r.stats = {{"terms", poly.terms.size()}};
            r.result = "stdout";
            return 0;
        };
    });

    auto* cfilter = circuit->add_subcommand("filter", "Homogeneous degree filter");
    static std::string cf_in, cf_out = "filtered.txt";
    static int64_t cf_k = 0, cf_max = -1;
    cfilter->add_option("circuit", cf_in, "Circuit text file")->required();
    cfilter->add_option("--k", cf_k, "Target total degree")->required();
    cfilter->add_option("--max-degree", cf_max, "Degree bound (default: k)");
    cfilter->add_option("--out", cf_out, "Output path");
    cfilter->callback([&]() {
        action = [&](RunReport& r) {
            auto c = mc::circuit_from_text(read_file(cf_in));
            auto filtered = mc::degree_filter(c, cf_k, cf_max < 0 ? cf_k : cf_max);
            write_file(cf_out, mc::circuit_to_text(filtered));
            r.inputs = {{"circuit", cf_in}, {"k", cf_k}};
            r.stats = {{"gates", filtered.gates.size()}, {"source_gates", c.gates.size()}};
            r.result = cf_out;
            return 0;
        };
    });

    auto* cmono = circuit->add_subcommand("monomial", "Test for an r-monomial (YES/NO)");
    static std::string cm_in;
    static int64_t cm_r = 1;
    cmono->add_option("circuit", cm_in, "Circuit text file")->required();
    cmono->add_option("--r", cm_r, "Individual degree bound")->required();
    add_cap_flags(cmono, caps);
    cmono->callback([&]() {
        action = [&](RunReport& r) {
            auto c = mc::circuit_from_text(read_file(cm_in));
            auto poly = mc::expand_circuit(c, caps.terms);
            bool yes = mc::has_r_monomial(poly, cm_r);
            r.inputs = {{"circuit", cm_in}, {"r", cm_r}};
            r.stats = {{"terms", poly.terms.size()}};
            r.result = yes ? "YES" : "NO";
            return yes ? 0 : 1;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    RunReport report;
    report.command = app.get_subcommands().front()->get_name();
    auto start = std::chrono::steady_clock::now();
    try {
        int code = action(report);
        report.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                std::chrono::steady_clock::now() - start)
                                .count();
        return finish(report, as_json, code);
    } catch (const mc::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
