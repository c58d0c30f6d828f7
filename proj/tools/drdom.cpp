// drdom: command-line front end for the (d,r)-domination solvers.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include <drdom/colored.hpp>
#include <drdom/decomposition.hpp>
#include <drdom/graph.hpp>
#include <drdom/harness.hpp>
#include <drdom/ilp.hpp>
#include <drdom/kernel.hpp>
#include <drdom/oracle.hpp>
#include <drdom/solver.hpp>

using namespace drdom;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitError = 2;

Graph load(const std::string& path) {
    if (path == "-") return parse_edge_list(std::cin);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    try {
        return parse_edge_list(in);
    } catch (const ParseError& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

/// Writes to `path`, or stdout when path is empty or "-".
void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::string join_ids(const VertexSet& s) {
    std::ostringstream o;
    for (std::size_t i = 0; i < s.size(); ++i) o << (i ? " " : "") << s[i];
    return o.str();
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
    std::string input;
    int d = 1, r = 1;
    std::string method = "auto";
    std::optional<long long> budget;
    bool json = false;
    bool dump_tables = false;
    std::size_t oracle_cap = default_oracle_cap();
};

int run_solve(const SolveArgs& a) {
    const Graph g = load(a.input);
    DominationInstance inst{g, a.d, a.r, {}};
    if (a.budget) {
        if (*a.budget < 0) throw PreconditionError("budget must be non-negative");
        inst.budget = static_cast<std::size_t>(*a.budget);
    }
    inst.validate();

    std::string method = a.method;
    if (method == "auto") method = g.order() <= 10 ? "brute" : "dp-extended";

    const auto t0 = std::chrono::steady_clock::now();
    Solution sol;
    std::optional<DpResult> dp;
    if (method == "brute") {
        sol = brute_force_min(inst, {a.oracle_cap, Deadline::never()});
    } else if (method == "dp-paper" || method == "dp-extended") {
        dp.emplace();
        sol = solve_dr(g, a.d, a.r, method == "dp-paper" ? DpVariant::Paper : DpVariant::Extended, &*dp);
    } else if (method == "ilp") {
        const Graph power = graph_power(g, a.r);
        auto ilp = build_ilp(power, a.d, a.budget ? *a.budget : static_cast<long long>(g.order()));
        auto s = solve_ilp_enumeration(ilp);
        sol.method = "ilp";
        if (s) {
            sol.vertices = expand_assignment(ilp, s->tau);
            sol.valid = is_dr_dominating(g, a.d, a.r, sol.vertices);
            if (!sol.valid) throw InvariantError("ILP assignment expanded to a non-dominating set");
        }
    } else {
        throw PreconditionError("unknown method '" + method + "'");
    }
    const double ms = ms_since(t0);

    // The ILP answers "no" by infeasibility; everything else returns a minimum set.
    const bool found = sol.valid;
    const bool yes = found && (!a.budget || static_cast<long long>(sol.size()) <= *a.budget);

    if (a.json) {
        json j;
        j["n"] = g.order();
        j["m"] = g.size();
        j["d"] = a.d;
        j["r"] = a.r;
        try {
            auto p = structural_params(g);
            j["params"] = {{"mw", p.mw}, {"nd", p.nd}, {"itp", p.itp}};
        } catch (const std::exception&) {
            j["params"] = nullptr;
        }
        json mj;
        mj["size"] = found ? json(sol.size()) : json(nullptr);
        mj["ms"] = ms;
        mj["valid"] = sol.valid;
        mj["vertices"] = sol.vertices;
        j["methods"] = {{sol.method, mj}};
        j["divergences"] = json::array();
        j["seed"] = nullptr;
        if (a.budget) {
            j["budget"] = *a.budget;
            j["answer"] = yes ? "yes" : "no";
        }
        if (a.dump_tables && dp) j["tables"] = tables_to_json(*dp);
        std::cout << j.dump(2) << '\n';
    } else {
        if (found) {
            std::cout << "size " << sol.size() << '\n';
            std::cout << "vertices " << join_ids(sol.vertices) << '\n';
        } else {
            std::cout << "no solution within budget\n";
        }
        std::cout << "method " << sol.method << '\n';
        std::cout << "valid " << (sol.valid ? "yes" : "no") << '\n';
        std::cout << "ms " << std::fixed << std::setprecision(3) << ms << '\n';
        if (a.budget) std::cout << "answer " << (yes ? "yes" : "no") << " (budget " << *a.budget << ")\n";
        if (a.dump_tables && dp) std::cout << tables_to_json(*dp).dump(2) << '\n';
    }
    return a.budget && !yes ? 1 : 0;
}

// ---------------------------------------------------------------- kernel

int run_kernel(const std::string& input, int d, int r, const std::string& output) {
    const Graph g = load(input);
    auto k = kernelize_nd(g, d, r);
    json j;
    j["report"] = to_json(k.report);
    j["original_id"] = k.original_id;
    if (output.empty())
        j["edge_list"] = to_edge_list(k.graph);
    else
        emit(output, to_edge_list(k.graph));
    std::cout << j.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------- compress

int run_compress(const std::string& input, const std::string& target, int d, int r, std::optional<long long> budget,
                 const std::string& output) {
    const Graph g = load(input);
    const long long k = budget ? *budget : static_cast<long long>(g.order());
    if (target == "colored") {
        if (d != 1) throw PreconditionError("colored compression is defined for d = 1");
        if (!is_connected(g)) throw PreconditionError("colored compression requires a connected graph");
        if (g.order() < 2) throw PreconditionError("colored compression needs at least 2 vertices");
        auto ci = reduce_to_colored(g, r, static_cast<int>(std::min<long long>(k, static_cast<long long>(g.order()))));
        const auto mw_power = structural_params(graph_power(g, r)).mw;
        json inst = to_json(ci);
        emit(output, inst.dump() + "\n");
        json rep;
        rep["l"] = ci.h.order();
        rep["mw_power"] = mw_power;
        rep["bytes"] = inst.dump().size();
        std::cerr << rep.dump() << '\n';
    } else if (target == "ilp") {
        const Graph power = graph_power(g, r);
        auto ilp = build_ilp(power, d, k);
        const std::string lp = to_lp(ilp);
        emit(output, lp);
        std::int64_t max_coef = 0;
        for (const auto& row : ilp.rows)
            for (auto [var, c] : row.terms) max_coef = std::max(max_coef, c);
        json rep;
        rep["itp"] = ilp.module_count();
        rep["variables"] = ilp.variable_count();
        rep["rows"] = ilp.rows.size();
        rep["max_coefficient"] = max_coef;
        rep["bytes"] = lp.size();
        std::cerr << rep.dump() << '\n';
    } else {
        throw PreconditionError("unknown target '" + target + "' (expected colored or ilp)");
    }
    return 0;
}

// ---------------------------------------------------------------- decompose

int run_decompose(const std::string& input, bool as_json) {
    const Graph g = load(input);
    auto tree = modular_decomposition(g);
    auto p = structural_params(g, tree);
    auto problems = validate_parse_tree(g, tree);
    if (!problems.empty()) throw InvariantError("decomposition failed validation: " + problems.front());
    if (as_json) {
        json j;
        j["params"] = {{"mw", p.mw}, {"nd", p.nd}, {"itp", p.itp}};
        j["tree"] = to_json(tree);
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "mw=" << p.mw << " nd=" << p.nd << " itp=" << p.itp << '\n';
        std::cout << to_json(tree).dump(2) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------- harness

int run_harness_cmd(HarnessSpec spec, bool as_json, long long timeout_ms, const std::string& kind) {
    if (kind == "cograph")
        spec.module_kind = gen::ModuleKind::Cograph;
    else if (kind == "clique")
        spec.module_kind = gen::ModuleKind::Clique;
    else if (kind == "independent")
        spec.module_kind = gen::ModuleKind::Independent;
    else
        throw PreconditionError("unknown module kind '" + kind + "'");
    spec.trial.timeout = std::chrono::milliseconds(timeout_ms);
    auto res = run_harness(spec);
    auto j = to_json(spec, res);
    if (as_json) {
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "family " << spec.family << ", " << spec.trials << " trials, seed " << spec.seed << '\n';
        std::cout << std::left << std::setw(22) << "method" << std::setw(8) << "agree" << std::setw(9) << "diverge"
                  << "unchecked\n";
        for (auto& [name, row] : j["agreement_vs_oracle"].items())
            std::cout << std::setw(22) << name << std::setw(8) << row["agree"].get<std::size_t>() << std::setw(9)
                      << row["diverge"].get<std::size_t>() << row["unchecked"].get<std::size_t>() << '\n';
        std::cout << "fatal trials " << res.fatal_count() << '\n';
        if (spec.family == "substituted") {
            std::cout << '\n' << std::setw(10) << "n" << std::setw(12) << "m" << std::setw(16) << "dp-extended ms"
                      << "dp-paper ms\n";
            for (const auto& t : res.trials) {
                const auto* ext = t.method("dp-extended");
                const auto* pap = t.method("dp-paper");
                std::cout << std::setw(10) << t.n << std::setw(12) << t.m << std::setw(16) << std::fixed
                          << std::setprecision(1) << (ext ? ext->ms : 0.0) << (pap ? pap->ms : 0.0) << '\n';
            }
        }
        for (const auto& t : res.trials)
            for (const auto& e : t.errors) std::cout << "seed " << t.seed << ": " << e << '\n';
    }
    return res.fatal_count() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact (d,r)-domination solvers, reductions and cross-checking harness"};
    app.require_subcommand(1);

    SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "Minimum (d,r)-dominating set");
    solve->add_option("--input", sa.input, "Edge-list file, '-' for stdin")->required();
    solve->add_option("-d", sa.d, "Demand")->check(CLI::PositiveNumber);
    solve->add_option("-r", sa.r, "Radius")->check(CLI::PositiveNumber);
    solve->add_option("--method", sa.method)->check(CLI::IsMember({"auto", "brute", "dp-paper", "dp-extended", "ilp"}));
    solve->add_option("--budget", sa.budget, "Decision mode: exit 0 if a set of size <= K exists, else 1");
    solve->add_flag("--json", sa.json);
    solve->add_flag("--dump-tables", sa.dump_tables, "Print every cost table (dp methods)");
    solve->add_option("--oracle-cap", sa.oracle_cap, "Vertex cap of the brute-force method");

    std::string input, output, target = "colored";
    int d = 1, r = 1;
    std::optional<long long> budget;
    bool as_json = false;

    auto* kernel = app.add_subcommand("kernel", "Twin-class pruning kernel");
    kernel->add_option("--input", input)->required();
    kernel->add_option("-d", d)->check(CLI::PositiveNumber);
    kernel->add_option("-r", r)->check(CLI::PositiveNumber);
    kernel->add_option("--output", output, "Kernel edge list (default: embedded in the report)");

    auto* compress = app.add_subcommand("compress", "Compress to Colored Domination or to an ILP");
    compress->add_option("--input", input)->required();
    compress->add_option("--target", target)->check(CLI::IsMember({"colored", "ilp"}));
    compress->add_option("-d", d)->check(CLI::PositiveNumber);
    compress->add_option("-r", r)->check(CLI::PositiveNumber);
    compress->add_option("-k,--budget", budget);
    compress->add_option("--output", output);

    auto* power = app.add_subcommand("power", "Graph power G^r as an edge list");
    power->add_option("--input", input)->required();
    power->add_option("-r", r)->check(CLI::PositiveNumber);
    power->add_option("--output", output);

    auto* decompose = app.add_subcommand("decompose", "Modular decomposition and mw/nd/itp");
    decompose->add_option("--input", input)->required();
    decompose->add_flag("--json", as_json);

    HarnessSpec hs;
    std::optional<int> hd, hr;
    long long timeout_ms = 10000;
    std::string kind = "cograph";
    auto* harness = app.add_subcommand("harness", "Cross-method equivalence runs on generated graphs");
    harness->add_option("--family", hs.family)
        ->check(CLI::IsMember({"gnp", "substituted", "bipartite", "complete-bipartite", "path", "cycle", "star", "complete"}));
    harness->add_option("--n", hs.n);
    harness->add_option("--trials", hs.trials);
    harness->add_option("--seed", hs.seed);
    harness->add_option("--dmax", hs.dmax)->check(CLI::PositiveNumber);
    harness->add_option("--rmax", hs.rmax)->check(CLI::PositiveNumber);
    harness->add_option("-d", hd)->check(CLI::PositiveNumber);
    harness->add_option("-r", hr)->check(CLI::PositiveNumber);
    harness->add_option("--p", hs.p, "Edge probability (default: uniform in [0.2,0.8] per trial)");
    harness->add_option("--quotient", hs.quotient)->check(CLI::IsMember({"p4", "p5", "c5", "bull"}));
    harness->add_option("--module-size", hs.module_size);
    harness->add_option("--module-kind", kind)->check(CLI::IsMember({"cograph", "clique", "independent"}));
    harness->add_option("--jobs", hs.jobs);
    harness->add_option("--timeout-ms", timeout_ms);
    harness->add_flag("--json", as_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    try {
        if (*solve) return run_solve(sa);
        if (*kernel) return run_kernel(input, d, r, output);
        if (*compress) return run_compress(input, target, d, r, budget, output);
        if (*power) {
            emit(output, to_edge_list(graph_power(load(input), r)));
            return 0;
        }
        if (*decompose) return run_decompose(input, as_json);
        if (*harness) {
            hs.d = hd;
            hs.r = hr;
            return run_harness_cmd(hs, as_json, timeout_ms, kind);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
