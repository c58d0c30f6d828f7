#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "colored.hpp"
#include "decomposition.hpp"
#include "errors.hpp"
#include "generators.hpp"
#include "graph.hpp"
#include "ilp.hpp"
#include "kernel.hpp"
#include "oracle.hpp"
#include "solver.hpp"

namespace drdom {

struct MethodResult {
    std::optional<std::size_t> size;
    double ms = 0;
    bool valid = false;
    std::string note;  // skip / timeout / error reason
};

struct Divergence {
    std::string a, b;
    std::size_t size_a = 0, size_b = 0;
    bool fatal = false;
};

struct RunReport {
    std::size_t n = 0, m = 0;
    int d = 1, r = 1;
    std::optional<StructuralParams> params;
    std::vector<std::pair<std::string, MethodResult>> methods;
    std::vector<Divergence> divergences;
    std::uint64_t seed = 0;
    std::vector<std::string> errors;  // fatal conditions other than divergences

    const MethodResult* method(const std::string& name) const {
        for (const auto& [k, v] : methods)
            if (k == name) return &v;
        return nullptr;
    }
    bool fatal() const {
        if (!errors.empty()) return true;
        for (const auto& dv : divergences)
            if (dv.fatal) return true;
        return false;
    }
};

struct TrialOptions {
    std::chrono::milliseconds timeout{10000};
    std::size_t oracle_cap = default_oracle_cap();
    double ilp_cap = 1e9;
    bool timings = true;  // false zeroes "ms" so reports compare byte for byte
};

namespace detail {

template <class F>
MethodResult timed(const char* name, RunReport& rep, F&& body) {
    MethodResult res;
    const auto start = std::chrono::steady_clock::now();
    try {
        body(res);
    } catch (const CapExceeded& e) {
        res.note = std::string("skipped: ") + e.what();
    } catch (const TimeoutError&) {
        res.note = "timeout";
    } catch (const PreconditionError& e) {
        res.note = std::string("skipped: ") + e.what();
    } catch (const std::exception& e) {
        res.note = std::string("error: ") + e.what();
        rep.errors.push_back(std::string(name) + ": " + e.what());
    }
    res.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return res;
}

}  // namespace detail

/// Runs every method on one instance and records pairwise size disagreements
/// against the oracle. Only dp-extended and kernel+oracle disagreements are fatal.
inline RunReport run_trial(const Graph& g, int d, int r, std::uint64_t seed, const TrialOptions& opt = {}) {
    RunReport rep;
    rep.n = g.order();
    rep.m = g.size();
    rep.d = d;
    rep.r = r;
    rep.seed = seed;
    const Deadline deadline = Deadline::after(opt.timeout);
    const OracleOptions oopt{opt.oracle_cap, deadline};
    try {
        rep.params = structural_params(g);
    } catch (const std::exception& e) {
        rep.errors.push_back(std::string("params: ") + e.what());
    }

    rep.methods.emplace_back("oracle", detail::timed("oracle", rep, [&](MethodResult& res) {
        auto s = brute_force_min({g, d, r, {}}, oopt);
        res.size = s.size();
        res.valid = s.valid;
    }));
    for (DpVariant v : {DpVariant::Paper, DpVariant::Extended}) {
        const char* name = to_string(v);
        rep.methods.emplace_back(name, detail::timed(name, rep, [&](MethodResult& res) {
            auto s = solve_dr(g, d, r, v);
            res.size = s.size();
            res.valid = s.valid;
        }));
    }
    std::size_t offset = 0;
    rep.methods.emplace_back("kernel+oracle", detail::timed("kernel+oracle", rep, [&](MethodResult& res) {
        auto k = kernelize_nd(g, d, r);
        offset = k.budget_offset;
        auto s = brute_force_min({k.graph, d, r, {}}, oopt);
        res.size = s.size();
        res.valid = is_dr_dominating(k.graph, d, r, s.vertices);
    }));
    // same kernel, budget lowered by the pruned forced vertices
    if (const MethodResult* plain = rep.method("kernel+oracle"); plain->size) {
        MethodResult adj = *plain;
        *adj.size += offset;
        rep.methods.emplace_back("kernel-offset+oracle", adj);
    }
    if (d == 1 && g.order() >= 2 && is_connected(g)) {
        rep.methods.emplace_back("colored", detail::timed("colored", rep, [&](MethodResult& res) {
            auto ci = reduce_to_colored(g, r, static_cast<int>(g.order()));
            auto s = solve_colored_bruteforce(ci, oopt);
            if (!s) throw InvariantError("colored instance infeasible at budget l");
            res.size = s->size();
            res.valid = is_dr_dominating(g, 1, r, expand_colored(graph_power(g, r), ci, *s));
        }));
    }
    rep.methods.emplace_back("ilp", detail::timed("ilp", rep, [&](MethodResult& res) {
        const Graph power = graph_power(g, r);
        auto ilp = build_ilp(power, d, static_cast<std::int64_t>(g.order()));
        auto s = solve_ilp_enumeration(ilp, {opt.ilp_cap, deadline});
        if (!s) throw InvariantError("ILP infeasible at budget n");
        auto set = expand_assignment(ilp, s->tau);
        res.size = set.size();
        res.valid = set.size() == static_cast<std::size_t>(s->objective) && is_dr_dominating(g, d, r, set);
    }));

    const MethodResult* oracle = rep.method("oracle");
    for (const auto& [name, res] : rep.methods) {
        if (name == "oracle") continue;
        if (res.size && !res.valid) rep.errors.push_back(name + ": solution failed verification");
        if (!oracle || !oracle->size || !res.size || *oracle->size == *res.size) continue;
        rep.divergences.push_back({name, "oracle", *res.size, *oracle->size, name == "dp-extended" || name == "kernel+oracle"});
    }
    if (!opt.timings)
        for (auto& [name, res] : rep.methods) res.ms = 0;
    return rep;
}

inline nlohmann::ordered_json to_json(const RunReport& rep) {
    nlohmann::ordered_json j;
    j["n"] = rep.n;
    j["m"] = rep.m;
    j["d"] = rep.d;
    j["r"] = rep.r;
    if (rep.params)
        j["params"] = {{"mw", rep.params->mw}, {"nd", rep.params->nd}, {"itp", rep.params->itp}};
    else
        j["params"] = nullptr;
    nlohmann::ordered_json methods = nlohmann::ordered_json::object();
    for (const auto& [name, res] : rep.methods) {
        nlohmann::ordered_json mj;
        mj["size"] = res.size ? nlohmann::ordered_json(*res.size) : nlohmann::ordered_json(nullptr);
        mj["ms"] = res.ms;
        mj["valid"] = res.valid;
        if (!res.note.empty()) mj["note"] = res.note;
        methods[name] = std::move(mj);
    }
    j["methods"] = std::move(methods);
    auto div = nlohmann::ordered_json::array();
    for (const auto& dv : rep.divergences)
        div.push_back({{"methods", {dv.a, dv.b}}, {"sizes", {dv.size_a, dv.size_b}}, {"fatal", dv.fatal}});
    j["divergences"] = std::move(div);
    j["seed"] = rep.seed;
    if (!rep.errors.empty()) j["errors"] = rep.errors;
    return j;
}

// ---------------------------------------------------------------------------
// Batch runs

struct HarnessSpec {
    std::string family = "gnp";  // gnp | substituted | bipartite | complete-bipartite | path | cycle | star | complete
    std::size_t n = 10;
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    int dmax = 1, rmax = 1;
    std::optional<int> d, r;
    double p = -1;  // edge probability; negative = uniform in [0.2, 0.8] per trial
    std::string quotient = "p4";
    std::size_t module_size = 5;
    gen::ModuleKind module_kind = gen::ModuleKind::Cograph;
    unsigned jobs = 1;
    TrialOptions trial;
};

struct GeneratedTrial {
    Graph graph;
    int d = 1, r = 1;
    std::uint64_t seed = 0;
};

/// Instance for trial `index`; a pure function of (spec, index).
inline GeneratedTrial generate_trial(const HarnessSpec& spec, std::size_t index) {
    GeneratedTrial t;
    t.seed = gen::derive_seed(spec.seed, index);
    gen::Rng rng(t.seed);
    t.d = spec.d ? *spec.d : std::uniform_int_distribution<int>(1, std::max(1, spec.dmax))(rng);
    t.r = spec.r ? *spec.r : std::uniform_int_distribution<int>(1, std::max(1, spec.rmax))(rng);
    const double p = spec.p >= 0 ? spec.p : std::uniform_real_distribution<double>(0.2, 0.8)(rng);
    const std::size_t n = std::max<std::size_t>(spec.n, 1);
    const std::string& f = spec.family;
    if (f == "gnp") {
        t.graph = gen::gnp_connected(n, p, rng);
    } else if (f == "bipartite") {
        const std::size_t a = n < 2 ? 1 : std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
        t.graph = n < 2 ? gen::path(1) : gen::bipartite_connected(a, n - a, p, rng);
    } else if (f == "complete-bipartite") {
        const std::size_t a = n < 2 ? 1 : std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
        t.graph = n < 2 ? gen::path(1) : gen::complete_bipartite(a, n - a);
    } else if (f == "substituted") {
        // trial i substitutes modules of size module_size * (i + 1): a linear size sweep
        Graph q = gen::named_quotient(spec.quotient);
        std::vector<std::size_t> sizes(q.order(), spec.module_size * (index + 1));
        t.graph = gen::substituted(q, sizes, spec.module_kind, rng);
    } else if (f == "path") {
        t.graph = gen::path(n);
    } else if (f == "cycle") {
        t.graph = gen::cycle(n);
    } else if (f == "star") {
        t.graph = gen::star(n);
    } else if (f == "complete") {
        t.graph = gen::complete(n);
    } else {
        throw PreconditionError("unknown family '" + f + "'");
    }
    return t;
}

struct HarnessResult {
    std::vector<RunReport> trials;

    std::size_t fatal_count() const {
        std::size_t c = 0;
        for (const auto& t : trials) c += t.fatal();
        return c;
    }
};

/// Runs all trials; with jobs > 1 trials are spread over worker threads but
/// results are stored by index, so output does not depend on scheduling.
inline HarnessResult run_harness(const HarnessSpec& spec, const std::function<void(std::size_t)>& progress = {}) {
    HarnessResult out;
    out.trials.resize(spec.trials);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < spec.trials;) {
            RunReport rep;
            try {
                auto t = generate_trial(spec, i);
                rep = run_trial(t.graph, t.d, t.r, t.seed, spec.trial);
            } catch (const std::exception& e) {
                rep.seed = gen::derive_seed(spec.seed, i);
                rep.methods.emplace_back("generator", MethodResult{std::nullopt, 0, false, std::string("error: ") + e.what()});
            }
            out.trials[i] = std::move(rep);
            if (progress) progress(i);
        }
    };
    const unsigned jobs = std::max(1u, spec.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

inline nlohmann::ordered_json to_json(const HarnessSpec& spec, const HarnessResult& res) {
    nlohmann::ordered_json j;
    j["family"] = spec.family;
    j["seed"] = spec.seed;
    j["trials"] = spec.trials;
    std::vector<std::string> names;
    std::vector<std::size_t> agree, differ, skipped;
    auto slot = [&](const std::string& name) {
        for (std::size_t i = 0; i < names.size(); ++i)
            if (names[i] == name) return i;
        names.push_back(name);
        agree.push_back(0);
        differ.push_back(0);
        skipped.push_back(0);
        return names.size() - 1;
    };
    for (const auto& t : res.trials) {
        const MethodResult* o = t.method("oracle");
        for (const auto& [name, m] : t.methods) {
            if (name == "oracle") continue;
            const std::size_t s = slot(name);
            if (!o || !o->size || !m.size)
                ++skipped[s];
            else if (*o->size == *m.size)
                ++agree[s];
            else
                ++differ[s];
        }
    }
    nlohmann::ordered_json matrix = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < names.size(); ++i)
        matrix[names[i]] = {{"agree", agree[i]}, {"diverge", differ[i]}, {"unchecked", skipped[i]}};
    j["agreement_vs_oracle"] = std::move(matrix);
    j["fatal_trials"] = res.fatal_count();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& t : res.trials) arr.push_back(to_json(t));
    j["reports"] = std::move(arr);
    return j;
}

}  // namespace drdom
