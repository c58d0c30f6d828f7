#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "decomposition.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "solver.hpp"

namespace drdom {

struct IlpRow {
    enum class Sense { LessEq, GreaterEq };
    std::string name;
    std::vector<std::pair<int, std::int64_t>> terms;  // (variable index, coefficient)
    Sense sense = Sense::LessEq;
    std::int64_t rhs = 0;
};

/// Binary program over x[i][t] ("module i uses a minimum (t,1)-dominating set
/// of itself"), i over the modules of the iterated type partition, t = 1..d.
struct IlpInstance {
    int d = 1;
    std::int64_t budget = 0;
    Graph h;                                       // quotient on the modules
    std::vector<VertexSet> modules;                // input-graph vertices per module
    std::vector<std::vector<std::int64_t>> cost;   // cost[i][t], t = 0..d
    std::vector<std::vector<VertexSet>> witness;   // witness[i][t], a set of size cost[i][t]
    std::vector<std::int64_t> objective;           // per variable
    std::vector<IlpRow> rows;

    std::size_t module_count() const noexcept { return modules.size(); }
    std::size_t variable_count() const noexcept { return modules.size() * static_cast<std::size_t>(d); }
    int variable(std::size_t i, int t) const { return static_cast<int>(i) * d + (t - 1); }
    std::string variable_name(int var) const {
        return "x_" + std::to_string(var / d + 1) + "_" + std::to_string(var % d + 1);
    }
};

/// Builds the ILP for "(d,1)-dominating set of size <= k". Module costs come
/// from the exact (extended) DP on each module.
inline IlpInstance build_ilp(const Graph& g, int d, std::int64_t k) {
    if (d < 1) throw PreconditionError("demand d must be >= 1");
    IlpInstance ilp;
    ilp.d = d;
    ilp.budget = k;
    auto itp = itp_number(g);
    ilp.h = itp.final_graph();
    ilp.modules = itp.modules;

    for (const auto& m : ilp.modules) {
        Graph sub = induced_subgraph(g, m);
        std::vector<std::int64_t> costs(static_cast<std::size_t>(d + 1), 0);
        std::vector<VertexSet> wit(static_cast<std::size_t>(d + 1));
        if (sub.order() == 1) {
            for (int t = 1; t <= d; ++t) {
                costs[static_cast<std::size_t>(t)] = 1;
                wit[static_cast<std::size_t>(t)] = m;
            }
        } else {
            DpResult dp = compute_tables(sub, d, {DpVariant::Extended, false});
            for (int t = 1; t <= d; ++t) {
                costs[static_cast<std::size_t>(t)] = dp.root_table().c[static_cast<std::size_t>(t)].value();
                for (Vertex local : reconstruct(dp, dp.tree.root(), t)) wit[static_cast<std::size_t>(t)].push_back(m[static_cast<std::size_t>(local)]);
            }
        }
        ilp.cost.push_back(std::move(costs));
        ilp.witness.push_back(std::move(wit));
    }

    const std::size_t l = ilp.modules.size();
    ilp.objective.assign(ilp.variable_count(), 0);
    IlpRow budget{"budget", {}, IlpRow::Sense::LessEq, k};
    for (std::size_t i = 0; i < l; ++i)
        for (int t = 1; t <= d; ++t) {
            const auto c = ilp.cost[i][static_cast<std::size_t>(t)];
            budget.terms.emplace_back(ilp.variable(i, t), c);
            ilp.objective[static_cast<std::size_t>(ilp.variable(i, t))] = c;
        }
    ilp.rows.push_back(std::move(budget));
    for (std::size_t i = 0; i < l; ++i) {
        IlpRow row{"demand_" + std::to_string(i + 1), {}, IlpRow::Sense::GreaterEq, d};
        for (Vertex j : ilp.h.neighbors(static_cast<Vertex>(i)))
            for (int t = 1; t <= d; ++t)
                row.terms.emplace_back(ilp.variable(static_cast<std::size_t>(j), t), ilp.cost[static_cast<std::size_t>(j)][static_cast<std::size_t>(t)]);
        for (int t = 1; t <= d; ++t) row.terms.emplace_back(ilp.variable(i, t), t);
        ilp.rows.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < l; ++i) {
        IlpRow row{"choose_" + std::to_string(i + 1), {}, IlpRow::Sense::LessEq, 1};
        for (int t = 1; t <= d; ++t) row.terms.emplace_back(ilp.variable(i, t), 1);
        ilp.rows.push_back(std::move(row));
    }
    return ilp;
}

/// Per-module choice: 0 = module unused, t >= 1 = x[i][t] = 1.
using IlpChoice = std::vector<int>;

inline std::vector<int> to_binary(const IlpInstance& ilp, const IlpChoice& tau) {
    std::vector<int> x(ilp.variable_count(), 0);
    for (std::size_t i = 0; i < tau.size(); ++i)
        if (tau[i] > 0) x[static_cast<std::size_t>(ilp.variable(i, tau[i]))] = 1;
    return x;
}

/// Evaluates every stored row against the binary vector of `tau`.
inline bool ilp_feasible(const IlpInstance& ilp, const IlpChoice& tau) {
    const auto x = to_binary(ilp, tau);
    for (const auto& row : ilp.rows) {
        std::int64_t lhs = 0;
        for (auto [var, coef] : row.terms) lhs += coef * x[static_cast<std::size_t>(var)];
        if (row.sense == IlpRow::Sense::LessEq ? lhs > row.rhs : lhs < row.rhs) return false;
    }
    return true;
}

inline std::int64_t ilp_objective(const IlpInstance& ilp, const IlpChoice& tau) {
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < tau.size(); ++i)
        if (tau[i] > 0) sum += ilp.cost[i][static_cast<std::size_t>(tau[i])];
    return sum;
}

struct IlpOptions {
    double cap = 1e15;  // on (d+1)^modules
    Deadline deadline = Deadline::never();
};

struct IlpSolution {
    IlpChoice tau;
    std::int64_t objective = 0;
};

namespace detail {

/// Depth-first enumeration of choices in lexicographic order (none < 1 < ... < d).
/// `visit` returns false to stop; `bound` may prune on partial cost.
class IlpSearch {
   public:
    IlpSearch(const IlpInstance& ilp, const IlpOptions& opt) : ilp_(ilp), opt_(opt) {
        const std::size_t l = ilp.module_count();
        if (std::pow(static_cast<double>(ilp.d + 1), static_cast<double>(l)) > opt.cap)
            throw CapExceeded("ILP enumeration space (d+1)^" + std::to_string(l) + " exceeds cap");
        checks_at_.resize(l);
        for (std::size_t i = 0; i < l; ++i) {
            std::size_t last = i;
            for (Vertex j : ilp.h.neighbors(static_cast<Vertex>(i))) last = std::max(last, static_cast<std::size_t>(j));
            checks_at_[last].push_back(i);
        }
        tau_.assign(l, 0);
    }

    void run(const std::function<bool(std::int64_t)>& prune, const std::function<bool(const IlpChoice&, std::int64_t)>& visit) {
        prune_ = &prune;
        visit_ = &visit;
        stop_ = false;
        dfs(0, 0);
    }

   private:
    void dfs(std::size_t i, std::int64_t cost) {
        if (stop_ || (*prune_)(cost) || cost > ilp_.budget) return;
        opt_.deadline.poll(ticks_);
        if (i == tau_.size()) {
            if (!(*visit_)(tau_, cost)) stop_ = true;
            return;
        }
        for (int t = 0; t <= ilp_.d && !stop_; ++t) {
            tau_[i] = t;
            bool ok = true;
            for (std::size_t c : checks_at_[i]) {
                std::int64_t got = tau_[c];
                for (Vertex j : ilp_.h.neighbors(static_cast<Vertex>(c)))
                    got += ilp_.cost[static_cast<std::size_t>(j)][static_cast<std::size_t>(tau_[static_cast<std::size_t>(j)])];
                if (got < ilp_.d) {
                    ok = false;
                    break;
                }
            }
            if (ok) dfs(i + 1, cost + ilp_.cost[i][static_cast<std::size_t>(t)]);
        }
        tau_[i] = 0;
    }

    const IlpInstance& ilp_;
    const IlpOptions& opt_;
    std::vector<std::vector<std::size_t>> checks_at_;
    IlpChoice tau_;
    const std::function<bool(std::int64_t)>* prune_ = nullptr;
    const std::function<bool(const IlpChoice&, std::int64_t)>* visit_ = nullptr;
    bool stop_ = false;
    std::size_t ticks_ = 0;
};

}  // namespace detail

/// Minimum-objective feasible assignment (lexicographically first among ties), or nullopt.
inline std::optional<IlpSolution> solve_ilp_enumeration(const IlpInstance& ilp, const IlpOptions& opt = {}) {
    detail::IlpSearch search(ilp, opt);
    std::optional<IlpSolution> best;
    search.run([&](std::int64_t cost) { return best && cost >= best->objective; },
               [&](const IlpChoice& tau, std::int64_t cost) {
                   best = IlpSolution{tau, cost};
                   return true;
               });
    if (best && !ilp_feasible(ilp, best->tau)) throw InvariantError("enumeration returned an infeasible assignment");
    return best;
}

/// Calls `visit` on feasible assignments in lexicographic order until it returns false.
inline void for_each_feasible(const IlpInstance& ilp, const std::function<bool(const IlpChoice&)>& visit,
                              const IlpOptions& opt = {}) {
    detail::IlpSearch search(ilp, opt);
    search.run([](std::int64_t) { return false; }, [&](const IlpChoice& tau, std::int64_t) { return visit(tau); });
}

/// Union of the chosen per-module witnesses.
inline VertexSet expand_assignment(const IlpInstance& ilp, const IlpChoice& tau) {
    VertexSet out;
    for (std::size_t i = 0; i < tau.size(); ++i)
        if (tau[i] > 0) {
            const auto& w = ilp.witness[i][static_cast<std::size_t>(tau[i])];
            out.insert(out.end(), w.begin(), w.end());
        }
    std::sort(out.begin(), out.end());
    return out;
}

/// CPLEX LP text: objective, the three row families, binaries.
inline std::string to_lp(const IlpInstance& ilp) {
    std::ostringstream out;
    auto write_terms = [&](const std::vector<std::pair<int, std::int64_t>>& terms) {
        if (terms.empty()) {
            out << " 0 " << ilp.variable_name(0);
            return;
        }
        bool first = true;
        for (auto [var, coef] : terms) {
            out << (first ? " " : " + ") << coef << ' ' << ilp.variable_name(var);
            first = false;
        }
    };
    out << "\\ (" << ilp.d << ",1)-domination, " << ilp.module_count() << " modules\n";
    out << "Minimize\n obj:";
    std::vector<std::pair<int, std::int64_t>> obj;
    for (std::size_t v = 0; v < ilp.objective.size(); ++v) obj.emplace_back(static_cast<int>(v), ilp.objective[v]);
    write_terms(obj);
    out << "\nSubject To\n";
    for (const auto& row : ilp.rows) {
        out << ' ' << row.name << ':';
        write_terms(row.terms);
        out << (row.sense == IlpRow::Sense::LessEq ? " <= " : " >= ") << row.rhs << '\n';
    }
    out << "Binaries\n";
    for (std::size_t v = 0; v < ilp.variable_count(); ++v) out << ' ' << ilp.variable_name(static_cast<int>(v)) << '\n';
    out << "End\n";
    return out.str();
}

}  // namespace drdom
