#pragma once

#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "component_dp.hpp"
#include "core_model.hpp"
#include "directed.hpp"
#include "dropcalc.hpp"
#include "thinness.hpp"

namespace ringforge {

class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleBudget {
    int max_links = 16;
    int max_n = 8;

    void check(const Instance& inst) const {
        if (inst.num_links() > max_links)
            throw BudgetError("oracle budget exceeded: " + std::to_string(inst.num_links()) + " links > " +
                              std::to_string(max_links));
        if (inst.n > max_n)
            throw BudgetError("oracle budget exceeded: n = " + std::to_string(inst.n) + " > " + std::to_string(max_n));
    }

    // RINGFORGE_BUDGET="<links>" or "<links>,<n>".
    static OracleBudget from_env() {
        OracleBudget b;
        const char* s = std::getenv("RINGFORGE_BUDGET");
        if (!s || !*s) return b;
        std::string str(s);
        auto comma = str.find(',');
        b.max_links = std::stoi(str.substr(0, comma));
        if (comma != std::string::npos) b.max_n = std::stoi(str.substr(comma + 1));
        return b;
    }
};

struct ExactResult {
    std::vector<int> links;
    cost_t cost = 0;
};

// Minimum-cost WRAP solution over all subsets, visited in Gray-code order with per-cut counters.
inline ExactResult exact_opt(const Instance& inst, const OracleBudget& budget = OracleBudget::from_env()) {
    budget.check(inst);
    const auto cuts = enumerate_cuts(inst);
    const int m = inst.num_links();
    std::vector<std::vector<int>> hit(m);
    for (int i = 0; i < m; ++i)
        for (std::size_t c = 0; c < cuts.size(); ++c)
            if (covers(inst.links[i], cuts[c])) hit[i].push_back(static_cast<int>(c));
    std::vector<int> cnt(cuts.size(), 0);
    int uncovered = static_cast<int>(cuts.size());
    cost_t cost = 0;
    std::uint64_t mask = 0;
    std::optional<std::uint64_t> best;
    cost_t best_cost = 0;
    const std::uint64_t total = std::uint64_t{1} << m;
    for (std::uint64_t step = 1; step <= total; ++step) {
        if (uncovered == 0 && (!best || cost < best_cost)) {
            best = mask;
            best_cost = cost;
        }
        if (step == total) break;
        int bit = __builtin_ctzll(step);
        bool adding = !((mask >> bit) & 1);
        mask ^= std::uint64_t{1} << bit;
        int d = adding ? 1 : -1;
        cost += d * inst.links[bit].cost;
        for (int c : hit[bit]) {
            if (adding && cnt[c]++ == 0) --uncovered;
            if (!adding && --cnt[c] == 0) ++uncovered;
        }
    }
    if (!best) throw InfeasibleError("instance is infeasible");
    ExactResult r;
    for (int i = 0; i < m; ++i)
        if ((*best >> i) & 1) r.links.push_back(i);
    r.cost = best_cost;
    return r;
}

struct ExactDirectedResult {
    DirectedSolution arcs;
    cost_t cost = 0;
};

// Minimum-cost directed solution: one cheapest-per-(tail,head) in-arc chosen for every non-root vertex.
inline ExactDirectedResult exact_directed_opt(const Instance& inst,
                                              const OracleBudget& budget = OracleBudget::from_env()) {
    budget.check(inst);
    const int n = inst.n;
    std::vector<std::vector<DirectedLink>> options(n);
    for (const auto& d : all_shadows(inst)) {
        if (d.head == 0) continue;
        auto& opts = options[d.head];
        auto it = std::find_if(opts.begin(), opts.end(), [&](const DirectedLink& o) { return o.tail == d.tail; });
        if (it == opts.end()) opts.push_back(d);
        else if (d.cost < it->cost) *it = d;
    }
    for (int v = 1; v < n; ++v)
        if (options[v].empty()) throw InfeasibleError("instance is infeasible");
    DirectedSolution cur, best;
    std::optional<cost_t> best_cost;
    auto rec = [&](auto&& self, int v, cost_t cost) -> void {
        if (best_cost && cost >= *best_cost) return;
        if (v == n) {
            if (is_directed_solution(inst, cur)) {
                best_cost = cost;
                best = cur;
            }
            return;
        }
        for (const auto& d : options[v]) {
            cur.push_back(d);
            self(self, v + 1, cost + d.cost);
            cur.pop_back();
        }
    };
    rec(rec, 1, 0);
    if (!best_cost) throw InfeasibleError("instance is infeasible");
    return {best, *best_cost};
}

// Max of c~(Drop(K)) - c(K) over all alpha-thin subsets, Drop taken from its definition.
inline ComponentResult exact_best_component(const Instance& inst, const DirectedSolution& f0,
                                            const std::vector<cost_t>& ctilde, int alpha,
                                            const OracleBudget& budget = OracleBudget::from_env()) {
    budget.check(inst);
    const int m = inst.num_links();
    ComponentResult best;
    bool have = false;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        std::vector<int> k;
        for (int i = 0; i < m; ++i)
            if ((mask >> i) & 1) k.push_back(i);
        if (!is_alpha_thin(inst, k, alpha)) continue;
        cost_t val = -total_cost(inst, k);
        for (int i : drop_by_definition(inst, f0, k)) val += ctilde[i];
        if (!have || val > best.value || (val == best.value && k < best.k)) {
            best = {k, val};
            have = true;
        }
    }
    return best;
}

// Exact minimum of c(K) / c(Drop(K) and F) over alpha-thin K; `sub` indexes into f0.
inline Ratio exact_min_ratio(const Instance& inst, const DirectedSolution& f0, const std::vector<int>& sub, int alpha,
                             const OracleBudget& budget = OracleBudget::from_env()) {
    budget.check(inst);
    std::vector<char> in_sub(f0.size(), 0);
    for (int i : sub) in_sub[i] = 1;
    const int m = inst.num_links();
    Ratio best(1);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        std::vector<int> k;
        for (int i = 0; i < m; ++i)
            if ((mask >> i) & 1) k.push_back(i);
        if (!is_alpha_thin(inst, k, alpha)) continue;
        cost_t gain = 0;
        for (int i : drop_by_definition(inst, f0, k))
            if (in_sub[i]) gain += f0[i].cost;
        auto r = component_ratio(total_cost(inst, k), gain);
        if (r && *r < best) best = *r;
    }
    return best;
}

}  // namespace ringforge
