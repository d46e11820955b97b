#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "component_dp.hpp"
#include "core_model.hpp"
#include "directed.hpp"
#include "dropcalc.hpp"
#include "thinness.hpp"

namespace ringforge {

struct SolveOptions {
    bool check_invariants = false;
    int alpha_override = 0;  // 0 keeps the algorithm's default
};

struct IterationRecord {
    std::vector<int> component;
    DirectedSolution dropped;
    cost_t component_cost = 0;
    cost_t drop_cost = 0;
    Ratio ratio{1};              // relative greedy only
    cost_t potential2_before = 0;  // local search only, twice the potential
    cost_t potential2_after = 0;
    cost_t gain2 = 0;              // local search only, 2*(cbar(Drop) - 1.5 c(K))
};

struct SolveReport {
    std::string algorithm;
    std::vector<int> solution;
    cost_t cost = 0;
    Ratio eps{0};
    int alpha_nominal = 0;
    int alpha_used = 0;
    bool alpha_capped = false;
    int iterations = 0;
    cost_t initial_cost = 0;
    std::vector<IterationRecord> trace;
    std::vector<std::string> warnings;
};

// 4*ceil(k/eps), reduced to |L| (every link set is |L|-thin) and then to the build cap.
inline void choose_alpha(const Instance& inst, Ratio eps, int k, const SolveOptions& opt, SolveReport& rep) {
    if (eps <= 0) throw std::invalid_argument("eps must be positive");
    Ratio q = Ratio(k) / eps;
    cost_t ceil_q = q.numerator() / q.denominator() + (q.numerator() % q.denominator() != 0 ? 1 : 0);
    cost_t nominal = 4 * ceil_q;
    rep.alpha_nominal = static_cast<int>(std::min<cost_t>(nominal, 1 << 20));
    if (opt.alpha_override > 0) {
        rep.alpha_used = opt.alpha_override;
        if (rep.alpha_used < rep.alpha_nominal && rep.alpha_used < inst.num_links())
            rep.warnings.push_back("alpha override below the value the guarantee needs");
        return;
    }
    int effective = static_cast<int>(std::min<cost_t>(nominal, std::max(1, inst.num_links())));
    if (effective > alpha_cap) {
        rep.alpha_capped = true;
        rep.warnings.push_back("alpha " + std::to_string(effective) + " capped at " + std::to_string(alpha_cap) +
                               "; approximation guarantee not certified");
        effective = alpha_cap;
    }
    rep.alpha_used = effective;
}

// Every cut is entered by an arc of f or covered by a link of s.
inline bool is_mixed_solution(const Instance& inst, const DirectedSolution& f, const std::vector<int>& s) {
    for (const Cut& c : enumerate_cuts(inst)) {
        bool hit = false;
        for (const auto& d : f) hit = hit || enters(d, c);
        for (int id : s) hit = hit || covers(inst.links[id], c);
        if (!hit) return false;
    }
    return true;
}

inline std::vector<int> origins_of(const DirectedSolution& f) {
    std::vector<int> out;
    for (const auto& d : f) out.push_back(d.origin);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Non-shortenable F0 derived from a minimum-cost directed solution.
inline DirectedSolution initial_directed(const Instance& inst) {
    if (!is_feasible(inst)) throw InfeasibleError("instance is infeasible");
    return make_non_shortenable(inst, min_cost_directed_solution(inst));
}

inline SolveReport two_approx(const Instance& inst) {
    SolveReport rep;
    rep.algorithm = "two-approx";
    rep.solution = origins_of(initial_directed(inst));
    rep.cost = total_cost(inst, rep.solution);
    return rep;
}

inline SolveReport relative_greedy(const Instance& inst, Ratio eps, const SolveOptions& opt = {}) {
    SolveReport rep;
    rep.algorithm = "greedy";
    rep.eps = eps;
    choose_alpha(inst, eps, 2, opt, rep);
    DirectedSolution f0 = initial_directed(inst);
    rep.initial_cost = total_cost(f0);
    Arborescence arb(inst.n, f0);
    std::vector<int> remaining(f0.size());
    std::iota(remaining.begin(), remaining.end(), 0);
    std::set<int> chosen;
    while (!remaining.empty()) {
        auto rr = find_min_ratio_component(inst, f0, remaining, rep.alpha_used);
        auto drop = drop_components(inst, f0, arb, rr.k);
        IterationRecord it;
        it.component = rr.k;
        it.component_cost = total_cost(inst, rr.k);
        it.ratio = rr.ratio;
        std::vector<int> next;
        for (int i : remaining) {
            if (std::binary_search(drop.begin(), drop.end(), i)) {
                it.dropped.push_back(f0[i]);
                it.drop_cost += f0[i].cost;
            } else {
                next.push_back(i);
            }
        }
        if (next.size() == remaining.size()) throw std::logic_error("greedy step removed no directed link");
        remaining = std::move(next);
        chosen.insert(rr.k.begin(), rr.k.end());
        rep.trace.push_back(std::move(it));
        ++rep.iterations;
        if (rep.iterations > inst.n - 1) throw std::logic_error("greedy exceeded n-1 iterations");
        if (opt.check_invariants) {
            DirectedSolution rest;
            for (int i : remaining) rest.push_back(f0[i]);
            if (!is_mixed_solution(inst, rest, {chosen.begin(), chosen.end()}))
                throw std::logic_error("greedy state is not a mixed solution");
        }
    }
    rep.solution.assign(chosen.begin(), chosen.end());
    rep.cost = total_cost(inst, rep.solution);
    if (!is_wrap_solution(inst, rep.solution)) throw std::logic_error("greedy output is not a solution");
    return rep;
}

// Local search state: the directed solution whose arcs are owned by their origin links.
class MixedState {
public:
    MixedState(const Instance& inst, const std::vector<int>& f) : inst_(&inst) {
        DirectedSolution arcs;
        for (int id : f) append_bidirected(arcs, id);
        reset(make_non_shortenable(inst, std::move(arcs)));
    }

    const DirectedSolution& arcs() const { return arcs_; }
    const std::vector<int>& links() const { return links_; }
    int witness_size(int id) const { return count_[id]; }

    cost_t potential2() const {
        cost_t p = 0;
        for (int id : links_) p += (count_[id] == 2 ? 3 : 2) * inst_->links[id].cost;
        return p;
    }

    cost_t cbar2(const DirectedLink& d) const {
        return count_[d.origin] == 2 ? inst_->links[d.origin].cost : 2 * inst_->links[d.origin].cost;
    }

    // Removes dropped arcs, adds K with fresh witnesses, re-shortens and evicts links without witnesses.
    MixedState step(const std::vector<int>& dropped, const std::vector<int>& k) const {
        std::vector<char> in_k(inst_->num_links(), 0);
        for (int id : k) in_k[id] = 1;
        DirectedSolution next;
        for (std::size_t i = 0; i < arcs_.size(); ++i)
            if (!std::binary_search(dropped.begin(), dropped.end(), static_cast<int>(i)) && !in_k[arcs_[i].origin])
                next.push_back(arcs_[i]);
        for (int id : k) append_bidirected(next, id);
        MixedState s(*this);
        s.reset(make_non_shortenable(*inst_, std::move(next)));
        return s;
    }

    bool check(std::string& why) const {
        if (!is_wrap_solution(*inst_, links_)) { why = "F is not a solution"; return false; }
        if (!is_non_shortenable(*inst_, arcs_)) { why = "directed part is shortenable"; return false; }
        if (!verify_structure(*inst_, arcs_).ok()) { why = "structure violation"; return false; }
        for (const auto& d : arcs_)
            if (!is_shadow(inst_->links[d.origin], d)) { why = "witness is not a shadow of its owner"; return false; }
        for (int id : links_)
            if (count_[id] < 1 || count_[id] > 2) { why = "witness size out of range"; return false; }
        return true;
    }

private:
    void append_bidirected(DirectedSolution& arcs, int id) const {
        const Link& l = inst_->links[id];
        arcs.push_back({l.u, l.v, l.id, l.cost});
        arcs.push_back({l.v, l.u, l.id, l.cost});
    }

    void reset(DirectedSolution arcs) {
        arcs_ = std::move(arcs);
        count_.assign(inst_->num_links(), 0);
        for (const auto& d : arcs_) ++count_[d.origin];
        links_ = origins_of(arcs_);
    }

    const Instance* inst_;
    DirectedSolution arcs_;
    std::vector<int> count_;
    std::vector<int> links_;
};

inline SolveReport local_search(const Instance& inst, Ratio eps, const SolveOptions& opt = {}) {
    if (eps <= 0 || eps > Ratio(1, 2)) throw std::invalid_argument("local search needs 0 < eps <= 1/2");
    if (!is_feasible(inst)) throw InfeasibleError("instance is infeasible");
    SolveReport rep;
    rep.algorithm = "local";
    rep.eps = eps;
    choose_alpha(inst, eps, 4, opt, rep);
    MixedState state(inst, all_link_ids(inst));
    rep.initial_cost = total_cost(inst, state.links());
    std::vector<cost_t> lc;
    for (const Link& l : inst.links) lc.push_back(3 * l.cost);
    const __int128 six_n = 6 * static_cast<__int128>(inst.n);
    while (true) {
        cost_t phi = state.potential2();
        if (phi == 0) break;
        std::vector<cost_t> ct;
        for (const auto& d : state.arcs()) ct.push_back(state.cbar2(d));
        DpContext ctx(inst, state.arcs(), ct, lc, rep.alpha_used);
        auto best = find_best_drop_component(ctx);
        auto drop = drop_components(inst, state.arcs(), ctx.arb(), best.k);
        MixedState next = state.step(drop, best.k);
        cost_t phi_next = next.potential2();
        if (phi - phi_next < best.value) throw std::logic_error("potential decreased less than the step gain");
        // Accept only if the potential shrinks by the factor (1 - eps/(6n)).
        __int128 lhs = static_cast<__int128>(phi_next) * six_n * eps.denominator();
        __int128 rhs = static_cast<__int128>(phi) * (six_n * eps.denominator() - eps.numerator());
        if (lhs > rhs) break;
        IterationRecord it;
        it.component = best.k;
        it.component_cost = total_cost(inst, best.k);
        for (int i : drop) {
            it.dropped.push_back(state.arcs()[i]);
            it.drop_cost += state.arcs()[i].cost;
        }
        it.potential2_before = phi;
        it.potential2_after = phi_next;
        it.gain2 = best.value;
        rep.trace.push_back(std::move(it));
        state = std::move(next);
        ++rep.iterations;
        if (opt.check_invariants) {
            std::string why;
            if (!state.check(why)) throw std::logic_error("local search invariant broken: " + why);
        }
    }
    rep.solution = state.links();
    rep.cost = total_cost(inst, rep.solution);
    if (!is_wrap_solution(inst, rep.solution)) throw std::logic_error("local search output is not a solution");
    return rep;
}

}  // namespace ringforge
