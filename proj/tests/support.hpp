#pragma once

// Reference computations for tests, written from the definitions and independent of the library algorithms.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ringforge/ringforge.hpp"

namespace ringforge::testing {

// Three-vertex ring: a = {0,2} cost 10, b = {1,2} cost 1, c = {0,1} cost 1.
inline Instance r3() { return make_instance(3, {{0, 2, 10}, {1, 2, 1}, {0, 1, 1}}); }
inline constexpr int link_a = 0, link_b = 1, link_c = 2;

inline std::vector<int> mask_to_ids(std::uint64_t mask, int m) {
    std::vector<int> k;
    for (int i = 0; i < m; ++i)
        if ((mask >> i) & 1) k.push_back(i);
    return k;
}

inline bool ref_covers(const Link& l, int lo, int hi) {
    bool a = lo <= l.u && l.u <= hi, b = lo <= l.v && l.v <= hi;
    return a != b;
}

inline bool ref_intersect(const Link& a, const Link& b) {
    if (a.id == b.id) return false;
    if (a.u == b.u || a.u == b.v || a.v == b.u || a.v == b.v) return true;
    auto inside = [](int x, int lo, int hi) { return lo < x && x < hi; };
    return inside(b.u, a.u, a.v) != inside(b.v, a.u, a.v);
}

// Recursive split definition of alpha-thinness on [1, n-1].
inline bool ref_thin(const Instance& inst, const std::vector<int>& k, int alpha) {
    const int n = inst.n;
    std::map<std::pair<int, int>, bool> memo;
    auto rec = [&](auto&& self, int a, int b) -> bool {
        auto key = std::make_pair(a, b);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        int cross = 0;
        for (int id : k) cross += ref_covers(inst.links[id], a, b);
        bool ok = cross <= alpha;
        if (ok && a < b) {
            ok = false;
            for (int m = a; m < b && !ok; ++m) ok = self(self, a, m) && self(self, m + 1, b);
        }
        return memo[key] = ok;
    };
    return rec(rec, 1, n - 1);
}

// Parent arc of each vertex, -1 for the root.
inline std::vector<int> parent_arcs(const Instance& inst, const DirectedSolution& f) {
    std::vector<int> pa(inst.n, -1);
    for (std::size_t i = 0; i < f.size(); ++i) pa[f[i].head] = static_cast<int>(i);
    return pa;
}

inline bool arc_enters(const DirectedLink& d, int lo, int hi) {
    return lo <= d.head && d.head <= hi && !(lo <= d.tail && d.tail <= hi);
}

// Arc i is responsible for [lo,hi] if it enters it and no arc on the root-to-tail path does.
inline bool ref_responsible(const Instance& inst, const DirectedSolution& f, const std::vector<int>& pa, int i,
                            int lo, int hi) {
    if (!arc_enters(f[i], lo, hi)) return false;
    int guard = 0;
    for (int v = f[i].tail; v != 0; v = f[pa[v]].tail) {
        if (arc_enters(f[pa[v]], lo, hi)) return false;
        if (++guard > inst.n) throw std::logic_error("parent pointers contain a cycle");
    }
    return true;
}

inline std::vector<std::vector<std::pair<int, int>>> ref_responsibilities(const Instance& inst, const DirectedSolution& f) {
    auto pa = parent_arcs(inst, f);
    std::vector<std::vector<std::pair<int, int>>> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        for (int lo = 1; lo < inst.n; ++lo)
            for (int hi = lo; hi < inst.n; ++hi)
                if (ref_responsible(inst, f, pa, static_cast<int>(i), lo, hi)) out[i].push_back({lo, hi});
    return out;
}

inline std::vector<int> ref_drop(const Instance& inst, const DirectedSolution& f, const std::vector<int>& k) {
    auto resp = ref_responsibilities(inst, f);
    std::vector<int> out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        bool all = true;
        for (auto [lo, hi] : resp[i]) {
            bool hit = false;
            for (int id : k) hit = hit || ref_covers(inst.links[id], lo, hi);
            all = all && hit;
        }
        if (all) out.push_back(static_cast<int>(i));
    }
    return out;
}

inline cost_t objective_by_definition(const Instance& inst, const DirectedSolution& f0, const std::vector<cost_t>& ct,
                                      const std::vector<int>& k) {
    cost_t v = 0;
    for (int i : ref_drop(inst, f0, k)) v += ct[i];
    for (int id : k) v -= inst.links[id].cost;
    return v;
}

inline cost_t brute_best_value(const Instance& inst, const DirectedSolution& f0, const std::vector<cost_t>& ct,
                               int alpha) {
    const int m = inst.num_links();
    cost_t best = 0;  // the empty set is always thin
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
        auto k = mask_to_ids(mask, m);
        if (ref_thin(inst, k, alpha)) best = std::max(best, objective_by_definition(inst, f0, ct, k));
    }
    return best;
}

// Minimum of c(K) / c(Drop(K) within sub) over thin K with a positive denominator (or 0/0 read as 1).
inline Ratio brute_min_ratio(const Instance& inst, const DirectedSolution& f0, const std::vector<int>& sub, int alpha) {
    const int m = inst.num_links();
    std::set<int> in_sub(sub.begin(), sub.end());
    std::optional<Ratio> best;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
        auto k = mask_to_ids(mask, m);
        if (!ref_thin(inst, k, alpha)) continue;
        cost_t gain = 0, cost = 0;
        for (int i : ref_drop(inst, f0, k))
            if (in_sub.count(i)) gain += f0[i].cost;
        for (int id : k) cost += inst.links[id].cost;
        Ratio r;
        if (gain > 0) r = Ratio(cost, gain);
        else if (cost == 0 && !ref_drop(inst, f0, k).empty()) r = Ratio(1);
        else continue;
        if (!best || r < *best) best = r;
    }
    return best.value_or(Ratio(1));
}

// Cheapest spanning arborescence of shadow arcs: one in-arc per non-root vertex, checked by reachability.
inline cost_t brute_directed_opt(const Instance& inst) {
    const int n = inst.n;
    std::vector<std::map<int, cost_t>> best_in(n);  // head -> tail -> cheapest cost
    for (const Link& l : inst.links) {
        for (int s = l.u; s < l.v; ++s)
            if (!best_in[l.v].count(s) || l.cost < best_in[l.v][s]) best_in[l.v][s] = l.cost;
        for (int s = l.u + 1; s <= l.v; ++s)
            if (!best_in[l.u].count(s) || l.cost < best_in[l.u][s]) best_in[l.u][s] = l.cost;
    }
    std::vector<std::vector<std::pair<int, cost_t>>> opts(n);
    for (int v = 1; v < n; ++v)
        for (auto [t, c] : best_in[v]) opts[v].push_back({t, c});
    std::vector<int> parent(n, -1);
    std::optional<cost_t> best;
    auto rec = [&](auto&& self, int v, cost_t cost) -> void {
        if (v == n) {
            for (int x = 1; x < n; ++x) {
                int y = x, steps = 0;
                while (y != 0 && steps <= n) { y = parent[y]; ++steps; }
                if (y != 0) return;
            }
            if (!best || cost < *best) best = cost;
            return;
        }
        for (auto [t, c] : opts[v]) {
            parent[v] = t;
            self(self, v + 1, cost + c);
        }
    };
    rec(rec, 1, 0);
    if (!best) throw InfeasibleError("instance is infeasible");
    return *best;
}

// Minimum cut over all bipartitions.
inline int brute_min_cut(int nv, const std::vector<std::pair<int, int>>& edges) {
    int best = static_cast<int>(edges.size()) + 1;
    for (int mask = 1; mask < (1 << nv) - 1; mask += 2) {
        int cut = 0;
        for (auto [u, v] : edges) cut += ((mask >> u) & 1) != ((mask >> v) & 1);
        best = std::min(best, cut);
    }
    return best;
}

inline bool brute_wcap(const CactusInstance& c, const std::vector<int>& s) {
    auto edges = c.edges;
    int before = brute_min_cut(c.nv, edges);
    for (int id : s) edges.push_back({c.links[id].u, c.links[id].v});
    return brute_min_cut(c.nv, edges) > before;
}

inline cost_t brute_cactus_opt(const CactusInstance& c) {
    const int m = static_cast<int>(c.links.size());
    std::optional<cost_t> best;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
        auto s = mask_to_ids(mask, m);
        cost_t cost = 0;
        for (int id : s) cost += c.links[id].cost;
        if ((!best || cost < *best) && brute_wcap(c, s)) best = cost;
    }
    if (!best) throw InfeasibleError("cactus instance is infeasible");
    return *best;
}

inline cost_t ceil_inverse(Ratio eps) {
    Ratio inv = Ratio(1) / eps;
    return (inv.numerator() + inv.denominator() - 1) / inv.denominator();
}

// Empty string when the decomposition meets its guarantees.
inline std::string check_decomposition(const Instance& inst, const std::vector<int>& s, const DirectedSolution& f0,
                                       Ratio eps, const DecompositionResult& dec) {
    std::vector<int> all;
    for (const auto& k : dec.components) all.insert(all.end(), k.begin(), k.end());
    std::sort(all.begin(), all.end());
    auto sorted_s = s;
    std::sort(sorted_s.begin(), sorted_s.end());
    if (all != sorted_s) return "components do not partition the solution";
    const int bound = static_cast<int>(4 * ceil_inverse(eps));
    for (const auto& k : dec.components) {
        if (!ref_thin(inst, k, bound)) return "component is not " + std::to_string(bound) + "-thin";
        if (!is_alpha_thin(inst, k, bound)) return "library thinness check disagrees";
    }
    cost_t removed = 0, total = 0;
    for (int i : dec.removed) removed += f0[i].cost;
    for (const auto& d : f0) total += d.cost;
    if (Ratio(removed) > eps * Ratio(total)) return "removed arcs cost more than eps c(F0)";
    std::vector<char> ok(f0.size(), 0);
    for (int i : dec.removed) ok[i] = 1;
    for (const auto& k : dec.components)
        for (int i : ref_drop(inst, f0, k)) ok[i] = 1;
    for (std::size_t i = 0; i < f0.size(); ++i)
        if (!ok[i]) return "arc " + std::to_string(i) + " is neither removed nor dropped";
    return "";
}

inline std::string check_festoons(const Instance& inst, const DecompositionResult& dec) {
    const auto& xs = dec.festoons;
    for (const auto& x : xs) {
        const auto& o = x.order;
        for (std::size_t i = 0; i < o.size(); ++i)
            for (std::size_t j = i + 1; j < o.size(); ++j) {
                const Link& a = inst.links[o[i]];
                const Link& b = inst.links[o[j]];
                if (!(a.u < b.u && a.v < b.v)) return "festoon endpoints are not increasing";
                if (ref_intersect(a, b) != (j == i + 1)) return "festoon intersection pattern is wrong";
            }
        for (int lo = 1; lo < inst.n; ++lo)
            for (int hi = lo; hi < inst.n; ++hi) {
                int cross = 0;
                for (int id : o) cross += ref_covers(inst.links[id], lo, hi);
                if (cross > 4) return "festoon crosses a cut more than 4 times";
            }
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            int a0 = xs[i].lo, a1 = xs[i].hi, b0 = xs[j].lo, b1 = xs[j].hi;
            bool disjoint = a1 < b0 || b1 < a0;
            bool nested = (b0 <= a0 && a1 <= b1) || (a0 <= b0 && b1 <= a1);
            if (!disjoint && !nested) return "festoon intervals are not laminar";
        }
    std::vector<int> indeg(xs.size(), 0);
    for (const auto& a : dec.graph.arcs) {
        if (++indeg[a.to] > 1) return "dependency graph has in-degree above one";
        const auto& from = xs[a.from];
        const auto& to = xs[a.to];
        if (!(from.lo <= to.lo && to.hi <= from.hi) || from.length() == to.length())
            return "dependency arc does not shrink the interval";
    }
    return "";
}

// Splits a random set B with endpoints in [i,j] at m and checks the merge against the direct pattern of B.
inline std::string check_merge_identity(const Instance& inst, const DirectedSolution& f0, std::mt19937_64& rng) {
    if (inst.n < 4) return "skip";
    int i = std::uniform_int_distribution<int>(1, inst.n - 2)(rng);
    int j = std::uniform_int_distribution<int>(i + 1, inst.n - 1)(rng);
    int m = std::uniform_int_distribution<int>(i, j - 1)(rng);
    std::vector<cost_t> ct;
    for (std::size_t a = 0; a < f0.size(); ++a) ct.push_back(std::uniform_int_distribution<cost_t>(0, 9)(rng));
    DpContext ctx(inst, f0, ct, std::max(1, inst.num_links()));
    Cut c{i, j}, c1{i, m}, c2{m + 1, j};
    std::vector<int> b, b1, b2;
    for (const Link& l : inst.links) {
        bool in = c.contains(l.u) || c.contains(l.v);
        if (!in || !std::bernoulli_distribution(0.5)(rng)) continue;
        b.push_back(l.id);
        if (c1.contains(l.u) || c1.contains(l.v)) b1.push_back(l.id);
        if (c2.contains(l.u) || c2.contains(l.v)) b2.push_back(l.id);
    }
    Pattern q1 = pattern_of(ctx, b1, c1), q2 = pattern_of(ctx, b2, c2);
    if (!compatible(ctx, q1, q2)) return "split of one set is not compatible";
    Merger mg = merge(ctx, q1, q2);
    if (mg.q != pattern_of(ctx, b, c)) return "merged pattern differs from the pattern of the union";
    // pi on each side from the definition: gain of heads inside the interval, minus link costs.
    auto pi = [&](const std::vector<int>& s, const Cut& cut) {
        cost_t v = 0;
        Arborescence arb(inst.n, f0);
        for (const auto& comp : intersection_components(inst, s)) {
            std::set<int> vs;
            for (int id : comp) { vs.insert(inst.links[id].u); vs.insert(inst.links[id].v); }
            for (int x : vs) {
                bool good = false;
                for (int y : vs) good = good || !arb.is_ancestor(x, y);
                if (good && cut.contains(x))
                    for (std::size_t a = 0; a < f0.size(); ++a)
                        if (f0[a].head == x) v += ct[a];
            }
        }
        for (int id : s) v -= inst.links[id].cost;
        return v;
    };
    if (pi(b, c) != pi(b1, c1) + pi(b2, c2) + merger_gain(ctx, mg)) return "merge identity fails";
    return "";
}

}  // namespace ringforge::testing
