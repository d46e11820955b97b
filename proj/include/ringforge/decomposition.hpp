#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "component_dp.hpp"
#include "core_model.hpp"
#include "directed.hpp"
#include "dropcalc.hpp"
#include "thinness.hpp"
#include "union_find.hpp"

namespace ringforge {

// Links in festoon order: left and right endpoints both strictly increase,
// consecutive links intersect and no other pair does. I_X = [lo, hi].
struct Festoon {
    std::vector<int> order;
    int lo = 0;
    int hi = 0;

    int length() const { return hi - lo + 1; }
    bool contains(int x) const { return lo <= x && x <= hi; }
    bool within(const Festoon& o) const { return o.lo <= lo && hi <= o.hi; }
    std::vector<int> sorted_ids() const {
        auto s = order;
        std::sort(s.begin(), s.end());
        return s;
    }
};

inline bool is_festoon(const Instance& inst, const std::vector<int>& order) {
    if (order.empty()) return false;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j) {
            const Link& a = inst.links[order[i]];
            const Link& b = inst.links[order[j]];
            if (!(a.left() < b.left() && a.right() < b.right())) return false;
            if (intersects(a, b) != (j == i + 1)) return false;
        }
    return true;
}

inline Festoon festoon_of(const Instance& inst, std::vector<int> order) {
    Festoon x;
    x.lo = inst.links[order.front()].left();
    x.hi = inst.links[order.back()].right();
    x.order = std::move(order);
    return x;
}

// A festoon inside `pool` with the largest interval; ties go to the smallest sorted id sequence.
inline Festoon max_festoon(const Instance& inst, const std::vector<int>& pool) {
    if (pool.empty()) throw std::invalid_argument("max_festoon needs a nonempty link set");
    const int k = static_cast<int>(pool.size());
    std::vector<std::vector<int>> out(k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            const Link& x = inst.links[pool[a]];
            const Link& y = inst.links[pool[b]];
            if (a != b && intersects(x, y) && x.left() < y.left() && x.right() < y.right()) out[a].push_back(b);
        }
    std::optional<Festoon> best;
    auto consider = [&](std::vector<int> order) {
        Festoon f = festoon_of(inst, std::move(order));
        if (!best || f.length() > best->length() ||
            (f.length() == best->length() && f.sorted_ids() < best->sorted_ids()))
            best = std::move(f);
    };
    for (int s = 0; s < k; ++s) {
        std::vector<int> dist(k, -1);
        std::queue<int> bfs;
        dist[s] = 0;
        bfs.push(s);
        while (!bfs.empty()) {
            int a = bfs.front();
            bfs.pop();
            for (int b : out[a])
                if (dist[b] < 0) { dist[b] = dist[a] + 1; bfs.push(b); }
        }
        for (int t = 0; t < k; ++t) {
            if (dist[t] < 0) continue;
            // All shortest s-t paths, walked backwards along layers.
            std::vector<int> path{t};
            auto rec = [&](auto&& self, int cur) -> void {
                if (cur == s) {
                    std::vector<int> order;
                    for (auto it = path.rbegin(); it != path.rend(); ++it) order.push_back(pool[*it]);
                    consider(std::move(order));
                    return;
                }
                for (int p = 0; p < k; ++p)
                    if (dist[p] == dist[cur] - 1 && std::find(out[p].begin(), out[p].end(), cur) != out[p].end()) {
                        path.push_back(p);
                        self(self, p);
                        path.pop_back();
                    }
            };
            rec(rec, t);
        }
    }
    return *best;
}

inline std::vector<Festoon> partition_into_festoons(const Instance& inst, const std::vector<int>& s) {
    std::vector<int> rest = s;
    std::sort(rest.begin(), rest.end());
    std::vector<Festoon> out;
    while (!rest.empty()) {
        Festoon x = max_festoon(inst, rest);
        auto ids = x.sorted_ids();
        std::vector<int> next;
        std::set_difference(rest.begin(), rest.end(), ids.begin(), ids.end(), std::back_inserter(next));
        rest = std::move(next);
        out.push_back(std::move(x));
    }
    return out;
}

inline bool intervals_laminar(const std::vector<Festoon>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = i + 1; j < xs.size(); ++j) {
            const auto& a = xs[i];
            const auto& b = xs[j];
            bool disjoint = a.hi < b.lo || b.hi < a.lo;
            if (!disjoint && !a.within(b) && !b.within(a)) return false;
        }
    return true;
}

inline bool tangled(const Instance& inst, const Festoon& x, const Festoon& y) {
    for (int a : x.order)
        for (int b : y.order)
            if (intersects(inst.links[a], inst.links[b])) return true;
    return false;
}

// For I_X within I_Y: tangled iff some link of Y has an endpoint in I_X.
inline bool tangled_by_interval(const Instance& inst, const Festoon& x, const Festoon& y) {
    if (!x.within(y)) throw std::invalid_argument("first festoon interval must lie within the second");
    for (int b : y.order)
        if (x.contains(inst.links[b].u) || x.contains(inst.links[b].v)) return true;
    return false;
}

struct ChainArc {
    int from = 0;   // festoon index, the larger interval
    int to = 0;
    int owner = 0;  // vertex v whose chain contains the arc
    int label = 0;
};

namespace detail {

inline std::vector<int> union_links(const std::vector<Festoon>& xs, const std::vector<int>& idx) {
    std::vector<int> out;
    for (int i : idx) out.insert(out.end(), xs[i].order.begin(), xs[i].order.end());
    std::sort(out.begin(), out.end());
    return out;
}

inline bool connects_to_good(const Instance& inst, const Arborescence& arb, const std::vector<int>& links, int v) {
    for (const auto& comp : intersection_components(inst, links)) {
        auto vs = endpoints_of(inst, comp);
        if (!std::binary_search(vs.begin(), vs.end(), v)) continue;
        for (int w : vs)
            if (!arb.is_ancestor(v, w)) return true;
    }
    return false;
}

}  // namespace detail

// Chain X_1 < ... < X_p of festoon indices: an inclusion-minimal set connecting v to a v-good vertex,
// with X_p of smallest interval, then shortest chain, then lexicographically smallest.
inline std::vector<int> minimal_connecting_set(const Instance& inst, const std::vector<Festoon>& xs,
                                               const Arborescence& arb, int v) {
    const int k = static_cast<int>(xs.size());
    if (k > 20) throw std::length_error("too many festoons for exhaustive chain search");
    std::optional<std::vector<int>> best;
    auto rank = [&](const std::vector<int>& chain) {
        return std::make_tuple(xs[chain.back()].length(), chain.size(), chain);
    };
    for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < k; ++i)
            if ((mask >> i) & 1) idx.push_back(i);
        if (!detail::connects_to_good(inst, arb, detail::union_links(xs, idx), v)) continue;
        bool minimal = true;
        for (std::size_t drop = 0; drop < idx.size() && minimal; ++drop) {
            std::vector<int> sub;
            for (std::size_t i = 0; i < idx.size(); ++i)
                if (i != drop) sub.push_back(idx[i]);
            if (!sub.empty() && detail::connects_to_good(inst, arb, detail::union_links(xs, sub), v)) minimal = false;
        }
        if (!minimal) continue;
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return xs[a].length() != xs[b].length() ? xs[a].length() < xs[b].length() : a < b;
        });
        for (std::size_t i = 0; i + 1 < idx.size(); ++i)
            if (!xs[idx[i]].within(xs[idx[i + 1]]) || xs[idx[i]].length() == xs[idx[i + 1]].length())
                throw std::logic_error("minimal connecting festoons do not form a strict chain at vertex " +
                                       std::to_string(v));
        if (!best || rank(idx) < rank(*best)) best = idx;
    }
    if (!best) throw std::invalid_argument("festoons do not connect vertex " + std::to_string(v) + " to a good vertex");
    const auto& chain = *best;
    const int p = static_cast<int>(chain.size());
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (tangled(inst, xs[chain[i]], xs[chain[j]]) != (j == i + 1))
                throw std::logic_error("chain tangledness is not consecutive at vertex " + std::to_string(v));
    for (int i = 0; i < p; ++i) {
        bool at_v = false, at_good = false;
        for (int id : xs[chain[i]].order) {
            const Link& l = inst.links[id];
            at_v = at_v || l.has_endpoint(v);
            at_good = at_good || !arb.is_ancestor(v, l.u) || !arb.is_ancestor(v, l.v);
        }
        if (at_v != (i == 0)) throw std::logic_error("only the first festoon may touch v");
        if (at_good != (i == p - 1)) throw std::logic_error("only the last festoon may touch a good vertex");
    }
    return chain;
}

// Arcs (X_i, X_{i-1}) of each chain, tagged with its vertex.
inline std::vector<ChainArc> chain_arcs(const std::vector<int>& chain, int owner) {
    std::vector<ChainArc> out;
    for (std::size_t i = 1; i < chain.size(); ++i) out.push_back({chain[i], chain[i - 1], owner, 0});
    return out;
}

struct DependencyGraph {
    int nodes = 0;
    std::vector<ChainArc> arcs;
    std::vector<int> in_arc;  // per festoon, index of its incoming arc or -1
};

inline DependencyGraph build_dependency_graph(int nodes, const std::vector<ChainArc>& arcs) {
    DependencyGraph g;
    g.nodes = nodes;
    g.arcs = arcs;
    g.in_arc.assign(nodes, -1);
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        if (g.in_arc[arcs[i].to] != -1) throw std::logic_error("dependency graph is not a branching");
        g.in_arc[arcs[i].to] = static_cast<int>(i);
    }
    return g;
}

inline bool is_ancestor_in(const DependencyGraph& g, int a, int x) {
    for (int cur = x;;) {
        if (cur == a) return true;
        int e = g.in_arc[cur];
        if (e < 0) return false;
        cur = g.arcs[e].from;
    }
}

struct DecompositionResult {
    std::vector<Festoon> festoons;
    std::map<int, std::vector<int>> chains;  // vertex -> festoon chain
    DependencyGraph graph;                   // full graph with labels
    int q = 1;
    std::vector<cost_t> class_cost;
    int chosen_class = 0;
    std::vector<int> removed;                // indices into F0 (the set R)
    std::vector<int> kept_vertices;          // U
    std::vector<std::vector<int>> components;
    int thinness_bound = 4;
};

// Partition of S into 4q-thin components, q = ceil(1/eps), plus a cheap set R of F0 such that every
// other arc of F0 is dropped by one component. All guarantees are checked before returning.
inline DecompositionResult decompose(const Instance& inst, const std::vector<int>& s, const DirectedSolution& f0,
                                     Ratio eps) {
    if (eps <= 0) throw std::invalid_argument("eps must be positive");
    if (!is_wrap_solution(inst, s)) throw std::invalid_argument("link set is not a solution");
    if (!verify_structure(inst, f0).ok()) throw std::invalid_argument("F0 violates the non-shortenable structure");
    DecompositionResult res;
    Arborescence arb(inst.n, f0);
    res.festoons = partition_into_festoons(inst, s);
    const auto& xs = res.festoons;
    const int k = static_cast<int>(xs.size());
    for (const auto& x : xs) {
        if (!is_festoon(inst, x.order)) throw std::logic_error("partition produced a non-festoon");
        for (const Cut& c : enumerate_cuts(inst))
            if (crossing_count(inst, x.order, c) > 4) throw std::logic_error("festoon crosses a cut more than 4 times");
    }
    if (!intervals_laminar(xs)) throw std::logic_error("festoon intervals are not laminar");
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            if (a != b && xs[a].within(xs[b]) &&
                tangled(inst, xs[a], xs[b]) != tangled_by_interval(inst, xs[a], xs[b]))
                throw std::logic_error("tangledness characterization failed");

    std::vector<ChainArc> arcs;
    for (int v = 1; v < inst.n; ++v) {
        res.chains[v] = minimal_connecting_set(inst, xs, arb, v);
        auto pv = chain_arcs(res.chains[v], v);
        arcs.insert(arcs.end(), pv.begin(), pv.end());
    }
    res.graph = build_dependency_graph(k, arcs);
    auto& g = res.graph;

    std::vector<int> order(g.arcs.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return xs[g.arcs[a].from].length() > xs[g.arcs[b].from].length(); });
    for (int i : order) {
        auto& a = g.arcs[i];
        int up = g.in_arc[a.from];
        if (up < 0) a.label = 1;
        else a.label = g.arcs[up].owner == a.owner ? g.arcs[up].label : g.arcs[up].label + 1;
    }

    Ratio inv = Ratio(1) / eps;
    res.q = static_cast<int>(inv.numerator() / inv.denominator() + (inv.numerator() % inv.denominator() ? 1 : 0));
    res.thinness_bound = 4 * res.q;
    std::vector<int> label_of(inst.n, 0);
    for (const auto& a : g.arcs) label_of[a.owner] = a.label;
    res.class_cost.assign(res.q, 0);
    for (const auto& d : f0)
        if (label_of[d.head] > 0) res.class_cost[label_of[d.head] % res.q] += d.cost;
    res.chosen_class = static_cast<int>(std::min_element(res.class_cost.begin(), res.class_cost.end()) -
                                        res.class_cost.begin());
    std::vector<char> in_u(inst.n, 0);
    for (std::size_t i = 0; i < f0.size(); ++i) {
        int v = f0[i].head;
        if (label_of[v] > 0 && label_of[v] % res.q == res.chosen_class) res.removed.push_back(static_cast<int>(i));
        else { in_u[v] = 1; res.kept_vertices.push_back(v); }
    }
    std::sort(res.kept_vertices.begin(), res.kept_vertices.end());

    UnionFind uf(k);
    for (const auto& a : g.arcs)
        if (in_u[a.owner]) uf.unite(a.from, a.to);
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < k; ++i) groups[uf.find(i)].push_back(i);
    for (const auto& [root, idx] : groups) res.components.push_back(detail::union_links(xs, idx));
    std::sort(res.components.begin(), res.components.end());

    // Tangled festoons in one component of the full graph are related by ancestry.
    UnionFind full(k);
    for (const auto& a : g.arcs) full.unite(a.from, a.to);
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            if (full.same(a, b) && tangled(inst, xs[a], xs[b]) && !is_ancestor_in(g, a, b) && !is_ancestor_in(g, b, a))
                throw std::logic_error("tangled festoons without ancestry relation");

    for (const auto& comp : res.components)
        if (!is_alpha_thin(inst, comp, res.thinness_bound))
            throw std::logic_error("component is not " + std::to_string(res.thinness_bound) + "-thin");
    cost_t removed_cost = 0;
    for (int i : res.removed) removed_cost += f0[i].cost;
    if (Ratio(removed_cost) > eps * Ratio(total_cost(f0))) throw std::logic_error("removed set is too expensive");
    std::vector<char> covered(f0.size(), 0);
    for (const auto& comp : res.components)
        for (int i : drop_by_definition(inst, f0, comp)) covered[i] = 1;
    for (std::size_t i = 0; i < f0.size(); ++i)
        if (!covered[i] && !std::binary_search(res.removed.begin(), res.removed.end(), static_cast<int>(i)))
            throw std::logic_error("an arc outside R is not dropped by any component");
    return res;
}

}  // namespace ringforge
