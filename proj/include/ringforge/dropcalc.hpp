#pragma once

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "core_model.hpp"
#include "directed.hpp"
#include "union_find.hpp"

namespace ringforge {

// Links intersect if they cross as chords or share an endpoint.
inline bool intersects(const Link& a, const Link& b) {
    if (a.id == b.id) return false;
    if (a.has_endpoint(b.u) || a.has_endpoint(b.v)) return true;
    return links_cross(a.u, a.v, b.u, b.v);
}

// Connected components of H[K], as lists of link ids (each sorted; components ordered by smallest id).
inline std::vector<std::vector<int>> intersection_components(const Instance& inst, const std::vector<int>& k) {
    UnionFind uf(static_cast<int>(k.size()));
    for (std::size_t i = 0; i < k.size(); ++i)
        for (std::size_t j = i + 1; j < k.size(); ++j)
            if (intersects(inst.links[k[i]], inst.links[k[j]])) uf.unite(static_cast<int>(i), static_cast<int>(j));
    std::vector<std::vector<int>> groups(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) groups[uf.find(static_cast<int>(i))].push_back(k[i]);
    std::vector<std::vector<int>> out;
    for (auto& g : groups)
        if (!g.empty()) {
            std::sort(g.begin(), g.end());
            out.push_back(std::move(g));
        }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<int> endpoints_of(const Instance& inst, const std::vector<int>& k) {
    std::vector<int> vs;
    for (int id : k) {
        vs.push_back(inst.links[id].u);
        vs.push_back(inst.links[id].v);
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

// Is there a path in H[K] from a link at u to a link at v.
inline bool connected_vertices(const Instance& inst, const std::vector<int>& k, int u, int v) {
    for (const auto& comp : intersection_components(inst, k)) {
        bool at_u = false, at_v = false;
        for (int id : comp) {
            at_u = at_u || inst.links[id].has_endpoint(u);
            at_v = at_v || inst.links[id].has_endpoint(v);
        }
        if (at_u && at_v) return true;
    }
    return false;
}

// Descendants of v, as a closed interval of vertices.
inline std::pair<int, int> v_bad_interval(const Arborescence& arb, int v) { return {arb.desc_lo(v), arb.desc_hi(v)}; }

// Indices into f of links all of whose responsible cuts are covered by K.
inline std::vector<int> drop_by_definition(const Instance& inst, const DirectedSolution& f, const std::vector<int>& k) {
    auto resp = responsibilities(inst, f);
    std::vector<int> out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        bool all = true;
        for (const Cut& c : resp[i]) {
            bool hit = false;
            for (int id : k)
                if (covers(inst.links[id], c)) { hit = true; break; }
            if (!hit) { all = false; break; }
        }
        if (all) out.push_back(static_cast<int>(i));
    }
    return out;
}

inline std::vector<int> drop_by_characterization(const Instance& inst, const DirectedSolution& f,
                                                 const std::vector<int>& k) {
    Arborescence arb(inst.n, f);
    auto comps = intersection_components(inst, k);
    std::vector<int> out;
    for (std::size_t i = 0; i < f.size(); ++i) {
        int v = f[i].head;
        bool dropped = false;
        for (const auto& comp : comps) {
            auto vs = endpoints_of(inst, comp);
            if (!std::binary_search(vs.begin(), vs.end(), v)) continue;
            for (int w : vs)
                if (!arb.is_ancestor(v, w)) { dropped = true; break; }
        }
        if (dropped) out.push_back(static_cast<int>(i));
    }
    return out;
}

// Closed form for a connected S: in-links of V(S) except the one entering lca(V(S)).
inline std::vector<int> drop_connected(const Instance& inst, const DirectedSolution& f, const Arborescence& arb,
                                       const std::vector<int>& s) {
    if (s.empty()) throw std::invalid_argument("drop_connected needs a nonempty link set");
    if (intersection_components(inst, s).size() != 1)
        throw std::invalid_argument("link set is not connected in the intersection graph");
    auto vs = endpoints_of(inst, s);
    int top = arb.lca(vs);
    std::vector<int> out;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i].head != top && std::binary_search(vs.begin(), vs.end(), f[i].head)) out.push_back(static_cast<int>(i));
    return out;
}

inline std::vector<int> drop_connected(const Instance& inst, const DirectedSolution& f, const std::vector<int>& s) {
    return drop_connected(inst, f, Arborescence(inst.n, f), s);
}

// Union of the closed form over the components of H[K]; the fast path used by the solvers.
inline std::vector<int> drop_components(const Instance& inst, const DirectedSolution& f, const Arborescence& arb,
                                        const std::vector<int>& k) {
    std::vector<int> out;
    for (const auto& comp : intersection_components(inst, k)) {
        auto part = drop_connected(inst, f, arb, comp);
        out.insert(out.end(), part.begin(), part.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::vector<int> drop_components(const Instance& inst, const DirectedSolution& f, const std::vector<int>& k) {
    return drop_components(inst, f, Arborescence(inst.n, f), k);
}

}  // namespace ringforge
