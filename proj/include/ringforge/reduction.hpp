#pragma once

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/one_bit_color_map.hpp>
#include <boost/graph/stoer_wagner_min_cut.hpp>
#include <boost/property_map/property_map.hpp>

#include "core_model.hpp"

namespace ringforge {

struct CactusInstance {
    int nv = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<Link> links;  // endpoints are cactus vertices
};

struct UnfoldMap {
    std::vector<int> copy_of;        // ring vertex -> cactus vertex
    std::vector<int> first_copy;     // cactus vertex -> its first ring vertex
    std::vector<int> added;          // ids of zero-cost links in the ring
    std::vector<int> original_link;  // ring link id -> cactus link id, -1 for added links
};

// Throws unless the graph is connected and every edge lies on exactly one cycle.
inline void validate_cactus(const CactusInstance& c) {
    if (c.nv < 2) throw std::invalid_argument("cactus needs at least 2 vertices");
    if (c.edges.size() < 3) throw std::invalid_argument("cactus needs at least 3 edges");
    std::vector<std::vector<std::pair<int, int>>> adj(c.nv);  // (neighbour, edge id)
    for (std::size_t e = 0; e < c.edges.size(); ++e) {
        auto [u, v] = c.edges[e];
        if (u < 0 || v < 0 || u >= c.nv || v >= c.nv) throw std::invalid_argument("edge endpoint out of range");
        if (u == v) throw std::invalid_argument("self-loop edge");
        adj[u].push_back({v, static_cast<int>(e)});
        adj[v].push_back({u, static_cast<int>(e)});
    }
    // Biconnected blocks via DFS on edge ids, so parallel edges form 2-cycles.
    std::vector<int> tin(c.nv, -1), low(c.nv, 0), edge_stack;
    std::vector<std::vector<int>> blocks;
    int timer = 0;
    auto dfs = [&](auto&& self, int v, int parent_edge) -> void {
        tin[v] = low[v] = timer++;
        for (auto [w, e] : adj[v]) {
            if (e == parent_edge) continue;
            if (tin[w] == -1) {
                edge_stack.push_back(e);
                self(self, w, e);
                low[v] = std::min(low[v], low[w]);
                if (low[w] >= tin[v]) {
                    std::vector<int> block;
                    int top;
                    do {
                        top = edge_stack.back();
                        edge_stack.pop_back();
                        block.push_back(top);
                    } while (top != e);
                    blocks.push_back(std::move(block));
                }
            } else if (tin[w] < tin[v]) {
                edge_stack.push_back(e);
                low[v] = std::min(low[v], tin[w]);
            }
        }
    };
    dfs(dfs, 0, -1);
    for (int v = 0; v < c.nv; ++v)
        if (tin[v] == -1) throw std::invalid_argument("not a cactus: graph is disconnected");
    for (const auto& block : blocks) {
        std::map<int, int> deg;
        for (int e : block) {
            ++deg[c.edges[e].first];
            ++deg[c.edges[e].second];
        }
        bool cycle = deg.size() == block.size();
        for (auto [v, d] : deg) cycle = cycle && d == 2;
        if (!cycle) throw std::invalid_argument("not a cactus: some edge lies in zero or several cycles");
    }
    for (const Link& l : c.links) {
        if (l.u < 0 || l.v >= c.nv) throw std::invalid_argument("link endpoint out of range");
        if (l.cost < 0) throw std::invalid_argument("negative cost");
    }
}

// Format: `cactus <nv>`, then `edge <u> <v>` and `link <u> <v> <cost>` lines.
inline CactusInstance load_cactus(std::istream& in) {
    std::string line;
    int line_no = 0;
    CactusInstance c;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto tok = detail::tokens_of(line);
        if (tok.empty()) continue;
        auto where = "line " + std::to_string(line_no) + ": ";
        if (!header) {
            if (tok.size() != 2 || tok[0] != "cactus") throw ParseError(where + "expected 'cactus <nv>'");
            c.nv = static_cast<int>(detail::parse_int(tok[1], line_no));
            header = true;
            continue;
        }
        if (tok[0] == "edge" && tok.size() == 3) {
            int u = static_cast<int>(detail::parse_int(tok[1], line_no));
            int v = static_cast<int>(detail::parse_int(tok[2], line_no));
            if (u < 0 || v < 0 || u >= c.nv || v >= c.nv) throw ParseError(where + "endpoint out of range");
            c.edges.push_back({u, v});
        } else if (tok[0] == "link" && tok.size() == 4) {
            int u = static_cast<int>(detail::parse_int(tok[1], line_no));
            int v = static_cast<int>(detail::parse_int(tok[2], line_no));
            if (u < 0 || v < 0 || u >= c.nv || v >= c.nv) throw ParseError(where + "endpoint out of range");
            if (u == v) throw ParseError(where + "link endpoints must differ");
            auto raw = detail::parse_cost(tok[3], line_no);
            if (raw.den != 1) throw ParseError(where + "cactus link costs must be integers");
            c.links.push_back(make_link(u, v, static_cast<int>(c.links.size()), raw.num));
        } else {
            throw ParseError(where + "expected 'edge <u> <v>' or 'link <u> <v> <cost>'");
        }
    }
    if (!header) throw ParseError("missing 'cactus <nv>' header");
    try {
        validate_cactus(c);
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
    return c;
}

inline CactusInstance load_cactus(const std::string& text) {
    std::istringstream is(text);
    return load_cactus(is);
}

inline std::string save_cactus(const CactusInstance& c) {
    std::ostringstream os;
    os << "cactus " << c.nv << "\n";
    for (auto [u, v] : c.edges) os << "edge " << u << " " << v << "\n";
    for (const Link& l : c.links) os << "link " << l.u << " " << l.v << " " << l.cost << "\n";
    return os.str();
}

// Euler walk from vertex 0 (edges taken in input order); ring vertex i copies the i-th walk vertex.
// Original links keep their ids on first copies; zero-cost links join each later copy to the first.
inline std::pair<Instance, UnfoldMap> unfold_cactus(const CactusInstance& c) {
    validate_cactus(c);
    const int m = static_cast<int>(c.edges.size());
    std::vector<std::vector<std::pair<int, int>>> adj(c.nv);
    for (int e = 0; e < m; ++e) {
        adj[c.edges[e].first].push_back({c.edges[e].second, e});
        adj[c.edges[e].second].push_back({c.edges[e].first, e});
    }
    std::vector<std::size_t> next(c.nv, 0);
    std::vector<char> used(m, 0);
    std::vector<int> stack{0}, walk;
    while (!stack.empty()) {
        int v = stack.back();
        while (next[v] < adj[v].size() && used[adj[v][next[v]].second]) ++next[v];
        if (next[v] == adj[v].size()) {
            walk.push_back(v);
            stack.pop_back();
        } else {
            auto [w, e] = adj[v][next[v]];
            used[e] = 1;
            stack.push_back(w);
        }
    }
    std::reverse(walk.begin(), walk.end());
    walk.pop_back();  // closed walk: last vertex repeats the first
    if (static_cast<int>(walk.size()) != m) throw std::logic_error("Euler walk does not use every edge");

    UnfoldMap map;
    map.copy_of = walk;
    map.first_copy.assign(c.nv, -1);
    Instance inst;
    inst.n = m;
    for (int i = 0; i < m; ++i)
        if (map.first_copy[walk[i]] == -1) map.first_copy[walk[i]] = i;
    for (const Link& l : c.links) {
        inst.links.push_back(make_link(map.first_copy[l.u], map.first_copy[l.v], inst.num_links(), l.cost));
        map.original_link.push_back(l.id);
    }
    for (int i = 0; i < m; ++i)
        if (map.first_copy[walk[i]] != i) {
            map.added.push_back(inst.num_links());
            map.original_link.push_back(-1);
            inst.links.push_back(make_link(map.first_copy[walk[i]], i, inst.num_links(), 0));
        }
    return {inst, map};
}

// Ring solution minus added links, as cactus link ids.
inline std::vector<int> map_solution_back(const Instance& ring, const UnfoldMap& map, const std::vector<int>& s) {
    if (!is_wrap_solution(ring, s)) throw std::invalid_argument("ring solution is infeasible");
    std::vector<int> out;
    for (int id : s)
        if (map.original_link[id] >= 0) out.push_back(map.original_link[id]);
    std::sort(out.begin(), out.end());
    return out;
}

// Global minimum cut of a multigraph, parallel edges summed.
inline cost_t global_min_cut(int nv, const std::vector<std::pair<int, int>>& edges) {
    if (nv < 2) throw std::invalid_argument("min cut needs at least 2 vertices");
    std::map<std::pair<int, int>, cost_t> weight;
    for (auto [u, v] : edges)
        if (u != v) ++weight[{std::min(u, v), std::max(u, v)}];
    using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS, boost::no_property,
                                        boost::property<boost::edge_weight_t, cost_t>>;
    Graph g(nv);
    for (auto [e, w] : weight) boost::add_edge(e.first, e.second, w, g);
    // Stoer-Wagner assumes a connected graph; report 0 otherwise.
    std::vector<int> comp(nv);
    std::iota(comp.begin(), comp.end(), 0);
    auto find = [&](int x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    for (auto [e, w] : weight) comp[find(e.first)] = find(e.second);
    for (int v = 0; v < nv; ++v)
        if (find(v) != find(0)) return 0;
    return boost::stoer_wagner_min_cut(g, boost::get(boost::edge_weight, g));
}

// True if adding the links `s` raises the edge connectivity of the cactus above its current value.
inline bool is_wcap_solution(const CactusInstance& c, const std::vector<int>& s) {
    auto edges = c.edges;
    cost_t before = global_min_cut(c.nv, edges);
    for (int id : s) edges.push_back({c.links[id].u, c.links[id].v});
    return global_min_cut(c.nv, edges) > before;
}

inline cost_t total_cost(const CactusInstance& c, const std::vector<int>& ids) {
    cost_t s = 0;
    for (int id : ids) s += c.links[id].cost;
    return s;
}

}  // namespace ringforge
