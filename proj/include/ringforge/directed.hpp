#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "core_model.hpp"

namespace ringforge {

struct DirectedLink {
    int tail = 0;
    int head = 0;
    int origin = 0;
    cost_t cost = 0;

    friend bool operator==(const DirectedLink&, const DirectedLink&) = default;
    friend auto operator<=>(const DirectedLink&, const DirectedLink&) = default;
};

using DirectedSolution = std::vector<DirectedLink>;

inline bool enters(const DirectedLink& d, const Cut& c) { return c.contains(d.head) && !c.contains(d.tail); }

// Shadows of {u,v}: (s,v) for s in [u,v-1] and (s,u) for s in [u+1,v].
inline std::vector<DirectedLink> shadows(const Link& l) {
    std::vector<DirectedLink> out;
    for (int s = l.u; s < l.v; ++s) out.push_back({s, l.v, l.id, l.cost});
    for (int s = l.u + 1; s <= l.v; ++s) out.push_back({s, l.u, l.id, l.cost});
    return out;
}

inline std::vector<DirectedLink> all_shadows(const Instance& inst) {
    std::vector<DirectedLink> out;
    for (const Link& l : inst.links) {
        auto s = shadows(l);
        out.insert(out.end(), s.begin(), s.end());
    }
    return out;
}

inline bool is_shadow(const Link& l, const DirectedLink& d) {
    if (d.origin != l.id || d.cost != l.cost) return false;
    if (d.head == l.v) return l.u <= d.tail && d.tail < l.v;
    if (d.head == l.u) return l.u < d.tail && d.tail <= l.v;
    return false;
}

// Strict shortenings of d, shortest first (tail closest to head).
inline std::vector<DirectedLink> strict_shortenings(const DirectedLink& d) {
    std::vector<DirectedLink> out;
    if (d.tail < d.head)
        for (int s = d.head - 1; s > d.tail; --s) out.push_back({s, d.head, d.origin, d.cost});
    else
        for (int s = d.head + 1; s < d.tail; ++s) out.push_back({s, d.head, d.origin, d.cost});
    return out;
}

inline cost_t total_cost(const DirectedSolution& f) {
    cost_t s = 0;
    for (const auto& d : f) s += d.cost;
    return s;
}

inline bool is_directed_solution(const Instance& inst, const DirectedSolution& f) {
    for (const Cut& c : enumerate_cuts(inst)) {
        bool hit = false;
        for (const auto& d : f)
            if (enters(d, c)) { hit = true; break; }
        if (!hit) return false;
    }
    return true;
}

namespace detail {

// Per-cut entering counts, indexed by lo*n+hi.
class EntryCounter {
public:
    EntryCounter(int n, const DirectedSolution& f) : n_(n), cnt_(static_cast<std::size_t>(n) * n, 0) {
        for (const auto& d : f) add(d, 1);
    }

    void add(const DirectedLink& d, int delta) {
        if (d.head == 0) return;
        if (d.tail < d.head) {
            for (int lo = d.tail + 1; lo <= d.head; ++lo)
                for (int hi = d.head; hi < n_; ++hi) cnt_[lo * n_ + hi] += delta;
        } else {
            for (int lo = 1; lo <= d.head; ++lo)
                for (int hi = d.head; hi < d.tail; ++hi) cnt_[lo * n_ + hi] += delta;
        }
    }

    bool all_entered() const {
        for (int lo = 1; lo < n_; ++lo)
            for (int hi = lo; hi < n_; ++hi)
                if (cnt_[lo * n_ + hi] == 0) return false;
        return true;
    }

    // True if removing d and adding r (if any) keeps every cut entered.
    bool can_replace(const DirectedLink& d, const std::optional<DirectedLink>& r) {
        add(d, -1);
        if (r) add(*r, 1);
        bool ok = all_entered();
        if (r) add(*r, -1);
        add(d, 1);
        return ok;
    }

private:
    int n_;
    std::vector<int> cnt_;
};

}  // namespace detail

// Processes links by ascending origin id: delete if possible, else take the shortest feasible shortening.
inline DirectedSolution make_non_shortenable(const Instance& inst, DirectedSolution f) {
    if (!is_directed_solution(inst, f)) throw InfeasibleError("input is not a directed solution");
    std::vector<int> order(f.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f[a].origin < f[b].origin; });
    detail::EntryCounter counter(inst.n, f);
    std::vector<bool> alive(f.size(), true);
    for (int i : order) {
        if (counter.can_replace(f[i], std::nullopt)) {
            counter.add(f[i], -1);
            alive[i] = false;
            continue;
        }
        for (const auto& s : strict_shortenings(f[i])) {
            if (counter.can_replace(f[i], s)) {
                counter.add(f[i], -1);
                counter.add(s, 1);
                f[i] = s;
                break;
            }
        }
    }
    DirectedSolution out;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (alive[i]) out.push_back(f[i]);
    return out;
}

// No link can be deleted or replaced by a strict shortening without losing feasibility.
inline bool is_non_shortenable(const Instance& inst, const DirectedSolution& f) {
    if (!is_directed_solution(inst, f)) return false;
    detail::EntryCounter counter(inst.n, f);
    for (const auto& d : f) {
        if (counter.can_replace(d, std::nullopt)) return false;
        for (const auto& s : strict_shortenings(d))
            if (counter.can_replace(d, s)) return false;
    }
    return true;
}

// Minimum-cost directed solution by interval DP over arborescences whose subtrees are intervals.
inline DirectedSolution min_cost_directed_solution(const Instance& inst) {
    const int n = inst.n;
    constexpr cost_t INF = std::numeric_limits<cost_t>::max() / 4;
    std::vector<cost_t> arc(static_cast<std::size_t>(n) * n, INF);
    std::vector<int> arc_link(static_cast<std::size_t>(n) * n, -1);
    for (const Link& l : inst.links)
        for (const auto& d : shadows(l)) {
            if (d.head == 0) continue;
            auto k = static_cast<std::size_t>(d.tail) * n + d.head;
            if (l.cost < arc[k]) { arc[k] = l.cost; arc_link[k] = l.id; }
        }

    auto idx3 = [n](int a, int b, int c) { return (static_cast<std::size_t>(a) * n + b) * n + c; };
    auto idx2 = [n](int a, int b) { return static_cast<std::size_t>(a) * n + b; };
    std::vector<cost_t> hang(static_cast<std::size_t>(n) * n * n, -1), left(idx2(n, 0), -1), right(idx2(n, 0), -1);
    std::vector<int> hang_child(hang.size(), -1), left_cut(left.size(), -1), right_cut(right.size(), -1);

    auto add = [](cost_t a, cost_t b) { return (a >= INF || b >= INF) ? INF : a + b; };

    // left(w,x): cover [x, w-1] with blocks hung under w; right(w,y): cover [w+1, y].
    std::function<cost_t(int, int)> L, R;
    std::function<cost_t(int, int, int)> H;
    auto F = [&](int w, int x, int y) { return add(L(w, x), R(w, y)); };
    H = [&](int w, int a, int b) -> cost_t {
        auto k = idx3(w, a, b);
        if (hang[k] >= 0) return hang[k];
        cost_t best = INF;
        int arg = -1;
        for (int c = a; c <= b; ++c) {
            cost_t v = add(arc[idx2(w, c)], F(c, a, b));
            if (v < best) { best = v; arg = c; }
        }
        hang_child[k] = arg;
        return hang[k] = best;
    };
    L = [&](int w, int x) -> cost_t {
        if (x >= w) return 0;
        auto k = idx2(w, x);
        if (left[k] >= 0) return left[k];
        cost_t best = INF;
        int arg = -1;
        for (int b = x; b < w; ++b) {
            cost_t v = add(H(w, x, b), L(w, b + 1));
            if (v < best) { best = v; arg = b; }
        }
        left_cut[k] = arg;
        return left[k] = best;
    };
    R = [&](int w, int y) -> cost_t {
        if (y <= w) return 0;
        auto k = idx2(w, y);
        if (right[k] >= 0) return right[k];
        cost_t best = INF;
        int arg = -1;
        for (int a = y; a > w; --a) {
            cost_t v = add(R(w, a - 1), H(w, a, y));
            if (v < best) { best = v; arg = a; }
        }
        right_cut[k] = arg;
        return right[k] = best;
    };

    if (R(0, n - 1) >= INF) throw InfeasibleError("instance is infeasible");

    DirectedSolution out;
    std::function<void(int, int, int)> emit_tree;
    auto emit_hang = [&](int w, int a, int b) {
        int c = hang_child[idx3(w, a, b)];
        auto k = idx2(w, c);
        out.push_back({w, c, arc_link[k], arc[k]});
        emit_tree(c, a, b);
    };
    emit_tree = [&](int w, int x, int y) {
        for (int cur = x; cur < w;) {
            int b = left_cut[idx2(w, cur)];
            emit_hang(w, cur, b);
            cur = b + 1;
        }
        for (int cur = y; cur > w;) {
            int a = right_cut[idx2(w, cur)];
            emit_hang(w, a, cur);
            cur = a - 1;
        }
    };
    emit_tree(0, 0, n - 1);
    std::sort(out.begin(), out.end(), [](const DirectedLink& a, const DirectedLink& b) { return a.head < b.head; });
    return out;
}

// Parent-pointer view of an r-arborescence with ancestor queries.
class Arborescence {
public:
    Arborescence(int n, const DirectedSolution& f) : n_(n), parent_(n, -1), parent_arc_(n, -1) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto& d = f[i];
            if (d.head == 0) throw std::invalid_argument("arc enters the root");
            if (parent_[d.head] != -1) throw std::invalid_argument("vertex with in-degree above one");
            parent_[d.head] = d.tail;
            parent_arc_[d.head] = static_cast<int>(i);
        }
        for (int v = 1; v < n; ++v)
            if (parent_[v] == -1) throw std::invalid_argument("vertex without incoming arc");
        children_.assign(n, {});
        for (int v = 1; v < n; ++v) children_[parent_[v]].push_back(v);
        depth_.assign(n, -1);
        tin_.assign(n, 0);
        tout_.assign(n, 0);
        lo_.assign(n, 0);
        hi_.assign(n, 0);
        int timer = 0;
        std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
        depth_[0] = 0;
        tin_[0] = timer++;
        lo_[0] = hi_[0] = 0;
        int visited = 1;
        while (!stack.empty()) {
            auto& [v, next] = stack.back();
            if (next < children_[v].size()) {
                int c = children_[v][next++];
                depth_[c] = depth_[v] + 1;
                tin_[c] = timer++;
                lo_[c] = hi_[c] = c;
                ++visited;
                stack.push_back({c, 0});
            } else {
                tout_[v] = timer++;
                int done = v;
                stack.pop_back();
                if (!stack.empty()) {
                    int p = stack.back().first;
                    lo_[p] = std::min(lo_[p], lo_[done]);
                    hi_[p] = std::max(hi_[p], hi_[done]);
                }
            }
        }
        if (visited != n) throw std::invalid_argument("arcs contain a cycle");
        int levels = 1;
        while ((1 << levels) < n) ++levels;
        up_.assign(levels, std::vector<int>(n, 0));
        for (int v = 0; v < n; ++v) up_[0][v] = v == 0 ? 0 : parent_[v];
        for (int k = 1; k < levels; ++k)
            for (int v = 0; v < n; ++v) up_[k][v] = up_[k - 1][up_[k - 1][v]];
    }

    int n() const { return n_; }
    int parent(int v) const { return parent_[v]; }
    int parent_arc(int v) const { return parent_arc_[v]; }
    int depth(int v) const { return depth_[v]; }
    const std::vector<int>& children(int v) const { return children_[v]; }

    bool is_ancestor(int a, int v) const { return tin_[a] <= tin_[v] && tout_[v] <= tout_[a]; }

    // Smallest and largest descendant of v (an interval for non-shortenable solutions).
    int desc_lo(int v) const { return lo_[v]; }
    int desc_hi(int v) const { return hi_[v]; }

    int lca(int a, int b) const {
        if (depth_[a] < depth_[b]) std::swap(a, b);
        int diff = depth_[a] - depth_[b];
        for (int k = 0; diff; ++k, diff >>= 1)
            if (diff & 1) a = up_[k][a];
        if (a == b) return a;
        for (int k = static_cast<int>(up_.size()) - 1; k >= 0; --k)
            if (up_[k][a] != up_[k][b]) { a = up_[k][a]; b = up_[k][b]; }
        return parent_[a];
    }

    int lca(const std::vector<int>& vs) const {
        if (vs.empty()) throw std::invalid_argument("lca of empty set");
        int a = vs.front();
        for (int v : vs) a = lca(a, v);
        return a;
    }

private:
    int n_;
    std::vector<int> parent_, parent_arc_, depth_, tin_, tout_, lo_, hi_;
    std::vector<std::vector<int>> children_, up_;
};

inline bool links_cross(int u1, int v1, int u2, int v2) {
    if (u1 > v1) std::swap(u1, v1);
    if (u2 > v2) std::swap(u2, v2);
    return (u1 < u2 && u2 < v1 && v1 < v2) || (u2 < u1 && u1 < v2 && v2 < v1);
}

struct StructureReport {
    bool arborescence = true;
    bool planar = true;
    bool distinct_directions = true;
    std::string message;
    int first = -1;  // indices of a violating pair, when any
    int second = -1;

    bool ok() const { return arborescence && planar && distinct_directions; }
};

inline StructureReport verify_structure(const Instance& inst, const DirectedSolution& f) {
    StructureReport rep;
    try {
        Arborescence arb(inst.n, f);
    } catch (const std::invalid_argument& e) {
        rep.arborescence = false;
        rep.message = std::string("not an r-arborescence: ") + e.what();
    }
    for (std::size_t i = 0; i < f.size() && rep.planar; ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j)
            if (links_cross(f[i].tail, f[i].head, f[j].tail, f[j].head)) {
                rep.planar = false;
                if (rep.message.empty()) {
                    rep.message = "crossing pair";
                    rep.first = static_cast<int>(i);
                    rep.second = static_cast<int>(j);
                }
                break;
            }
    for (std::size_t i = 0; i < f.size() && rep.distinct_directions; ++i)
        for (std::size_t j = i + 1; j < f.size(); ++j)
            if (f[i].tail == f[j].tail && (f[i].head < f[i].tail) == (f[j].head < f[j].tail)) {
                rep.distinct_directions = false;
                if (rep.message.empty()) {
                    rep.message = "two out-links in the same direction";
                    rep.first = static_cast<int>(i);
                    rep.second = static_cast<int>(j);
                }
                break;
            }
    return rep;
}

// Cuts the arc (u,v) of a non-shortenable solution is responsible for: v in C and C within desc(v).
inline std::vector<Cut> responsible_cuts(const Arborescence& arb, const DirectedLink& d) {
    std::vector<Cut> out;
    int v = d.head;
    int lo = std::max(1, arb.desc_lo(v));
    for (int a = lo; a <= v; ++a)
        for (int b = v; b <= arb.desc_hi(v); ++b) out.push_back({a, b});
    return out;
}

inline std::vector<std::vector<Cut>> responsibilities(const Instance& inst, const DirectedSolution& f) {
    auto rep = verify_structure(inst, f);
    if (!rep.ok()) throw std::invalid_argument("structure violation: " + rep.message);
    Arborescence arb(inst.n, f);
    std::vector<std::vector<Cut>> out;
    for (const auto& d : f) out.push_back(responsible_cuts(arb, d));
    return out;
}

}  // namespace ringforge
