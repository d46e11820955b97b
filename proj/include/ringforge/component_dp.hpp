#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "core_model.hpp"
#include "directed.hpp"
#include "dropcalc.hpp"
#include "thinness.hpp"
#include "union_find.hpp"

namespace ringforge {

using Ratio = boost::rational<cost_t>;

// Boundary summary of a partial solution on cut c.
// b: sorted link ids crossing c; part[i]: part of b[i], parts numbered by smallest member;
// phi/psi per part: lca of the realizing component and whether it is one of its endpoints.
// phi may lie outside c (for example at the root).
struct Pattern {
    Cut c;
    std::vector<int> b;
    std::vector<int> part;
    std::vector<int> phi;
    std::vector<int> psi;

    int num_parts() const { return static_cast<int>(phi.size()); }

    std::vector<int> key() const {
        std::vector<int> k;
        k.reserve(1 + b.size() * 2 + phi.size() * 2);
        k.push_back(static_cast<int>(b.size()));
        k.insert(k.end(), b.begin(), b.end());
        k.insert(k.end(), part.begin(), part.end());
        k.insert(k.end(), phi.begin(), phi.end());
        k.insert(k.end(), psi.begin(), psi.end());
        return k;
    }

    friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct DpEntry {
    cost_t value = 0;
    std::vector<int> realizer;
    Pattern pattern;
};

struct Merger {
    Pattern q;
    std::vector<int> u;   // vertices whose in-links become droppable by the merge
    cost_t shared = 0;    // cost of links counted on both sides
};

// Everything the pattern DP needs: the instance, the non-shortenable F0, its overlay c~ and the link costs.
class DpContext {
public:
    DpContext(const Instance& inst, DirectedSolution f0, std::vector<cost_t> ctilde, std::vector<cost_t> link_cost,
              int alpha)
        : inst_(&inst),
          f0_(std::move(f0)),
          arb_(inst.n, f0_),
          ctilde_(std::move(ctilde)),
          link_cost_(std::move(link_cost)),
          alpha_(alpha) {
        if (ctilde_.size() != f0_.size()) throw std::invalid_argument("overlay size differs from F0");
        if (static_cast<int>(link_cost_.size()) != inst.num_links()) throw std::invalid_argument("link cost size");
        if (alpha_ < 1) throw std::invalid_argument("alpha must be positive");
        head_gain_.assign(inst.n, 0);
        for (std::size_t i = 0; i < f0_.size(); ++i) head_gain_[f0_[i].head] += ctilde_[i];
        const int m = inst.num_links();
        inter_.assign(static_cast<std::size_t>(m) * m, 0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) inter_[i * m + j] = intersects(inst.links[i], inst.links[j]) ? 1 : 0;
    }

    DpContext(const Instance& inst, DirectedSolution f0, std::vector<cost_t> ctilde, int alpha)
        : DpContext(inst, std::move(f0), std::move(ctilde), plain_costs(inst), alpha) {}

    static std::vector<cost_t> plain_costs(const Instance& inst) {
        std::vector<cost_t> c;
        for (const Link& l : inst.links) c.push_back(l.cost);
        return c;
    }

    const Instance& inst() const { return *inst_; }
    const DirectedSolution& f0() const { return f0_; }
    const Arborescence& arb() const { return arb_; }
    const std::vector<cost_t>& ctilde() const { return ctilde_; }
    cost_t link_cost(int id) const { return link_cost_[id]; }
    cost_t head_gain(int v) const { return head_gain_[v]; }
    int alpha() const { return alpha_; }
    bool inter(int a, int b) const { return inter_[a * inst_->num_links() + b] != 0; }

private:
    const Instance* inst_;
    DirectedSolution f0_;
    Arborescence arb_;
    std::vector<cost_t> ctilde_;
    std::vector<cost_t> link_cost_;
    std::vector<cost_t> head_gain_;
    std::vector<char> inter_;
    int alpha_;
};

namespace detail {

struct RawPart {
    std::vector<int> trace;  // sorted
    int phi;
    int psi;
};

inline Pattern make_pattern(const Cut& c, std::vector<RawPart> parts) {
    std::sort(parts.begin(), parts.end(), [](const RawPart& a, const RawPart& b) { return a.trace[0] < b.trace[0]; });
    Pattern q;
    q.c = c;
    std::vector<std::pair<int, int>> tagged;
    for (std::size_t p = 0; p < parts.size(); ++p) {
        for (int id : parts[p].trace) tagged.push_back({id, static_cast<int>(p)});
        q.phi.push_back(parts[p].phi);
        q.psi.push_back(parts[p].psi);
    }
    std::sort(tagged.begin(), tagged.end());
    for (auto [id, p] : tagged) {
        q.b.push_back(id);
        q.part.push_back(p);
    }
    return q;
}

inline std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline bool better(const DpEntry& cand, const DpEntry& cur) {
    if (cand.value != cur.value) return cand.value > cur.value;
    return cand.realizer < cur.realizer;
}

}  // namespace detail

inline void require_endpoints_in(const Instance& inst, const std::vector<int>& s, const Cut& c) {
    for (int id : s)
        if (!c.contains(inst.links[id].u) && !c.contains(inst.links[id].v))
            throw std::invalid_argument("realizer link without endpoint in the cut");
}

// The pattern a link set realizes on c (every link needs an endpoint in c).
inline Pattern pattern_of(const DpContext& ctx, const std::vector<int>& s, const Cut& c) {
    const Instance& inst = ctx.inst();
    require_endpoints_in(inst, s, c);
    std::vector<detail::RawPart> parts;
    for (const auto& comp : intersection_components(inst, s)) {
        detail::RawPart p;
        for (int id : comp)
            if (covers(inst.links[id], c)) p.trace.push_back(id);
        if (p.trace.empty()) continue;
        auto vs = endpoints_of(inst, comp);
        p.phi = ctx.arb().lca(vs);
        p.psi = std::binary_search(vs.begin(), vs.end(), p.phi) ? 1 : 0;
        parts.push_back(std::move(p));
    }
    return detail::make_pattern(c, std::move(parts));
}

// c~ of Drop(S) restricted to heads in c, minus the link cost of S.
inline cost_t pattern_objective(const DpContext& ctx, const std::vector<int>& s, const Cut& c) {
    const Instance& inst = ctx.inst();
    require_endpoints_in(inst, s, c);
    cost_t val = 0;
    for (const auto& comp : intersection_components(inst, s)) {
        auto vs = endpoints_of(inst, comp);
        int top = ctx.arb().lca(vs);
        for (int v : vs)
            if (v != top && c.contains(v)) val += ctx.head_gain(v);
    }
    for (int id : s) val -= ctx.link_cost(id);
    return val;
}

inline bool realizes(const DpContext& ctx, const std::vector<int>& s, const Pattern& q) {
    for (int id : s)
        if (!q.c.contains(ctx.inst().links[id].u) && !q.c.contains(ctx.inst().links[id].v)) return false;
    return pattern_of(ctx, s, q.c) == q;
}

namespace detail {

// Links of b with an endpoint in c.
inline std::vector<int> touching(const Instance& inst, const std::vector<int>& b, const Cut& c) {
    std::vector<int> out;
    for (int id : b)
        if (c.contains(inst.links[id].u) || c.contains(inst.links[id].v)) out.push_back(id);
    return out;
}

inline std::vector<int> boundary_after_merge(const Instance& inst, const Pattern& q1, const Pattern& q2) {
    Cut c{q1.c.lo, q2.c.hi};
    std::vector<int> all = sorted_union(q1.b, q2.b), out;
    for (int id : all)
        if (covers(inst.links[id], c)) out.push_back(id);
    return out;
}

}  // namespace detail

// q1 must be the left neighbour of q2.
inline bool compatible(const DpContext& ctx, const Pattern& q1, const Pattern& q2) {
    if (q1.c.hi + 1 != q2.c.lo) return false;
    const Instance& inst = ctx.inst();
    if (detail::touching(inst, q1.b, q2.c) != detail::touching(inst, q2.b, q1.c)) return false;
    return static_cast<int>(detail::boundary_after_merge(inst, q1, q2).size()) <= ctx.alpha();
}

inline Merger merge(const DpContext& ctx, const Pattern& q1, const Pattern& q2) {
    if (!compatible(ctx, q1, q2)) throw std::invalid_argument("patterns are not compatible");
    const Instance& inst = ctx.inst();
    const Arborescence& arb = ctx.arb();
    Cut c{q1.c.lo, q2.c.hi};
    std::vector<int> all = detail::sorted_union(q1.b, q2.b);
    auto pos = [&](int id) { return static_cast<int>(std::lower_bound(all.begin(), all.end(), id) - all.begin()); };
    const int k = static_cast<int>(all.size());
    UnionFind uf(k);
    auto join_parts = [&](const Pattern& q) {
        std::vector<int> first(q.num_parts(), -1);
        for (std::size_t i = 0; i < q.b.size(); ++i) {
            int p = q.part[i];
            if (first[p] < 0) first[p] = pos(q.b[i]);
            else uf.unite(first[p], pos(q.b[i]));
        }
        return first;
    };
    auto first1 = join_parts(q1);
    auto first2 = join_parts(q2);
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (ctx.inter(all[i], all[j])) uf.unite(i, j);

    // Combined lca per class, and whether some member part attains it with psi = 1.
    std::vector<int> phibar(k, -1), psibar(k, 0);
    auto absorb = [&](const Pattern& q, const std::vector<int>& first) {
        for (int p = 0; p < q.num_parts(); ++p) {
            int r = uf.find(first[p]);
            phibar[r] = phibar[r] < 0 ? q.phi[p] : arb.lca(phibar[r], q.phi[p]);
        }
    };
    absorb(q1, first1);
    absorb(q2, first2);
    auto mark = [&](const Pattern& q, const std::vector<int>& first) {
        for (int p = 0; p < q.num_parts(); ++p) {
            int r = uf.find(first[p]);
            if (q.psi[p] == 1 && q.phi[p] == phibar[r]) psibar[r] = 1;
        }
    };
    mark(q1, first1);
    mark(q2, first2);

    Merger m;
    std::vector<detail::RawPart> parts;
    std::vector<int> slot(k, -1);
    for (int i = 0; i < k; ++i) {
        if (!covers(inst.links[all[i]], c)) continue;
        int r = uf.find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<int>(parts.size());
            parts.push_back({{}, phibar[r], psibar[r]});
        }
        parts[slot[r]].trace.push_back(all[i]);
    }
    m.q = detail::make_pattern(c, std::move(parts));

    std::vector<int> roots_phi;
    for (int i = 0; i < k; ++i)
        if (uf.find(i) == i) roots_phi.push_back(phibar[i]);
    auto collect = [&](const Pattern& q) {
        for (int p = 0; p < q.num_parts(); ++p)
            if (q.psi[p] == 1 && q.c.contains(q.phi[p]) &&
                std::find(roots_phi.begin(), roots_phi.end(), q.phi[p]) == roots_phi.end())
                m.u.push_back(q.phi[p]);
    };
    collect(q1);
    collect(q2);
    std::sort(m.u.begin(), m.u.end());
    m.u.erase(std::unique(m.u.begin(), m.u.end()), m.u.end());

    std::vector<int> shared;
    std::set_intersection(q1.b.begin(), q1.b.end(), q2.b.begin(), q2.b.end(), std::back_inserter(shared));
    for (int id : shared) m.shared += ctx.link_cost(id);
    return m;
}

inline std::vector<int> u_set(const DpContext& ctx, const Pattern& q1, const Pattern& q2) { return merge(ctx, q1, q2).u; }

inline cost_t merger_gain(const DpContext& ctx, const Merger& m) {
    cost_t g = m.shared;
    for (int u : m.u) g += ctx.head_gain(u);
    return g;
}

// Table of maximizing realizers, one map per interval [i,j] keyed by pattern.
class PatternTable {
public:
    using Level = std::map<std::vector<int>, DpEntry>;

    explicit PatternTable(int n) : n_(n), cells_(static_cast<std::size_t>(n) * n) {}

    Level& at(int i, int j) { return cells_[static_cast<std::size_t>(i) * n_ + j]; }
    const Level& at(int i, int j) const { return cells_[static_cast<std::size_t>(i) * n_ + j]; }

    void offer(int i, int j, DpEntry e) {
        auto key = e.pattern.key();
        auto& lvl = at(i, j);
        auto it = lvl.find(key);
        if (it == lvl.end()) lvl.emplace(std::move(key), std::move(e));
        else if (detail::better(e, it->second)) it->second = std::move(e);
    }

private:
    int n_;
    std::vector<Level> cells_;
};

inline PatternTable dp_max_realizers(const DpContext& ctx) {
    const Instance& inst = ctx.inst();
    const int n = inst.n;
    const int alpha = ctx.alpha();
    PatternTable table(n);

    for (int v = 1; v < n; ++v) {
        std::vector<int> inc;
        for (const Link& l : inst.links)
            if (l.has_endpoint(v)) inc.push_back(l.id);
        Cut c{v, v};
        std::vector<int> cur;
        auto rec = [&](auto&& self, std::size_t from) -> void {
            table.offer(v, v, DpEntry{pattern_objective(ctx, cur, c), cur, pattern_of(ctx, cur, c)});
            if (static_cast<int>(cur.size()) == alpha) return;
            for (std::size_t i = from; i < inc.size(); ++i) {
                cur.push_back(inc[i]);
                self(self, i + 1);
                cur.pop_back();
            }
        };
        rec(rec, 0);
    }

    for (int len = 2; len < n; ++len)
        for (int i = 1; i + len - 1 < n; ++i) {
            int j = i + len - 1;
            for (int m = i; m < j; ++m) {
                Cut c1{i, m}, c2{m + 1, j};
                std::map<std::vector<int>, std::vector<const DpEntry*>> by_exchange;
                for (const auto& [key, e] : table.at(m + 1, j))
                    by_exchange[detail::touching(inst, e.pattern.b, c1)].push_back(&e);
                for (const auto& [key1, e1] : table.at(i, m)) {
                    auto it = by_exchange.find(detail::touching(inst, e1.pattern.b, c2));
                    if (it == by_exchange.end()) continue;
                    for (const DpEntry* e2 : it->second) {
                        if (static_cast<int>(detail::boundary_after_merge(inst, e1.pattern, e2->pattern).size()) > alpha)
                            continue;
                        Merger mg = merge(ctx, e1.pattern, e2->pattern);
                        DpEntry out;
                        out.value = e1.value + e2->value + merger_gain(ctx, mg);
                        out.realizer = detail::sorted_union(e1.realizer, e2->realizer);
                        out.pattern = std::move(mg.q);
                        table.offer(i, j, std::move(out));
                    }
                }
            }
        }
    return table;
}

struct ComponentResult {
    std::vector<int> k;
    cost_t value = 0;
};

// Maximizes c~(Drop(K)) - cost(K) over alpha-thin K, with costs as carried by the context.
inline ComponentResult find_best_drop_component(const DpContext& ctx) {
    auto table = dp_max_realizers(ctx);
    const DpEntry* best = nullptr;
    for (const auto& [key, e] : table.at(1, ctx.inst().n - 1))
        if (!best || detail::better(e, *best)) best = &e;
    return {best->realizer, best->value};
}

inline ComponentResult find_best_drop_component(const Instance& inst, const DirectedSolution& f0,
                                                const std::vector<cost_t>& ctilde, int alpha) {
    return find_best_drop_component(DpContext(inst, f0, ctilde, alpha));
}

// Ratio c(K) / c(Drop(K) and F) with 0/0 = 1; nullopt stands for x/0 with x > 0.
inline std::optional<Ratio> component_ratio(cost_t cost, cost_t gain) {
    if (gain == 0) return cost == 0 ? std::optional<Ratio>(Ratio(1)) : std::nullopt;
    return Ratio(cost, gain);
}

struct RatioResult {
    std::vector<int> k;
    Ratio ratio{1};
    int dp_calls = 0;
};

// Min-ratio alpha-thin component by binary search over slack maximization; `sub` indexes into f0.
inline RatioResult find_min_ratio_component(const Instance& inst, const DirectedSolution& f0,
                                            const std::vector<int>& sub, int alpha) {
    RatioResult res;
    if (sub.empty()) return res;
    cost_t cf = 0;
    for (int i : sub) cf += f0[i].cost;
    cost_t cl = 0;
    for (const Link& l : inst.links) cl += l.cost;
    // The search runs until 2^k > cf^2, so scaled costs reach about 2 cf^2 max(cf, cl).
    if (cf > (cost_t{1} << 19) || (cf > 0 && 2 * cf * cf > (cost_t{1} << 61) / std::max<cost_t>({cf, cl, 1})))
        throw std::overflow_error("costs too large for exact ratio search");

    std::vector<char> in_sub(f0.size(), 0);
    for (int i : sub) in_sub[i] = 1;
    cost_t lo = 0, hi = 1, den = 1;
    std::optional<std::vector<int>> found;
    while (den <= cf * cf) {
        lo *= 2;
        hi *= 2;
        den *= 2;
        cost_t mid = (lo + hi) / 2;
        std::vector<cost_t> ct(f0.size(), 0);
        for (std::size_t i = 0; i < f0.size(); ++i)
            if (in_sub[i]) ct[i] = mid * f0[i].cost;
        std::vector<cost_t> lc;
        for (const Link& l : inst.links) lc.push_back(den * l.cost);
        auto best = find_best_drop_component(DpContext(inst, f0, ct, lc, alpha));
        ++res.dp_calls;
        if (best.value > 0) {
            hi = mid;
            found = best.k;
        } else {
            lo = mid;
        }
    }
    res.k = found ? *found : std::vector<int>{f0[sub.front()].origin};
    auto drop = drop_components(inst, f0, res.k);
    cost_t gain = 0;
    for (int i : drop)
        if (in_sub[i]) gain += f0[i].cost;
    auto r = component_ratio(total_cost(inst, res.k), gain);
    if (!r) throw std::logic_error("ratio search returned a component without gain");
    res.ratio = *r;
    return res;
}

}  // namespace ringforge
