#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "core_model.hpp"

namespace ringforge {

#ifndef RINGFORGE_ALPHA_CAP
#define RINGFORGE_ALPHA_CAP 8
#endif

inline constexpr int alpha_cap = RINGFORGE_ALPHA_CAP;

using LaminarFamily = std::vector<Cut>;

// Interval DP: [i,j] is feasible if crossed by at most alpha links and splits into two feasible halves.
// Split ties go to the smallest m. Returns the witness family when the ground interval is feasible.
inline std::optional<LaminarFamily> is_alpha_C_thin(const Instance& inst, const std::vector<int>& k, int alpha,
                                                    const Cut& ground) {
    for (int id : k) {
        const Link& l = inst.links[id];
        if (!ground.contains(l.u) && !ground.contains(l.v))
            throw std::invalid_argument("link without endpoint in the ground interval");
    }
    const int lo = ground.lo, len = ground.size();
    std::vector<std::vector<int>> split(len, std::vector<int>(len, -2));  // -2 infeasible, -1 leaf
    for (int w = 1; w <= len; ++w)
        for (int a = 0; a + w - 1 < len; ++a) {
            int b = a + w - 1;
            if (crossing_count(inst, k, Cut{lo + a, lo + b}) > alpha) continue;
            if (a == b) { split[a][b] = -1; continue; }
            for (int m = a; m < b; ++m)
                if (split[a][m] != -2 && split[m + 1][b] != -2) { split[a][b] = m; break; }
        }
    if (split[0][len - 1] == -2) return std::nullopt;
    LaminarFamily fam;
    std::vector<std::pair<int, int>> stack{{0, len - 1}};
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        fam.push_back({lo + a, lo + b});
        if (a == b) continue;
        int m = split[a][b];
        stack.push_back({m + 1, b});
        stack.push_back({a, m});
    }
    return fam;
}

inline std::optional<LaminarFamily> is_alpha_thin(const Instance& inst, const std::vector<int>& k, int alpha) {
    return is_alpha_C_thin(inst, k, alpha, Cut{1, inst.n - 1});
}

// Checks the three defining conditions of a maximal laminar family over `ground`.
inline bool is_maximal_laminar(const LaminarFamily& fam, const Cut& ground) {
    auto laminar = [](const Cut& a, const Cut& b) {
        bool disjoint = a.hi < b.lo || b.hi < a.lo;
        bool a_in_b = b.lo <= a.lo && a.hi <= b.hi;
        bool b_in_a = a.lo <= b.lo && b.hi <= a.hi;
        return disjoint || a_in_b || b_in_a;
    };
    auto has = [&](const Cut& c) {
        for (const Cut& x : fam)
            if (x == c) return true;
        return false;
    };
    for (const Cut& c : fam)
        if (c.lo < ground.lo || c.hi > ground.hi) return false;
    for (std::size_t i = 0; i < fam.size(); ++i)
        for (std::size_t j = i + 1; j < fam.size(); ++j)
            if (fam[i] == fam[j] || !laminar(fam[i], fam[j])) return false;
    if (!has(ground)) return false;
    for (int v = ground.lo; v <= ground.hi; ++v)
        if (!has(Cut{v, v})) return false;
    for (const Cut& c : fam) {
        if (c.lo == c.hi) continue;
        bool split = false;
        for (int m = c.lo; m < c.hi && !split; ++m) split = has(Cut{c.lo, m}) && has(Cut{m + 1, c.hi});
        if (!split) return false;
    }
    return true;
}

}  // namespace ringforge
