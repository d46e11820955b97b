#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "core_model.hpp"
#include "directed.hpp"
#include "reduction.hpp"

namespace ringforge {

inline constexpr int generator_retries = 1000;

// m links with distinct random endpoints and costs in [0, max_cost], redrawn until feasible.
inline Instance gen_instance(int n, int m, cost_t max_cost, std::uint64_t seed) {
    if (n < 3) throw std::invalid_argument("ring needs at least 3 vertices");
    if (m < 1) throw std::invalid_argument("need at least one link");
    if (max_cost < 0) throw std::invalid_argument("negative cost bound");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> vertex(0, n - 1);
    std::uniform_int_distribution<cost_t> cost(0, max_cost);
    for (int attempt = 0; attempt < generator_retries; ++attempt) {
        std::vector<std::tuple<int, int, cost_t>> links;
        for (int i = 0; i < m; ++i) {
            int a = vertex(rng), b = vertex(rng);
            while (b == a) b = vertex(rng);
            links.emplace_back(a, b, cost(rng));
        }
        Instance inst = make_instance(n, links);
        if (is_feasible(inst)) return inst;
    }
    throw InfeasibleError("no feasible instance after " + std::to_string(generator_retries) + " attempts");
}

// Random subset of all shadows that still enters every cut.
inline DirectedSolution random_directed_solution(const Instance& inst, std::mt19937_64& rng) {
    DirectedSolution all;
    for (const auto& d : all_shadows(inst))
        if (d.head != 0) all.push_back(d);
    if (!is_directed_solution(inst, all)) throw InfeasibleError("instance is infeasible");
    std::shuffle(all.begin(), all.end(), rng);
    std::bernoulli_distribution keep(0.3);
    DirectedSolution out;
    std::vector<DirectedLink> rest;
    for (const auto& d : all) (keep(rng) ? out : rest).push_back(d);
    for (const auto& d : rest) {
        if (is_directed_solution(inst, out)) break;
        out.push_back(d);
    }
    return out;
}

// A cycle through vertex 0, then further cycles glued at random existing vertices.
inline CactusInstance gen_cactus(int max_edges, int num_links, cost_t max_cost, std::uint64_t seed) {
    if (max_edges < 3) throw std::invalid_argument("cactus needs at least 3 edges");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<cost_t> cost(0, max_cost);
    for (int attempt = 0; attempt < generator_retries; ++attempt) {
        CactusInstance c;
        auto add_cycle = [&](int at, int len) {
            int prev = at;
            for (int i = 1; i < len; ++i) {
                int v = c.nv++;
                c.edges.push_back({prev, v});
                prev = v;
            }
            c.edges.push_back({prev, at});
        };
        int first = std::uniform_int_distribution<int>(3, std::min(5, max_edges))(rng);
        c.nv = 1;
        add_cycle(0, first);
        while (static_cast<int>(c.edges.size()) + 2 <= max_edges) {
            int room = max_edges - static_cast<int>(c.edges.size());
            int len = std::uniform_int_distribution<int>(2, std::min(4, room))(rng);
            int at = std::uniform_int_distribution<int>(0, c.nv - 1)(rng);
            add_cycle(at, len);
            if (std::bernoulli_distribution(0.3)(rng)) break;
        }
        std::uniform_int_distribution<int> vertex(0, c.nv - 1);
        for (int i = 0; i < num_links; ++i) {
            int a = vertex(rng), b = vertex(rng);
            while (b == a) b = vertex(rng);
            c.links.push_back(make_link(a, b, i, cost(rng)));
        }
        std::vector<int> all(c.links.size());
        std::iota(all.begin(), all.end(), 0);
        if (is_wcap_solution(c, all)) return c;
    }
    throw InfeasibleError("no feasible cactus after " + std::to_string(generator_retries) + " attempts");
}

}  // namespace ringforge
