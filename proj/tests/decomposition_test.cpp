#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ringforge/decomposition.hpp"
#include "ringforge/generate.hpp"
#include "ringforge/solvers.hpp"
#include "support.hpp"

using namespace ringforge;
using namespace ringforge::testing;

TEST_CASE("festoon of five links on a 14-vertex ring") {
    Instance inst = make_instance(14, {{0, 4, 1}, {2, 5, 1}, {5, 8, 1}, {7, 10, 1}, {9, 11, 1}});
    CHECK(is_festoon(inst, {0, 1, 2, 3, 4}));
    CHECK_FALSE(is_festoon(inst, {0, 2, 1, 3, 4}));
    CHECK_FALSE(is_festoon(inst, {0, 2}));
    Festoon x = max_festoon(inst, all_link_ids(inst));
    CHECK(x.order == std::vector<int>{0, 1, 2, 3, 4});
    CHECK(x.lo == 0);
    CHECK(x.hi == 11);
    for (const Cut& c : enumerate_cuts(inst)) CHECK(crossing_count(inst, x.order, c) <= 4);
    CHECK(partition_into_festoons(inst, all_link_ids(inst)).size() == 1);
}

TEST_CASE("single link and three-vertex ring festoons") {
    Instance inst = r3();
    CHECK(max_festoon(inst, {link_a}).order == std::vector<int>{link_a});
    // c = {0,1} then b = {1,2}: both endpoints increase and the links share vertex 1.
    Festoon x = max_festoon(inst, {link_b, link_c});
    CHECK(x.order == std::vector<int>{link_c, link_b});
    CHECK(x.lo == 0);
    CHECK(x.hi == 2);
    auto xs = partition_into_festoons(inst, {link_b, link_c});
    REQUIRE(xs.size() == 1);
    CHECK(partition_into_festoons(inst, {link_a}).size() == 1);
    CHECK_THROWS_AS(max_festoon(inst, {}), std::invalid_argument);
}

TEST_CASE("nested links give nested festoon intervals") {
    Instance inst = make_instance(6, {{1, 4, 1}, {2, 3, 1}});
    auto xs = partition_into_festoons(inst, {0, 1});
    REQUIRE(xs.size() == 2);
    CHECK(intervals_laminar(xs));
    CHECK((xs[0].within(xs[1]) || xs[1].within(xs[0])));
}

TEST_CASE("tangled festoons on a 17-vertex ring") {
    Instance inst = make_instance(17, {{1, 4, 1},
                                       {2, 6, 1},
                                       {6, 8, 1},
                                       {7, 11, 1},
                                       {10, 16, 1},
                                       {3, 5, 1},
                                       {5, 9, 1},
                                       {12, 14, 1},
                                       {13, 15, 1}});
    Festoon red = festoon_of(inst, {0, 1, 2, 3, 4});
    Festoon blue = festoon_of(inst, {5, 6});
    Festoon green = festoon_of(inst, {7, 8});
    CHECK(is_festoon(inst, red.order));
    CHECK(is_festoon(inst, blue.order));
    CHECK(is_festoon(inst, green.order));
    CHECK(tangled(inst, red, blue));
    CHECK_FALSE(tangled(inst, red, green));
    CHECK_FALSE(tangled(inst, blue, green));
    CHECK(tangled_by_interval(inst, blue, red));
    CHECK_FALSE(tangled_by_interval(inst, green, red));
    CHECK(intervals_laminar({red, blue, green}));
    CHECK_FALSE(tangled(inst, blue, festoon_of(inst, {7})));
}

TEST_CASE("connecting chains on the three-vertex ring") {
    Instance inst = r3();
    DirectedSolution f0{{0, 1, link_c, 1}, {1, 2, link_b, 1}};
    Arborescence arb(inst.n, f0);
    auto xs = partition_into_festoons(inst, {link_b, link_c});
    CHECK(minimal_connecting_set(inst, xs, arb, 1) == std::vector<int>{0});
    CHECK(minimal_connecting_set(inst, xs, arb, 2) == std::vector<int>{0});
    CHECK(chain_arcs({0}, 1).empty());
}

TEST_CASE("dependency graphs") {
    auto path = chain_arcs({0, 1, 2}, 5);
    REQUIRE(path.size() == 2);
    auto g = build_dependency_graph(3, path);
    CHECK(g.in_arc[0] != -1);
    CHECK(g.in_arc[1] != -1);
    CHECK(g.in_arc[2] == -1);
    CHECK(is_ancestor_in(g, 2, 0));
    CHECK_FALSE(is_ancestor_in(g, 0, 2));
    auto both = path;
    both.push_back({1, 0, 6, 0});
    both.push_back({2, 0, 6, 0});
    CHECK_THROWS_AS(build_dependency_graph(3, both), std::logic_error);
    CHECK(build_dependency_graph(2, {}).arcs.empty());
}

TEST_CASE("decomposition of the three-vertex ring") {
    Instance inst = r3();
    DirectedSolution f0{{0, 1, link_c, 1}, {1, 2, link_b, 1}};
    auto dec = decompose(inst, {link_b, link_c}, f0, Ratio(1));
    CHECK(dec.q == 1);
    CHECK(dec.removed.empty());
    CHECK(dec.graph.arcs.empty());
    REQUIRE(dec.components.size() == 1);
    CHECK(dec.components[0] == std::vector<int>{link_b, link_c});
    CHECK(check_decomposition(inst, {link_b, link_c}, f0, Ratio(1), dec).empty());
    CHECK_THROWS_AS(decompose(inst, {link_a}, f0, Ratio(1)), std::invalid_argument);
    CHECK_THROWS_AS(decompose(inst, {link_b, link_c}, f0, Ratio(0)), std::invalid_argument);
}

TEST_CASE("decomposition guarantees on random solutions") {
    std::mt19937_64 rng(73);
    for (int t = 0; t < 40; ++t) {
        int n = 6 + t % 6;
        Instance inst = gen_instance(n, n + 2 + t % 5, 9, rng());
        DirectedSolution f0 = initial_directed(inst);
        auto all = all_link_ids(inst);
        for (Ratio eps : {Ratio(1), Ratio(1, 3)}) {
            auto dec = decompose(inst, all, f0, eps);
            CHECK(dec.q == ceil_inverse(eps));
            auto why = check_festoons(inst, dec);
            CHECK_MESSAGE(why.empty(), why);
            why = check_decomposition(inst, all, f0, eps, dec);
            CHECK_MESSAGE(why.empty(), why);
        }
    }
}
