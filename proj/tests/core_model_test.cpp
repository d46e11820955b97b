#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ringforge/core_model.hpp"
#include "support.hpp"

using namespace ringforge;
using namespace ringforge::testing;

TEST_CASE("cuts are the intervals of the path without the root") {
    auto cuts = enumerate_cuts(make_instance(3, {{0, 1, 1}}));
    CHECK(cuts == std::vector<Cut>{{1, 1}, {1, 2}, {2, 2}});
    CHECK(enumerate_cuts(make_instance(4, {{0, 1, 1}})).size() == 6);
    CHECK(enumerate_cuts(make_instance(9, {{0, 1, 1}})).size() == 36);
}

TEST_CASE("a link covers a cut when exactly one endpoint is inside") {
    Instance inst = r3();
    const Link& a = inst.links[link_a];
    const Link& b = inst.links[link_b];
    CHECK(covers(b, {1, 1}));
    CHECK_FALSE(covers(b, {1, 2}));
    CHECK_FALSE(covers(a, {1, 1}));
}

TEST_CASE("solution check") {
    Instance inst = r3();
    CHECK(is_wrap_solution(inst, {link_b, link_c}));
    CHECK_FALSE(is_wrap_solution(inst, {link_a}));
    CHECK_FALSE(is_wrap_solution(inst, {}));
    CHECK(total_cost(inst, {link_b, link_c}) == 2);
}

TEST_CASE("feasibility") {
    CHECK(is_feasible(r3()));
    CHECK_FALSE(is_feasible(make_instance(3, {{1, 2, 1}})));
    CHECK(is_feasible(make_instance(3, {{0, 1, 1}, {0, 2, 1}})));
}

TEST_CASE("links are stored with the smaller endpoint first") {
    Link l = make_link(5, 2, 7, 3);
    CHECK(l.u == 2);
    CHECK(l.v == 5);
    CHECK(l.left() == 2);
    CHECK(l.right() == 5);
    CHECK_THROWS_AS(make_link(1, 1, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(make_instance(2, {{0, 1, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(make_instance(3, {{0, 3, 1}}), std::invalid_argument);
}

TEST_CASE("crossing counts") {
    Instance inst = r3();
    CHECK(crossing_count(inst, all_link_ids(inst), {1, 1}) == 2);
    CHECK(crossing_count(inst, all_link_ids(inst), {1, 2}) == 2);
    CHECK(crossing_count(inst, {link_b}, {1, 2}) == 0);
}

TEST_CASE("instance files") {
    const std::string text = "# three vertices\nwrap 3\nlink 0 2 10\nlink 1 2 1\nlink 0 1 1\n";
    Instance inst = load_instance(text);
    CHECK(inst == r3());
    CHECK(load_instance(save_instance(inst)) == inst);

    SUBCASE("negative cost") {
        try {
            load_instance("wrap 3\nlink 0 1 -1\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("negative cost") != std::string::npos);
        }
    }
    SUBCASE("errors carry the line number") {
        try {
            load_instance("wrap 3\nlink 0 1 1\nlink 0 5 1\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
        CHECK_THROWS_AS(load_instance("link 0 1 1\n"), ParseError);
        CHECK_THROWS_AS(load_instance("wrap 2\n"), ParseError);
        CHECK_THROWS_AS(load_instance("wrap 3\nlink 1 1 1\n"), ParseError);
        CHECK_THROWS_AS(load_instance("wrap 3\nlink 0 1 x\n"), ParseError);
        CHECK_THROWS_AS(load_instance(""), ParseError);
    }
    SUBCASE("fractional costs are scaled to integers") {
        Instance f = load_instance("wrap 3\nlink 0 1 1/2\nlink 1 2 1/3\nlink 0 2 2\n");
        CHECK(f.scale == 6);
        CHECK(f.links[0].cost == 3);
        CHECK(f.links[1].cost == 2);
        CHECK(f.links[2].cost == 12);
    }
}

TEST_CASE("solution files") {
    Instance inst = r3();
    std::istringstream in("solution\nlink 2\nlink 1\nlink 2\n");
    CHECK(load_solution(in, inst) == std::vector<int>{1, 2});
    std::istringstream round(save_solution({1, 2}));
    CHECK(load_solution(round, inst) == std::vector<int>{1, 2});
    std::istringstream bad("solution\nlink 3\n");
    CHECK_THROWS_AS(load_solution(bad, inst), ParseError);
}
