#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ringforge/dropcalc.hpp"
#include "ringforge/generate.hpp"
#include "support.hpp"

using namespace ringforge;
using namespace ringforge::testing;

namespace {

// Non-shortenable F0 for the three-vertex ring: c as (0,1), b as (1,2).
DirectedSolution r3_f0() { return {{0, 1, link_c, 1}, {1, 2, link_b, 1}}; }

}  // namespace

TEST_CASE("intersection of links on a 12-vertex ring") {
    Instance inst = make_instance(12, {{10, 3, 1}, {1, 5, 1}, {6, 10, 1}});
    const Link& l1 = inst.links[0];
    const Link& l2 = inst.links[1];
    const Link& l3 = inst.links[2];
    CHECK(intersects(l1, l2));
    CHECK(intersects(l1, l3));
    CHECK_FALSE(intersects(l2, l3));
    CHECK_FALSE(intersects(l1, l1));
    for (const Link& a : inst.links)
        for (const Link& b : inst.links) CHECK(intersects(a, b) == ref_intersect(a, b));
    CHECK(intersection_components(inst, {0, 1, 2}) == std::vector<std::vector<int>>{{0, 1, 2}});
    CHECK(intersection_components(inst, {1, 2}) == std::vector<std::vector<int>>{{1}, {2}});
}

TEST_CASE("drop on the three-vertex ring") {
    Instance inst = r3();
    DirectedSolution f = r3_f0();
    CHECK(drop_by_definition(inst, f, {}) == std::vector<int>{});
    CHECK(drop_by_definition(inst, f, {link_a}) == std::vector<int>{1});
    CHECK(drop_by_definition(inst, f, {link_b}) == std::vector<int>{1});
    CHECK(drop_by_definition(inst, f, {link_c}) == std::vector<int>{0});
    CHECK(drop_by_definition(inst, f, {link_b, link_c}) == std::vector<int>{0, 1});
    CHECK(drop_by_characterization(inst, f, {link_a}) == std::vector<int>{1});
    CHECK(drop_connected(inst, f, {link_b, link_c}) == std::vector<int>{0, 1});
}

TEST_CASE("the three drop computations agree with the definition") {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 40; ++t) {
        Instance inst = gen_instance(3 + t % 4, 4 + t % 4, 9, rng());
        DirectedSolution f = make_non_shortenable(inst, random_directed_solution(inst, rng));
        const int m = inst.num_links();
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
            auto k = mask_to_ids(mask, m);
            auto ref = ref_drop(inst, f, k);
            CHECK(drop_by_definition(inst, f, k) == ref);
            CHECK(drop_by_characterization(inst, f, k) == ref);
            CHECK(drop_components(inst, f, k) == ref);
        }
    }
}

TEST_CASE("drop is monotone and additive over components") {
    std::mt19937_64 rng(23);
    for (int t = 0; t < 40; ++t) {
        Instance inst = gen_instance(4 + t % 4, 6, 9, rng());
        DirectedSolution f = make_non_shortenable(inst, random_directed_solution(inst, rng));
        auto all = drop_by_definition(inst, f, all_link_ids(inst));
        CHECK(all.size() == f.size());
        auto k = mask_to_ids(rng() & 0x3f, inst.num_links());
        std::vector<int> joined;
        for (const auto& comp : intersection_components(inst, k)) {
            auto part = drop_by_definition(inst, f, comp);
            joined.insert(joined.end(), part.begin(), part.end());
        }
        std::sort(joined.begin(), joined.end());
        joined.erase(std::unique(joined.begin(), joined.end()), joined.end());
        CHECK(joined == drop_by_definition(inst, f, k));
    }
}
