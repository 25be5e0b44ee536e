#include "rigidquad/detail/grid_builder.hpp"
#include "rigidquad/map_core.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rq;
using detail::GridBuilder;

namespace {

RigidQuadMap cells(std::initializer_list<std::pair<int, int>> cs,
                   GridBuilder::Pt root = {0, 0}, int dir = 0,
                   std::vector<std::pair<GridBuilder::Pt, int>> open = {}) {
    GridBuilder gb;
    for (auto [x, y] : cs) gb.add_cell(x, y);
    return gb.build(root, dir, open).map;
}

} // namespace

TEST_CASE("unit square is rigid with base length 1") {
    const RigidQuadMap m = cells({{0, 0}});
    CHECK(validate_rigid(m).ok());
    CHECK(is_complete(m));
    CHECK(is_based(m));
    CHECK(base_length(m) == 1);
    CHECK(m.edge_count() == 4);
    CHECK(trace_rays(m).empty());
    const CornerCensus c = corner_census(m);
    CHECK(c.convex == 4);
    CHECK(c.concave == 0);
    CHECK(c.straight == 0);
    CHECK(c.n == 2);
    CHECK(turning_number(m) == 4);
    // sides: base, east, top, west
    const auto& sides = m.analysis().sides();
    REQUIRE(sides.size() == 4);
    CHECK(sides[0].is_base);
    CHECK(sides[0].horizontal);
    CHECK_FALSE(sides[0].top);
    CHECK_FALSE(sides[1].horizontal);
    CHECK(sides[2].horizontal);
    CHECK(sides[2].top);
    CHECK_FALSE(sides[3].horizontal);
}

TEST_CASE("the corner object is the base-0 convention") {
    const RigidQuadMap m = RigidQuadMap::corner_object();
    CHECK(validate_rigid(m).ok());
    CHECK(base_length(m) == 0);
    const CornerCensus c = corner_census(m);
    CHECK(c.convex == 1);
    CHECK(c.n == 1);
}

TEST_CASE("2x2 block: two rays of length 2 cross at the center, but the map is not rigid") {
    const RigidQuadMap m = cells({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    const auto rays = trace_rays(m);
    REQUIRE(rays.size() == 2);
    CHECK(rays[0].edges.size() == 2);
    CHECK(rays[1].edges.size() == 2);
    // untypeable: straight-straight rays with no open side to start on
    CHECK_FALSE(validate_rigid(m).ok());
    CHECK(base_length(m) == 2);
}

TEST_CASE("closed flat rows of width > 1 are not rigid") {
    const RigidQuadMap row = cells({{0, 0}, {1, 0}});
    CHECK(base_length(row) == 2);
    // the single inner vertical edge forms a straight-straight ray
    const auto rays = trace_rays(row);
    REQUIRE(rays.size() == 1);
    CHECK_FALSE(validate_rigid(row).ok());
}

TEST_CASE("step map: census and rays") {
    // cells [0,1]x[0,1], [1,2]x[0,1], [1,2]x[1,2]: base 2, n = 3
    const RigidQuadMap m = cells({{0, 0}, {1, 0}, {1, 1}});
    CHECK(validate_rigid(m).ok());
    CHECK(base_length(m) == 2);
    const CornerCensus c = corner_census(m);
    CHECK(c.convex == 5);
    CHECK(c.concave == 1);
    CHECK(c.straight == 2);
    CHECK(c.n == 3);
    CHECK(c.convex + c.concave == 2 * c.n);
    const auto rays = trace_rays(m);
    REQUIRE(rays.size() == 2);
    for (const auto& r : rays) {
        CHECK(r.kind == RayKind::Closed);
        CHECK(r.edges.size() == 1);
    }
    CHECK(turning_number(m) == 4);
}

TEST_CASE("open-base flat rows are the terminal negative maps") {
    for (int P = 1; P <= 4; ++P) {
        GridBuilder gb;
        gb.add_row(-P, 0, -1);
        const RigidQuadMap m = gb.build({0, 0}, 2, {{{{0, 0}, 2}}}).map;
        CHECK(validate_rigid(m).ok());
        CHECK(is_complete(m));
        CHECK(base_length(m) == -P);
        const CornerCensus c = corner_census(m);
        CHECK(c.convex == 4);
        CHECK(c.n == 2);
        const auto rays = trace_rays(m);
        CHECK(static_cast<int>(rays.size()) == P - 1);
        for (const auto& r : rays) {
            CHECK(r.kind == RayKind::Open);
            CHECK(r.direction == RayDirection::Downward);
        }
    }
}

TEST_CASE("closed rays come in pairs at concave corners") {
    // L-tromino with base 1: two closed rays from the single concave corner
    const RigidQuadMap m = cells({{0, 0}, {0, 1}, {1, 1}});
    CHECK(validate_rigid(m).ok());
    CHECK(base_length(m) == 1);
    const CornerCensus c = corner_census(m);
    CHECK(c.concave == 1);
    const auto rays = trace_rays(m);
    REQUIRE(rays.size() == 2);
    for (const auto& r : rays) CHECK(r.kind == RayKind::Closed);
    CHECK(c.straight == 2 * c.concave);
}

TEST_CASE("canonical keys identify rooted-isomorphic maps") {
    const RigidQuadMap a = cells({{0, 0}, {1, 0}, {1, 1}});
    const RigidQuadMap b = cells({{5, 7}, {6, 7}, {6, 8}}, {5, 7}, 0);
    CHECK(a == b);
    const RigidQuadMap c = cells({{0, 0}, {1, 0}, {0, 1}});
    CHECK_FALSE(a == c);
}

TEST_CASE("from_data rejects broken permutation data") {
    CHECK_THROWS_AS(RigidQuadMap::from_data({0, 1}, {1, 0}, 0, {}), std::invalid_argument);
    CHECK_THROWS_AS(RigidQuadMap::from_data({1, 0, 3, 2}, {1, 0, 3, 2}, 0, {}),
                    std::invalid_argument); // disconnected pair of loops
}
