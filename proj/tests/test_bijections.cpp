#include "rigidquad/bijections.hpp"
#include "rigidquad/detail/grid_builder.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rq;

namespace {

RigidQuadMap cells(std::initializer_list<std::pair<int, int>> cs) {
    detail::GridBuilder gb;
    for (auto [x, y] : cs) gb.add_cell(x, y);
    return gb.build({0, 0}, 0, {}).map;
}

// A second, hand-transcribed copy of the signature table (one entry per cell
// of Table 1), used to cross-check the formula in signature_allowed.
bool table_allowed(Label p, Label a, Label b, Label k) {
    if (p != a + b - k + 1 || p == 0 || k < 0) return false;
    if (b < 0) {
        if (k == 0) {
            if (a < 0) return p < 0;          // Gbar
            if (a == 0) return p < 0;         // Lbar
            return true;                      // Lbar (p<0) or R (p>0)
        }
        if (a < 0) return p < 0;              // Gbar
        if (a == 0) return p < 0;             // Gbar
        return p > 0;                         // R; cell II for p < 0
    }
    if (b == 0) {
        if (k == 0) {
            if (a < 0) return p < 0;          // Rbar
            if (a == 0) return p > 0;         // G(0,0), only p = 1
            return p > 0;                     // G(a,0)
        }
        if (a < 0) return p < 0;              // Gbar
        if (a == 0) return p < 0;             // Gbar(0,0), k >= 2 via p = 1-k
        return p > 0;                         // R(a,0)
    }
    // b > 0
    if (k == 0) {
        if (a < 0) return true;               // Rbar (p<0) or L (p>0)
        if (a == 0) return p > 0;             // G(0,b)
        return p > 0;                         // G(a,b)
    }
    if (a < 0) return p > 0;                  // L; II for p < 0
    if (a == 0) return p > 0;                 // L(0,b)
    return false;                             // II
}

} // namespace

TEST_CASE("signature examples from the table") {
    CHECK(signature_allowed({3, 1, 1, 0}));
    CHECK(submap_type({3, 1, 1, 0}) == SubmapType::G);
    CHECK_FALSE(signature_allowed({-1, 1, 1, 4}));
    CHECK_FALSE(signature_allowed({2, 1, 1, 1}));
    CHECK(submap_type({3, 0, 2, 0}) == SubmapType::G);
    CHECK(submap_type({2, 4, -1, 2}) == SubmapType::R);
    CHECK(submap_type({-2, -2, 0, 1}) == SubmapType::GBar);
    CHECK(submap_type({-2, -3, 0, 0}) == SubmapType::RBar);
    CHECK(submap_type({-1, 0, 0, 2}) == SubmapType::GBar);
    CHECK(submap_type({1, 0, 0, 0}) == SubmapType::G);
    CHECK(submap_type({-1, -3, 1, 0}) == SubmapType::RBar);
    CHECK(submap_type({-1, 1, -3, 0}) == SubmapType::LBar);
    CHECK(submap_type({2, -1, 2, 0}) == SubmapType::L);
    CHECK_THROWS_AS(submap_type({-2, -1, 0, 1}), std::invalid_argument); // p != a+b-k+1
}

TEST_CASE("signature_allowed agrees with the transcribed table on the finite grid") {
    for (Label p = -4; p <= 4; ++p) {
        if (p == 0) continue;
        for (Label a = -4; a <= 4; ++a)
            for (Label b = -4; b <= 4; ++b)
                for (Label k = 0; k <= 6; ++k) {
                    INFO("p=" << p << " a=" << a << " b=" << b << " k=" << k);
                    CHECK(signature_allowed({p, a, b, k}) == table_allowed(p, a, b, k));
                }
    }
}

TEST_CASE("minimal submaps are rigid with the right openings") {
    // G(0)_{0,0} is the unit square
    const MinimalSubmap g00 = build_minimal_submap({1, 0, 0, 0});
    CHECK(g00.map == cells({{0, 0}}));
    CHECK(g00.a_side == -1);
    CHECK(g00.b_side == -1);

    // Gbar^{(2)}_{0,0}, the smallest open-base terminal piece: one cell,
    // open side on top
    const MinimalSubmap gbar = build_minimal_submap({-1, 0, 0, 2});
    CHECK(validate_rigid(gbar.map).ok());
    CHECK(base_length(gbar.map) == -1);
    CHECK(gbar.map.edge_count() == 4);

    // G(0)_{1,0}: one open top side of size 1 and one convex corner
    const MinimalSubmap g10 = build_minimal_submap({2, 1, 0, 0});
    CHECK(validate_rigid(g10.map).ok());
    CHECK(base_length(g10.map) == 2);
    REQUIRE(g10.a_side >= 0);
    const auto& s = g10.map.analysis().sides().at(g10.a_side);
    CHECK(s.open);
    CHECK(s.top);
    CHECK(s.size == 1);
    CHECK(g10.b_side == -1);

    // a generous sample over all six types
    for (const Signature sig : std::initializer_list<Signature>{
             {3, 1, 1, 0}, {4, 0, 3, 0}, {2, 4, -1, 2}, {2, 3, 0, 2}, {1, -2, 3, 1}, {3, 0, 4, 2},
             {-2, -1, -1, 1}, {-3, -2, -1, 1}, {-2, -2, 0, 1}, {-2, 0, -2, 1}, {-1, -3, 1, 0},
             {-2, -4, 1, 0}, {-1, 1, -3, 0}, {-3, -4, 0, 0}, {-3, 0, -4, 0}, {-4, 0, 0, 5}}) {
        INFO("sig = (" << sig.p << "," << sig.a << "," << sig.b << "," << sig.k << ")");
        REQUIRE(signature_allowed(sig));
        const MinimalSubmap sub = build_minimal_submap(sig);
        CHECK(validate_rigid(sub.map).ok());
        CHECK(base_length(sub.map) == sig.p);
        CHECK((sub.a_side >= 0) == (sig.a != 0));
        CHECK((sub.b_side >= 0) == (sig.b != 0));
        if (sig.a > 0) {
            const auto& sa = sub.map.analysis().sides().at(sub.a_side);
            CHECK(sa.open);
            CHECK(sa.top);
            CHECK(sa.size == sig.a);
        }
        if (sig.a < 0) {
            const auto& sa = sub.map.analysis().sides().at(sub.a_side);
            CHECK(sa.open);
            CHECK_FALSE(sa.top);
            CHECK(sa.size == 1);
            CHECK(sa.length == -sig.a);
        }
        if (sig.b > 0) {
            const auto& sb = sub.map.analysis().sides().at(sub.b_side);
            CHECK(sb.open);
            CHECK(sb.top);
            CHECK(sb.size == sig.b);
        }
        if (sig.b < 0) {
            const auto& sb = sub.map.analysis().sides().at(sub.b_side);
            CHECK(sb.open);
            CHECK_FALSE(sb.top);
            CHECK(sb.size == 1);
            CHECK(sb.length == -sig.b);
        }
    }
}

TEST_CASE("gluing a unit square onto G(0)_{1,0} gives the 3-cell step map") {
    const MinimalSubmap g10 = build_minimal_submap({2, 1, 0, 0});
    const RigidQuadMap square = cells({{0, 0}});
    const RigidQuadMap glued = glue_top(g10.map, g10.a_side, square);
    CHECK(validate_rigid(glued).ok());
    CHECK(is_complete(glued));
    CHECK(base_length(glued) == 2);
    const CornerCensus c = corner_census(glued);
    CHECK(c.n == 3);
    CHECK(glued.analysis().inner_face_count() == 3);
    // the step sits at the far end of the base
    CHECK(glued == cells({{0, 0}, {1, 0}, {1, 1}}));
}

TEST_CASE("glue size mismatches are rejected") {
    const MinimalSubmap g10 = build_minimal_submap({3, 2, 0, 0});
    const RigidQuadMap square = cells({{0, 0}});
    CHECK_THROWS_AS(glue_top(g10.map, g10.a_side, square), std::invalid_argument);

    const MinimalSubmap rbar = build_minimal_submap({-1, -2, 0, 0});
    // a-side has length 2, so a base-(-3) disk does not fit
    detail::GridBuilder gb;
    gb.add_row(-3, 0, -1);
    const RigidQuadMap row3 = gb.build({0, 0}, 2, {{{{0, 0}, 2}}}).map;
    CHECK_THROWS_AS(glue_bottom(rbar.map, rbar.a_side, row3), std::invalid_argument);
}

TEST_CASE("smallest bottom gluing: Rbar(0)_{-2,0} closed by the 2-cell row") {
    const MinimalSubmap rbar = build_minimal_submap({-1, -2, 0, 0});
    REQUIRE(rbar.a_side >= 0);
    detail::GridBuilder gb;
    gb.add_row(-2, 0, -1);
    const RigidQuadMap row2 = gb.build({0, 0}, 2, {{{{0, 0}, 2}}}).map;
    REQUIRE(base_length(row2) == -2);
    const RigidQuadMap glued = glue_bottom(rbar.map, rbar.a_side, row2);
    CHECK(validate_rigid(glued).ok());
    CHECK(is_complete(glued));
    CHECK(base_length(glued) == -1);
    CHECK(corner_census(glued).n == 3);
}

TEST_CASE("unit square decomposes into the terminal signature") {
    const Decomposition d = find_minimal_submap(cells({{0, 0}}));
    CHECK(d.sig == Signature{1, 0, 0, 0});
    CHECK(d.left.is_corner());
    CHECK(d.right.is_corner());
}

TEST_CASE("step maps decompose through G(0)") {
    // step at the far end: G(0)_{1,0} with a unit square at the a position
    const Decomposition d1 = find_minimal_submap(cells({{0, 0}, {1, 0}, {1, 1}}));
    CHECK(d1.sig == Signature{2, 1, 0, 0});
    CHECK(base_length(d1.left) == 1);
    CHECK(d1.left == cells({{0, 0}}));
    CHECK(d1.right.is_corner());

    // step at the root end: G(0)_{0,1}
    const Decomposition d2 = find_minimal_submap(cells({{0, 0}, {1, 0}, {0, 1}}));
    CHECK(d2.sig == Signature{2, 0, 1, 0});
    CHECK(d2.left.is_corner());
    CHECK(base_length(d2.right) == 1);
}

TEST_CASE("tree <-> map on the smallest instances") {
    // unit square <-> two-leaf tree e0=1, leaves (0,0)
    const PartitionTree sq_tree = make_tree(TreeSpec(1, TreeSpec(0), TreeSpec(0)));
    CHECK(h_tree_to_quad(sq_tree) == cells({{0, 0}}));
    CHECK(quad_to_h_tree(cells({{0, 0}})) == sq_tree);
    // base-0 object <-> single edge
    CHECK(h_tree_to_quad(make_tree(TreeSpec(0))).is_corner());
    CHECK(quad_to_h_tree(RigidQuadMap::corner_object()) == make_tree(TreeSpec(0)));
    // the step map round-trips
    const RigidQuadMap step = cells({{0, 0}, {1, 0}, {1, 1}});
    CHECK(h_tree_to_quad(quad_to_h_tree(step)) == step);
}
