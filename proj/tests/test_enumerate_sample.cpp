#include "rigidquad/enumerate_sample.hpp"
#include "rigidquad/series.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>

using namespace rq;

TEST_CASE("pre-Q-tree counts match the closed formula") {
    CHECK(enumerate_pre_q_trees(1, 0).size() == 1);
    CHECK(enumerate_pre_q_trees(2, 0).size() == 2);
    CHECK(enumerate_pre_q_trees(3, 0).size() == 12);
    for (int n = 1; n <= 7; ++n)
        for (Label p = -4; p <= 4; ++p) {
            const Int expect =
                binomial(2 * n - 2, n - 1) * binomial(2 * n - 2 - p, n - 1 - p) / n;
            INFO("n=" << n << " p=" << p);
            CHECK(Int(enumerate_pre_q_trees(n, p).size()) == expect);
        }
}

TEST_CASE("leaf labels of (n=2, p=0) pre-Q-trees") {
    const auto ts = enumerate_pre_q_trees(2, 0);
    REQUIRE(ts.size() == 2);
    std::set<std::pair<Label, Label>> leaves;
    for (const auto& t : ts) leaves.insert({t.edge_label(1), t.edge_label(2)});
    CHECK(leaves == std::set<std::pair<Label, Label>>{{0, -1}, {-1, 0}});
}

TEST_CASE("path system invariants on every H- and pre-Q-tree") {
    for (int n = 1; n <= 5; ++n)
        for (Label p = -3; p <= 3; ++p)
            for (const auto& t : enumerate_pre_q_trees(n, p)) {
                for (const auto& tree :
                     {t, is_class(t, TreeClass::WellBasedQ) ? psi_inv(t) : t}) {
                    const PathSystem ps = build_paths(tree);
                    std::vector<int> owner(tree.size(), -1);
                    for (size_t i = 0; i < ps.paths.size(); ++i) {
                        for (int e : ps.paths[i].edges) {
                            CHECK(owner[e] == -1); // disjoint
                            owner[e] = static_cast<int>(i);
                            CHECK(tree.edge_label(e) <= 0);
                        }
                        CHECK(tree.is_leaf(ps.paths[i].last_edge()));
                        if (ps.paths[i].kind == PathKind::Special) {
                            const int v = ps.paths[i].anchor;
                            CHECK(tree.edge_label(v) == 1);
                            CHECK(tree.edge_label(tree.left(v)) == 0);
                            CHECK(tree.edge_label(tree.right(v)) == 0);
                            CHECK(tree.vertex_label(v) == 0);
                        }
                    }
                    // every non-positive edge is in a path; every leaf ends one
                    std::set<int> final_edges;
                    for (const auto& path : ps.paths) final_edges.insert(path.last_edge());
                    for (int e = 0; e < tree.size(); ++e) {
                        if (tree.edge_label(e) <= 0) CHECK(owner[e] >= 0);
                        if (tree.is_leaf(e)) CHECK(final_edges.count(e) == 1);
                    }
                }
            }
}

TEST_CASE("tree family counts match the series coefficients") {
    const int N = 6;
    const UniSeries R = solve_R(N);
    for (Label p = -3; p <= 3; ++p) {
        const UniSeries qh = q_hat_series(p, N);
        const UniSeries qs = q_series(p, N, R);
        const UniSeries hs = h_series(p, N, R);
        for (int n = 1; n <= N; ++n) {
            INFO("n=" << n << " p=" << p);
            CHECK(Rat(enumerate_pre_q_trees(n, p).size()) == qh[n]);
            CHECK(Rat(enumerate_q_trees(n, p).size()) == qs[n]);
            CHECK(Rat(enumerate_h_trees(n, p).size()) == hs[n]);
        }
    }
    // Q-trees with base 0: exactly t
    CHECK(enumerate_q_trees(1, 0).size() == 1);
    for (int n = 2; n <= 6; ++n) CHECK(enumerate_q_trees(n, 0).empty());
    // H-trees at (n=2, p=1): the unit-square tree
    CHECK(enumerate_h_trees(2, 1).size() == 1);
}

TEST_CASE("psi roundtrips exhaustively, preserving paths and strength") {
    for (int n = 1; n <= 6; ++n)
        for (Label p = -3; p <= 3; ++p)
            for (const auto& q : enumerate_well_based_q_trees(n, p)) {
                const PartitionTree h = psi_inv(q);
                REQUIRE(is_class(h, TreeClass::H));
                CHECK(h.degree() == q.degree());
                CHECK(h.base_length() == q.base_length());
                CHECK(psi(h) == q);
                // paths invariant as edge sets
                auto edge_sets = [](const PartitionTree& t) {
                    std::set<std::vector<int>> s;
                    for (const auto& path : build_paths(t).paths) s.insert(path.edges);
                    return s;
                };
                CHECK(edge_sets(h) == edge_sets(q));
            }
}

TEST_CASE("psi_hat partitions Q-trees by recovered base length") {
    for (int n = 1; n <= 5; ++n)
        for (Label p = -4; p <= -1; ++p) {
            std::map<Label, Int> recovered;
            for (const auto& q : enumerate_q_trees(n, p)) {
                const PartitionTree h = psi_hat_inv(q);
                REQUIRE(is_class(h, TreeClass::H));
                const Label pp = h.base_length();
                CHECK(pp >= p);
                CHECK(pp <= 0);
                CHECK(psi_hat(h, p) == q);
                recovered[pp] += 1;
            }
            // the union over p' in [p, 0] of H-trees covers Q_{n,p}
            for (Label pp = p; pp <= 0; ++pp) {
                const Int want = Int(enumerate_h_trees(n, pp).size());
                INFO("n=" << n << " p=" << p << " p'=" << pp);
                CHECK(recovered[pp] == want);
            }
        }
}

TEST_CASE("phi decomposition is a bijection") {
    for (int n = 1; n <= 6; ++n)
        for (Label p = -3; p <= 3; ++p) {
            // forward: decompose and recompose every pre-Q-tree
            const auto all = enumerate_pre_q_trees(n, p);
            for (const auto& t : all) {
                const PhiDecomposition d = decompose_phi(t);
                CHECK(is_class(d.core, TreeClass::Q));
                CHECK(d.core.base_length() == p);
                int total = 0;
                for (const auto& r : d.removed) {
                    CHECK(r.base_length() == 0);
                    CHECK(is_class(r, TreeClass::PreQ));
                    total += r.degree();
                }
                CHECK(total == n);
                CHECK(compose_phi_inv(d.core, d.removed) == t);
            }
            // backward: compose over all (core, fragment tuple) pairs and hit
            // every pre-Q-tree exactly once
            std::vector<PartitionTree> composed;
            for (int m = 1; m <= n; ++m) {
                const auto cores = enumerate_q_trees(m, p);
                if (cores.empty()) continue;
                std::vector<int> part(m, 1);
                auto rec = [&](auto&& self, int idx, int rest) -> void {
                    if (idx == m - 1) {
                        part[idx] = rest;
                        std::vector<std::vector<PartitionTree>> frag_lists;
                        for (int i = 0; i < m; ++i)
                            frag_lists.push_back(enumerate_pre_q_trees(part[i], 0));
                        std::vector<int> pick(m, 0);
                        auto rec2 = [&](auto&& self2, int j) -> void {
                            if (j == m) {
                                std::vector<PartitionTree> frags;
                                for (int i = 0; i < m; ++i) frags.push_back(frag_lists[i][pick[i]]);
                                for (const auto& core : cores)
                                    composed.push_back(compose_phi_inv(core, frags));
                                return;
                            }
                            for (pick[j] = 0; pick[j] < static_cast<int>(frag_lists[j].size());
                                 ++pick[j])
                                self2(self2, j + 1);
                        };
                        rec2(rec2, 0);
                        return;
                    }
                    for (int v = 1; v <= rest - (m - 1 - idx); ++v) {
                        part[idx] = v;
                        self(self, idx + 1, rest - v);
                    }
                };
                rec(rec, 0, n);
            }
            std::sort(composed.begin(), composed.end());
            CHECK(std::adjacent_find(composed.begin(), composed.end()) == composed.end());
            std::vector<PartitionTree> target = all;
            std::sort(target.begin(), target.end());
            CHECK(composed == target);
        }
}

TEST_CASE("count_quads_recursive matches the series") {
    CHECK(count_quads_recursive(1, 2) == 1);
    CHECK(count_quads_recursive(0, 1) == 1);
    const int N = 7;
    const UniSeries R = solve_R(N);
    for (Label p = -4; p <= 4; ++p) {
        const UniSeries f = f_series(p, N, R);
        for (int n = 1; n <= N; ++n) {
            INFO("p=" << p << " n=" << n);
            CHECK(Rat(count_quads_recursive(p, n)) == f[n]);
        }
    }
}

TEST_CASE("map bijection roundtrips exhaustively with structural invariants") {
    const int N = 5;
    for (Label p = -3; p <= 3; ++p) {
        if (p == 0) continue;
        for (int n = 2; n <= N; ++n) {
            const auto trees = enumerate_h_trees(n, p);
            std::set<std::vector<int>> keys;
            for (const auto& h : trees) {
                const RigidQuadMap m = h_tree_to_quad(h);
                // invariants on every generated map
                REQUIRE(validate_rigid(m).ok());
                CHECK(is_complete(m));
                CHECK(base_length(m) == p);
                CHECK(turning_number(m) == 4);
                const CornerCensus c = corner_census(m);
                CHECK(c.convex + c.concave == 2 * n);
                CHECK(c.n == n);
                // closed rays pair up at concave corners
                int closed = 0;
                for (const auto& r : trace_rays(m)) closed += r.kind == RayKind::Closed;
                CHECK(closed == 2 * c.concave);
                keys.insert(m.canonical_key());
                // the round trip
                CHECK(quad_to_h_tree(m) == h);
            }
            CHECK(keys.size() == trees.size()); // injective
        }
    }
}

TEST_CASE("both map enumerators agree") {
    for (Label p : {-2, -1, 1, 2})
        for (int n = 2; n <= 4; ++n) {
            auto a = enumerate_quads_via_trees(n, p);
            auto b = enumerate_quads_via_recursion(n, p);
            std::set<std::vector<int>> ka, kb;
            for (const auto& m : a) ka.insert(m.canonical_key());
            for (const auto& m : b) kb.insert(m.canonical_key());
            INFO("p=" << p << " n=" << n);
            CHECK(ka.size() == a.size());
            CHECK(kb.size() == b.size());
            CHECK(ka == kb);
            CHECK(Rat(a.size()) == f_series(p, n)[n]);
        }
}

TEST_CASE("sample_pre_q_tree is deterministic and lands in the family") {
    RandomStream r1(42), r2(42);
    const PartitionTree a = sample_pre_q_tree(6, -2, r1);
    const PartitionTree b = sample_pre_q_tree(6, -2, r2);
    CHECK(a == b);
    CHECK(a.degree() == 6);
    CHECK(a.base_length() == -2);
    CHECK(is_class(a, TreeClass::PreQ));
    CHECK_THROWS_AS(sample_pre_q_tree(2, 5, r1), std::invalid_argument);
    // n_max = 1, p = 0: the single edge, deterministically
    CHECK(sample_pre_q_tree(1, 0, r1) == make_tree(TreeSpec(0)));
}

TEST_CASE("sample_rigid_quad at (p=1, target 2) is always the unit square") {
    RandomStream rng(7);
    for (int i = 0; i < 20; ++i) {
        const QuadSample s = sample_rigid_quad(1, 2, 2, rng);
        CHECK(s.n == 2);
        CHECK(base_length(s.map) == 1);
        CHECK(s.map.edge_count() == 4);
        CHECK(validate_rigid(s.map).ok());
    }
}

TEST_CASE("sampled maps validate across parameters") {
    RandomStream rng(2024);
    for (Label p : {-3, -1, 1, 2}) {
        for (int rep = 0; rep < 25; ++rep) {
            const QuadSample s = sample_rigid_quad(p, 8, std::nullopt, rng);
            CHECK(validate_rigid(s.map).ok());
            CHECK(is_complete(s.map));
            if (p > 0)
                CHECK(base_length(s.map) == p);
            else
                CHECK(base_length(s.map) == s.base);
        }
    }
}

TEST_CASE("cycle_subtrees: trivial and fully symmetric walks") {
    // p=q=1: one spine block; exactly one rotation, trivially valid
    const auto t11 = make_tree(TreeSpec(1, TreeSpec(0), TreeSpec(0)));
    CHECK(cycle_subtrees(t11, 1, 1).size() == 1);
    // p=q=2 diagonal walk: a_1 = 1 exactly on the bound; both rotations valid
    const auto diag = make_tree(
        TreeSpec(2, TreeSpec(1, TreeSpec(0), TreeSpec(0)), TreeSpec(0)));
    REQUIRE(is_class(diag, TreeClass::PreQ));
    const auto rots = cycle_subtrees(diag, 2, 2);
    CHECK(rots.size() == 2);
    CHECK(delta_degeneracy(diag, 2, 2) == 2);
}

TEST_CASE("enumerate_bcd smallest counts match the displayed series") {
    // t^1: all three families have a single (1,1) map: the unit square
    for (auto kind : {DoubleBasedKind::B, DoubleBasedKind::C, DoubleBasedKind::Delta}) {
        const auto items = enumerate_bcd(kind, 1, 1, 1);
        REQUIRE(items.size() == 1);
        CHECK(items[0].map.edge_count() == 4);
    }
    // [t^2] x^2 y^1 of B is 1
    CHECK(enumerate_bcd(DoubleBasedKind::B, 1, 2, 2).size() == 1);
}

TEST_CASE("double-based counts match the trivariate series through t^3") {
    const int N = 3;
    const UniSeries R = solve_R(N);
    const TriSeries D = delta_series(N, R);
    const TriSeries B = b_series(N, R);
    const TriSeries C = c_series(N, R);
    for (int m = 1; m <= N; ++m)
        for (int q = 1; q <= m; ++q)
            for (int pp = 1; pp <= m; ++pp) {
                INFO("t^" << m << " x^" << q << " y^" << pp);
                Rat delta_weight = 0;
                for (const auto& item : enumerate_bcd(DoubleBasedKind::Delta, pp, q, m))
                    delta_weight += Rat(1, item.degeneracy);
                CHECK(delta_weight == D.at(m, q, pp));
                CHECK(Rat(enumerate_bcd(DoubleBasedKind::B, pp, q, m).size()) == B.at(m, q, pp));
                CHECK(Rat(enumerate_bcd(DoubleBasedKind::C, pp, q, m).size()) == C.at(m, q, pp));
            }
}

namespace {

// Degeneracy read from the map's geometry: the k-th downward ray ending at
// the base (closest to the root first) lies on the hypotenuse when it has
// exactly k*q/p edges.
int geometric_delta_degeneracy(const RigidQuadMap& m, Label p, int q) {
    const auto& a = m.analysis();
    const auto& base = a.sides().front();
    int deg = 1; // the q-th bound is always met
    for (int i = 1; i < base.length; ++i) {
        const int h = a.boundary()[base.first + i];
        int stub = -1;
        int g = h;
        do {
            const bool bdry = a.face_of(g) == a.boundary_face() ||
                              a.face_of(m.opp(g)) == a.boundary_face();
            if (!bdry) stub = g;
            g = m.nxt(g);
        } while (g != h);
        REQUIRE(stub >= 0);
        const auto& ray = a.rays()[a.ray_of_edge(stub / 2)];
        if (static_cast<Label>(ray.edges.size()) * p == static_cast<Label>(i) * q) ++deg;
    }
    return deg;
}

} // namespace

TEST_CASE("tree degeneracy equals the map's hypotenuse count at (p,q) = (2,2)") {
    for (int m = 2; m <= 4; ++m)
        for (const auto& item : enumerate_bcd(DoubleBasedKind::Delta, 2, 2, m)) {
            const int want = geometric_delta_degeneracy(item.map, 2, 2);
            CHECK(item.degeneracy == want);
            // ... and matches the number of valid rotations of its own spine
            CHECK(static_cast<int>(cycle_subtrees(item.q_tree, 2, 2).size()) == item.degeneracy);
        }
}

TEST_CASE("sample_delta_type produces valid maps and hits the minimal case") {
    RandomStream rng(11);
    const DeltaSample s = sample_delta_type(1, 1, 1, 1, rng);
    CHECK(s.n == 1);
    CHECK(s.map.edge_count() == 4); // the unit square
    for (int rep = 0; rep < 10; ++rep) {
        const DeltaSample t = sample_delta_type(2, 2, 6, std::nullopt, rng);
        CHECK(validate_rigid(t.map).ok());
        CHECK(matches_double_based(DoubleBasedKind::Delta, t.q_tree, 2, 2));
    }
}
