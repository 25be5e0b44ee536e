#pragma once

// The gluing calculus of rigid quadrangulations: signatures (p,a,b,k) and
// their minimal submaps G/R/L (closed base) and Gbar/Rbar/Lbar (open base),
// gluing complete disks onto open sides, the inverse decomposition that peels
// the unique minimal submap off a complete based map, and the resulting
// bijection between complete base-p rigid quadrangulations and H-trees.

#include "rigidquad/detail/grid_builder.hpp"
#include "rigidquad/detail/halfedge_store.hpp"
#include "rigidquad/map_core.hpp"
#include "rigidquad/tree_core.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace rq {

struct Signature {
    Label p = 0, a = 0, b = 0;
    Label k = 0;

    friend bool operator==(const Signature&, const Signature&) = default;
};

// Allowed signatures: p = a+b-k+1, p != 0, k >= 0, and when the submap is
// u-shaped (1_{p<0} >= 1_{a<=0} + 1_{b<=0}) necessarily k = 0.
inline bool signature_allowed(const Signature& s) {
    if (s.p == 0 || s.k < 0) return false;
    if (s.p != s.a + s.b - s.k + 1) return false;
    const int lhs = s.p < 0 ? 1 : 0;
    const int rhs = (s.a <= 0 ? 1 : 0) + (s.b <= 0 ? 1 : 0);
    if (lhs >= rhs && s.k != 0) return false;
    return true;
}

enum class SubmapType { G, R, L, GBar, RBar, LBar };

inline const char* submap_type_name(SubmapType t) {
    switch (t) {
        case SubmapType::G: return "G";
        case SubmapType::R: return "R";
        case SubmapType::L: return "L";
        case SubmapType::GBar: return "Gbar";
        case SubmapType::RBar: return "Rbar";
        case SubmapType::LBar: return "Lbar";
    }
    return "?";
}

inline SubmapType submap_type(const Signature& s) {
    if (!signature_allowed(s)) throw std::invalid_argument("submap_type: signature not allowed");
    if (s.p > 0) {
        if (s.a > 0 && s.b <= 0) return (s.b == 0 && s.k == 0) ? SubmapType::G : SubmapType::R;
        if (s.b > 0 && s.a <= 0) return (s.a == 0 && s.k == 0) ? SubmapType::G : SubmapType::L;
        return SubmapType::G; // both positive (k=0), or the unit square a=b=0
    }
    if (s.a < 0 && s.b < 0) return SubmapType::GBar;
    if (s.a < 0 && s.b == 0) return s.k == 0 ? SubmapType::RBar : SubmapType::GBar;
    if (s.a == 0 && s.b < 0) return s.k == 0 ? SubmapType::LBar : SubmapType::GBar;
    if (s.b > 0) return SubmapType::RBar; // a < 0
    if (s.a > 0) return SubmapType::LBar; // b < 0
    return SubmapType::GBar;              // a = b = 0, k = 1-p >= 2
}

// ---------------------------------------------------------------------------
// Minimal submaps

struct MinimalSubmap {
    RigidQuadMap map;
    int a_side = -1; // side id of the a glue position; -1 when degenerate
    int b_side = -1;
};

namespace detail {

inline int side_of_rep(const RigidQuadMap& m, const GridBuilder::Built& built,
                       GridBuilder::Pt pt, int dir) {
    const auto& a = m.analysis();
    auto it = built.half_at.find({pt, dir});
    if (it == built.half_at.end()) throw std::logic_error("submap layout: rep edge missing");
    int h = it->second;
    int bi = a.boundary_index(h);
    if (bi < 0) bi = a.boundary_index(m.opp(h));
    if (bi < 0) throw std::logic_error("submap layout: rep edge not on boundary");
    return a.side_of_boundary_index(bi);
}

} // namespace detail

inline MinimalSubmap build_minimal_submap(const Signature& s) {
    if (!signature_allowed(s)) throw std::invalid_argument("build_minimal_submap: signature not allowed");
    using Pt = detail::GridBuilder::Pt;
    detail::GridBuilder gb;
    std::vector<std::pair<Pt, int>> open_edges;
    Pt a_rep{0, 0}, b_rep{0, 0};
    int a_dir = 0, b_dir = 0;
    bool has_a = false, has_b = false;
    Pt root_at{0, 0};
    int root_dir = 0; // E
    const SubmapType type = submap_type(s);

    const auto p = static_cast<int>(s.p);
    const auto k = static_cast<int>(s.k);
    if (s.p > 0) {
        root_dir = 0; // base along +x, interior above
        gb.add_row(0, p, 0);
        if (type == SubmapType::G) {
            const int a = static_cast<int>(s.a), b = static_cast<int>(s.b);
            if (a > 0) {
                gb.add_row(p - a, p, 1);
                a_rep = {p - a, 2};
                a_dir = 0;
                has_a = true;
            }
            if (b > 0) {
                gb.add_row(0, b, 1);
                b_rep = {0, 2};
                b_dir = 0;
                has_b = true;
            }
        } else if (type == SubmapType::R) {
            const int B = static_cast<int>(-s.b);
            const int M = B > 0 ? k + 1 : k; // middle side length
            const int x_min = -(B + M);
            gb.add_row(x_min, p, 1);
            if (B > 0) {
                gb.add_row(x_min, x_min + B, 0);
                b_rep = {x_min, 0};
                b_dir = 0;
                has_b = true;
            }
            a_rep = {x_min, 2};
            a_dir = 0;
            has_a = true;
        } else { // L
            const int A = static_cast<int>(-s.a);
            const int M = A > 0 ? k + 1 : k;
            const int x_max = p + M + A;
            gb.add_row(0, x_max, 1);
            if (A > 0) {
                gb.add_row(p + M, x_max, 0);
                a_rep = {p + M, 0};
                a_dir = 0;
                has_a = true;
            }
            b_rep = {0, 2};
            b_dir = 0;
            has_b = true;
        }
    } else {
        root_dir = 2; // open base along -x, interior below
        const int A = static_cast<int>(-s.a), B = static_cast<int>(-s.b);
        if (type == SubmapType::GBar) {
            const int dg = (A == 0 ? 1 : 0) + (B == 0 ? 1 : 0);
            const int E = A + B + (k - dg) + 1; // base edge count
            gb.add_row(-E, 0, -1);
            if (A > 0) {
                gb.add_row(-E, -E + A, -2);
                a_rep = {-E, -2};
                a_dir = 0;
                has_a = true;
            }
            if (B > 0) {
                gb.add_row(-B, 0, -2);
                b_rep = {-B, -2};
                b_dir = 0;
                has_b = true;
            }
        } else if (type == SubmapType::RBar) {
            const int b = static_cast<int>(s.b);
            const int P = A - b - 1; // = -p
            gb.add_row(-P, 0, -1);
            gb.add_row(-P, 1 + b, -2);
            a_rep = {-P, -2};
            a_dir = 0;
            has_a = true;
            if (b > 0) {
                gb.add_row(1, 1 + b, -1);
                b_rep = {1, 0};
                b_dir = 0;
                has_b = true;
            }
        } else { // LBar
            const int a = static_cast<int>(s.a);
            const int P = B - a - 1;
            gb.add_row(-P, 0, -1);
            gb.add_row(-P - 1 - a, 0, -2);
            b_rep = {-P - 1 - a, -2};
            b_dir = 0;
            has_b = true;
            if (a > 0) {
                gb.add_row(-P - 1 - a, -P - 1, -1);
                a_rep = {-P - 1 - a, 0};
                a_dir = 0;
                has_a = true;
            }
        }
        open_edges.push_back({{0, 0}, 2}); // the open base itself
    }
    if (has_a) open_edges.push_back({a_rep, a_dir});
    if (has_b) open_edges.push_back({b_rep, b_dir});

    auto built = gb.build(root_at, root_dir, open_edges);
    MinimalSubmap out;
    out.map = built.map;
    if (has_a) out.a_side = detail::side_of_rep(out.map, built, a_rep, a_dir);
    if (has_b) out.b_side = detail::side_of_rep(out.map, built, b_rep, b_dir);
    return out;
}

// ---------------------------------------------------------------------------
// Gluing

namespace detail {

// The unique inner-edge half-edge leaving a straight boundary vertex; v given
// by one of its outgoing halves.
inline int inner_stub(const RigidQuadMap& m, int some_half_at_v) {
    const auto& a = m.analysis();
    int g = some_half_at_v;
    do {
        const bool boundary_edge = a.face_of(g) == a.boundary_face() ||
                                   a.face_of(m.opp(g)) == a.boundary_face();
        if (!boundary_edge) return g;
        g = m.nxt(g);
    } while (g != some_half_at_v);
    throw std::logic_error("inner_stub: no inner edge at vertex");
}

// Glue `upper` onto `lower` along lower's boundary side given by its ordered
// orbit halves; upper attaches by its base (side 0). The lower side's
// rays point into the lower piece: downward ray starts cross the seam and
// join upper's downward ray ends; upward ray ends extend into the upper
// piece, subdividing it. Seam edges and vertices disappear (facing cells
// merge), so the crossers concatenate into single rays.
inline RigidQuadMap glue_along(const RigidQuadMap& lower, int lower_side,
                               const RigidQuadMap& upper, int upper_side, bool root_from_lower) {
    const auto& aL = lower.analysis();
    const auto& aU = upper.analysis();
    const auto& sideL = aL.sides().at(lower_side);
    const auto& sideU = aU.sides().at(upper_side);

    // classification of lower side interior vertices, in orbit order
    std::vector<char> up_flag;
    for (int i = 1; i < sideL.length; ++i) {
        const int h = aL.boundary()[sideL.first + i];
        const int stub = inner_stub(lower, h);
        const auto& ray = aL.rays().at(aL.ray_of_edge(stub / 2));
        up_flag.push_back(ray.direction == RayDirection::Upward ? 1 : 0);
    }
    int d_lower = 0;
    for (char f : up_flag) d_lower += f == 0;
    // upper side: all interior vertices must be downward ray ends
    for (int i = 1; i < sideU.length; ++i) {
        const int h = aU.boundary()[sideU.first + i];
        const int stub = inner_stub(upper, h);
        const auto& ray = aU.rays().at(aU.ray_of_edge(stub / 2));
        if (ray.direction != RayDirection::Downward || ray.to != aU.org(h))
            throw std::invalid_argument("glue: upper base has a non-downward interior vertex");
    }
    if (sideU.length - 1 != d_lower)
        throw std::invalid_argument("glue: downward ray counts do not match across the seam");

    // one store holding both maps; upper ids shifted
    detail::HEStore st(lower);
    const int off = st.size();
    {
        const int HU = upper.half_edge_count();
        for (int h = 0; h < HU; ++h) {
            st.opp.push_back(upper.opp(h) + off);
            st.nxt.push_back(upper.nxt(h) + off);
            st.alive.push_back(1);
            st.bmark.push_back(0);
            st.omark.push_back(upper.open_half(h) ? 1 : 0);
        }
        int h = upper.root() + off;
        do {
            st.bmark[h] = 1;
            h = st.face_next(h);
        } while (h != upper.root() + off);
    }

    const int K = sideL.length;
    std::vector<int> sl(K);
    for (int i = 0; i < K; ++i) sl[i] = aL.boundary()[sideL.first + i];
    // upper side first half (store ids)
    const int us0 = aU.boundary()[sideU.first] + off;

    // Subdivide upper along lower's upward vertices. Lower's interior
    // vertices are walked in orbit order while a cursor walks upper's side in
    // reverse, because the seam identification reverses orientation.
    {
        int cur = us0;
        for (int t = 1; t < sideU.length; ++t) cur = st.face_next(cur); // last edge
        for (size_t i = 0; i < up_flag.size(); ++i) {
            if (!up_flag[i]) {
                cur = st.face_prev(cur); // previous boundary edge of the side
                continue;
            }
            // split the inner half of cur; the new vertex sits at the cursor
            const auto r = st.split_edge(st.opp[cur]);
            // column extension from the new vertex through the faces above
            int h = r.n1;
            while (true) {
                const int o = st.face_next(st.face_next(h));
                const bool at_boundary = st.is_boundary_edge(o);
                const auto ro = st.split_edge(o);
                st.split_face(h, ro.n1);
                if (at_boundary) break;
                h = ro.n2;
            }
        }
    }

    // recollect upper side halves (now K edges)
    std::vector<int> us(K);
    us[0] = us0;
    for (int t = 1; t < K; ++t) us[t] = st.face_next(us[t - 1]);

    auto face_prev_b = [&](int h) { return st.face_prev(h); };

    // interior joins: lower vertex org(sl[i]) pairs with upper vertex org(us[K-i])
    for (int i = 1; i <= K - 1; ++i) {
        const int wl = sl[i];
        const int wu = us[K - i];
        // stubs: the unique non-boundary-edge halves at these vertices
        auto stub_at = [&](int half) {
            int g = half;
            do {
                if (!st.is_boundary_edge(g)) return g;
                g = st.nxt[g];
            } while (g != half);
            throw std::logic_error("glue: seam vertex without inner stub");
        };
        const int dL = stub_at(wl), dU = stub_at(wu);
        const int aLh = st.opp[dL], aUh = st.opp[dU];
        st.opp[aLh] = aUh;
        st.opp[aUh] = aLh;
        st.kill(dL);
        st.kill(dU);
    }
    // end caps
    {
        const int pv = face_prev_b(sl[0]);      // arrives at lower seam start
        const int nx = st.face_next(us[K - 1]); // leaves upper seam end
        const int a_old = st.opp[pv], onx = st.opp[nx];
        st.opp[pv] = onx;
        st.opp[onx] = pv;
        st.kill(a_old);
        st.kill(nx);
    }
    {
        const int nv = st.face_next(sl[K - 1]); // leaves lower seam end
        const int pu = face_prev_b(us[0]);      // arrives at upper seam start
        const int onv = st.opp[nv], opu = st.opp[pu];
        st.opp[onv] = pu;
        st.opp[pu] = onv;
        st.kill(nv);
        st.kill(opu);
    }
    for (int i = 0; i < K; ++i) {
        st.kill(st.opp[sl[i]]);
        st.kill(sl[i]);
        st.kill(st.opp[us[i]]);
        st.kill(us[i]);
    }

    const int new_root = root_from_lower ? lower.root() : upper.root() + off;
    return st.finalize_component(new_root);
}

} // namespace detail

// Glue a complete closed-base disk `u` onto the open top side `side_id` of e.
inline RigidQuadMap glue_top(const RigidQuadMap& e, int side_id, const RigidQuadMap& u) {
    if (e.is_corner()) throw std::invalid_argument("glue_top: no sides on the corner object");
    const auto& a = e.analysis();
    const auto& s = a.sides().at(side_id);
    if (!s.open || !s.horizontal || !s.top)
        throw std::invalid_argument("glue_top: side is not an open top side");
    if (u.is_corner()) throw std::invalid_argument("glue_top: cannot glue the corner object");
    if (base_length(u) != s.size)
        throw std::invalid_argument("glue_top: base length of u must equal the side's size");
    return detail::glue_along(e, side_id, u, 0, /*root_from_lower=*/true);
}

// Glue a complete open-base disk `u` under the open bottom side `side_id` of e.
inline RigidQuadMap glue_bottom(const RigidQuadMap& e, int side_id, const RigidQuadMap& u) {
    if (e.is_corner()) throw std::invalid_argument("glue_bottom: no sides on the corner object");
    const auto& a = e.analysis();
    const auto& s = a.sides().at(side_id);
    if (!s.open || !s.horizontal || s.top)
        throw std::invalid_argument("glue_bottom: side is not an open bottom side");
    if (s.size != 1)
        throw std::invalid_argument("glue_bottom: only open bottom sides of size 1 can be glued");
    if (u.is_corner()) throw std::invalid_argument("glue_bottom: cannot glue the corner object");
    if (base_length(u) != -static_cast<Label>(s.length))
        throw std::invalid_argument("glue_bottom: base length of u must equal minus the side's length");
    return detail::glue_along(u, 0, e, side_id, /*root_from_lower=*/false);
}

// ---------------------------------------------------------------------------
// Un-gluing: cut a complete map along the horizontal seam between two split
// points of its boundary, re-creating the open side on the root piece and the
// base of the residual piece, and truncating the upward rays that the gluing
// had extended across the seam.

namespace detail {

struct SeamCut {
    RigidQuadMap rest;     // the piece containing the root
    RigidQuadMap residual; // the piece that was glued on
};

// entry/exit are boundary-orbit half-edges of m whose edges the seam splits;
// residual_above tells whether the residual piece lies above the seam (true
// for re-opened top sides, false for re-opened bottom sides).
inline SeamCut cut_seam(const RigidQuadMap& m, int entry, int exit, bool residual_above) {
    const auto& an = m.analysis();

    // pass 1 (read-only): the face transversal from entry to exit
    std::vector<int> crossings; // in-face halves of the crossed inner edges
    std::vector<char> crossing_up;
    {
        int h = m.opp(entry);
        while (true) {
            const int o = m.face_next(m.face_next(h));
            const bool boundary_edge = an.face_of(o) == an.boundary_face() ||
                                       an.face_of(m.opp(o)) == an.boundary_face();
            if (boundary_edge) {
                if (o != m.opp(exit))
                    throw std::logic_error("cut_seam: transversal does not reach the expected exit");
                break;
            }
            const int ray_id = an.ray_of_edge(o / 2);
            if (ray_id < 0) throw std::logic_error("cut_seam: crossing edge not on a ray");
            crossings.push_back(o);
            crossing_up.push_back(an.rays()[ray_id].direction == RayDirection::Upward ? 1 : 0);
            h = m.opp(o);
        }
    }

    HEStore st(m);

    // pass 2: insert the seam edges
    std::vector<int> seam; // one half per seam edge (org x_{i-1} -> x_i)
    std::vector<std::pair<int, int>> cross_sub;
    {
        auto re = st.split_edge(st.opp[entry]);
        int h = re.n1;
        for (int o : crossings) {
            const auto ro = st.split_edge(o);
            auto [x, y] = st.split_face(h, ro.n1);
            (void)y;
            seam.push_back(x);
            cross_sub.push_back({ro.n1, ro.n2});
            h = ro.n2;
        }
        auto rx = st.split_edge(st.opp[exit]);
        auto [x, y] = st.split_face(h, rx.n1);
        (void)y;
        seam.push_back(x);
    }

    // regions: inner faces flood-filled across non-seam edges
    std::vector<char> is_seam(st.size(), 0);
    for (int x : seam) is_seam[x] = is_seam[st.opp[x]] = 1;
    int num_faces = 0;
    const std::vector<int> face = st.face_ids(num_faces);
    const int outer = face[m.root()];
    std::vector<int> region(num_faces, -1);
    {
        // union-find over faces
        std::vector<int> uf(num_faces);
        for (int i = 0; i < num_faces; ++i) uf[i] = i;
        auto find = [&](int v) {
            while (uf[v] != v) v = uf[v] = uf[uf[v]];
            return v;
        };
        for (int h = 0; h < st.size(); ++h) {
            if (!st.alive[h] || is_seam[h]) continue;
            const int f1 = face[h], f2 = face[st.opp[h]];
            if (f1 == outer || f2 == outer) continue;
            uf[find(f1)] = find(f2);
        }
        int next = 0;
        std::vector<int> name(num_faces, -1);
        for (int f = 0; f < num_faces; ++f) {
            if (f == outer) continue;
            const int r = find(f);
            if (name[r] < 0) name[r] = next++;
            region[f] = name[r];
        }
        if (next != 2) throw std::logic_error("cut_seam: seam does not separate the map in two");
    }
    const int root_region = region[face[st.opp[m.root()]]];
    const int residual_region = 1 - root_region;
    const int above_region = residual_above ? residual_region : root_region;

    // classify extension stubs before rewiring destroys face ids
    std::vector<int> stubs; // the above-piece half of each upward crossing
    for (size_t j = 0; j < crossings.size(); ++j) {
        if (!crossing_up[j]) continue;
        const auto [n1, n2] = cross_sub[j];
        stubs.push_back(region[face[n1]] == above_region ? n1 : n2);
    }

    // the cut: duplicate seam edges, split seam-vertex rotations
    std::vector<int> partner(st.size(), -1);
    std::vector<int> orig_opp(st.size(), -1);
    std::vector<std::vector<int>> vertex_cycles;
    {
        std::vector<char> visited(st.size(), 0);
        for (int x : seam)
            for (int h0 : {x, st.opp[x]}) {
                if (visited[h0]) continue;
                std::vector<int> cyc;
                int g = h0;
                do {
                    visited[g] = 1;
                    cyc.push_back(g);
                    g = st.nxt[g];
                } while (g != h0);
                vertex_cycles.push_back(std::move(cyc));
            }
        for (int x : seam) {
            const int y = st.opp[x];
            orig_opp[x] = y;
            orig_opp[y] = x;
            partner[x] = st.alloc();
            partner[y] = st.alloc();
            st.bmark[partner[x]] = st.bmark[partner[y]] = 1;
        }
        for (int x : seam) {
            const int y = orig_opp[x];
            st.opp[x] = partner[x];
            st.opp[partner[x]] = x;
            st.opp[y] = partner[y];
            st.opp[partner[y]] = y;
        }
        auto region_of_half = [&](int h) {
            const int f = face[h];
            if (f != outer) return region[f];
            return region[face[orig_opp[h] >= 0 ? orig_opp[h] : st.opp[h]]];
        };
        for (const auto& cyc : vertex_cycles) {
            std::array<std::vector<int>, 2> split_cycles;
            for (int h : cyc) {
                if (is_seam[h]) {
                    const int r = region[face[h]];
                    split_cycles[r].push_back(h);
                    split_cycles[1 - r].push_back(partner[orig_opp[h]]);
                } else {
                    split_cycles[region_of_half(h)].push_back(h);
                }
            }
            for (const auto& sc : split_cycles)
                for (size_t i = 0; i < sc.size(); ++i)
                    st.nxt[sc[i]] = sc[(i + 1) % sc.size()];
        }
    }

    // open marks: the rest piece re-gains its open side; an open-base residual
    // (bottom seams) gains its base mark
    for (int x : seam)
        for (int h : {x, orig_opp[x]}) {
            const int r = region[face[h]];
            if (r == root_region || !residual_above) st.omark[partner[h]] = 1;
            if (r == root_region && !residual_above) st.omark[partner[h]] = 1;
        }

    // truncate extended upward rays in the piece above the seam
    for (int stub : stubs) {
        // walk away from the seam collecting the column
        std::vector<int> column{stub};
        std::vector<int> through; // interior vertices, one live half each
        int cur = stub;
        while (true) {
            const int in = st.opp[cur]; // points back toward the column
            bool boundary_vertex = false;
            int g = in;
            do {
                if (st.bmark[g]) boundary_vertex = true;
                g = st.nxt[g];
            } while (g != in);
            if (boundary_vertex) break;
            const int next = st.nxt[st.nxt[in]]; // straight through
            through.push_back(st.nxt[in]);       // a half surviving the removal
            column.push_back(next);
            cur = next;
        }
        const int seam_vertex_half = st.nxt[stub];       // survives at the seam end
        const int far_half = st.nxt[st.opp[column.back()]]; // survives at the far end
        for (int h : column) st.remove_inner_edge(h);
        for (int h : through) st.dissolve_vertex2(h);
        st.dissolve_vertex2(seam_vertex_half);
        st.dissolve_vertex2(far_half);
    }

    // roots: the rest keeps m's root; the residual's root is the start of its
    // partner chain along the re-created base
    SeamCut out;
    {
        std::vector<char> is_res_partner(st.size(), 0);
        std::vector<int> res_partners;
        for (int x : seam)
            for (int h : {x, orig_opp[x]})
                if (region[face[h]] == residual_region && st.alive[partner[h]]) {
                    is_res_partner[partner[h]] = 1;
                    res_partners.push_back(partner[h]);
                }
        if (res_partners.empty()) throw std::logic_error("cut_seam: residual without boundary");
        int root = res_partners.front();
        for (int guard = 0; guard <= static_cast<int>(res_partners.size()); ++guard) {
            const int prev = st.face_prev(root);
            if (!is_res_partner[prev]) break;
            root = prev;
        }
        out.residual = st.finalize_component(root);
        out.rest = st.finalize_component(m.root());
    }
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// find_minimal_submap: locate the unique minimal submap of a complete based
// map via the corner analysis around the base, and un-glue its residuals.

struct Decomposition {
    Signature sig;
    RigidQuadMap left;  // the disk glued at the a position (corner when a = 0)
    RigidQuadMap right; // the disk glued at the b position
};

namespace detail {

struct Nav {
    const RigidQuadMap* m;
    const MapAnalysis* an;
    int B = 0;             // boundary length
    Label p = 0;
    int base_edges = 0;
    int v_far = -1, v_L = -1, v_R = -1;
    std::vector<int> vpos; // boundary position per vertex

    explicit Nav(const RigidQuadMap& map) : m(&map), an(&map.analysis()) {
        B = static_cast<int>(an->boundary().size());
        base_edges = an->sides().at(0).length;
        p = base_length(map);
        v_far = an->org(an->boundary()[base_edges]);
        v_L = an->org(an->boundary()[(base_edges + 1) % B]);
        v_R = an->org(an->boundary()[B - 1]);
        vpos.assign(an->vertex_count(), -1);
        for (int i = 0; i < B; ++i) {
            const int v = an->org(an->boundary()[i]);
            if (vpos[v] < 0) vpos[v] = i;
        }
    }

    CornerKind kind(int v) const { return an->corner_kind(v); }
    int half(int i) const { return an->boundary()[((i % B) + B) % B]; }
    int org_at(int i) const { return an->org(half(i)); }

    const RayInfo& stub_ray(int v) const {
        const int h0 = half(vpos[v]);
        const int stub = inner_stub(*m, h0);
        return an->rays().at(an->ray_of_edge(stub / 2));
    }

    // Count the downward rays crossing `ray` at its interior vertices.
    int down_crossers(const RayInfo& ray) const {
        int count = 0;
        for (size_t i = 1; i < ray.edges.size(); ++i) {
            const int e_prev = ray.edges[i - 1], e_cur = ray.edges[i];
            // shared vertex of the two consecutive edges
            int w = -1;
            for (int h1 : {2 * e_prev, 2 * e_prev + 1})
                for (int h2 : {2 * e_cur, 2 * e_cur + 1})
                    if (an->org(h1) == an->org(h2)) w = an->org(h1);
            int g = an->org(2 * e_cur) == w ? 2 * e_cur : 2 * e_cur + 1;
            const int cross_half = m->nxt(g); // perpendicular edge at w
            const auto& crosser = an->rays().at(an->ray_of_edge(cross_half / 2));
            if (crosser.direction == RayDirection::Downward) ++count;
        }
        return count;
    }

    // Ray through the inner edge continuing a boundary side's line through the
    // concave corner at boundary position `pos` (the side's half at that
    // position must originate there).
    const RayInfo& collinear_ray(int half_at_corner) const {
        const int hr = m->nxt(m->nxt(half_at_corner));
        return an->rays().at(an->ray_of_edge(hr / 2));
    }
};

inline void check_residual(const RigidQuadMap& u, Label expected_base) {
    if (!validate_rigid(u).ok() || !is_complete(u) || !is_based(u))
        throw std::logic_error("find_minimal_submap: residual is not a complete based map");
    if (base_length(u) != expected_base)
        throw std::logic_error("find_minimal_submap: residual has unexpected base length");
}

} // namespace detail

inline Decomposition find_minimal_submap(const RigidQuadMap& m) {
    if (m.is_corner()) throw std::domain_error("find_minimal_submap: base-0 object has no decomposition");
    if (!validate_rigid(m).ok()) throw std::domain_error("find_minimal_submap: map is not rigid");
    if (!is_complete(m) || !is_based(m))
        throw std::domain_error("find_minimal_submap: map must be complete and based");

    using detail::Nav;
    Nav nav(m);
    const Label p = nav.p;
    if (p == 0) throw std::domain_error("find_minimal_submap: base length 0");

    Decomposition out;
    out.left = RigidQuadMap::corner_object();
    out.right = RigidQuadMap::corner_object();
    RigidQuadMap rest = m;

    const CornerKind kL = nav.kind(nav.v_L), kR = nav.kind(nav.v_R);

    if (p > 0) {
        if (kR == CornerKind::Concave) {
            // R-type: backward walk from v_R over the middle side
            int j = nav.B - 2, straights = 0;
            while (nav.kind(nav.org_at(j)) == CornerKind::Straight) {
                ++straights;
                --j;
            }
            const int c = nav.org_at(j);
            Label b, k;
            int w_far = -1;
            if (nav.kind(c) == CornerKind::Convex) {
                b = 0;
                k = straights + 1;
            } else {
                k = straights;
                const auto& hray = nav.collinear_ray(nav.half(j));
                b = -(static_cast<Label>(nav.down_crossers(hray)) + 1);
                w_far = hray.to;
            }
            out.sig = Signature{p, p - b + k - 1, b, k};
            if (!signature_allowed(out.sig)) throw std::logic_error("find_minimal_submap: bad R signature");
            // a-seam: the big top
            const int exit_pos = (b == 0) ? nav.vpos[c] - 1 : nav.vpos[w_far] - 1;
            auto cutA = detail::cut_seam(m, nav.half(nav.base_edges + 1), nav.half(exit_pos), true);
            out.left = cutA.residual;
            rest = cutA.rest;
            if (b < 0) {
                Nav nv(rest);
                int jj = nv.B - 2;
                while (nv.kind(nv.org_at(jj)) == CornerKind::Straight) --jj;
                const int c2 = nv.org_at(jj);
                const auto& hray = nv.collinear_ray(nv.half(jj));
                auto cutB = detail::cut_seam(rest, nv.half(nv.vpos[hray.to]), nv.half(nv.vpos[c2] - 1), false);
                out.right = cutB.residual;
                rest = cutB.rest;
            }
        } else if (kL == CornerKind::Concave) {
            // L-type: forward walk from v_L over the middle side
            int j = nav.base_edges + 2, straights = 0;
            while (nav.kind(nav.org_at(j)) == CornerKind::Straight) {
                ++straights;
                ++j;
            }
            const int c = nav.org_at(j);
            Label a, k;
            int w_far = -1;
            if (nav.kind(c) == CornerKind::Convex) {
                a = 0;
                k = straights + 1;
            } else {
                k = straights;
                const auto& hray = nav.collinear_ray(m.opp(nav.half(j - 1)));
                a = -(static_cast<Label>(nav.down_crossers(hray)) + 1);
                w_far = hray.to;
            }
            out.sig = Signature{p, a, p - a + k - 1, k};
            if (!signature_allowed(out.sig)) throw std::logic_error("find_minimal_submap: bad L signature");
            // b-seam: the big top
            const int entry_pos = (a == 0) ? nav.vpos[c] : nav.vpos[w_far];
            auto cutB = detail::cut_seam(m, nav.half(entry_pos), nav.half(nav.B - 2), true);
            out.right = cutB.residual;
            rest = cutB.rest;
            if (a < 0) {
                Nav nv(rest);
                int jj = nv.base_edges + 2;
                while (nv.kind(nv.org_at(jj)) == CornerKind::Straight) ++jj;
                const int c2 = nv.org_at(jj);
                const auto& hray = nv.collinear_ray(rest.opp(nv.half(jj - 1)));
                auto cutA =
                    detail::cut_seam(rest, nv.half(nv.vpos[c2]), nv.half(nv.vpos[hray.to] - 1), false);
                out.left = cutA.residual;
                rest = cutA.rest;
            }
        } else {
            // G-type
            if (kL == CornerKind::Convex && kR == CornerKind::Convex) {
                out.sig = Signature{p, 0, 0, 0};
                if (p != 1 || !signature_allowed(out.sig))
                    throw std::logic_error("find_minimal_submap: unexpected doubly-convex positive map");
                const auto ref = build_minimal_submap(out.sig);
                if (!(rest == ref.map)) throw std::logic_error("find_minimal_submap: bad terminal map");
                return out;
            }
            Label a = 0, b = 0;
            int c_a = -1, c_b = -1;
            if (kL == CornerKind::Straight) {
                const auto& ray = nav.stub_ray(nav.v_L);
                a = static_cast<Label>(ray.edges.size());
                c_a = ray.from;
            }
            if (kR == CornerKind::Straight) {
                const auto& ray = nav.stub_ray(nav.v_R);
                b = static_cast<Label>(ray.edges.size());
                c_b = ray.from;
            }
            out.sig = Signature{p, a, b, 0};
            if (!signature_allowed(out.sig)) throw std::logic_error("find_minimal_submap: bad G signature");
            if (a > 0) {
                auto cutA = detail::cut_seam(m, nav.half(nav.base_edges + 1), nav.half(nav.vpos[c_a] - 1), true);
                out.left = cutA.residual;
                rest = cutA.rest;
            }
            if (b > 0) {
                Nav nv(rest);
                const auto& ray = nv.stub_ray(nv.v_R);
                const int cb = ray.from;
                auto cutB = detail::cut_seam(rest, nv.half(nv.vpos[cb]), nv.half(nv.B - 2), true);
                out.right = cutB.residual;
                rest = cutB.rest;
            }
            (void)c_b;
        }
    } else {
        // p < 0: open base
        if (kL == CornerKind::Convex && kR == CornerKind::Convex) {
            out.sig = Signature{p, 0, 0, 1 - p};
            const auto ref = build_minimal_submap(out.sig);
            if (!(rest == ref.map)) throw std::logic_error("find_minimal_submap: bad terminal open-base map");
            return out;
        }
        if (kR == CornerKind::Concave) {
            // Rbar: the middle side before v_R is a closed top side; its
            // interior vertices can only be upward ray ends
            int j = nav.B - 2;
            while (nav.kind(nav.org_at(j)) == CornerKind::Straight) {
                if (nav.stub_ray(nav.org_at(j)).direction != RayDirection::Upward)
                    throw std::logic_error("find_minimal_submap: downward ray on an Rbar middle side");
                --j;
            }
            const int z = nav.org_at(j);
            Label b = 0;
            int w_far = -1;
            if (nav.kind(z) == CornerKind::Concave) {
                const auto& hray = nav.collinear_ray(nav.half(j));
                b = static_cast<Label>(nav.down_crossers(hray)) + 1;
                w_far = hray.to;
            }
            out.sig = Signature{p, p - b - 1, b, 0};
            if (!signature_allowed(out.sig)) throw std::logic_error("find_minimal_submap: bad Rbar signature");
            if (b > 0) {
                auto cutB = detail::cut_seam(m, nav.half(nav.vpos[w_far]), nav.half(nav.vpos[z] - 1), true);
                out.right = cutB.residual;
                rest = cutB.rest;
            }
            Nav nv(rest);
            int jj = nv.B - 2;
            while (nv.kind(nv.org_at(jj)) == CornerKind::Straight) --jj;
            const int z2 = nv.org_at(jj);
            int exit_pos;
            if (nv.kind(z2) == CornerKind::Concave) {
                const auto& hray = nv.collinear_ray(nv.half(jj));
                exit_pos = nv.vpos[hray.to] - 1;
            } else {
                exit_pos = nv.vpos[z2] - 1;
            }
            auto cutA = detail::cut_seam(rest, nv.half(nv.vpos[nv.v_L]), nv.half(exit_pos), false);
            out.left = cutA.residual;
            rest = cutA.rest;
        } else if (kL == CornerKind::Concave) {
            // Lbar: the middle side after v_L, skipping upward ray ends
            int j = nav.base_edges + 2;
            while (nav.kind(nav.org_at(j)) == CornerKind::Straight) {
                if (nav.stub_ray(nav.org_at(j)).direction != RayDirection::Upward)
                    throw std::logic_error("find_minimal_submap: downward ray on an Lbar middle side");
                ++j;
            }
            const int z = nav.org_at(j);
            Label a = 0;
            int w_far = -1;
            if (nav.kind(z) == CornerKind::Concave) {
                const auto& hray = nav.collinear_ray(m.opp(nav.half(j - 1)));
                a = static_cast<Label>(nav.down_crossers(hray)) + 1;
                w_far = hray.to;
            }
            out.sig = Signature{p, a, p - a - 1, 0};
            if (!signature_allowed(out.sig)) throw std::logic_error("find_minimal_submap: bad Lbar signature");
            if (a > 0) {
                auto cutA = detail::cut_seam(m, nav.half(nav.vpos[z]), nav.half(nav.vpos[w_far] - 1), true);
                out.left = cutA.residual;
                rest = cutA.rest;
            }
            Nav nv(rest);
            int jj = nv.base_edges + 2;
            while (nv.kind(nv.org_at(jj)) == CornerKind::Straight) ++jj;
            const int z2 = nv.org_at(jj);
            int entry_pos;
            if (nv.kind(z2) == CornerKind::Concave) {
                const auto& hray = nv.collinear_ray(rest.opp(nv.half(jj - 1)));
                entry_pos = nv.vpos[hray.to];
            } else {
                entry_pos = nv.vpos[z2];
            }
            auto cutB = detail::cut_seam(rest, nv.half(entry_pos), nv.half(nv.B - 2), false);
            out.right = cutB.residual;
            rest = cutB.rest;
        } else {
            // Gbar family
            Label a = 0, b = 0, k = 0;
            int c1 = -1, c2 = -1;
            if (kL == CornerKind::Straight) {
                const auto& ray = nav.stub_ray(nav.v_L);
                a = -(static_cast<Label>(nav.down_crossers(ray)) + 1);
                c1 = ray.from;
            }
            if (kR == CornerKind::Straight) {
                const auto& ray = nav.stub_ray(nav.v_R);
                b = -(static_cast<Label>(nav.down_crossers(ray)) + 1);
                c2 = ray.from;
            }
            k = a + b - p + 1;
            out.sig = Signature{p, a, b, k};
            if (!signature_allowed(out.sig)) throw std::logic_error("find_minimal_submap: bad Gbar signature");
            if (a < 0) {
                auto cutA = detail::cut_seam(m, nav.half(nav.vpos[nav.v_L]), nav.half(nav.vpos[c1] - 1), false);
                out.left = cutA.residual;
                rest = cutA.rest;
            }
            if (b < 0) {
                Nav nv(rest);
                const auto& ray = nv.stub_ray(nv.v_R);
                const int cc = ray.from;
                auto cutB = detail::cut_seam(rest, nv.half(nv.vpos[cc]), nv.half(nv.B - 2), false);
                out.right = cutB.residual;
                rest = cutB.rest;
            }
            (void)c2;
        }
    }

    if ((out.sig.a == 0) != out.left.is_corner() || (out.sig.b == 0) != out.right.is_corner())
        throw std::logic_error("find_minimal_submap: residual/corner mismatch");
    if (!out.left.is_corner()) detail::check_residual(out.left, out.sig.a);
    if (!out.right.is_corner()) detail::check_residual(out.right, out.sig.b);
    const auto ref = build_minimal_submap(out.sig);
    if (!(rest == ref.map))
        throw std::logic_error("find_minimal_submap: leftover does not match the minimal submap");
    return out;
}

// ---------------------------------------------------------------------------
// The tree bijection

inline PartitionTree quad_to_h_tree(const RigidQuadMap& m) {
    if (!m.is_corner() && (!validate_rigid(m).ok() || !is_complete(m) || !is_based(m)))
        throw std::domain_error("quad_to_h_tree: map must be a complete based rigid quadrangulation");
    auto rec = [](auto&& self, const RigidQuadMap& q) -> TreeSpec {
        if (q.is_corner()) return TreeSpec(0);
        const Decomposition d = find_minimal_submap(q);
        TreeSpec spec(d.sig.p, self(self, d.left), self(self, d.right));
        return spec;
    };
    PartitionTree t = make_tree(rec(rec, m));
    if (!is_class(t, TreeClass::H)) throw std::logic_error("quad_to_h_tree: output is not an H-tree");
    return t;
}

inline RigidQuadMap h_tree_to_quad(const PartitionTree& h) {
    if (!is_class(h, TreeClass::H)) throw std::domain_error("h_tree_to_quad: input is not an H-tree");
    auto rec = [&](auto&& self, int node) -> RigidQuadMap {
        if (h.is_leaf(node)) return RigidQuadMap::corner_object();
        const Signature sig{h.edge_label(node), h.edge_label(h.left(node)),
                            h.edge_label(h.right(node)), h.vertex_label(node)};
        if (!signature_allowed(sig))
            throw std::logic_error("h_tree_to_quad: H-tree produced a disallowed signature");
        MinimalSubmap sub = build_minimal_submap(sig);
        RigidQuadMap acc = sub.map;
        const RigidQuadMap ua = self(self, h.left(node));
        const RigidQuadMap ub = self(self, h.right(node));
        if (sig.a != 0) {
            acc = sig.a > 0 ? glue_top(acc, sub.a_side, ua) : glue_bottom(acc, sub.a_side, ua);
        }
        if (sig.b != 0) {
            // after the first glue the remaining open non-base side is b's
            int b_side = sub.b_side;
            if (sig.a != 0) {
                b_side = -1;
                const auto& an = acc.analysis();
                for (int s = 0; s < static_cast<int>(an.sides().size()); ++s)
                    if (an.sides()[s].open && !an.sides()[s].is_base) b_side = s;
                if (b_side < 0) throw std::logic_error("h_tree_to_quad: lost the b glue side");
            }
            acc = sig.b > 0 ? glue_top(acc, b_side, ub) : glue_bottom(acc, b_side, ub);
        }
        return acc;
    };
    RigidQuadMap q = rec(rec, 0);
    if (!q.is_corner() && base_length(q) != h.base_length())
        throw std::logic_error("h_tree_to_quad: base length mismatch");
    return q;
}

} // namespace rq
