#pragma once

// Mutable half-edge store used by the gluing and un-gluing surgeries.
// Half-edge ids of the source map are preserved on import; surgery allocates
// fresh ids and marks dead ones, and finalize() compacts into a RigidQuadMap.

#include "rigidquad/map_core.hpp"

#include <stdexcept>
#include <vector>

namespace rq::detail {

struct SplitEdge {
    int n1; // new half continuing the split half's direction (org = new vertex)
    int n2; // new half pointing back along the split half (org = new vertex)
};

struct HEStore {
    std::vector<int> opp, nxt;
    std::vector<char> alive;
    std::vector<char> bmark; // set on the half bordering the outer face
    std::vector<char> omark; // open-side mark (carried on boundary halves)
    int root = -1;

    HEStore() = default;
    explicit HEStore(const RigidQuadMap& m) {
        const int H = m.half_edge_count();
        opp.resize(H);
        nxt.resize(H);
        alive.assign(H, 1);
        bmark.assign(H, 0);
        omark.assign(H, 0);
        for (int h = 0; h < H; ++h) {
            opp[h] = m.opp(h);
            nxt[h] = m.nxt(h);
            omark[h] = m.open_half(h) ? 1 : 0;
        }
        root = m.root();
        int h = root;
        do {
            bmark[h] = 1;
            h = face_next(h);
        } while (h != root);
    }

    int size() const { return static_cast<int>(opp.size()); }
    int face_next(int h) const { return nxt[opp[h]]; }
    bool is_boundary_edge(int h) const { return bmark[h] || bmark[opp[h]]; }

    int alloc() {
        opp.push_back(-1);
        nxt.push_back(-1);
        alive.push_back(1);
        bmark.push_back(0);
        omark.push_back(0);
        return size() - 1;
    }

    void kill(int h) { alive[h] = 0; }

    int sigma_prev(int h) const {
        int g = h;
        while (nxt[g] != h) g = nxt[g];
        return g;
    }
    int face_prev(int h) const { return opp[sigma_prev(h)]; }

    int vertex_degree(int h) const {
        int d = 0, g = h;
        do {
            ++d;
            g = nxt[g];
        } while (g != h);
        return d;
    }

    // Split the edge of `f` at a new vertex w; f keeps its origin and now ends
    // at w. Inherits boundary/open marks onto the matching new halves.
    SplitEdge split_edge(int f) {
        const int g = opp[f];
        const int n1 = alloc(), n2 = alloc();
        opp[f] = n2;
        opp[n2] = f;
        opp[n1] = g;
        opp[g] = n1;
        nxt[n1] = n2;
        nxt[n2] = n1;
        if (bmark[f]) bmark[n1] = 1;
        if (bmark[g]) bmark[n2] = 1;
        if (omark[f]) omark[n1] = 1;
        if (omark[g]) omark[n2] = 1;
        return {n1, n2};
    }

    // Insert an edge between org(hA) and org(hB), splitting their common
    // face. Returns {x, y}: x runs org(hA) -> org(hB). The face containing hB
    // after the split is the orbit of x.
    std::pair<int, int> split_face(int hA, int hB) {
        const int pA = face_prev(hA), pB = face_prev(hB);
        const int x = alloc(), y = alloc();
        opp[x] = y;
        opp[y] = x;
        nxt[opp[pA]] = x;
        nxt[x] = hA;
        nxt[opp[pB]] = y;
        nxt[y] = hB;
        return {x, y};
    }

    // Remove an inner edge, merging the two faces on its sides.
    void remove_inner_edge(int h) {
        const int g = opp[h];
        const int ph = sigma_prev(h), pg = sigma_prev(g);
        if (ph == h || pg == g) throw std::logic_error("remove_inner_edge: degree-1 endpoint");
        nxt[ph] = nxt[h];
        nxt[pg] = nxt[g];
        kill(h);
        kill(g);
    }

    // Merge the two edges at a degree-2 vertex (h outgoing from it).
    void dissolve_vertex2(int h) {
        const int h2 = nxt[h];
        if (h2 == h || nxt[h2] != h) throw std::logic_error("dissolve_vertex2: vertex degree != 2");
        const int f = opp[h], g = opp[h2];
        opp[f] = g;
        opp[g] = f;
        kill(h);
        kill(h2);
    }

    // Faces of the current store (orbits of face_next over live halves).
    std::vector<int> face_ids(int& num_faces) const {
        std::vector<int> face(size(), -1);
        num_faces = 0;
        for (int h = 0; h < size(); ++h) {
            if (!alive[h] || face[h] >= 0) continue;
            int g = h;
            do {
                face[g] = num_faces;
                g = face_next(g);
            } while (g != h);
            ++num_faces;
        }
        return face;
    }

    // The live half-edges connected to `h` via opp/nxt.
    std::vector<char> component_of(int h) const {
        std::vector<char> in(size(), 0);
        std::vector<int> stack{h};
        in[h] = 1;
        while (!stack.empty()) {
            int g = stack.back();
            stack.pop_back();
            for (int u : {opp[g], nxt[g]})
                if (alive[u] && !in[u]) {
                    in[u] = 1;
                    stack.push_back(u);
                }
        }
        return in;
    }

    // Compact the component of `root_half` into a RigidQuadMap; opposite
    // halves stay adjacent (2e, 2e+1) so edge ids remain half/2.
    RigidQuadMap finalize_component(int root_half) const {
        const std::vector<char> in = component_of(root_half);
        std::vector<int> newindex(size(), -1);
        int slot = 0;
        for (int h = 0; h < size(); ++h) {
            if (!in[h] || newindex[h] >= 0) continue;
            newindex[h] = slot++;
            newindex[opp[h]] = slot++;
        }
        std::vector<int> o(slot), n(slot);
        std::vector<char> om(slot, 0);
        for (int h = 0; h < size(); ++h) {
            if (!in[h]) continue;
            o[newindex[h]] = newindex[opp[h]];
            n[newindex[h]] = newindex[nxt[h]];
            om[newindex[h]] = omark[h];
        }
        return RigidQuadMap::from_data(std::move(o), std::move(n), newindex[root_half], std::move(om));
    }

    RigidQuadMap finalize(int root_half) const { return finalize_component(root_half); }
};

} // namespace rq::detail
