#pragma once

// Build a half-edge map from a set of unit grid cells (given by their
// lower-left corners). Only valid for overlap-free layouts, which covers all
// minimal submaps and the small fixtures in the tests. Rotations follow the
// library convention: nxt = counterclockwise around the vertex, y up.

#include "rigidquad/map_core.hpp"

#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rq::detail {

struct GridBuilder {
    using Cell = std::pair<int, int>;
    using Pt = std::pair<int, int>;

    std::set<Cell> cells;

    void add_cell(int x, int y) { cells.insert({x, y}); }
    void add_row(int x0, int x1, int y) { // cells with x in [x0, x1)
        for (int x = x0; x < x1; ++x) add_cell(x, y);
    }

    // Directions: 0=E, 1=N, 2=W, 3=S (counterclockwise).
    static Pt step(Pt p, int dir) {
        switch (dir & 3) {
            case 0: return {p.first + 1, p.second};
            case 1: return {p.first, p.second + 1};
            case 2: return {p.first - 1, p.second};
            default: return {p.first, p.second - 1};
        }
    }

    bool has_cell(int x, int y) const { return cells.count({x, y}) > 0; }

    bool edge_exists(Pt a, int dir) const {
        const Pt b = step(a, dir);
        const int x = std::min(a.first, b.first), y = std::min(a.second, b.second);
        if (a.second == b.second) // horizontal edge (x,y)-(x+1,y)
            return has_cell(x, y) || has_cell(x, y - 1);
        return has_cell(x, y) || has_cell(x - 1, y); // vertical edge
    }

    struct Built {
        RigidQuadMap map;
        // half-edge id of (a -> a+dir); keyed for mark placement
        std::map<std::pair<Pt, int>, int> half_at;
    };

    // root_at/root_dir: origin vertex and direction of the root half-edge.
    // open_edges: one representative (point, dir) per open side; the whole
    // side containing it is marked open.
    Built build(Pt root_at, int root_dir, const std::vector<std::pair<Pt, int>>& open_edges) const {
        if (cells.empty()) throw std::invalid_argument("grid builder: no cells");
        std::map<std::pair<Pt, int>, int> half_at;
        std::vector<int> opp, nxt;
        std::vector<Pt> org_pt;
        std::vector<int> dir_of;
        auto ensure_half = [&](Pt a, int dir) {
            auto it = half_at.find({a, dir});
            if (it != half_at.end()) return it->second;
            const int h = static_cast<int>(opp.size());
            const int g = h + 1;
            const Pt b = step(a, dir);
            opp.push_back(g);
            opp.push_back(h);
            nxt.push_back(-1);
            nxt.push_back(-1);
            org_pt.push_back(a);
            org_pt.push_back(b);
            dir_of.push_back(dir);
            dir_of.push_back((dir + 2) & 3);
            half_at[{a, dir}] = h;
            half_at[{b, (dir + 2) & 3}] = g;
            return h;
        };
        // collect vertices
        std::set<Pt> verts;
        for (const auto& c : cells) {
            verts.insert(c);
            verts.insert({c.first + 1, c.second});
            verts.insert({c.first, c.second + 1});
            verts.insert({c.first + 1, c.second + 1});
        }
        for (const Pt& v : verts)
            for (int d = 0; d < 4; ++d)
                if (edge_exists(v, d)) ensure_half(v, d);
        // rotations: counterclockwise = increasing direction index
        for (const Pt& v : verts) {
            std::vector<int> out;
            for (int d = 0; d < 4; ++d) {
                auto it = half_at.find({v, d});
                if (it != half_at.end()) out.push_back(it->second);
            }
            for (size_t i = 0; i < out.size(); ++i) nxt[out[i]] = out[(i + 1) % out.size()];
        }
        auto it = half_at.find({root_at, root_dir});
        if (it == half_at.end()) throw std::invalid_argument("grid builder: root edge absent");
        const int root = it->second;

        RigidQuadMap m0 = RigidQuadMap::from_data(opp, nxt, root, {});
        // mark open sides through the analysis of the unmarked map
        const auto& a = m0.analysis();
        std::vector<char> marks(opp.size(), 0);
        for (const auto& [pt, dir] : open_edges) {
            auto hit = half_at.find({pt, dir});
            if (hit == half_at.end()) throw std::invalid_argument("grid builder: open edge absent");
            int h = hit->second;
            int bi = a.boundary_index(h);
            if (bi < 0) {
                h = opp[h];
                bi = a.boundary_index(h);
            }
            if (bi < 0) throw std::invalid_argument("grid builder: open edge not on the boundary");
            const int side = a.side_of_boundary_index(bi);
            const auto& s = a.sides()[side];
            for (int i = 0; i < s.length; ++i) marks[a.boundary()[s.first + i]] = 1;
        }
        Built out{RigidQuadMap::from_data(std::move(opp), std::move(nxt), root, std::move(marks)),
                  std::move(half_at)};
        return out;
    }
};

} // namespace rq::detail
