#pragma once

// Rigid quadrangulations of the disk as rooted combinatorial maps.
//
// Representation: half-edge arrays. opp is the edge involution, nxt the
// rotation (next outgoing half-edge counterclockwise around the origin
// vertex, in an internal y-up drawing). Faces are the orbits of
// face_next(h) = nxt[opp[h]], i.e. the face on the right of h; the root face
// (the boundary) is the orbit of the root half-edge. Walking that orbit from
// the root enumerates the sides of the disk starting with the base.
//
// The base-0 rigid quadrangulation ("a single convex corner") is a special
// variant value with no half-edges at all.

#include "rigidquad/tree_core.hpp" // Label, ValidationReport

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace rq {

enum class CornerKind { Convex, Straight, Concave };

struct SideInfo {
    int first = 0;       // index into the boundary orbit of the side's first edge
    int length = 0;      // number of boundary edges
    bool horizontal = false;
    bool top = false;    // meaningful when horizontal
    bool is_base = false;
    bool open = false;
    int size = 0;        // open sides: rays starting there + 1
};

enum class RayKind { Closed, Open, Invalid };
enum class RayDirection { Downward, Upward, Horizontal };

struct RayInfo {
    std::vector<int> edges;   // edge ids (= half/2), ordered from `from` to `to`
    int from = -1, to = -1;   // boundary vertex ids, oriented start -> end
    RayKind kind = RayKind::Invalid;
    RayDirection direction = RayDirection::Horizontal;
};

struct CornerCensus {
    int convex = 0, concave = 0, straight = 0;
    int n = 0; // convex corners not incident to the base
};

class MapAnalysis; // fwd

class RigidQuadMap {
  public:
    RigidQuadMap() = default; // base-0 corner object

    static RigidQuadMap corner_object() { return RigidQuadMap(); }

    static RigidQuadMap from_data(std::vector<int> opp, std::vector<int> nxt, int root,
                                  std::vector<char> open_half_marks) {
        RigidQuadMap m;
        m.opp_ = std::move(opp);
        m.nxt_ = std::move(nxt);
        m.root_ = root;
        m.open_ = std::move(open_half_marks);
        if (m.open_.empty()) m.open_.assign(m.opp_.size(), 0);
        m.check_structure();
        return m;
    }

    bool is_corner() const { return root_ < 0; }
    int half_edge_count() const { return static_cast<int>(opp_.size()); }
    int edge_count() const { return half_edge_count() / 2; }
    int opp(int h) const { return opp_.at(h); }
    int nxt(int h) const { return nxt_.at(h); }
    int face_next(int h) const { return nxt_[opp_[h]]; }
    int root() const { return root_; }
    bool open_half(int h) const { return open_.at(h) != 0; }
    const std::vector<char>& open_halves() const { return open_; }

    const MapAnalysis& analysis() const;

    // Rooted-map canonical form: BFS relabeling from the root over (opp, nxt).
    std::vector<int> canonical_key() const {
        if (is_corner()) return {-1};
        const int H = half_edge_count();
        std::vector<int> label(H, -1);
        std::vector<int> order;
        order.reserve(H);
        label[root_] = 0;
        order.push_back(root_);
        for (int i = 0; i < static_cast<int>(order.size()); ++i) {
            const int h = order[i];
            for (int g : {opp_[h], nxt_[h]})
                if (label[g] < 0) {
                    label[g] = static_cast<int>(order.size());
                    order.push_back(g);
                }
        }
        std::vector<int> key;
        key.reserve(3 * H + 1);
        key.push_back(H);
        for (int i = 0; i < H; ++i) key.push_back(label[opp_[order[i]]]);
        for (int i = 0; i < H; ++i) key.push_back(label[nxt_[order[i]]]);
        for (int i = 0; i < H; ++i) key.push_back(open_[order[i]] ? 1 : 0);
        return key;
    }

    friend bool operator==(const RigidQuadMap& a, const RigidQuadMap& b) {
        if (a.is_corner() || b.is_corner()) return a.is_corner() && b.is_corner();
        return a.canonical_key() == b.canonical_key();
    }

  private:
    void check_structure() const {
        const int H = half_edge_count();
        if (H == 0 || H % 2 != 0) throw std::invalid_argument("map: bad half-edge count");
        if (root_ < 0 || root_ >= H) throw std::invalid_argument("map: root out of range");
        if (static_cast<int>(nxt_.size()) != H || static_cast<int>(open_.size()) != H)
            throw std::invalid_argument("map: inconsistent array sizes");
        std::vector<char> seen(H, 0);
        for (int h = 0; h < H; ++h) {
            if (opp_[h] < 0 || opp_[h] >= H || opp_[opp_[h]] != h || opp_[h] == h)
                throw std::invalid_argument("map: opposite is not a fixed-point-free involution");
            if (nxt_[h] < 0 || nxt_[h] >= H) throw std::invalid_argument("map: next out of range");
            seen[nxt_[h]]++;
        }
        for (int h = 0; h < H; ++h)
            if (seen[h] != 1) throw std::invalid_argument("map: next is not a permutation");
        // connectivity over opp and nxt
        std::vector<char> vis(H, 0);
        std::vector<int> stack{0};
        vis[0] = 1;
        int count = 0;
        while (!stack.empty()) {
            int h = stack.back();
            stack.pop_back();
            ++count;
            for (int g : {opp_[h], nxt_[h]})
                if (!vis[g]) {
                    vis[g] = 1;
                    stack.push_back(g);
                }
        }
        if (count != H) throw std::invalid_argument("map: disconnected");
        // genus 0: V - E + F = 2
        auto orbit_count = [H](auto next_fn) {
            std::vector<char> done(H, 0);
            int c = 0;
            for (int h = 0; h < H; ++h) {
                if (done[h]) continue;
                ++c;
                int g = h;
                do {
                    done[g] = 1;
                    g = next_fn(g);
                } while (g != h);
            }
            return c;
        };
        const int V = orbit_count([this](int h) { return nxt_[h]; });
        const int F = orbit_count([this](int h) { return nxt_[opp_[h]]; });
        if (V - H / 2 + F != 2) throw std::invalid_argument("map: not planar (Euler characteristic)");
    }

    std::vector<int> opp_, nxt_;
    int root_ = -1;
    std::vector<char> open_;
    mutable std::shared_ptr<const MapAnalysis> analysis_;
};

// ---------------------------------------------------------------------------
// Full structural analysis of a map: vertices, faces, boundary, corners,
// sides, rays, and the rigidity report.

class MapAnalysis {
  public:
    explicit MapAnalysis(const RigidQuadMap& m) : m_(&m) {
        if (m.is_corner()) return;
        build_orbits();
        build_boundary();
        classify_corners();
        build_sides();
        if (flat_enough_for_rays()) build_rays();
        finish_report();
    }

    // --- vertices / faces ---
    int org(int h) const { return org_.at(h); }
    int vertex_count() const { return num_vertices_; }
    int face_of(int h) const { return face_.at(h); }
    int face_count() const { return num_faces_; }
    int boundary_face() const { return boundary_face_; }
    int inner_face_count() const { return num_faces_ - 1; }
    int degree(int v) const { return vdeg_.at(v); }
    bool on_boundary(int v) const { return on_boundary_.at(v) != 0; }

    const std::vector<int>& boundary() const { return boundary_; } // orbit halves, root first
    CornerKind corner_kind(int v) const {
        switch (vdeg_.at(v)) {
            case 2: return CornerKind::Convex;
            case 3: return CornerKind::Straight;
            default: return CornerKind::Concave; // degree 4 on the boundary
        }
    }
    bool is_corner_vertex(int v) const { return on_boundary(v) && vdeg_[v] != 3; }

    const std::vector<SideInfo>& sides() const { return sides_; }
    int side_of_boundary_index(int i) const { return side_of_.at(i); }
    const std::vector<RayInfo>& rays() const { return rays_; }
    int ray_of_edge(int e) const { return ray_of_edge_.at(e); }

    const ValidationReport& report() const { return report_; }

    // boundary index of a boundary orbit half (-1 if not on the orbit)
    int boundary_index(int h) const { return bindex_.at(h); }

  private:
    void build_orbits() {
        const int H = m_->half_edge_count();
        org_.assign(H, -1);
        num_vertices_ = 0;
        for (int h = 0; h < H; ++h) {
            if (org_[h] >= 0) continue;
            int g = h;
            do {
                org_[g] = num_vertices_;
                g = m_->nxt(g);
            } while (g != h);
            ++num_vertices_;
        }
        vdeg_.assign(num_vertices_, 0);
        for (int h = 0; h < H; ++h) vdeg_[org_[h]]++;

        face_.assign(H, -1);
        num_faces_ = 0;
        for (int h = 0; h < H; ++h) {
            if (face_[h] >= 0) continue;
            int g = h;
            do {
                face_[g] = num_faces_;
                g = m_->face_next(g);
            } while (g != h);
            ++num_faces_;
        }
        boundary_face_ = face_[m_->root()];
    }

    void build_boundary() {
        const int H = m_->half_edge_count();
        bindex_.assign(H, -1);
        int h = m_->root();
        do {
            bindex_[h] = static_cast<int>(boundary_.size());
            boundary_.push_back(h);
            h = m_->face_next(h);
        } while (h != m_->root());
        on_boundary_.assign(num_vertices_, 0);
        for (int g : boundary_) on_boundary_[org_[g]] = 1;
    }

    void classify_corners() {
        for (int i = 0; i < static_cast<int>(boundary_.size()); ++i) {
            const int v = org_[boundary_[i]];
            if (vdeg_[v] != 3) corner_positions_.push_back(i);
        }
    }

    void build_sides() {
        const int B = static_cast<int>(boundary_.size());
        side_of_.assign(B, -1);
        if (corner_positions_.empty() || corner_positions_.front() != 0) {
            // Root not at a corner: one big pseudo-side so the validator can
            // still report; side semantics presume a based map.
            SideInfo s;
            s.first = 0;
            s.length = B;
            s.is_base = true;
            sides_.push_back(s);
            for (int i = 0; i < B; ++i) side_of_[i] = 0;
        } else {
            const int C = static_cast<int>(corner_positions_.size());
            const bool open_base = base_open_mark();
            int turning = 0; // +1 per convex, -1 per concave, walking from the root
            for (int c = 0; c < C; ++c) {
                if (c > 0) {
                    const int cv = org_[boundary_[corner_positions_[c]]];
                    turning += vdeg_[cv] == 2 ? 1 : -1;
                }
                const int begin = corner_positions_[c];
                const int end = (c + 1 < C) ? corner_positions_[c + 1] : B;
                SideInfo s;
                s.first = begin;
                s.length = end - begin;
                s.is_base = (c == 0);
                s.horizontal = (c % 2 == 0); // even number of corners from the root
                if (s.horizontal) {
                    const int r = ((turning % 4) + 4) % 4;
                    // Closed base: bottom iff turning ≡ 0 (mod 4). An open
                    // base is itself a top side, which flips the rule.
                    s.top = open_base ? (r == 0) : (r == 2);
                }
                for (int i = begin; i < end; ++i) side_of_[i] = static_cast<int>(sides_.size());
                sides_.push_back(s);
            }
        }
        for (int i = 0; i < B; ++i)
            if (m_->open_half(boundary_[i])) sides_[side_of_[i]].open = true;
        side_of_vertex_.assign(num_vertices_, -1);
        for (int i = 0; i < B; ++i) {
            const int v = org_[boundary_[i]];
            if (vdeg_[v] == 3) side_of_vertex_[v] = side_of_[i];
        }
    }

    bool base_open_mark() const { return m_->open_half(boundary_[0]); }

    bool flat_enough_for_rays() const {
        for (int v = 0; v < num_vertices_; ++v) {
            if (!on_boundary_[v] && vdeg_[v] != 4) return false;
            if (on_boundary_[v] && (vdeg_[v] < 2 || vdeg_[v] > 4)) return false;
        }
        return true;
    }

    // Straight continuation through a flat inner vertex: two rotation steps.
    int straight_through(int h_into) const {
        const int back = m_->opp(h_into); // outgoing from the vertex, reversed
        return m_->nxt(m_->nxt(back));
    }

    void build_rays() {
        const int H = m_->half_edge_count();
        ray_of_edge_.assign(H / 2, -1);
        for (int h = 0; h < H; ++h) {
            if (face_[h] == boundary_face_ || face_[m_->opp(h)] == boundary_face_) continue; // boundary edge
            if (!on_boundary_[org_[h]]) continue;      // start tracing at boundary vertices
            if (ray_of_edge_[h / 2] >= 0) continue;
            RayInfo ray;
            ray.from = org_[h];
            int cur = h;
            while (true) {
                ray.edges.push_back(cur / 2);
                ray_of_edge_[cur / 2] = static_cast<int>(rays_.size());
                const int head = org_[m_->opp(cur)];
                if (on_boundary_[head]) {
                    ray.to = head;
                    break;
                }
                cur = straight_through(cur);
            }
            rays_.push_back(std::move(ray));
        }
        for (auto& ray : rays_) type_ray(ray);
    }

    void type_ray(RayInfo& ray) {
        const CornerKind kf = corner_kind(ray.from);
        const CornerKind kt = corner_kind(ray.to);
        if (kf == CornerKind::Concave && kt == CornerKind::Concave) {
            ray.kind = RayKind::Invalid;
            report_.violations.push_back({"ray with two concave-corner endpoints", ray.edges.front()});
            return;
        }
        if (kf == CornerKind::Concave || kt == CornerKind::Concave) {
            if (kt == CornerKind::Concave) flip(ray); // orient concave -> straight
            ray.kind = RayKind::Closed;
        } else {
            // open: must start on an open side; oriented downward (from the
            // open top side) when both ends allow it
            const int sf = side_of_vertex_[ray.from];
            const int st = side_of_vertex_[ray.to];
            auto open_side = [&](int s) { return s >= 0 && sides_[s].open; };
            auto open_top = [&](int s) { return open_side(s) && sides_[s].horizontal && sides_[s].top; };
            if (open_top(sf)) {
            } else if (open_top(st)) {
                flip(ray);
            } else if (open_side(sf)) {
            } else if (open_side(st)) {
                flip(ray);
            } else {
                ray.kind = RayKind::Invalid;
                report_.violations.push_back({"open ray does not start on an open side", ray.edges.front()});
                return;
            }
            ray.kind = RayKind::Open;
        }
        // direction from the side the ray *ends* on
        const int s_end = side_of_vertex_[ray.to];
        if (s_end >= 0 && sides_[s_end].horizontal)
            ray.direction = sides_[s_end].top ? RayDirection::Upward : RayDirection::Downward;
        else
            ray.direction = RayDirection::Horizontal;
    }

    static void flip(RayInfo& ray) {
        std::swap(ray.from, ray.to);
        std::reverse(ray.edges.begin(), ray.edges.end());
    }

    void finish_report();

  public:
    // Side id a straight boundary vertex lies on (-1 for corners/inner).
    int side_of_vertex(int v) const { return side_of_vertex_.at(v); }

  private:

    const RigidQuadMap* m_;
    std::vector<int> org_, face_, vdeg_;
    std::vector<char> on_boundary_;
    int num_vertices_ = 0, num_faces_ = 0, boundary_face_ = -1;
    std::vector<int> boundary_, bindex_;
    std::vector<int> corner_positions_;
    std::vector<SideInfo> sides_;
    std::vector<int> side_of_, side_of_vertex_;
    std::vector<RayInfo> rays_;
    std::vector<int> ray_of_edge_;
    ValidationReport report_;

    friend class RigidQuadMap;
};

inline const MapAnalysis& RigidQuadMap::analysis() const {
    if (!analysis_) analysis_ = std::make_shared<const MapAnalysis>(*this);
    return *analysis_;
}

inline void MapAnalysis::finish_report() {
    // simplicity of the root face
    {
        std::vector<char> seen(num_vertices_, 0);
        for (int h : boundary_) {
            if (seen[org_[h]]) {
                report_.violations.push_back({"root face is not simple", org_[h]});
                break;
            }
            seen[org_[h]] = 1;
        }
    }
    for (int v = 0; v < num_vertices_; ++v) {
        if (!on_boundary_[v] && vdeg_[v] != 4)
            report_.violations.push_back({"inner vertex of degree != 4", v});
        if (on_boundary_[v] && vdeg_[v] > 4)
            report_.violations.push_back({"boundary vertex of degree > 4", v});
        if (vdeg_[v] < 2) report_.violations.push_back({"vertex of degree < 2", v});
    }
    if (vdeg_[org_[m_->root()]] != 2)
        report_.violations.push_back({"root edge does not start at a convex corner", org_[m_->root()]});
    if (rays_.empty() && !flat_enough_for_rays())
        report_.violations.push_back({"rays untraceable (degree conditions violated)", -1});

    // open sides: horizontal, between convex corners, consistently marked
    const int B = static_cast<int>(boundary_.size());
    for (int s = 0; s < static_cast<int>(sides_.size()); ++s) {
        if (!sides_[s].open) continue;
        if (!sides_[s].horizontal)
            report_.violations.push_back({"open side is not horizontal", s});
        const int begin = sides_[s].first;
        const int end_vertex = org_[boundary_[(begin + sides_[s].length) % B]];
        const int begin_vertex = org_[boundary_[begin]];
        if (vdeg_[begin_vertex] != 2 || vdeg_[end_vertex] != 2)
            report_.violations.push_back({"open side is not between two convex corners", s});
        for (int i = 0; i < sides_[s].length; ++i)
            if (!m_->open_half(boundary_[begin + i]))
                report_.violations.push_back({"open side is partially marked", s});
    }
    // inner edges must be partitioned by the rays
    if (!rays_.empty() || flat_enough_for_rays()) {
        for (int e = 0; e < m_->edge_count(); ++e) {
            const int h = 2 * e;
            const bool boundary_edge =
                face_[h] == boundary_face_ || face_[m_->opp(h)] == boundary_face_;
            if (!boundary_edge && ray_of_edge_[e] < 0)
                report_.violations.push_back({"inner edge not covered by any ray", e});
        }
    }
    // open side sizes (rays starting there + 1)
    for (auto& s : sides_)
        if (s.open) s.size = 1;
    for (const auto& ray : rays_) {
        if (ray.kind != RayKind::Open) continue;
        const int s = side_of_vertex_[ray.from];
        if (s >= 0 && sides_[s].open) sides_[s].size += 1;
    }
}

// ---------------------------------------------------------------------------
// Spec-level operations

inline ValidationReport validate_rigid(const RigidQuadMap& m) {
    if (m.is_corner()) return {}; // ok by convention
    return m.analysis().report();
}

inline bool is_rigid(const RigidQuadMap& m) { return validate_rigid(m).ok(); }

// True when the only open side (if any) is the base.
inline bool is_complete(const RigidQuadMap& m) {
    if (m.is_corner()) return true;
    const auto& a = m.analysis();
    for (const auto& s : a.sides())
        if (s.open && !s.is_base) return false;
    return true;
}

// A based map: the base starts and ends at convex corners.
inline bool is_based(const RigidQuadMap& m) {
    if (m.is_corner()) return true;
    const auto& a = m.analysis();
    if (a.sides().empty()) return false;
    const auto& base = a.sides().front();
    if (!base.is_base) return false;
    const int B = static_cast<int>(a.boundary().size());
    const int far_vertex = a.org(a.boundary()[(base.first + base.length) % B]);
    return a.corner_kind(a.org(a.boundary()[0])) == CornerKind::Convex &&
           a.corner_kind(far_vertex) == CornerKind::Convex;
}

inline std::vector<RayInfo> trace_rays(const RigidQuadMap& m) {
    if (m.is_corner()) return {};
    return m.analysis().rays();
}

inline Label base_length(const RigidQuadMap& m) {
    if (m.is_corner()) return 0;
    if (!is_based(m)) throw std::domain_error("base_length: base not delimited by convex corners");
    const auto& a = m.analysis();
    const auto& base = a.sides().front();
    if (base.open) return -static_cast<Label>(base.size);
    return base.length;
}

inline CornerCensus corner_census(const RigidQuadMap& m) {
    CornerCensus c;
    if (m.is_corner()) {
        c.convex = 1;
        c.n = 1;
        return c;
    }
    const auto& a = m.analysis();
    std::vector<char> on_base(a.vertex_count(), 0);
    const auto& base = a.sides().front();
    for (int i = 0; i <= base.length; ++i)
        on_base[a.org(a.boundary()[(base.first + i) % a.boundary().size()])] = 1;
    std::vector<char> seen(a.vertex_count(), 0);
    for (int h : a.boundary()) {
        const int v = a.org(h);
        if (seen[v]) continue;
        seen[v] = 1;
        switch (a.corner_kind(v)) {
            case CornerKind::Convex:
                ++c.convex;
                if (!on_base[v]) ++c.n;
                break;
            case CornerKind::Concave: ++c.concave; break;
            case CornerKind::Straight: ++c.straight; break;
        }
    }
    return c;
}

// Total turning of the boundary contour in quarter-turns; +4 for every disk.
inline int turning_number(const RigidQuadMap& m) {
    if (m.is_corner()) return 4;
    const auto& a = m.analysis();
    int t = 0;
    std::vector<char> seen(a.vertex_count(), 0);
    for (int h : a.boundary()) {
        const int v = a.org(h);
        if (seen[v]) continue;
        seen[v] = 1;
        if (a.corner_kind(v) == CornerKind::Convex) ++t;
        if (a.corner_kind(v) == CornerKind::Concave) --t;
    }
    return t;
}

} // namespace rq
