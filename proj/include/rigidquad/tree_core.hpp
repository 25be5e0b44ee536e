#pragma once

// Partition trees: rooted binary plane trees whose edges carry integer labels
// f_E and whose internal vertices carry the derived excess
//     f_V(v) = f_E(v_left) + f_E(v_right) - f_E(v_parent) + 1,
// together with the H / pre-Q / Q label classes, their path systems, and the
// label-shift bijections between them (psi, psi_hat_p, and the phi
// decomposition of a pre-Q-tree into a Q-tree core plus base-0 fragments).

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rq {

using Label = std::int64_t;

enum class TreeClass { Partition, H, PreQ, Q, WellBasedQ };

inline const char* tree_class_name(TreeClass c) {
    switch (c) {
        case TreeClass::Partition: return "partition";
        case TreeClass::H: return "h";
        case TreeClass::PreQ: return "preq";
        case TreeClass::Q: return "q";
        case TreeClass::WellBasedQ: return "wellbasedq";
    }
    return "?";
}

inline TreeClass tree_class_from_name(const std::string& s) {
    if (s == "partition") return TreeClass::Partition;
    if (s == "h") return TreeClass::H;
    if (s == "preq") return TreeClass::PreQ;
    if (s == "q") return TreeClass::Q;
    if (s == "wellbasedq") return TreeClass::WellBasedQ;
    throw std::invalid_argument("unknown tree class: " + s);
}

// Nodes in preorder; node 0 is the child endpoint of the root edge e0 (the
// root vertex v0 itself has degree 1 and is implicit). Every edge is
// identified with its child endpoint, so edge_label[i] = f_E(edge above i)
// and edge_label[0] = f_E(e0) = base length. Values are immutable after
// construction; all operations below are pure.
class PartitionTree {
  public:
    PartitionTree() = default;

    // shape[i]: left/right child indices, -1 for leaves. Must be a valid
    // preorder layout (left subtree contiguous, then right subtree).
    static PartitionTree from_structure(std::vector<int> left, std::vector<int> right,
                                        std::vector<Label> edge_labels) {
        PartitionTree t;
        t.left_ = std::move(left);
        t.right_ = std::move(right);
        t.edge_ = std::move(edge_labels);
        t.check_shape();
        return t;
    }

    int size() const { return static_cast<int>(left_.size()); }
    bool is_leaf(int v) const { return left_[v] < 0; }
    int left(int v) const { return left_[v]; }
    int right(int v) const { return right_[v]; }
    Label edge_label(int v) const { return edge_[v]; }
    const std::vector<Label>& edge_labels() const { return edge_; }

    Label base_length() const { return edge_[0]; }

    int degree() const {
        int n = 0;
        for (int v = 0; v < size(); ++v) n += is_leaf(v);
        return n;
    }

    // f_V from (P.1); meaningful at internal nodes only.
    Label vertex_label(int v) const {
        if (is_leaf(v)) return 0;
        return edge_[left_[v]] + edge_[right_[v]] - edge_[v] + 1;
    }

    // Number of nodes in the subtree rooted at v (contiguous in preorder).
    int subtree_size(int v) const {
        int end = v, need = 1;
        while (need > 0) {
            need += is_leaf(end) ? -1 : 1; // an internal node opens one more slot
            ++end;
        }
        return end - v;
    }

    int parent(int v) const {
        ensure_parents();
        return parents_[v];
    }

    std::string shape_string() const {
        std::string s;
        s.reserve(size());
        for (int v = 0; v < size(); ++v) s.push_back(is_leaf(v) ? '0' : '1');
        return s;
    }

    std::vector<int> leaves() const {
        std::vector<int> out;
        for (int v = 0; v < size(); ++v)
            if (is_leaf(v)) out.push_back(v);
        return out;
    }

    PartitionTree with_edge_labels(std::vector<Label> labels) const {
        if (static_cast<int>(labels.size()) != size())
            throw std::invalid_argument("edge label count does not match shape");
        PartitionTree t = *this;
        t.edge_ = std::move(labels);
        return t;
    }

    friend bool operator==(const PartitionTree& a, const PartitionTree& b) {
        return a.left_ == b.left_ && a.right_ == b.right_ && a.edge_ == b.edge_;
    }
    friend auto operator<=>(const PartitionTree& a, const PartitionTree& b) {
        if (auto c = a.left_ <=> b.left_; c != 0) return c;
        if (auto c = a.right_ <=> b.right_; c != 0) return c;
        return a.edge_ <=> b.edge_;
    }

  private:
    void check_shape() const {
        const int n = size();
        if (n == 0 || static_cast<int>(right_.size()) != n || static_cast<int>(edge_.size()) != n)
            throw std::invalid_argument("partition tree: inconsistent array sizes");
        // Preorder layout: left child directly after the node, right child
        // directly after the left subtree.
        for (int v = 0; v < n; ++v) {
            const bool l = left_[v] >= 0, r = right_[v] >= 0;
            if (l != r) throw std::invalid_argument("partition tree: vertex with one child");
            if (!l) continue;
            if (left_[v] != v + 1 || right_[v] >= n)
                throw std::invalid_argument("partition tree: not a preorder layout");
        }
        // Walk once to confirm every node is reached exactly once.
        int visited = 0;
        std::vector<int> stack{0};
        std::vector<char> seen(n, 0);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (v < 0 || v >= n || seen[v]) throw std::invalid_argument("partition tree: bad links");
            seen[v] = 1;
            ++visited;
            if (!is_leaf(v)) {
                stack.push_back(left_[v]);
                stack.push_back(right_[v]);
            }
        }
        if (visited != n) throw std::invalid_argument("partition tree: unreachable nodes");
        // Right child position check needs subtree sizes; do it after reachability.
        for (int v = 0; v < n; ++v)
            if (!is_leaf(v) && right_[v] != v + 1 + subtree_size(v + 1))
                throw std::invalid_argument("partition tree: not a preorder layout");
    }

    void ensure_parents() const {
        if (!parents_.empty()) return;
        parents_.assign(size(), -1);
        for (int v = 0; v < size(); ++v)
            if (!is_leaf(v)) {
                parents_[left_[v]] = v;
                parents_[right_[v]] = v;
            }
    }

    std::vector<int> left_, right_;
    std::vector<Label> edge_;
    mutable std::vector<int> parents_;
};

// Convenience recursive builder used by tests and enumerators.
struct TreeSpec {
    Label edge = 0;
    std::vector<TreeSpec> kids; // empty or size 2

    TreeSpec(Label e) : edge(e) {}
    TreeSpec(Label e, TreeSpec l, TreeSpec r) : edge(e) {
        kids.push_back(std::move(l));
        kids.push_back(std::move(r));
    }
};

inline void flatten_spec(const TreeSpec& s, std::vector<int>& left, std::vector<int>& right,
                         std::vector<Label>& lab) {
    const int me = static_cast<int>(left.size());
    left.push_back(-1);
    right.push_back(-1);
    lab.push_back(s.edge);
    if (!s.kids.empty()) {
        if (s.kids.size() != 2) throw std::invalid_argument("tree spec: 0 or 2 children");
        left[me] = me + 1;
        flatten_spec(s.kids[0], left, right, lab);
        right[me] = static_cast<int>(left.size());
        flatten_spec(s.kids[1], left, right, lab);
    }
}

inline PartitionTree make_tree(const TreeSpec& s) {
    std::vector<int> left, right;
    std::vector<Label> lab;
    flatten_spec(s, left, right, lab);
    return PartitionTree::from_structure(std::move(left), std::move(right), std::move(lab));
}

// ---------------------------------------------------------------------------
// Vertex classification and class validation

enum class VertexKind { Top, Bottom };

inline VertexKind classify_vertex(const PartitionTree& t, int v) {
    if (v < 0 || v >= t.size() || t.is_leaf(v))
        throw std::invalid_argument("classify_vertex: not an internal vertex");
    const int lhs = t.edge_label(v) <= 0 ? 1 : 0;
    const int rhs = (t.edge_label(t.left(v)) <= 0 ? 1 : 0) + (t.edge_label(t.right(v)) <= 0 ? 1 : 0);
    return lhs < rhs ? VertexKind::Bottom : VertexKind::Top;
}

struct Violation {
    std::string clause;
    int node = -1;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    std::string str() const {
        if (ok()) return "ok";
        std::string s;
        for (const auto& v : violations) {
            if (!s.empty()) s += "; ";
            s += v.clause;
            if (v.node >= 0) s += " @" + std::to_string(v.node);
        }
        return s;
    }
};

struct PathSystem; // fwd
ValidationReport validate(const PartitionTree& t, TreeClass c);
inline bool is_class(const PartitionTree& t, TreeClass c) { return validate(t, c).ok(); }

// ---------------------------------------------------------------------------
// Path systems

enum class PathKind { Regular, Root, Special };

struct TreePath {
    PathKind kind;
    int anchor;             // bottom vertex for Regular/Special, -1 for Root
    std::vector<int> edges; // edge ids (child endpoints), ordered away from the root

    int last_edge() const { return edges.back(); }
};

struct PathSystem {
    std::vector<TreePath> paths;

    // Index of the strongest edge within path p: the edge closest to the root
    // attaining the maximal f_E along the path.
    static int strongest_index(const PartitionTree& t, const TreePath& p) {
        int best = 0;
        for (int i = 1; i < static_cast<int>(p.edges.size()); ++i)
            if (t.edge_label(p.edges[i]) > t.edge_label(p.edges[best])) best = i;
        return best;
    }

    // Strong: the labels attain a unique maximum at the last edge.
    static bool is_strong(const PartitionTree& t, const TreePath& p) {
        return strongest_index(t, p) == static_cast<int>(p.edges.size()) - 1;
    }
};

namespace detail {

// Descend by "leftmost non-positive child edge" starting below edge `e`.
inline void leftmost_descent(const PartitionTree& t, int e, std::vector<int>& out) {
    int v = e;
    while (!t.is_leaf(v)) {
        int next;
        if (t.edge_label(t.left(v)) <= 0)
            next = t.left(v);
        else if (t.edge_label(t.right(v)) <= 0)
            next = t.right(v);
        else
            throw std::logic_error("path descent stuck: no non-positive child edge");
        out.push_back(next);
        v = next;
    }
}

} // namespace detail

// Defined for H-trees and pre-Q-trees (throws std::domain_error otherwise).
inline PathSystem build_paths(const PartitionTree& t) {
    if (!is_class(t, TreeClass::H) && !is_class(t, TreeClass::PreQ))
        throw std::domain_error("build_paths: tree is neither an H-tree nor a pre-Q-tree");
    PathSystem ps;
    if (t.base_length() <= 0) {
        TreePath p{PathKind::Root, -1, {0}};
        detail::leftmost_descent(t, 0, p.edges);
        ps.paths.push_back(std::move(p));
    }
    for (int v = 0; v < t.size(); ++v) {
        if (t.is_leaf(v) || classify_vertex(t, v) != VertexKind::Bottom) continue;
        const Label el = t.edge_label(t.left(v)), er = t.edge_label(t.right(v));
        {
            const int start = er <= 0 ? t.right(v) : t.left(v); // rightmost non-positive child
            TreePath p{PathKind::Regular, v, {start}};
            detail::leftmost_descent(t, start, p.edges);
            ps.paths.push_back(std::move(p));
        }
        if (t.edge_label(v) > 0 && el <= 0 && er <= 0) {
            TreePath p{PathKind::Special, v, {t.left(v)}};
            detail::leftmost_descent(t, t.left(v), p.edges);
            ps.paths.push_back(std::move(p));
        }
    }
    return ps;
}

inline ValidationReport validate(const PartitionTree& t, TreeClass c) {
    ValidationReport rep;
    for (int v = 0; v < t.size(); ++v)
        if (!t.is_leaf(v) && t.vertex_label(v) < 0)
            rep.violations.push_back({"fV >= 0", v});
    if (c == TreeClass::Partition) return rep;

    if (c == TreeClass::H) {
        for (int v = 0; v < t.size(); ++v) {
            if ((t.edge_label(v) == 0) != t.is_leaf(v))
                rep.violations.push_back({"H: f_E = 0 iff leaf edge", v});
            if (!t.is_leaf(v) && classify_vertex(t, v) == VertexKind::Top && t.vertex_label(v) != 0)
                rep.violations.push_back({"H: top vertex with excess", v});
        }
        return rep;
    }

    // pre-Q conditions, shared by PreQ/Q/WellBasedQ
    for (int v = 0; v < t.size(); ++v) {
        if (t.is_leaf(v) && t.edge_label(v) > 0)
            rep.violations.push_back({"preQ: positive leaf edge", v});
        if (!t.is_leaf(v) && t.vertex_label(v) != 0)
            rep.violations.push_back({"preQ: nonzero excess", v});
    }
    if (c == TreeClass::PreQ || !rep.ok()) return rep;

    const PathSystem ps = build_paths(t);
    for (const auto& p : ps.paths)
        if (!PathSystem::is_strong(t, p))
            rep.violations.push_back({"Q: path not strong", p.edges.front()});
    if (c == TreeClass::Q || !rep.ok()) return rep;

    if (t.base_length() <= 0) {
        for (const auto& p : ps.paths)
            if (p.kind == PathKind::Root && t.edge_label(p.last_edge()) != 0)
                rep.violations.push_back({"well-based: root path ends on a nonzero label", p.last_edge()});
    }
    return rep;
}

// ---------------------------------------------------------------------------
// psi / psi_hat: H-trees <-> (well-based) Q-trees

namespace detail {

inline std::vector<Label> shifted_labels(const PartitionTree& t, const PathSystem& ps,
                                         bool inverse, Label root_shift) {
    std::vector<Label> lab(t.edge_labels());
    for (const auto& p : ps.paths) {
        if (p.kind == PathKind::Regular) {
            const Label d = inverse ? -t.edge_label(p.last_edge()) : -t.vertex_label(p.anchor);
            for (int e : p.edges) lab[e] += d;
        } else if (p.kind == PathKind::Root && root_shift != 0) {
            for (int e : p.edges) lab[e] += root_shift;
        }
    }
    return lab;
}

} // namespace detail

// psi: lowers each regular path by the excess of its anchor vertex.
inline PartitionTree psi(const PartitionTree& h) {
    if (!is_class(h, TreeClass::H)) throw std::domain_error("psi: input is not an H-tree");
    const PathSystem ps = build_paths(h);
    PartitionTree q = h.with_edge_labels(detail::shifted_labels(h, ps, false, 0));
    assert(is_class(q, TreeClass::WellBasedQ));
    return q;
}

// psi^-1: raises each regular path by -f_E(l(v)).
inline PartitionTree psi_inv(const PartitionTree& q) {
    if (!is_class(q, TreeClass::WellBasedQ))
        throw std::domain_error("psi_inv: input is not a well-based Q-tree");
    const PathSystem ps = build_paths(q);
    PartitionTree h = q.with_edge_labels(detail::shifted_labels(q, ps, true, 0));
    assert(is_class(h, TreeClass::H));
    return h;
}

// psi_hat_p: on top of psi, lowers the root path by p' - p (p' = base of h).
inline PartitionTree psi_hat(const PartitionTree& h, Label p) {
    if (!is_class(h, TreeClass::H)) throw std::domain_error("psi_hat: input is not an H-tree");
    const Label ph = h.base_length();
    if (p >= 0 || ph < p || ph > 0)
        throw std::invalid_argument("psi_hat: need p < 0 and p <= base(h) <= 0");
    const PathSystem ps = build_paths(h);
    PartitionTree q = h.with_edge_labels(detail::shifted_labels(h, ps, false, p - ph));
    assert(is_class(q, TreeClass::Q));
    return q;
}

// psi_hat_p^-1: raises the root path by -f_E(l(v0)); the recovered base
// length p' = p - f_E(l(v0)) lies in [p, 0] because the root path is strong.
inline PartitionTree psi_hat_inv(const PartitionTree& q) {
    if (q.base_length() >= 0 || !is_class(q, TreeClass::Q))
        throw std::domain_error("psi_hat_inv: input is not a Q-tree of negative base length");
    const PathSystem ps = build_paths(q);
    Label root_shift = 0;
    for (const auto& p : ps.paths)
        if (p.kind == PathKind::Root) root_shift = -q.edge_label(p.last_edge());
    PartitionTree h = q.with_edge_labels(detail::shifted_labels(q, ps, true, root_shift));
    assert(is_class(h, TreeClass::H));
    assert(h.base_length() >= q.base_length() && h.base_length() <= 0);
    return h;
}

// ---------------------------------------------------------------------------
// phi: pre-Q-tree <-> (Q-tree core, base-0 pre-Q fragments)

struct PhiDecomposition {
    PartitionTree core;                  // Q-tree, same base length
    std::vector<PartitionTree> removed;  // base-0 pre-Q-trees, left-to-right
};

namespace detail {

// Copy the subtree rooted at node v into a standalone tree.
inline PartitionTree extract_subtree(const PartitionTree& t, int v) {
    const int sz = t.subtree_size(v);
    std::vector<int> left(sz), right(sz);
    std::vector<Label> lab(sz);
    for (int i = 0; i < sz; ++i) {
        left[i] = t.left(v + i) < 0 ? -1 : t.left(v + i) - v;
        right[i] = t.right(v + i) < 0 ? -1 : t.right(v + i) - v;
        lab[i] = t.edge_label(v + i);
    }
    return PartitionTree::from_structure(std::move(left), std::move(right), std::move(lab));
}

// Shift the root path of `t` (which must have base <= 0) by delta.
inline PartitionTree shift_root_path(const PartitionTree& t, Label delta) {
    if (delta == 0) return t;
    std::vector<Label> lab(t.edge_labels());
    std::vector<int> path{0};
    leftmost_descent(t, 0, path);
    for (int e : path) lab[e] += delta;
    return t.with_edge_labels(std::move(lab));
}

} // namespace detail

inline PhiDecomposition decompose_phi(const PartitionTree& q) {
    if (!is_class(q, TreeClass::PreQ)) throw std::domain_error("decompose_phi: input is not a pre-Q-tree");
    const PathSystem ps = build_paths(q);
    std::vector<char> strongest(q.size(), 0);
    for (const auto& p : ps.paths) strongest[p.edges[PathSystem::strongest_index(q, p)]] = 1;

    // D(q): strongest edges reachable from the root without crossing another
    // strongest edge. Nodes in D become the leaves of the core (preorder scan
    // keeps the left-to-right order).
    std::vector<int> cut_nodes;
    std::vector<int> core_left, core_right;
    std::vector<Label> core_lab;
    std::vector<int> remap(q.size(), -1);
    std::vector<int> order; // core nodes; cut nodes become its leaves
    std::vector<char> cut(q.size(), 0);
    {
        std::vector<int> st{0};
        while (!st.empty()) {
            int v = st.back();
            st.pop_back();
            order.push_back(v);
            if (strongest[v]) {
                cut[v] = 1;
                cut_nodes.push_back(v);
                continue; // contracted to a leaf of the core
            }
            if (!q.is_leaf(v)) {
                st.push_back(q.right(v));
                st.push_back(q.left(v));
            }
        }
    }
    // Nodes are stored in preorder, so index order is the core's preorder.
    std::sort(order.begin(), order.end());
    core_left.reserve(order.size());
    for (int v : order) {
        int id = static_cast<int>(core_left.size());
        remap[v] = id;
        core_left.push_back(-1);
        core_right.push_back(-1);
        core_lab.push_back(q.edge_label(v));
    }
    for (int v : order) {
        if (q.is_leaf(v) || cut[v]) continue;
        core_left[remap[v]] = remap[q.left(v)];
        core_right[remap[v]] = remap[q.right(v)];
    }
    std::sort(cut_nodes.begin(), cut_nodes.end()); // left-to-right = preorder order

    PhiDecomposition out;
    out.core = PartitionTree::from_structure(std::move(core_left), std::move(core_right),
                                             std::move(core_lab));
    for (int v : cut_nodes) {
        PartitionTree sub = detail::extract_subtree(q, v);
        out.removed.push_back(detail::shift_root_path(sub, -sub.base_length()));
    }
    assert(is_class(out.core, TreeClass::Q));
    return out;
}

inline PartitionTree compose_phi_inv(const PartitionTree& core,
                                     const std::vector<PartitionTree>& removed) {
    if (!is_class(core, TreeClass::Q)) throw std::invalid_argument("compose_phi_inv: core is not a Q-tree");
    if (core.degree() != static_cast<int>(removed.size()))
        throw std::invalid_argument("compose_phi_inv: need one removed subtree per core leaf");
    for (const auto& r : removed)
        if (r.base_length() != 0 || !is_class(r, TreeClass::PreQ))
            throw std::invalid_argument("compose_phi_inv: removed subtrees must be base-0 pre-Q-trees");

    std::vector<int> left, right;
    std::vector<Label> lab;
    int next_removed = 0;
    // Preorder rebuild, splicing the un-rebased fragment at each core leaf.
    auto emit = [&](auto&& self, const PartitionTree& t, int v) -> void {
        const int me = static_cast<int>(left.size());
        left.push_back(-1);
        right.push_back(-1);
        lab.push_back(t.edge_label(v));
        if (!t.is_leaf(v)) {
            left[me] = me + 1;
            self(self, t, t.left(v));
            right[me] = static_cast<int>(left.size());
            self(self, t, t.right(v));
        }
    };
    auto emit_core = [&](auto&& self, int v) -> void {
        if (core.is_leaf(v)) {
            PartitionTree frag = detail::shift_root_path(removed[next_removed++], core.edge_label(v));
            emit(emit, frag, 0);
            return;
        }
        const int me = static_cast<int>(left.size());
        left.push_back(-1);
        right.push_back(-1);
        lab.push_back(core.edge_label(v));
        left[me] = me + 1;
        self(self, core.left(v));
        right[me] = static_cast<int>(left.size());
        self(self, core.right(v));
    };
    emit_core(emit_core, 0);
    PartitionTree out = PartitionTree::from_structure(std::move(left), std::move(right), std::move(lab));
    assert(is_class(out, TreeClass::PreQ));
    return out;
}

} // namespace rq
