#pragma once

// Brute-force enumeration oracles for the tree and map families, the
// signature-recursive counting oracle, and the uniform random samplers
// (plain base-p quadrangulations and Delta-type double-based ones with
// subtree cycling).

#include "rigidquad/bijections.hpp"
#include "rigidquad/numeric.hpp"
#include "rigidquad/rng.hpp"
#include "rigidquad/tree_core.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rq {

// ---------------------------------------------------------------------------
// Shape and composition enumeration

namespace detail {

struct Shape {
    std::vector<int> left, right; // preorder, -1 for leaves
    std::string bits;
};

inline const std::vector<Shape>& shapes_with_leaves(int n) {
    static std::map<int, std::vector<Shape>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<Shape> out;
    if (n == 1) {
        out.push_back({{-1}, {-1}, "0"});
    } else {
        for (int i = 1; i <= n - 1; ++i)
            for (const Shape& L : shapes_with_leaves(i))
                for (const Shape& R : shapes_with_leaves(n - i)) {
                    Shape s;
                    const int ln = static_cast<int>(L.left.size());
                    s.left.push_back(1);
                    s.right.push_back(1 + ln);
                    for (size_t j = 0; j < L.left.size(); ++j) {
                        s.left.push_back(L.left[j] < 0 ? -1 : L.left[j] + 1);
                        s.right.push_back(L.right[j] < 0 ? -1 : L.right[j] + 1);
                    }
                    for (size_t j = 0; j < R.left.size(); ++j) {
                        s.left.push_back(R.left[j] < 0 ? -1 : R.left[j] + 1 + ln);
                        s.right.push_back(R.right[j] < 0 ? -1 : R.right[j] + 1 + ln);
                    }
                    s.bits = "1" + L.bits + R.bits;
                    out.push_back(std::move(s));
                }
        std::sort(out.begin(), out.end(), [](const Shape& a, const Shape& b) { return a.bits < b.bits; });
    }
    return cache.emplace(n, std::move(out)).first->second;
}

// weak compositions of total into parts non-negative entries, colex order
inline std::vector<std::vector<int>> compositions(int total, int parts) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(parts, 0);
    auto rec = [&](auto&& self, int pos, int rest) -> void {
        if (pos == parts - 1) {
            cur[pos] = rest;
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= rest; ++v) {
            cur[pos] = v;
            self(self, pos + 1, rest - v);
        }
    };
    if (parts <= 0) {
        if (total == 0) out.push_back({});
        return out;
    }
    rec(rec, 0, total);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        for (size_t i = a.size(); i-- > 0;)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    return out;
}

// Rebuild internal edge labels from leaf labels with f_V = 0 everywhere.
inline PartitionTree tree_from_leaf_labels(const Shape& s, const std::vector<Label>& leaf_labels) {
    const int n = static_cast<int>(s.left.size());
    std::vector<Label> lab(n, 0);
    int next_leaf = 0;
    for (int v = 0; v < n; ++v)
        if (s.left[v] < 0) lab[v] = leaf_labels[next_leaf++];
    for (int v = n - 1; v >= 0; --v)
        if (s.left[v] >= 0) lab[v] = lab[s.left[v]] + lab[s.right[v]] + 1;
    return PartitionTree::from_structure(s.left, s.right, std::move(lab));
}

} // namespace detail

// All pre-Q-trees of degree n and base length p: shapes x compositions of
// (n-1) - p into n non-positive leaf labels, internal labels from (P.1).
inline std::vector<PartitionTree> enumerate_pre_q_trees(int n, Label p) {
    std::vector<PartitionTree> out;
    if (n < 1) return out;
    const long long S = (n - 1) - p;
    if (S < 0) return out;
    const auto comps = detail::compositions(static_cast<int>(S), n);
    for (const auto& shape : detail::shapes_with_leaves(n))
        for (const auto& c : comps) {
            std::vector<Label> leaves(n);
            for (int i = 0; i < n; ++i) leaves[i] = -static_cast<Label>(c[i]);
            out.push_back(detail::tree_from_leaf_labels(shape, leaves));
        }
    return out;
}

inline std::vector<PartitionTree> enumerate_q_trees(int n, Label p) {
    std::vector<PartitionTree> out;
    for (auto& t : enumerate_pre_q_trees(n, p))
        if (is_class(t, TreeClass::Q)) out.push_back(std::move(t));
    return out;
}

inline std::vector<PartitionTree> enumerate_well_based_q_trees(int n, Label p) {
    std::vector<PartitionTree> out;
    for (auto& t : enumerate_pre_q_trees(n, p))
        if (is_class(t, TreeClass::WellBasedQ)) out.push_back(std::move(t));
    return out;
}

// H-trees via the psi bijection from well-based Q-trees.
inline std::vector<PartitionTree> enumerate_h_trees(int n, Label p) {
    std::vector<PartitionTree> out;
    for (const auto& q : enumerate_well_based_q_trees(n, p)) out.push_back(psi_inv(q));
    return out;
}

// ---------------------------------------------------------------------------
// Independent counting oracle over the minimal-submap recursion:
//   N(0,1) = 1;  N(p,n) = sum over allowed signatures (p,a,b,k) of
//   sum_{n_a+n_b=n} N(a,n_a) N(b,n_b).

namespace detail {

// All allowed signatures that can contribute to maps with n corners-pairs:
// a positive glue base a needs a child with at least a+1 corner pairs, so
// positive entries are bounded by n-2; negative entries are then pinned by
// p = a+b-k+1 with k in [0, 1-p] for the all-non-positive rows.
inline std::vector<Signature> signatures_for(Label p, int n) {
    std::set<std::array<Label, 4>> seen;
    std::vector<Signature> sigs;
    auto push = [&](Signature s) {
        if (!signature_allowed(s)) return;
        if (seen.insert({s.p, s.a, s.b, s.k}).second) sigs.push_back(s);
    };
    const Label hi = n - 2; // largest feasible positive glue base
    if (p > 0) {
        // k = 0: a + b = p - 1, at most one entry negative
        for (Label a = std::min<Label>(0, p - 1 - hi); a <= std::max<Label>(p - 1, hi); ++a)
            push({p, a, p - 1 - a, 0});
        // k >= 1: exactly one positive entry
        for (Label a = 1; a <= hi; ++a)
            for (Label b = 0; b >= p - a; --b) push({p, a, b, a + b - p + 1});
        for (Label b = 1; b <= hi; ++b)
            for (Label a = 0; a >= p - b; --a) push({p, a, b, a + b - p + 1});
    } else if (p < 0) {
        // both entries non-positive: k determines the sum
        for (Label k = 0; k <= 1 - p; ++k) {
            const Label s = p + k - 1;
            for (Label a = s; a <= 0; ++a) push({p, a, s - a, k});
        }
        // exactly one positive entry forces k = 0
        for (Label b = 1; b <= hi; ++b) push({p, p - 1 - b, b, 0});
        for (Label a = 1; a <= hi; ++a) push({p, a, p - 1 - a, 0});
    }
    return sigs;
}

} // namespace detail

inline Int count_quads_recursive(Label p, int n,
                                 std::map<std::pair<Label, int>, Int>* memo_in = nullptr) {
    static thread_local std::map<std::pair<Label, int>, Int> shared_memo;
    auto& memo = memo_in ? *memo_in : shared_memo;
    auto rec = [&](auto&& self, Label pp, int nn) -> Int {
        if (nn < 1) return 0;
        if (pp == 0) return nn == 1 ? 1 : 0;
        if (nn == 1) return 0;
        const auto key = std::make_pair(pp, nn);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        Int total = 0;
        for (const auto& s : detail::signatures_for(pp, nn))
            for (int na = 1; na <= nn - 1; ++na) {
                const Int ca = self(self, s.a, na);
                if (ca == 0) continue;
                total += ca * self(self, s.b, nn - na);
            }
        memo.emplace(key, total);
        return total;
    };
    return rec(rec, p, n);
}

// Map families built two independent ways (canonical keys for comparison).
inline std::vector<RigidQuadMap> enumerate_quads_via_trees(int n, Label p) {
    std::vector<RigidQuadMap> out;
    for (const auto& h : enumerate_h_trees(n, p)) out.push_back(h_tree_to_quad(h));
    return out;
}

inline std::vector<RigidQuadMap> enumerate_quads_via_recursion(int n, Label p) {
    std::vector<RigidQuadMap> out;
    if (n < 1) return out;
    if (p == 0) {
        if (n == 1) out.push_back(RigidQuadMap::corner_object());
        return out;
    }
    if (n == 1) return out;
    for (const auto& s : detail::signatures_for(p, n))
        for (int na = 1; na <= n - 1; ++na) {
            const auto lefts = enumerate_quads_via_recursion(na, s.a);
            if (lefts.empty()) continue;
            const auto rights = enumerate_quads_via_recursion(n - na, s.b);
            for (const auto& lm : lefts)
                for (const auto& rm : rights) {
                    MinimalSubmap sub = build_minimal_submap(s);
                    RigidQuadMap acc = sub.map;
                    if (s.a != 0)
                        acc = s.a > 0 ? glue_top(acc, sub.a_side, lm) : glue_bottom(acc, sub.a_side, lm);
                    if (s.b != 0) {
                        int b_side = sub.b_side;
                        if (s.a != 0) {
                            b_side = -1;
                            const auto& an = acc.analysis();
                            for (int si = 0; si < static_cast<int>(an.sides().size()); ++si)
                                if (an.sides()[si].open && !an.sides()[si].is_base) b_side = si;
                        }
                        acc = s.b > 0 ? glue_top(acc, b_side, rm) : glue_bottom(acc, b_side, rm);
                    }
                    out.push_back(std::move(acc));
                }
        }
    return out;
}

// ---------------------------------------------------------------------------
// Uniform samplers

namespace detail {

// Remy's algorithm: exactly uniform binary tree shape with n leaves.
inline Shape random_shape(int n, RandomStream& rng) {
    // nodes: 0..2n-2; children pairs; -1 marks leaves
    std::vector<int> left{-1}, right{-1}, par{-1};
    int root = 0;
    for (int k = 1; k < n; ++k) {
        // pick a uniform node of the current tree (2k-1 of them) and a side
        const int x = static_cast<int>(rng.below(2 * k - 1));
        const int side = static_cast<int>(rng.below(2));
        const int internal = static_cast<int>(left.size());
        const int leaf = internal + 1;
        left.insert(left.end(), {-1, -1});
        right.insert(right.end(), {-1, -1});
        par.insert(par.end(), {-1, -1});
        const int parent = par[x];
        if (side == 0) {
            left[internal] = x;
            right[internal] = leaf;
        } else {
            left[internal] = leaf;
            right[internal] = x;
        }
        par[x] = par[leaf] = internal;
        if (parent < 0) {
            root = internal;
        } else {
            (left[parent] == x ? left[parent] : right[parent]) = internal;
            par[internal] = parent;
        }
    }
    // flatten to preorder
    Shape s;
    auto rec = [&](auto&& self, int v) -> void {
        const int me = static_cast<int>(s.left.size());
        s.left.push_back(-1);
        s.right.push_back(-1);
        s.bits.push_back(left[v] < 0 ? '0' : '1');
        if (left[v] >= 0) {
            s.left[me] = me + 1;
            self(self, left[v]);
            s.right[me] = static_cast<int>(s.left.size());
            self(self, right[v]);
        }
    };
    rec(rec, root);
    return s;
}

// uniform weak composition of S into parts non-negative entries
inline std::vector<int> random_composition(long long S, int parts, RandomStream& rng) {
    if (parts == 1) return {static_cast<int>(S)};
    const auto bars = rng.subset(static_cast<std::uint64_t>(S + parts - 1),
                                 static_cast<std::uint64_t>(parts - 1));
    std::vector<int> out;
    long long prev = -1;
    for (std::uint64_t b : bars) {
        out.push_back(static_cast<int>(static_cast<long long>(b) - prev - 1));
        prev = static_cast<long long>(b);
    }
    out.push_back(static_cast<int>(S + parts - 1 - prev - 1));
    return out;
}

} // namespace detail

// Exactly uniform over pre-Q-trees of degree n_max and base length p.
inline PartitionTree sample_pre_q_tree(int n_max, Label p, RandomStream& rng) {
    if (n_max < 1) throw std::invalid_argument("sample_pre_q_tree: n_max must be >= 1");
    const long long S = (n_max - 1) - p;
    if (S < 0) throw std::invalid_argument("sample_pre_q_tree: empty family (p > n_max - 1)");
    const auto shape = detail::random_shape(n_max, rng);
    const auto comp = detail::random_composition(S, n_max, rng);
    std::vector<Label> leaves(n_max);
    for (int i = 0; i < n_max; ++i) leaves[i] = -static_cast<Label>(comp[i]);
    return detail::tree_from_leaf_labels(shape, leaves);
}

struct QuadSample {
    RigidQuadMap map;
    PartitionTree h_tree;
    int n = 0;            // degree of the Q-tree core = half the corner count
    Label base = 0;       // realized base length (may exceed p when p < 0)
    long long attempts = 1;
};

// Sample a base-p rigid quadrangulation: uniform pre-Q-tree, phi-decompose,
// convert the Q-tree core. Conditioned on n (rejection), the law is uniform.
inline QuadSample sample_rigid_quad(Label p, int n_max, std::optional<int> target_n,
                                    RandomStream& rng, long long budget = 10'000'000) {
    if (p == 0) {
        if (target_n && *target_n != 1)
            throw std::invalid_argument("sample_rigid_quad: base 0 has only n = 1");
        QuadSample s{RigidQuadMap::corner_object(), make_tree(TreeSpec(0)), 1, 0, 1};
        return s;
    }
    for (long long attempt = 1; attempt <= budget; ++attempt) {
        const PartitionTree t = sample_pre_q_tree(n_max, p, rng);
        const PhiDecomposition d = decompose_phi(t);
        const int n = d.core.degree();
        if (target_n && n != *target_n) continue;
        PartitionTree h = p > 0 ? psi_inv(d.core) : psi_hat_inv(d.core);
        QuadSample s{h_tree_to_quad(h), h, n, h.base_length(), attempt};
        return s;
    }
    throw std::runtime_error("sample_rigid_quad: rejection budget exhausted after " +
                             std::to_string(budget) + " attempts");
}

// ---------------------------------------------------------------------------
// Double-based families (B / C / Delta) on the Q-tree side

enum class DoubleBasedKind { B, C, Delta };

struct SpineView {
    Label p = 0;
    int q = 0;
    std::vector<Label> a;              // a[0] = p, a[1..q]; a[q] = 0
    std::vector<PartitionTree> blocks; // right subtrees T_0 .. T_{q-1}
};

// The spine of a (pre-)Q-tree whose root edge starts q consecutive left child
// edges ending in a leaf: returns nullopt when the shape does not match.
inline std::optional<SpineView> parse_spine(const PartitionTree& t, Label p, int q) {
    if (t.base_length() != p || q < 1) return std::nullopt;
    SpineView sv;
    sv.p = p;
    sv.q = q;
    sv.a.push_back(p);
    int v = 0;
    for (int i = 1; i <= q; ++i) {
        if (t.is_leaf(v)) return std::nullopt;
        sv.blocks.push_back(detail::extract_subtree(t, t.right(v)));
        v = t.left(v);
        sv.a.push_back(t.edge_label(v));
    }
    if (!t.is_leaf(v) || t.edge_label(v) != 0) return std::nullopt;
    return sv;
}

inline TreeSpec spec_of(const PartitionTree& t, int v) {
    if (t.is_leaf(v)) return TreeSpec(t.edge_label(v));
    return TreeSpec(t.edge_label(v), spec_of(t, t.left(v)), spec_of(t, t.right(v)));
}

// Reassemble a spine tree from rotated blocks; spine labels follow from the
// blocks' root labels through (P.1) with zero excess.
inline PartitionTree assemble_spine(const SpineView& sv, int rotation) {
    const int q = sv.q;
    std::vector<const PartitionTree*> blocks(q);
    for (int j = 0; j < q; ++j) blocks[j] = &sv.blocks[(j + rotation) % q];
    auto rec = [&](auto&& self, int j, Label aj) -> TreeSpec {
        if (j == q) return TreeSpec(0);
        const Label w = blocks[j]->edge_label(0);
        TreeSpec next = self(self, j + 1, aj - w - 1);
        return TreeSpec(aj, std::move(next), spec_of(*blocks[j], 0));
    };
    TreeSpec spec = rec(rec, 0, sv.p);
    return make_tree(spec);
}

inline bool delta_walk_ok(const PartitionTree& t, Label p, int q) {
    auto sv = parse_spine(t, p, q);
    if (!sv) return false;
    for (int i = 1; i <= q; ++i)
        if (sv->a[i] * q < p * (q - i)) return false;
    return true;
}

// Degeneracy: the number of spine labels meeting the Delta bound exactly
// (the q-th always does).
inline int delta_degeneracy(const PartitionTree& t, Label p, int q) {
    auto sv = parse_spine(t, p, q);
    if (!sv) throw std::invalid_argument("delta_degeneracy: tree has no (p,q) spine");
    int deg = 0;
    for (int i = 1; i <= q; ++i)
        if (sv->a[i] * q == p * (q - i)) ++deg;
    return deg;
}

// All cyclic shifts of the spine blocks that satisfy the Delta condition.
inline std::vector<PartitionTree> cycle_subtrees(const PartitionTree& t, Label p, int q) {
    auto sv = parse_spine(t, p, q);
    if (!sv) throw std::invalid_argument("cycle_subtrees: tree has no (p,q) spine");
    std::vector<PartitionTree> out;
    for (int r = 0; r < q; ++r) {
        PartitionTree rot = assemble_spine(*sv, r);
        if (delta_walk_ok(rot, p, q)) out.push_back(std::move(rot));
    }
    return out;
}

inline bool matches_double_based(DoubleBasedKind kind, const PartitionTree& t, Label p, int q) {
    auto sv = parse_spine(t, p, q);
    if (!sv) return false;
    switch (kind) {
        case DoubleBasedKind::B:
            for (int i = 1; i < q; ++i)
                if (sv->a[i] <= 0) return false;
            return sv->a[q] == 0;
        case DoubleBasedKind::C:
            for (int i = 1; i < q; ++i)
                if (sv->a[i] < p) return false;
            return sv->a[q] == 0;
        case DoubleBasedKind::Delta:
            for (int i = 1; i <= q; ++i)
                if (sv->a[i] * q < p * (q - i)) return false;
            return true;
    }
    return false;
}

struct DoubleBasedMap {
    RigidQuadMap map;
    PartitionTree q_tree;
    int degeneracy = 1;
};

// Enumerate B/C/Delta-type maps with base p, co-base q and t-exponent n_t
// (tree degree n_t + 1). Delta items carry their degeneracies.
inline std::vector<DoubleBasedMap> enumerate_bcd(DoubleBasedKind kind, Label p, int q, int n_t) {
    std::vector<DoubleBasedMap> out;
    if (p < 1 || q < 1 || n_t < 1) return out;
    for (const auto& qt : enumerate_q_trees(n_t + 1, p)) {
        if (!matches_double_based(kind, qt, p, q)) continue;
        DoubleBasedMap item{h_tree_to_quad(psi_inv(qt)), qt, 1};
        if (kind == DoubleBasedKind::Delta) item.degeneracy = delta_degeneracy(qt, p, q);
        out.push_back(std::move(item));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Delta-type sampler: uniform spine pre-Q-tree, a uniform valid cyclic shift,
// then the phi decomposition. Conditioned on n, maps appear with probability
// proportional to 1/degeneracy.

struct DeltaSample {
    RigidQuadMap map;
    PartitionTree q_tree;
    int n = 0; // t-exponent: tree degree - 1
    long long attempts = 1;
};

namespace detail {

// Catalan convolution tables: conv[j][t] = number of j-tuples of binary trees
// with leaf counts summing to t.
inline Int catalan_convolution(int j, int t, std::map<std::pair<int, int>, Int>& memo) {
    if (j == 0) return t == 0 ? 1 : 0;
    if (t < j) return 0;
    const auto key = std::make_pair(j, t);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    Int total = 0;
    for (int s = 1; s <= t - (j - 1); ++s)
        total += catalan(s - 1) * catalan_convolution(j - 1, t - s, memo);
    memo.emplace(key, total);
    return total;
}

} // namespace detail

inline DeltaSample sample_delta_type(Label p, int q, int n_max, std::optional<int> target_n,
                                     RandomStream& rng, long long budget = 10'000'000) {
    if (p < 1 || q < 1) throw std::invalid_argument("sample_delta_type: need p, q >= 1");
    const int N = n_max + 1; // spine tree degree for t-exponent n_max
    if (N - 1 < q) throw std::invalid_argument("sample_delta_type: n_max too small for the co-base");
    const long long S = (N - 1) - p;
    if (S < 0) throw std::invalid_argument("sample_delta_type: empty family (p too large)");
    static thread_local std::map<std::pair<int, int>, Int> conv_memo;

    for (long long attempt = 1; attempt <= budget; ++attempt) {
        // block leaf counts weighted by Catalan numbers
        std::vector<int> sizes(q);
        {
            int rest = N - 1;
            for (int j = 0; j < q; ++j) {
                const int remaining_blocks = q - j - 1;
                const Int total = detail::catalan_convolution(remaining_blocks + 1, rest, conv_memo);
                Int r = rng.below_big(total);
                int s = 1;
                for (;; ++s) {
                    const Int w =
                        catalan(s - 1) * detail::catalan_convolution(remaining_blocks, rest - s, conv_memo);
                    if (r < w) break;
                    r -= w;
                }
                sizes[j] = s;
                rest -= s;
            }
        }
        // uniform shapes per block, labels by a uniform composition over all
        // leaves except the final co-base leaf
        const auto comp = detail::random_composition(S, N - 1, rng);
        int pos = 0;
        SpineView sv;
        sv.p = p;
        sv.q = q;
        for (int j = 0; j < q; ++j) {
            const auto shape = detail::random_shape(sizes[j], rng);
            std::vector<Label> leaves(sizes[j]);
            for (int i = 0; i < sizes[j]; ++i) leaves[i] = -static_cast<Label>(comp[pos++]);
            sv.blocks.push_back(detail::tree_from_leaf_labels(shape, leaves));
        }
        // pick a valid rotation uniformly
        std::vector<int> valid;
        for (int r = 0; r < q; ++r)
            if (delta_walk_ok(assemble_spine(sv, r), p, q)) valid.push_back(r);
        if (valid.empty()) throw std::logic_error("sample_delta_type: no valid rotation");
        const int r = valid[static_cast<size_t>(rng.below(valid.size()))];
        const PartitionTree rotated = assemble_spine(sv, r);

        const PhiDecomposition d = decompose_phi(rotated);
        const int n_real = d.core.degree() - 1;
        if (target_n && n_real != *target_n) continue;
        if (!matches_double_based(DoubleBasedKind::Delta, d.core, p, q))
            throw std::logic_error("sample_delta_type: core lost the spine");
        DeltaSample out{h_tree_to_quad(psi_inv(d.core)), d.core, n_real, attempt};
        return out;
    }
    throw std::runtime_error("sample_delta_type: rejection budget exhausted");
}

} // namespace rq
