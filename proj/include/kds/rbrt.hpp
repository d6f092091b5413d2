#pragma once

#include "kds/algebraic.hpp"
#include "kds/cones.hpp"
#include "kds/motion.hpp"
#include "kds/stats.hpp"

#include <functional>
#include <optional>
#include <unordered_map>
#include <vector>

namespace kds {

// Rank-based range tree for one cone, together with the per-cone kinetic
// state it serves: the d+1 sorted axis orders (u_1..u_d drive the tree
// levels, x_l orders the aggregates), the per-node minimum r(v) and maximum
// b(v), the target dictionaries L(B'(v)) and the per-point handle sets
// Link(w), and the current Semi-Yao target of every point in this cone.
//
// The tree skeleton is a static complete binary tree over N = 2^ceil(log2 n)
// rank slots at every level; a swap of adjacent ranks re-threads exactly the
// two points involved. Nodes are addressed by their per-level heap indices
// packed into a 64-bit key and materialized on demand.
class ConeKds {
 public:
  using NodeKey = uint64_t;

  // (cone, node, side 'r'|'b', old point, new point) whenever a node
  // aggregate changes; consumed by the eps-neighbor structure.
  using PairHook = std::function<void(int, NodeKey, char, uint32_t, uint32_t)>;
  // (cone, w, old target, new target) on Semi-Yao target changes.
  using TargetHook = std::function<void(int, uint32_t, uint32_t, uint32_t)>;

  ConeKds(const std::vector<Trajectory>* pts, const ConeFamily* family,
          int cone, SimStats* stats);

  int cone() const { return cone_; }
  int dim() const { return family_->dim(); }
  size_t size() const { return pts_->size(); }
  uint32_t slots() const { return slots_; }

  void set_pair_hook(PairHook h) { pair_hook_ = std::move(h); }
  void set_target_hook(TargetHook h) { target_hook_ = std::move(h); }

  // Builds lists, tree, aggregates, targets and links at time t0.
  void build(const Algebraic& t0);

  // ---- axis orders ----
  uint32_t rank(int axis, uint32_t p) const { return pos_[axis][p]; }
  uint32_t at_rank(int axis, uint32_t r) const { return order_[axis][r]; }
  // -1 if a precedes b along the axis just after time t (id tie rule).
  int order_cmp(int axis, uint32_t a, uint32_t b, const Algebraic& t) const;
  const QuadPoly& proj(int axis, uint32_t p) const { return proj_[axis][p]; }

  // ---- queries ----
  uint32_t target(uint32_t w) const { return targets_[w]; }
  uint32_t compute_target(uint32_t w) const;
  std::vector<NodeKey> canonical_nodes(uint32_t w) const;  // nonempty R only
  std::vector<uint32_t> canonical_union(uint32_t w) const; // = P ∩ C_l(w)
  uint32_t node_r(NodeKey k) const;
  uint32_t node_b(NodeKey k) const;  // max-x point of B(v), kNoPoint if empty
  bool node_covers(NodeKey k, uint32_t z) const;  // z ∈ R(v)?
  const std::vector<NodeKey>& links(uint32_t w) const { return links_[w]; }
  std::vector<uint32_t> pairs_with_target(NodeKey k, uint32_t p) const;
  // All (b(v), r(v)) pairs with both sides present (the eps-ANN edge set).
  void for_each_pair(const std::function<void(NodeKey, uint32_t, uint32_t)>&) const;
  // Every node carrying an r aggregate (nonempty R(v)).
  void for_each_r(const std::function<void(NodeKey, uint32_t)>&) const;

  // ---- event surgery ----
  // u-swap of points p (rank j) and q (rank j+1) along tree axis `axis`.
  // Re-threads p and q, refreshes both targets, fires hooks.
  void u_swap(int axis, uint32_t p, uint32_t q);

  struct XswapPlan {
    std::vector<NodeKey> va;          // {p,q} ⊆ R(v), r(v) == p
    std::vector<NodeKey> vb;          // r(v) == q
    std::vector<NodeKey> coresident;  // both p,q in B(v); borders pre-erased
    std::vector<uint32_t> old_b;      // b(v) of coresident before the swap
  };
  // Phase 1 (before the x-rank swap): collect nodes, pull p,q out of the
  // co-resident border sets.
  XswapPlan x_swap_prepare(uint32_t p, uint32_t q);
  // The rank swap itself (axis d). Also used by u-swaps via axis < d.
  void swap_adjacent_ranks(int axis, uint32_t p, uint32_t q);
  // Phase 2 (after the swap): aggregate updates + hooks.
  void x_swap_commit(uint32_t p, uint32_t q, const XswapPlan& plan);
  // Phase 3: points whose pair (w, p) sits in a collected node.
  std::vector<uint32_t> x_swap_witnesses(uint32_t p, const XswapPlan& plan);
  // Re-key one witness from target p to target q.
  void retarget(uint32_t w, uint32_t oldt, uint32_t newt);

  // ---- audits ----
  void audit_against_rebuild(const Algebraic& t) const;  // throws on mismatch
  size_t link_total() const;     // Σ_w |Link(w)|
  size_t link_size(uint32_t w) const { return links_[w].size(); }
  size_t b_entry_total() const;  // Σ_v |B(v)|
  void poison_first_node();      // fault injection for verify-mode tests

 private:
  struct BNode {
    std::vector<std::pair<uint32_t, uint32_t>> bprime;  // (target, source)
    std::vector<uint32_t> border;                       // B(v) by x-rank
  };

  NodeKey pack(uint32_t v0, uint32_t v1, uint32_t v2) const {
    return (uint64_t(v0) << 42) | (uint64_t(v1) << 21) | v2;
  }

  void insert_point(uint32_t p);
  void remove_point(uint32_t p);
  void attach(uint32_t w);
  void detach(uint32_t w);
  void bump_r(NodeKey k, uint32_t p);     // r := min(r, p) by x-rank
  void drop_r(NodeKey k, uint32_t leaf_of_p, uint32_t p, uint32_t v_last);
  void border_insert(NodeKey k, uint32_t w);
  void border_erase(NodeKey k, uint32_t w);
  bool xrank_less(uint32_t a, uint32_t b) const {
    return pos_[dim()][a] < pos_[dim()][b];
  }
  template <class F>
  void for_r_paths(uint32_t p, F&& f);  // all level-d nodes with p ∈ R(v)
  template <class F>
  void for_canonical(uint32_t w, const F& f) const;
  void gc_bnode(NodeKey k);

  const std::vector<Trajectory>* pts_;
  const ConeFamily* family_;
  int cone_;
  SimStats* stats_;
  uint32_t slots_ = 0;  // N

  std::vector<std::vector<uint32_t>> pos_;    // (d+1) x n: point -> rank
  std::vector<std::vector<uint32_t>> order_;  // (d+1) x n: rank -> point
  std::vector<std::vector<QuadPoly>> proj_;   // (d+1) x n

  std::unordered_map<NodeKey, uint32_t> rmap_;  // r(v) per materialized node
  std::unordered_map<NodeKey, BNode> bmap_;
  std::vector<std::vector<NodeKey>> links_;  // Link(w)
  std::vector<uint32_t> targets_;

  PairHook pair_hook_;
  TargetHook target_hook_;
};

}  // namespace kds
