#pragma once

#include "kds/event_queue.hpp"
#include "kds/rbrt.hpp"

#include <memory>

namespace kds {

// Kinetic Semi-Yao graph: one rank-based range tree per cone, order
// certificates over the d+1 sorted lists of every cone, u-swap and x-swap
// update procedures, and edge-change notifications for downstream
// structures. Directed targets are the source of truth; the undirected
// edge multiset is derived.
class SemiYaoKds {
 public:
  // (cone, w, target, inserted?) for every directed edge change.
  using EdgeHook = std::function<void(int, uint32_t, uint32_t, bool)>;
  // (cone, p, q) immediately before / after an x-rank swap.
  using XswapHook = std::function<void(int, uint32_t, uint32_t)>;

  SemiYaoKds(const std::vector<Trajectory>* pts, const ConeFamily* family,
             EventQueue* queue, SimStats* stats);

  void set_edge_hook(EdgeHook h) { edge_hook_ = std::move(h); }
  void set_pair_hook(ConeKds::PairHook h);
  void set_xswap_hooks(XswapHook pre, XswapHook post) {
    pre_xswap_ = std::move(pre);
    post_xswap_ = std::move(post);
  }

  // Static build at the queue's current time; schedules all certificates.
  void build();

  void handle_order_event(const Certificate& c);

  // targets[w][l] = Semi-Yao target of w in cone l (kNoPoint if none).
  std::vector<std::vector<uint32_t>> snapshot() const;
  // Undirected edge set derived from the directed targets.
  std::vector<std::pair<uint32_t, uint32_t>> undirected_edges() const;

  ConeKds& cone_kds(int l) { return *cones_[l]; }
  const ConeKds& cone_kds(int l) const { return *cones_[l]; }
  int cone_count() const { return int(cones_.size()); }
  const ConeFamily& family() const { return *family_; }
  size_t points() const { return pts_->size(); }

  // Test support: every live order certificate holds at time t.
  void validate_certificates(const Algebraic& t) const;
  // Structural audit: incremental state equals a from-scratch rebuild.
  void audit_full() const;

 private:
  void refresh_gap(int cone, int axis, int64_t gap);
  void clear_gap_handle(int cone, int axis, int64_t gap);
  void on_target_change(int cone, uint32_t w, uint32_t oldt, uint32_t newt);

  // Sign-change times of the projection difference of a pair never change;
  // pairs meet repeatedly, so isolate once per (cone, axis, pair).
  using RootsPtr = std::shared_ptr<const std::vector<Algebraic>>;
  std::map<std::tuple<int, int, uint32_t, uint32_t>, RootsPtr> root_cache_;

  const std::vector<Trajectory>* pts_;
  const ConeFamily* family_;
  EventQueue* queue_;
  SimStats* stats_;
  std::vector<std::unique_ptr<ConeKds>> cones_;
  // certificate handle per (cone, axis, gap); kNoCert when absent
  static constexpr uint32_t kNoCert = 0xFFFFFFFFu;
  std::vector<std::vector<std::vector<uint32_t>>> gap_cert_;
  EdgeHook edge_hook_;
  XswapHook pre_xswap_, post_xswap_;
};

}  // namespace kds
