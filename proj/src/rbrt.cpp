#include "kds/rbrt.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace kds {

namespace {

uint32_t next_pow2(size_t n) {
  uint32_t v = 1;
  while (v < n) v <<= 1;
  return v;
}

// Ancestors of the leaf for slot s (leaf first, root last) in the perfect
// tree over [0, N): heap indices, leaf = N + s.
struct PathList {
  uint32_t v[24];
  int count = 0;
  void fill(uint32_t N, uint32_t s) {
    count = 0;
    for (uint32_t x = N + s; x >= 1; x >>= 1) v[count++] = x;
  }
};

// Interval [lo, hi) covered by heap node v in the perfect tree over [0, N).
void node_range(uint32_t N, uint32_t v, uint32_t& lo, uint32_t& hi) {
  uint32_t level_size = 1;
  while (v >= 2 * level_size) level_size <<= 1;  // nodes at this depth
  uint32_t width = N / level_size;
  lo = (v - level_size) * width;
  hi = lo + width;
}

// Right children along the root->leaf(s) path: the canonical cover of the
// rank interval (s, N).
struct SuffixList {
  uint32_t v[24];
  int count = 0;
  void fill(uint32_t N, uint32_t s) {
    count = 0;
    uint32_t node = 1, lo = 0, hi = N;
    while (hi - lo > 1) {
      uint32_t mid = (lo + hi) / 2;
      if (s < mid) {
        v[count++] = 2 * node + 1;
        node = 2 * node;
        hi = mid;
      } else {
        node = 2 * node + 1;
        lo = mid;
      }
    }
  }
};

// Common ancestors of two leaves (root downto the LCA, inclusive).
struct CommonList {
  uint32_t v[24];
  int count = 0;
  void fill(uint32_t N, uint32_t s, uint32_t t) {
    if (s > t) std::swap(s, t);
    count = 0;
    uint32_t node = 1, lo = 0, hi = N;
    for (;;) {
      v[count++] = node;
      if (hi - lo == 1) break;
      uint32_t mid = (lo + hi) / 2;
      if (t < mid) {
        node = 2 * node;
        hi = mid;
      } else if (s >= mid) {
        node = 2 * node + 1;
        lo = mid;
      } else {
        break;
      }
    }
  }
};

}  // namespace

ConeKds::ConeKds(const std::vector<Trajectory>* pts, const ConeFamily* family,
                 int cone, SimStats* stats)
    : pts_(pts), family_(family), cone_(cone), stats_(stats) {
  int d = dim();
  slots_ = next_pow2(std::max<size_t>(1, pts_->size()));
  size_t n = pts_->size();
  pos_.assign(d + 1, std::vector<uint32_t>(n, 0));
  order_.assign(d + 1, std::vector<uint32_t>(n, 0));
  proj_.assign(d + 1, std::vector<QuadPoly>(n));
  for (int a = 0; a <= d; ++a) {
    const Direction& dir = family_->axis_dir(cone_, a);
    for (size_t p = 0; p < n; ++p)
      proj_[a][p] = project_on_axis((*pts_)[p], dir);
  }
  links_.assign(n, {});
  targets_.assign(n, kNoPoint);
}

int ConeKds::order_cmp(int axis, uint32_t a, uint32_t b,
                       const Algebraic& t) const {
  QuadPoly diff = proj_[axis][a] - proj_[axis][b];
  int s = sign_just_after(diff, t);
  if (s != 0) return s;
  int ts = family_->tie_sign(cone_, axis);
  return ((a < b) == (ts > 0)) ? -1 : 1;
}

void ConeKds::build(const Algebraic& t0) {
  int d = dim();
  size_t n = pts_->size();
  rmap_.clear();
  bmap_.clear();
  for (auto& l : links_) l.clear();
  size_t lg = 1;
  while ((size_t(1) << lg) < std::max<size_t>(n, 2)) ++lg;
  size_t paths = 1;
  for (int i = 0; i < d; ++i) paths *= lg + 1;
  rmap_.reserve(n * paths / 2 + 8);
  for (int a = 0; a <= d; ++a) {
    auto& ord = order_[a];
    ord.resize(n);
    for (size_t i = 0; i < n; ++i) ord[i] = uint32_t(i);
    if (t0.is_rational()) {
      // sort by cached projection values; ties fall back to the full
      // right-limit comparison
      std::vector<Quad> vals(n);
      for (size_t i = 0; i < n; ++i)
        vals[i] = proj_[a][i].eval(Quad(t0.rat()));
      std::sort(ord.begin(), ord.end(), [&](uint32_t x, uint32_t y) {
        int s = (vals[x] - vals[y]).sgn();
        if (s != 0) return s < 0;
        return order_cmp(a, x, y, t0) < 0;
      });
    } else {
      std::sort(ord.begin(), ord.end(), [&](uint32_t x, uint32_t y) {
        return order_cmp(a, x, y, t0) < 0;
      });
    }
    for (size_t i = 0; i < n; ++i) pos_[a][ord[i]] = uint32_t(i);
  }
  for (uint32_t p = 0; p < n; ++p) insert_point(p);
  for (uint32_t p = 0; p < n; ++p) targets_[p] = compute_target(p);
  for (uint32_t p = 0; p < n; ++p) attach(p);
}

void ConeKds::bump_r(NodeKey k, uint32_t p) {
  stats_->visit();
  auto [it, fresh] = rmap_.try_emplace(k, p);
  if (fresh) {
    if (pair_hook_) pair_hook_(cone_, k, 'r', kNoPoint, p);
    return;
  }
  if (xrank_less(p, it->second)) {
    uint32_t old = it->second;
    it->second = p;
    if (pair_hook_) pair_hook_(cone_, k, 'r', old, p);
  }
}

void ConeKds::insert_point(uint32_t p) {
  int d = dim();
  PathList p0, p1, p2;
  p0.fill(slots_, pos_[0][p]);
  p1.fill(slots_, pos_[1][p]);
  if (d == 2) {
    for (int i = 0; i < p0.count; ++i)
      for (int j = 0; j < p1.count; ++j) bump_r(pack(p0.v[i], p1.v[j], 0), p);
  } else {
    p2.fill(slots_, pos_[2][p]);
    for (int i = 0; i < p0.count; ++i)
      for (int j = 0; j < p1.count; ++j)
        for (int m = 0; m < p2.count; ++m)
          bump_r(pack(p0.v[i], p1.v[j], p2.v[m]), p);
  }
}

void ConeKds::remove_point(uint32_t p) {
  int d = dim();
  PathList p0, p1, p2;
  p0.fill(slots_, pos_[0][p]);
  p1.fill(slots_, pos_[1][p]);
  if (d == 3) p2.fill(slots_, pos_[2][p]);

  // Along the innermost level the condition r(v) == p is contiguous from the
  // leaf upward, and recomputation reads the two children.
  auto drop_walk = [&](uint32_t v0, uint32_t v1, const PathList& inner) {
    for (int m = 0; m < inner.count; ++m) {
      uint32_t vd = inner.v[m];
      NodeKey k = d == 2 ? pack(v0, vd, 0) : pack(v0, v1, vd);
      stats_->visit();
      auto it = rmap_.find(k);
      if (it == rmap_.end() || it->second != p) break;
      uint32_t nr = kNoPoint;
      if (vd < slots_) {
        auto lc = rmap_.find(d == 2 ? pack(v0, 2 * vd, 0)
                                    : pack(v0, v1, 2 * vd));
        auto rc = rmap_.find(d == 2 ? pack(v0, 2 * vd + 1, 0)
                                    : pack(v0, v1, 2 * vd + 1));
        if (lc != rmap_.end()) nr = lc->second;
        if (rc != rmap_.end() &&
            (nr == kNoPoint || xrank_less(rc->second, nr)))
          nr = rc->second;
      }
      if (nr == kNoPoint)
        rmap_.erase(it);
      else
        it->second = nr;
      if (pair_hook_) pair_hook_(cone_, k, 'r', p, nr);
    }
  };

  if (d == 2) {
    for (int i = 0; i < p0.count; ++i) drop_walk(p0.v[i], 0, p1);
  } else {
    for (int i = 0; i < p0.count; ++i)
      for (int j = 0; j < p1.count; ++j) drop_walk(p0.v[i], p1.v[j], p2);
  }
}

template <class F>
void ConeKds::for_canonical(uint32_t w, const F& f) const {
  int d = dim();
  SuffixList s0, s1, s2;
  s0.fill(slots_, pos_[0][w]);
  s1.fill(slots_, pos_[1][w]);
  if (d == 2) {
    for (int i = 0; i < s0.count; ++i)
      for (int j = 0; j < s1.count; ++j) f(pack(s0.v[i], s1.v[j], 0));
  } else {
    s2.fill(slots_, pos_[2][w]);
    for (int i = 0; i < s0.count; ++i)
      for (int j = 0; j < s1.count; ++j)
        for (int m = 0; m < s2.count; ++m)
          f(pack(s0.v[i], s1.v[j], s2.v[m]));
  }
}

uint32_t ConeKds::compute_target(uint32_t w) const {
  uint32_t best = kNoPoint;
  for_canonical(w, [&](NodeKey k) {
    stats_->visit();
    auto it = rmap_.find(k);
    if (it == rmap_.end()) return;
    uint32_t r = it->second;
    if (best == kNoPoint || xrank_less(r, best)) best = r;
  });
  return best;
}

std::vector<ConeKds::NodeKey> ConeKds::canonical_nodes(uint32_t w) const {
  std::vector<NodeKey> out;
  for_canonical(w, [&](NodeKey k) {
    if (rmap_.count(k)) out.push_back(k);
  });
  return out;
}

std::vector<uint32_t> ConeKds::canonical_union(uint32_t w) const {
  int d = dim();
  std::vector<uint32_t> out;
  for_canonical(w, [&](NodeKey k) {
    uint32_t v0 = uint32_t(k >> 42);
    uint32_t v1 = uint32_t((k >> 21) & 0x1FFFFF);
    uint32_t v2 = uint32_t(k & 0x1FFFFF);
    uint32_t lo0, hi0, lod, hid;
    node_range(slots_, v0, lo0, hi0);
    node_range(slots_, d == 2 ? v1 : v2, lod, hid);
    hid = std::min<uint32_t>(hid, uint32_t(pts_->size()));
    for (uint32_t s = lod; s < hid; ++s) {
      uint32_t z = order_[d - 1][s];
      if (pos_[0][z] < lo0 || pos_[0][z] >= hi0) continue;
      if (d == 3) {
        uint32_t lo1, hi1;
        node_range(slots_, v1, lo1, hi1);
        if (pos_[1][z] < lo1 || pos_[1][z] >= hi1) continue;
      }
      out.push_back(z);
    }
  });
  return out;
}

uint32_t ConeKds::node_r(NodeKey k) const {
  auto it = rmap_.find(k);
  return it == rmap_.end() ? kNoPoint : it->second;
}

uint32_t ConeKds::node_b(NodeKey k) const {
  auto it = bmap_.find(k);
  if (it == bmap_.end() || it->second.border.empty()) return kNoPoint;
  return it->second.border.back();
}

bool ConeKds::node_covers(NodeKey k, uint32_t z) const {
  int d = dim();
  uint32_t v[3] = {uint32_t(k >> 42), uint32_t((k >> 21) & 0x1FFFFF),
                   uint32_t(k & 0x1FFFFF)};
  for (int i = 0; i < d; ++i) {
    uint32_t lo, hi;
    node_range(slots_, v[i], lo, hi);
    if (pos_[i][z] < lo || pos_[i][z] >= hi) return false;
  }
  return true;
}

void ConeKds::border_insert(NodeKey k, uint32_t w) {
  BNode& n = bmap_[k];
  auto it = std::lower_bound(n.border.begin(), n.border.end(), w,
                             [&](uint32_t a, uint32_t b) {
                               return xrank_less(a, b);
                             });
  bool at_end = it == n.border.end();
  uint32_t old = n.border.empty() ? kNoPoint : n.border.back();
  n.border.insert(it, w);
  if (at_end && pair_hook_) pair_hook_(cone_, k, 'b', old, w);
}

void ConeKds::border_erase(NodeKey k, uint32_t w) {
  auto bit = bmap_.find(k);
  assert(bit != bmap_.end());
  BNode& n = bit->second;
  auto it = std::find(n.border.begin(), n.border.end(), w);
  assert(it != n.border.end());
  bool was_last = (it + 1) == n.border.end();
  n.border.erase(it);
  if (was_last && pair_hook_) {
    pair_hook_(cone_, k, 'b', w,
               n.border.empty() ? kNoPoint : n.border.back());
  }
}

void ConeKds::attach(uint32_t w) {
  uint32_t t = targets_[w];
  for_canonical(w, [&](NodeKey k) {
    stats_->visit();
    border_insert(k, w);
    if (t != kNoPoint) {
      BNode& n = bmap_[k];
      auto key = std::make_pair(t, w);
      auto it = std::lower_bound(n.bprime.begin(), n.bprime.end(), key);
      n.bprime.insert(it, key);
    }
    links_[w].push_back(k);
  });
}

void ConeKds::detach(uint32_t w) {
  uint32_t t = targets_[w];
  for (NodeKey k : links_[w]) {
    stats_->visit();
    border_erase(k, w);
    if (t != kNoPoint) {
      BNode& n = bmap_[k];
      auto key = std::make_pair(t, w);
      auto it = std::lower_bound(n.bprime.begin(), n.bprime.end(), key);
      assert(it != n.bprime.end() && *it == key);
      n.bprime.erase(it);
    }
    gc_bnode(k);
  }
  links_[w].clear();
}

void ConeKds::gc_bnode(NodeKey k) {
  auto it = bmap_.find(k);
  if (it != bmap_.end() && it->second.border.empty() &&
      it->second.bprime.empty())
    bmap_.erase(it);
}

std::vector<uint32_t> ConeKds::pairs_with_target(NodeKey k,
                                                 uint32_t p) const {
  std::vector<uint32_t> out;
  auto it = bmap_.find(k);
  if (it == bmap_.end()) return out;
  const auto& bp = it->second.bprime;
  auto lo = std::lower_bound(bp.begin(), bp.end(), std::make_pair(p, 0u));
  stats_->visit();
  for (; lo != bp.end() && lo->first == p; ++lo) {
    out.push_back(lo->second);
    stats_->visit();
  }
  return out;
}

void ConeKds::for_each_pair(
    const std::function<void(NodeKey, uint32_t, uint32_t)>& f) const {
  for (const auto& [k, bn] : bmap_) {
    if (bn.border.empty()) continue;
    auto rit = rmap_.find(k);
    if (rit == rmap_.end()) continue;
    f(k, bn.border.back(), rit->second);
  }
}

void ConeKds::for_each_r(
    const std::function<void(NodeKey, uint32_t)>& f) const {
  for (const auto& [k, r] : rmap_) f(k, r);
}

void ConeKds::swap_adjacent_ranks(int axis, uint32_t p, uint32_t q) {
  uint32_t rp = pos_[axis][p], rq = pos_[axis][q];
  assert(rq == rp + 1);
  std::swap(pos_[axis][p], pos_[axis][q]);
  order_[axis][rp] = q;
  order_[axis][rq] = p;
}

void ConeKds::u_swap(int axis, uint32_t p, uint32_t q) {
  assert(axis < dim());
  detach(p);
  detach(q);
  remove_point(p);
  remove_point(q);
  swap_adjacent_ranks(axis, p, q);
  insert_point(p);
  insert_point(q);
  for (uint32_t w : {p, q}) {
    uint32_t nt = compute_target(w);
    if (nt != targets_[w]) {
      uint32_t old = targets_[w];
      targets_[w] = nt;
      if (target_hook_) target_hook_(cone_, w, old, nt);
    }
  }
  attach(p);
  attach(q);
}

ConeKds::XswapPlan ConeKds::x_swap_prepare(uint32_t p, uint32_t q) {
  int d = dim();
  XswapPlan plan;
  // V_a: common ancestors at every level with r(v) == p.
  CommonList c0, c1, c2;
  c0.fill(slots_, pos_[0][p], pos_[0][q]);
  c1.fill(slots_, pos_[1][p], pos_[1][q]);
  if (d == 3) c2.fill(slots_, pos_[2][p], pos_[2][q]);
  auto consider_va = [&](NodeKey k) {
    stats_->visit();
    auto it = rmap_.find(k);
    if (it != rmap_.end() && it->second == p) plan.va.push_back(k);
  };
  if (d == 2) {
    for (int i = 0; i < c0.count; ++i)
      for (int j = 0; j < c1.count; ++j) consider_va(pack(c0.v[i], c1.v[j], 0));
  } else {
    for (int i = 0; i < c0.count; ++i)
      for (int j = 0; j < c1.count; ++j)
        for (int m = 0; m < c2.count; ++m)
          consider_va(pack(c0.v[i], c1.v[j], c2.v[m]));
  }
  // V_b: nodes with r(v) == q (all of them contain q).
  PathList q0, q1, q2;
  q0.fill(slots_, pos_[0][q]);
  q1.fill(slots_, pos_[1][q]);
  if (d == 3) q2.fill(slots_, pos_[2][q]);
  auto consider_vb = [&](NodeKey k) {
    stats_->visit();
    auto it = rmap_.find(k);
    if (it != rmap_.end() && it->second == q) plan.vb.push_back(k);
  };
  if (d == 2) {
    for (int i = 0; i < q0.count; ++i)
      for (int j = 0; j < q1.count; ++j) consider_vb(pack(q0.v[i], q1.v[j], 0));
  } else {
    for (int i = 0; i < q0.count; ++i)
      for (int j = 0; j < q1.count; ++j)
        for (int m = 0; m < q2.count; ++m)
          consider_vb(pack(q0.v[i], q1.v[j], q2.v[m]));
  }
  // Border sets containing both p and q: pull the two out while the old
  // ranks still match the stored order; they go back in after the swap.
  std::unordered_set<NodeKey> pset(links_[p].begin(), links_[p].end());
  for (NodeKey k : links_[q]) {
    if (!pset.count(k)) continue;
    stats_->visit();
    plan.coresident.push_back(k);
    plan.old_b.push_back(node_b(k));
    BNode& n = bmap_[k];
    auto drop = [&](uint32_t w) {
      auto it = std::find(n.border.begin(), n.border.end(), w);
      assert(it != n.border.end());
      n.border.erase(it);
    };
    drop(p);
    drop(q);
  }
  return plan;
}

void ConeKds::x_swap_commit(uint32_t p, uint32_t q, const XswapPlan& plan) {
  for (NodeKey k : plan.va) {
    stats_->visit();
    rmap_[k] = q;
    if (pair_hook_) pair_hook_(cone_, k, 'r', p, q);
  }
  for (size_t i = 0; i < plan.coresident.size(); ++i) {
    NodeKey k = plan.coresident[i];
    BNode& n = bmap_[k];
    for (uint32_t w : {p, q}) {
      auto it = std::lower_bound(
          n.border.begin(), n.border.end(), w,
          [&](uint32_t a, uint32_t b) { return xrank_less(a, b); });
      n.border.insert(it, w);
    }
    uint32_t nb = n.border.back();
    if (nb != plan.old_b[i] && pair_hook_)
      pair_hook_(cone_, k, 'b', plan.old_b[i], nb);
  }
}

std::vector<uint32_t> ConeKds::x_swap_witnesses(uint32_t p,
                                                const XswapPlan& plan) {
  std::vector<uint32_t> out;
  for (const auto* v : {&plan.va, &plan.vb})
    for (NodeKey k : *v)
      for (uint32_t w : pairs_with_target(k, p)) out.push_back(w);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void ConeKds::retarget(uint32_t w, uint32_t oldt, uint32_t newt) {
  assert(targets_[w] == oldt && oldt != kNoPoint && newt != kNoPoint);
  for (NodeKey k : links_[w]) {
    stats_->visit();
    BNode& n = bmap_[k];
    auto okey = std::make_pair(oldt, w);
    auto oit = std::lower_bound(n.bprime.begin(), n.bprime.end(), okey);
    assert(oit != n.bprime.end() && *oit == okey);
    n.bprime.erase(oit);
    auto nkey = std::make_pair(newt, w);
    auto nit = std::lower_bound(n.bprime.begin(), n.bprime.end(), nkey);
    n.bprime.insert(nit, nkey);
  }
  targets_[w] = newt;
  if (target_hook_) target_hook_(cone_, w, oldt, newt);
}

size_t ConeKds::link_total() const {
  size_t s = 0;
  for (const auto& l : links_) s += l.size();
  return s;
}

size_t ConeKds::b_entry_total() const {
  size_t s = 0;
  for (const auto& [k, n] : bmap_) s += n.border.size();
  return s;
}

void ConeKds::poison_first_node() {
  if (rmap_.empty()) return;
  NodeKey best = rmap_.begin()->first;
  for (const auto& [k, r] : rmap_)
    if (k < best) best = k;
  rmap_[best] = (rmap_[best] + 1) % uint32_t(pts_->size());
}

void ConeKds::audit_against_rebuild(const Algebraic& t) const {
  SimStats scratch;
  scratch.reset_points(pts_->size());
  ConeKds fresh(pts_, family_, cone_, &scratch);
  fresh.build(t);
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("rbrt audit (cone " + std::to_string(cone_) +
                             "): " + what);
  };
  for (int a = 0; a <= dim(); ++a)
    if (fresh.order_[a] != order_[a]) fail("axis order mismatch");
  if (fresh.targets_ != targets_) fail("target mismatch");
  if (fresh.rmap_.size() != rmap_.size()) fail("r-map size mismatch");
  for (const auto& [k, r] : fresh.rmap_) {
    auto it = rmap_.find(k);
    if (it == rmap_.end() || it->second != r) fail("r(v) mismatch");
  }
  if (fresh.bmap_.size() != bmap_.size()) fail("b-map size mismatch");
  for (const auto& [k, n] : fresh.bmap_) {
    auto it = bmap_.find(k);
    if (it == bmap_.end()) fail("missing b-node");
    if (it->second.border != n.border) fail("border mismatch");
    if (it->second.bprime != n.bprime) fail("b-prime list mismatch");
  }
  for (size_t w = 0; w < links_.size(); ++w) {
    auto a = links_[w];
    auto b = fresh.links_[w];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) fail("link set mismatch");
  }
}

}  // namespace kds
