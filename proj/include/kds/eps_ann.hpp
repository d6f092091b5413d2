#pragma once

#include "kds/dktt.hpp"
#include "kds/sygraph.hpp"

#include <map>
#include <memory>
#include <unordered_map>

namespace kds {

// Largest grid angle whose conservative planar stretch bound 1/(2cos θ - 1)
// stays within 1+eps; capped at pi/3 for generous eps. Throws when eps would
// need θ < pi/64.
Angle theta_for_eps(const Rat& eps);

// All (1+eps)-nearest neighbors via the relative-nearest-neighbor graph:
// per level-d node the pair (b(v), r(v)); per point and cone the candidate
// list N_l(p) = {r(v) : b(v) = p} ordered by x_l-rank with head n_l(p); per
// point a constant-size tournament over the c candidates.
class EpsAnnKds {
 public:
  EpsAnnKds(const std::vector<Trajectory>* pts, const ConeFamily* family,
            EventQueue* queue, SimStats* stats);

  // Wires the hooks into the Semi-Yao KDS and builds from its current state.
  void attach(SemiYaoKds& sy);

  void handle_event(const Certificate& c);

  uint32_t eps_nearest(uint32_t p) const;
  std::vector<uint32_t> table() const;
  uint32_t candidate(uint32_t p, int cone) const { return nl_[p][cone]; }

  // Structure audits (criterion: edge and degree bounds).
  size_t edge_count() const;   // distinct undirected RNN edges, all cones
  size_t max_degree() const;
  // Candidate lists equal a from-scratch recomputation of {r(v): b(v)=p}.
  void audit_lists() const;
  void validate(const Algebraic& t) const;

 private:
  struct PairRec {
    uint32_t b = kNoPoint;
    uint32_t r = kNoPoint;
  };
  struct XRankLess {
    const ConeKds* ck;
    bool operator()(uint32_t a, uint32_t b) const {
      return ck->rank(ck->dim(), a) < ck->rank(ck->dim(), b);
    }
  };
  using CandMap = std::map<uint32_t, int, XRankLess>;

  void on_pair_change(int cone, uint64_t node, char side, uint32_t oldv,
                      uint32_t newv);
  void pre_xswap(int cone, uint32_t p, uint32_t q);
  void post_xswap(int cone, uint32_t p, uint32_t q);
  void cand_add(uint32_t owner, int cone, uint32_t member);
  void cand_remove(uint32_t owner, int cone, uint32_t member);
  void refresh_head(uint32_t owner, int cone);

  const std::vector<Trajectory>* pts_;
  const ConeFamily* family_;
  EventQueue* queue_;
  SimStats* stats_;
  SemiYaoKds* sy_ = nullptr;

  std::vector<std::unordered_map<uint64_t, PairRec>> pairs_;  // per cone
  std::vector<std::unordered_map<uint32_t, std::vector<uint64_t>>> rnodes_;
  std::vector<std::vector<CandMap>> cands_;  // [point][cone]
  std::vector<std::vector<uint32_t>> nl_;    // [point][cone]
  std::vector<std::unique_ptr<TournamentTree>> cand_tt_;   // elems = cones
  // pending co-resident reinsertions across one x-swap
  std::vector<std::tuple<uint32_t, int, int>> pending_;  // (owner, cnt_p, cnt_q)
  int pending_cone_ = -1;
  uint32_t pending_p_ = kNoPoint, pending_q_ = kNoPoint;
};

}  // namespace kds
