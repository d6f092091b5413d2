#pragma once

#include "kds/dktt.hpp"

#include <map>
#include <memory>

namespace kds {

// All nearest neighbors: one tournament per point over its incident
// Semi-Yao edges. Directed targets from two sides may name the same
// undirected edge; a reference count stores it once.
class AllNearestKds {
 public:
  AllNearestKds(const std::vector<Trajectory>* pts, EventQueue* queue,
                SimStats* stats);

  // Builds Inc(p) and the tournaments from a target snapshot[w][l].
  void build(const std::vector<std::vector<uint32_t>>& targets);
  void on_edge_change(uint32_t w, uint32_t target, bool inserted);
  void handle_event(const Certificate& c);

  uint32_t nearest(uint32_t p) const { return tt_[p]->winner(); }
  std::vector<uint32_t> nn_table() const;
  // Pair with minimum distance at rational time t; tie by (min id, max id).
  std::optional<std::pair<uint32_t, uint32_t>> closest_pair(const Rat& t) const;

  size_t inc_total() const;  // Σ_p |Inc(p)| (undirected, both endpoints)
  const TournamentTree& tree(uint32_t p) const { return *tt_[p]; }
  void validate(const Algebraic& t) const;

 private:
  const std::vector<Trajectory>* pts_;
  EventQueue* queue_;
  SimStats* stats_;
  std::vector<std::unique_ptr<TournamentTree>> tt_;
  std::map<std::pair<uint32_t, uint32_t>, int> ref_;
};

}  // namespace kds
