#include "kds/ann.hpp"

#include <cassert>

namespace kds {

AllNearestKds::AllNearestKds(const std::vector<Trajectory>* pts,
                             EventQueue* queue, SimStats* stats)
    : pts_(pts), queue_(queue), stats_(stats) {
  if (stats_->inc_updates.size() < pts_->size())
    stats_->reset_points(pts_->size());
  for (uint32_t p = 0; p < pts_->size(); ++p)
    tt_.push_back(std::make_unique<TournamentTree>(queue_, stats_, 0, p));
}

void AllNearestKds::build(const std::vector<std::vector<uint32_t>>& targets) {
  ref_.clear();
  for (auto& t : tt_) t->clear();
  for (uint32_t w = 0; w < targets.size(); ++w)
    for (uint32_t t : targets[w])
      if (t != kNoPoint) on_edge_change(w, t, true);
}

void AllNearestKds::on_edge_change(uint32_t w, uint32_t target,
                                   bool inserted) {
  auto key = std::make_pair(std::min(w, target), std::max(w, target));
  if (inserted) {
    if (++ref_[key] == 1) {
      RatPoly d = squared_distance_poly((*pts_)[w], (*pts_)[target]);
      tt_[w]->insert(target, d);
      tt_[target]->insert(w, std::move(d));
      ++stats_->inc_updates[w];
      ++stats_->inc_updates[target];
    }
  } else {
    auto it = ref_.find(key);
    assert(it != ref_.end());
    if (--it->second == 0) {
      ref_.erase(it);
      tt_[w]->erase(target);
      tt_[target]->erase(w);
      ++stats_->inc_updates[w];
      ++stats_->inc_updates[target];
    }
  }
}

void AllNearestKds::handle_event(const Certificate& c) {
  assert(c.domain == 0);
  tt_[c.owner]->handle_event(c);
}

std::vector<uint32_t> AllNearestKds::nn_table() const {
  std::vector<uint32_t> t(pts_->size());
  for (uint32_t p = 0; p < pts_->size(); ++p) t[p] = tt_[p]->winner();
  return t;
}

std::optional<std::pair<uint32_t, uint32_t>> AllNearestKds::closest_pair(
    const Rat& t) const {
  std::optional<std::pair<uint32_t, uint32_t>> best;
  Rat best_d;
  for (uint32_t p = 0; p < pts_->size(); ++p) {
    uint32_t w = tt_[p]->winner();
    if (w == kNoPoint) continue;
    Rat d = tt_[p]->value_of(w)->eval(t);
    auto pair = std::make_pair(std::min(p, w), std::max(p, w));
    if (!best || d < best_d || (d == best_d && pair < *best)) {
      best = pair;
      best_d = d;
    }
  }
  return best;
}

size_t AllNearestKds::inc_total() const {
  size_t s = 0;
  for (const auto& t : tt_) s += t->size();
  return s;
}

void AllNearestKds::validate(const Algebraic& t) const {
  for (const auto& tree : tt_) tree->validate(t);
}

}  // namespace kds
