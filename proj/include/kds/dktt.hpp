#pragma once

#include "kds/event_queue.hpp"
#include "kds/motion.hpp"

#include <unordered_map>

namespace kds {

// Dynamic and kinetic tournament: maintains the element with minimum
// polynomial value over time under insertions and deletions. Elements sit at
// the leaves of a complete binary tree over a power-of-two slot array;
// every internal node stores the winner of its subtree and a certificate
// against the sibling winner. Deletions tombstone a slot; the tree rebuilds
// (compacting, elements re-sorted by id) when occupancy drops below a
// quarter or the array is full.
class TournamentTree {
 public:
  TournamentTree(EventQueue* queue, SimStats* stats, uint8_t domain,
                 uint32_t owner)
      : queue_(queue), stats_(stats), domain_(domain), owner_(owner) {}
  ~TournamentTree() { clear(); }

  TournamentTree(const TournamentTree&) = delete;
  TournamentTree& operator=(const TournamentTree&) = delete;

  // `tag` identifies the value polynomial (same tag = same polynomial);
  // crossing times are cached per tag pair across insertions.
  void insert(uint32_t elem, uint32_t tag, RatPoly value);
  void insert(uint32_t elem, RatPoly value) {
    insert(elem, elem, std::move(value));
  }
  void erase(uint32_t elem);
  void clear();
  bool contains(uint32_t elem) const { return elems_.count(elem) != 0; }
  size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }

  // Current overall winner (minimum element), if any.
  uint32_t winner() const { return cap_ ? win_[1] : kNoPoint; }
  const RatPoly* value_of(uint32_t elem) const;

  void handle_event(const Certificate& c);

  // Audit: every stored winner beats the sibling winner at time t, and the
  // root equals a linear-scan argmin.
  void validate(const Algebraic& t) const;
  size_t height() const;

 private:
  struct Elem {
    uint32_t slot;
    uint32_t tag;
    RatPoly value;
  };
  static constexpr uint32_t kNoCert = 0xFFFFFFFFu;

  int cmp(uint32_t e1, uint32_t e2) const;  // -1 if e1 beats e2 just after now
  uint32_t better(uint32_t e1, uint32_t e2) const;
  void refresh_cert(uint32_t v);
  void drop_cert(uint32_t v);
  void update_from_leaf(uint32_t heap);
  void rebuild(uint32_t new_cap);

  EventQueue* queue_;
  SimStats* stats_;
  uint8_t domain_;
  uint32_t owner_;
  uint32_t cap_ = 0;                  // leaf slots (power of two)
  std::vector<uint32_t> win_;         // heap of winning elems, size 2*cap_
  std::vector<uint32_t> cert_;        // internal-node cert handles
  std::vector<uint32_t> slot_elem_;   // leaf slot -> elem
  std::vector<uint32_t> free_slots_;
  std::unordered_map<uint32_t, Elem> elems_;
  // crossing times per value-tag pair
  std::map<std::pair<uint32_t, uint32_t>,
           std::shared_ptr<const std::vector<Algebraic>>>
      cross_cache_;
};

}  // namespace kds
