#pragma once

#include <cstdint>
#include <vector>

namespace kds {

// Event and cost accounting. Costs are coarse machine-independent units
// (tree-node visits and dictionary operations), not wall clock.
struct SimStats {
  uint64_t events_u = 0;
  uint64_t events_x = 0;
  uint64_t events_tournament = 0;
  uint64_t events_eps = 0;

  uint64_t edge_inserts = 0;
  uint64_t edge_deletes = 0;

  uint64_t node_visits = 0;
  uint64_t event_cost_total = 0;
  uint64_t event_cost_max = 0;
  uint64_t events_total = 0;

  // live order-certificate count per point; the high-water mark samples
  // settled states (after build and after each completed event)
  std::vector<uint32_t> order_certs;
  uint32_t max_order_certs = 0;

  // insertions+deletions into Inc(p) per point (tournament churn)
  std::vector<uint32_t> inc_updates;

  uint64_t cost_mark = 0;

  void reset_points(size_t n) {
    order_certs.assign(n, 0);
    inc_updates.assign(n, 0);
  }
  void visit(uint64_t k = 1) { node_visits += k; }
  void begin_event() { cost_mark = node_visits; }
  void end_event() {
    uint64_t c = node_visits - cost_mark;
    event_cost_total += c;
    if (c > event_cost_max) event_cost_max = c;
    ++events_total;
    settle_certs();
  }
  void cert_added(uint32_t p) { ++order_certs[p]; }
  void cert_removed(uint32_t p) { --order_certs[p]; }
  void settle_certs() {
    for (uint32_t c : order_certs)
      if (c > max_order_certs) max_order_certs = c;
  }
};

}  // namespace kds
