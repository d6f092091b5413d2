#pragma once

#include "kds/cones.hpp"
#include "kds/motion.hpp"

#include <string>
#include <vector>

namespace kds {
namespace oracle {

// Brute-force references, independent of the incremental structures: they
// share only the motion and cone primitives. Each kernel has an OpenMP
// parallel path (points are independent) and a serial reference path; the
// two must agree bit-for-bit, which the test suite checks.

// targets[w][l] = point of minimum x_l-coordinate in P ∩ C_l(w), kNoPoint if
// the cone is empty. O(c n^2).
std::vector<std::vector<uint32_t>> semi_yao(const std::vector<Trajectory>& pts,
                                            const ConeFamily& family,
                                            const Rat& t, bool parallel);

// nn[p] = Euclidean nearest neighbor of p (tie by id). O(n^2).
std::vector<uint32_t> all_nn(const std::vector<Trajectory>& pts, const Rat& t,
                             bool parallel);

// Exact check |p, cand[p]|^2 <= (1+eps)^2 |p, nn[p]|^2 for all p; returns the
// first violating point or kNoPoint.
uint32_t eps_violation(const std::vector<Trajectory>& pts,
                       const std::vector<uint32_t>& cand,
                       const std::vector<uint32_t>& nn, const Rat& eps,
                       const Rat& t);

// Positions at rational time, exact and double.
struct Snapshot {
  std::vector<std::array<Rat, 3>> pos;
  std::vector<std::array<double, 3>> dpos;
  int dim;
  static Snapshot at(const std::vector<Trajectory>& pts, const Rat& t);
};

// Membership with a double filter and exact fallback (same tie rule as the
// cone family). Exposed for tests.
int cone_of_filtered(const ConeFamily& family, const Snapshot& s, uint32_t w,
                     uint32_t q);

}  // namespace oracle
}  // namespace kds
