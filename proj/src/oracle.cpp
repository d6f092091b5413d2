#include "kds/oracle.hpp"

#include "kds/rbrt.hpp"

#include <cassert>
#include <stdexcept>
#include <cmath>

namespace kds {
namespace oracle {

Snapshot Snapshot::at(const std::vector<Trajectory>& pts, const Rat& t) {
  Snapshot s;
  s.dim = pts.empty() ? 2 : pts[0].dim;
  s.pos.resize(pts.size());
  s.dpos.resize(pts.size());
  double td = to_double(t);
  for (size_t i = 0; i < pts.size(); ++i) {
    s.pos[i] = pts[i].position(t);
    s.dpos[i] = pts[i].position_double(td);
  }
  return s;
}

namespace {

// Sign of a dot product of a position difference with a safety margin that
// accounts for cancellation in the difference; 0 means undecided.
int dot_sign_double(const Direction& dir, const double* d, const double* mags,
                    int dim) {
  double acc = 0, mag = 0;
  for (int i = 0; i < dim; ++i) {
    acc += dir.dx(i) * d[i];
    mag += std::fabs(dir.dx(i)) * mags[i];
  }
  double margin = mag * 4e-13 + 1e-300;
  if (acc > margin) return 1;
  if (acc < -margin) return -1;
  return 0;
}

// Membership with per-normal filtering: uncertain dot products are decided
// exactly one at a time (with the id perturbation rule), so near-boundary or
// degenerate pairs cost a single exact dot product instead of a full
// exact-fallback sweep.
bool member_assisted(const ConeFamily& f, int l, const Snapshot& s, uint32_t w,
                     uint32_t q, const double* d, const double* mags) {
  const Cone& cn = f.cone(l);
  int dim = f.dim();
  int id_sign = q > w ? 1 : -1;
  for (int i = 0; i < dim; ++i) {
    int sg = dot_sign_double(cn.normals[i], d, mags, dim);
    if (sg == 0) {
      std::array<Rat, 3> diff{};
      for (int j = 0; j < dim; ++j) diff[j] = s.pos[q][j] - s.pos[w][j];
      sg = dot_dir(diff, cn.normals[i]).sgn();
      if (sg == 0) sg = id_sign * cn.normal_tie_sign[i];
    }
    if (sg < 0) return false;
  }
  return true;
}

}  // namespace

int cone_of_filtered(const ConeFamily& family, const Snapshot& s, uint32_t w,
                     uint32_t q) {
  double d[3], mags[3];
  int dim = family.dim();
  for (int i = 0; i < dim; ++i) {
    d[i] = s.dpos[q][i] - s.dpos[w][i];
    mags[i] = std::fabs(s.dpos[q][i]) + std::fabs(s.dpos[w][i]) + 1e-30;
  }
  for (int l = 0; l < family.size(); ++l)
    if (member_assisted(family, l, s, w, q, d, mags)) return l;
  throw std::logic_error("cone partition violated in oracle");
}

std::vector<std::vector<uint32_t>> semi_yao(const std::vector<Trajectory>& pts,
                                            const ConeFamily& family,
                                            const Rat& t, bool parallel) {
  size_t n = pts.size();
  Snapshot s = Snapshot::at(pts, t);
  std::vector<std::vector<uint32_t>> target(
      n, std::vector<uint32_t>(family.size(), kNoPoint));
  int dim = family.dim();
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (int64_t wi = 0; wi < int64_t(n); ++wi) {
    uint32_t w = uint32_t(wi);
    auto& row = target[w];
    // For ties and filter fallbacks: exact projection of q on the axis.
    for (uint32_t q = 0; q < n; ++q) {
      if (q == w) continue;
      int l = cone_of_filtered(family, s, w, q);
      uint32_t& best = row[l];
      if (best == kNoPoint) {
        best = q;
        continue;
      }
      // compare x_l projections of q vs best with filter + exact fallback
      const Direction& ax = family.cone(l).axis;
      double dq = 0, db = 0, mag = 0;
      for (int i = 0; i < dim; ++i) {
        dq += ax.dx(i) * s.dpos[q][i];
        db += ax.dx(i) * s.dpos[best][i];
        mag += std::fabs(ax.dx(i)) *
               (std::fabs(s.dpos[q][i]) + std::fabs(s.dpos[best][i]));
      }
      double margin = mag * 4e-13 + 1e-300;
      if (dq - db > margin) continue;
      if (db - dq > margin) {
        best = q;
        continue;
      }
      Quad pq = dot_dir(s.pos[q], ax);
      Quad pb = dot_dir(s.pos[best], ax);
      int sg = (pq - pb).sgn();
      if (sg == 0) sg = ((q > best) == (family.cone(l).axis_tie_sign > 0))
                            ? 1
                            : -1;
      if (sg < 0) best = q;
    }
  }
  return target;
}

std::vector<uint32_t> all_nn(const std::vector<Trajectory>& pts, const Rat& t,
                             bool parallel) {
  size_t n = pts.size();
  Snapshot s = Snapshot::at(pts, t);
  std::vector<uint32_t> nn(n, kNoPoint);
  int dim = pts.empty() ? 2 : pts[0].dim;
#pragma omp parallel for schedule(dynamic, 4) if (parallel)
  for (int64_t pi = 0; pi < int64_t(n); ++pi) {
    uint32_t p = uint32_t(pi);
    uint32_t best = kNoPoint;
    double bestd = 0;
    for (uint32_t q = 0; q < n; ++q) {
      if (q == p) continue;
      double d = 0;
      for (int i = 0; i < dim; ++i) {
        double diff = s.dpos[q][i] - s.dpos[p][i];
        d += diff * diff;
      }
      if (best == kNoPoint) {
        best = q;
        bestd = d;
        continue;
      }
      double m = 1;
      for (int i = 0; i < dim; ++i)
        m = std::max({m, std::fabs(s.dpos[p][i]), std::fabs(s.dpos[q][i]),
                      std::fabs(s.dpos[best][i])});
      double margin = m * m * 4e-13 + 1e-300;
      if (d - bestd > margin) continue;
      if (bestd - d > margin) {
        best = q;
        bestd = d;
        continue;
      }
      // exact tie-break
      Rat dq = 0, db = 0;
      for (int i = 0; i < dim; ++i) {
        Rat a = s.pos[q][i] - s.pos[p][i];
        Rat b = s.pos[best][i] - s.pos[p][i];
        dq += a * a;
        db += b * b;
      }
      if (dq < db || (dq == db && q < best)) {
        best = q;
        bestd = d;
      }
    }
    nn[p] = best;
  }
  return nn;
}

uint32_t eps_violation(const std::vector<Trajectory>& pts,
                       const std::vector<uint32_t>& cand,
                       const std::vector<uint32_t>& nn, const Rat& eps,
                       const Rat& t) {
  Snapshot s = Snapshot::at(pts, t);
  int dim = pts.empty() ? 2 : pts[0].dim;
  Rat factor = (1 + eps) * (1 + eps);
  for (uint32_t p = 0; p < pts.size(); ++p) {
    if (nn[p] == kNoPoint) {
      if (cand[p] != kNoPoint) return p;
      continue;
    }
    if (cand[p] == kNoPoint) return p;
    Rat dc = 0, dn = 0;
    for (int i = 0; i < dim; ++i) {
      Rat a = s.pos[cand[p]][i] - s.pos[p][i];
      Rat b = s.pos[nn[p]][i] - s.pos[p][i];
      dc += a * a;
      dn += b * b;
    }
    if (dc > factor * dn) return p;
  }
  return kNoPoint;
}

}  // namespace oracle
}  // namespace kds
