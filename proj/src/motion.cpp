#include "kds/motion.hpp"

#include <cassert>

namespace kds {

QuadPoly project_on_axis(const Trajectory& a, const Direction& axis) {
  assert(a.dim == axis.dim);
  QuadPoly acc;
  for (int i = 0; i < a.dim; ++i) {
    acc = acc + to_quad_poly(a.coord[i]) * axis.v[i];
  }
  return acc;
}

QuadPoly diff_along_axis(const Trajectory& a, const Trajectory& b,
                         const Direction& axis) {
  assert(a.dim == b.dim && a.dim == axis.dim);
  QuadPoly acc;
  for (int i = 0; i < a.dim; ++i) {
    acc = acc + to_quad_poly(a.coord[i] - b.coord[i]) * axis.v[i];
  }
  return acc;
}

RatPoly squared_distance_poly(const Trajectory& a, const Trajectory& b) {
  assert(a.dim == b.dim);
  RatPoly acc;
  for (int i = 0; i < a.dim; ++i) {
    RatPoly d = a.coord[i] - b.coord[i];
    acc = acc + d * d;
  }
  return acc;
}

}  // namespace kds
