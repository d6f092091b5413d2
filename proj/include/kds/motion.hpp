#pragma once

#include "kds/algebraic.hpp"
#include "kds/poly.hpp"

#include <array>
#include <cstdint>

namespace kds {

using PointId = uint32_t;

// Sentinel for "no point" in dense-index tables.
constexpr uint32_t kNoPoint = 0xFFFFFFFFu;

// A moving point: one coordinate polynomial per dimension, degree <= s.
struct Trajectory {
  PointId id = 0;
  int dim = 2;
  std::array<RatPoly, 3> coord;

  std::array<Rat, 3> position(const Rat& t) const {
    std::array<Rat, 3> p{};
    for (int i = 0; i < dim; ++i) p[i] = coord[i].eval(t);
    return p;
  }
  std::array<double, 3> position_double(double t) const {
    std::array<double, 3> p{};
    for (int i = 0; i < dim; ++i) p[i] = coord[i].eval_double(t);
    return p;
  }
  int max_degree() const {
    int d = 0;
    for (int i = 0; i < dim; ++i) d = std::max(d, coord[i].degree());
    return d;
  }
};

// Exact direction vector with Quad coordinates (not necessarily unit).
// Carries a cached double image for filtered arithmetic.
struct Direction {
  int dim = 2;
  std::array<Quad, 3> v;
  std::array<double, 3> d{0, 0, 0};

  double dx(int i) const { return d[i]; }
  void refresh_doubles() {
    for (int i = 0; i < 3; ++i) d[i] = v[i].to_double();
  }
};

// <a(t) - b(t), axis> as a polynomial over the quadratic field.
QuadPoly diff_along_axis(const Trajectory& a, const Trajectory& b,
                         const Direction& axis);

// Projection of a single trajectory on an axis.
QuadPoly project_on_axis(const Trajectory& a, const Direction& axis);

// Squared Euclidean distance |a(t) - b(t)|^2, degree <= 2s, rational.
RatPoly squared_distance_poly(const Trajectory& a, const Trajectory& b);

}  // namespace kds
