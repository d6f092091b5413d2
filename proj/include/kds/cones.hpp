#pragma once

#include "kds/motion.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace kds {

// Opening angle theta = pi * num / den.
struct Angle {
  int num = 1;
  int den = 3;
  double radians() const { return 3.14159265358979323846 * num / den; }
  friend bool operator==(const Angle& a, const Angle& b) {
    return a.num * b.den == b.num * a.den;
  }
};

// One polyhedral cone: d bounding half-spaces with inward normals u_1..u_d,
// an interior axis x_l, and the extreme rays (for angle audits). All vectors
// are exact, not normalized; membership and projections only use signs and
// ratios, which are scale-invariant.
struct Cone {
  int index = 0;
  int dim = 2;
  std::vector<Direction> normals;
  std::vector<bool> strict;          // geometric boundary rule per normal
  std::vector<int> normal_tie_sign;  // sign(<e, u_i>) for the id perturbation
  Direction axis;
  int axis_tie_sign = 1;
  std::vector<Direction> rays;
};

Quad dot_dir(const std::array<Rat, 3>& v, const Direction& d);

// Partition of directions around any apex into c cones of opening <= theta.
// Exact coordinates live in Q[sqrt(2)] or Q[sqrt(3)]; the supported angles
// are pi/3, pi/4, pi/6, pi/8 and pi/12 (what exact quadratic arithmetic
// admits in the plane; d=3 uses the same grid for uniformity).
class ConeFamily {
 public:
  static ConeFamily build(int dim, Angle theta, bool for_nn_use = true);
  static bool supported(Angle theta);
  static Quad cos2(Angle theta);  // cos^2(theta), exact

  int dim() const { return dim_; }
  Angle theta() const { return theta_; }
  int size() const { return int(cones_.size()); }
  const Cone& cone(int l) const { return cones_[l]; }

  // Axis a in [0,d) -> inward normal u_{a+1}; a == d -> cone axis x_l.
  const Direction& axis_dir(int l, int a) const {
    return a == dim_ ? cones_[l].axis : cones_[l].normals[a];
  }
  int tie_sign(int l, int a) const {
    return a == dim_ ? cones_[l].axis_tie_sign : cones_[l].normal_tie_sign[a];
  }

  // Membership of q in the translated cone C_l(apex) under the global
  // id-perturbation tie rule. Requires apex_id != q_id.
  bool contains(int l, const std::array<Rat, 3>& apex, PointId apex_id,
                const std::array<Rat, 3>& q, PointId q_id) const;
  // p in reflected cone of q <=> q in cone of p.
  bool reflected_contains(int l, const std::array<Rat, 3>& apex,
                          PointId apex_id, const std::array<Rat, 3>& q,
                          PointId q_id) const {
    return contains(l, q, q_id, apex, apex_id);
  }
  int cone_of(const std::array<Rat, 3>& apex, PointId apex_id,
              const std::array<Rat, 3>& q, PointId q_id) const;

  // Geometric partition on pure directions (boundary rule, no ids);
  // for d=3 boundaries belong to the smallest incident cone index.
  int direction_cone(const std::array<Rat, 3>& dir) const;

  std::string dump() const;

  // The symbolic perturbation direction (id tie-breaking).
  static std::array<Rat, 3> perturbation_vector(int dim);

 private:
  int dim_ = 2;
  Angle theta_;
  std::vector<Cone> cones_;
};

}  // namespace kds
