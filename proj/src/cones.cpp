#include "kds/cones.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

namespace kds {

namespace {

constexpr long kPerturbBase = 1000003;

// tan of (hd/2) degrees for the half-degree grid the families use.
// Returns false for 90 degrees (vertical).
bool tan_table(int hd, Quad& out) {
  switch (hd) {
    case 0: out = Quad(0); return true;
    case 30: out = Quad(Rat(2), Rat(-1), 3); return true;    // tan 15
    case 45: out = Quad(Rat(-1), Rat(1), 2); return true;    // tan 22.5
    case 60: out = Quad(Rat(0), Rat(1, 3), 3); return true;  // tan 30
    case 90: out = Quad(1); return true;                     // tan 45
    case 120: out = Quad(Rat(0), Rat(1), 3); return true;    // tan 60
    case 135: out = Quad(Rat(1), Rat(1), 2); return true;    // tan 67.5
    case 150: out = Quad(Rat(2), Rat(1), 3); return true;    // tan 75
    default: return false;
  }
}

// Exact direction vector at angle hd half-degrees (scale-free).
Direction exact_dir_2d(int hd) {
  hd %= 720;
  if (hd < 0) hd += 720;
  Direction d;
  d.dim = 2;
  d.v[2] = Quad(0);
  Quad t;
  if (hd == 180) {
    d.v[0] = Quad(0);
    d.v[1] = Quad(1);
  } else if (hd == 540) {
    d.v[0] = Quad(0);
    d.v[1] = Quad(-1);
  } else if (hd < 180) {
    bool ok = tan_table(hd, t);
    assert(ok);
    (void)ok;
    d.v[0] = Quad(1);
    d.v[1] = t;
  } else if (hd <= 360) {
    bool ok = tan_table(360 - hd, t);
    assert(ok);
    (void)ok;
    d.v[0] = Quad(-1);
    d.v[1] = t;
  } else if (hd < 540) {
    bool ok = tan_table(hd - 360, t);
    assert(ok);
    (void)ok;
    d.v[0] = Quad(-1);
    d.v[1] = -t;
  } else {
    bool ok = tan_table(720 - hd, t);
    assert(ok);
    (void)ok;
    d.v[0] = Quad(1);
    d.v[1] = -t;
  }
  return d;
}

Direction rot90_ccw(const Direction& d) {
  Direction r;
  r.dim = 2;
  r.v[0] = -d.v[1];
  r.v[1] = d.v[0];
  r.v[2] = Quad(0);
  return r;
}

Direction rot90_cw(const Direction& d) {
  Direction r;
  r.dim = 2;
  r.v[0] = d.v[1];
  r.v[1] = -d.v[0];
  r.v[2] = Quad(0);
  return r;
}

Quad dot_qq(const Direction& a, const Direction& b) {
  Quad s = a.v[0] * b.v[0] + a.v[1] * b.v[1];
  if (a.dim == 3) s += a.v[2] * b.v[2];
  return s;
}

Direction cross(const Direction& a, const Direction& b) {
  Direction r;
  r.dim = 3;
  r.v[0] = a.v[1] * b.v[2] - a.v[2] * b.v[1];
  r.v[1] = a.v[2] * b.v[0] - a.v[0] * b.v[2];
  r.v[2] = a.v[0] * b.v[1] - a.v[1] * b.v[0];
  return r;
}

Direction rational_dir3(Rat x, Rat y, Rat z) {
  Direction d;
  d.dim = 3;
  d.v[0] = Quad(std::move(x));
  d.v[1] = Quad(std::move(y));
  d.v[2] = Quad(std::move(z));
  return d;
}

int tie_sign_of(const Direction& d, const std::array<Rat, 3>& e) {
  Quad s = d.v[0] * Quad(e[0]) + d.v[1] * Quad(e[1]);
  if (d.dim == 3) s += d.v[2] * Quad(e[2]);
  int sg = s.sgn();
  if (sg == 0)
    throw std::logic_error("perturbation direction not generic for frame");
  return sg;
}

// Max pairwise angle between rays <= theta, exactly.
bool rays_within(const std::vector<Direction>& rays, const Quad& cos2theta) {
  for (size_t i = 0; i < rays.size(); ++i)
    for (size_t j = i + 1; j < rays.size(); ++j) {
      Quad c = dot_qq(rays[i], rays[j]);
      if (c.sgn() <= 0) return false;  // angle >= 90 degrees
      Quad lhs = c * c;
      Quad rhs = cos2theta * dot_qq(rays[i], rays[i]) * dot_qq(rays[j], rays[j]);
      if ((lhs - rhs).sgn() < 0) return false;
    }
  return true;
}

}  // namespace

Quad dot_dir(const std::array<Rat, 3>& v, const Direction& d) {
  Quad s = d.v[0] * Quad(v[0]) + d.v[1] * Quad(v[1]);
  if (d.dim == 3) s += d.v[2] * Quad(v[2]);
  return s;
}

std::array<Rat, 3> ConeFamily::perturbation_vector(int dim) {
  if (dim == 2) return {Rat(kPerturbBase), Rat(1), Rat(0)};
  return {Rat(kPerturbBase) * Rat(kPerturbBase), Rat(kPerturbBase), Rat(1)};
}

bool ConeFamily::supported(Angle theta) {
  if (theta.num != 1) return false;
  switch (theta.den) {
    case 3:
    case 4:
    case 6:
    case 8:
    case 12:
      return true;
    default:
      return false;
  }
}

Quad ConeFamily::cos2(Angle theta) {
  assert(theta.num == 1);
  switch (theta.den) {
    case 3: return Quad(Rat(1, 4));
    case 4: return Quad(Rat(1, 2));
    case 6: return Quad(Rat(3, 4));
    case 8: return Quad(Rat(2, 4), Rat(1, 4), 2);   // (2+sqrt2)/4
    case 12: return Quad(Rat(2, 4), Rat(1, 4), 3);  // (2+sqrt3)/4
    default: throw std::invalid_argument("unsupported angle");
  }
}

ConeFamily ConeFamily::build(int dim, Angle theta, bool for_nn_use) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("cone family dimension must be 2 or 3");
  if (!supported(theta))
    throw std::invalid_argument(
        "unsupported cone angle: exact construction needs theta in "
        "{pi/3, pi/4, pi/6, pi/8, pi/12}");
  if (for_nn_use && 3 * theta.num > theta.den)
    throw std::invalid_argument(
        "theta must be <= pi/3 for nearest-neighbor maintenance");

  ConeFamily f;
  f.dim_ = dim;
  f.theta_ = theta;
  auto evec = perturbation_vector(dim);

  if (dim == 2) {
    // den wedges of equal opening 2*pi/(2*den)... : c = 2*den wedges of
    // pi/den each, boundaries at multiples of theta.
    int c = 2 * theta.den;
    int step_hd = 720 / c;  // wedge opening in half-degrees
    for (int j = 0; j < c; ++j) {
      Cone cn;
      cn.index = j;
      cn.dim = 2;
      Direction blo = exact_dir_2d(j * step_hd);
      Direction bhi = exact_dir_2d((j + 1) * step_hd);
      cn.rays = {blo, bhi};
      cn.normals = {rot90_ccw(blo), rot90_cw(bhi)};
      cn.strict = {false, true};  // lower boundary inclusive, upper exclusive
      // Axis: exact bisector when the half-angle lands on the tan grid
      // (pi/3, pi/4, pi/6 families), otherwise an exact interior direction
      // (sum of the boundary rays).
      bool exact_bisector =
          step_hd == 120 || step_hd == 90 || step_hd == 60;
      if (exact_bisector) {
        cn.axis = exact_dir_2d(j * step_hd + step_hd / 2);
      } else {
        cn.axis.dim = 2;
        cn.axis.v[0] = blo.v[0] + bhi.v[0];
        cn.axis.v[1] = blo.v[1] + bhi.v[1];
        cn.axis.v[2] = Quad(0);
      }
      for (const auto& n : cn.normals)
        cn.normal_tie_sign.push_back(tie_sign_of(n, evec));
      cn.axis_tie_sign = tie_sign_of(cn.axis, evec);
      for (auto& nrm : cn.normals) nrm.refresh_doubles();
      cn.axis.refresh_doubles();
      for (auto& ray : cn.rays) ray.refresh_doubles();
      f.cones_.push_back(std::move(cn));
    }
    return f;
  }

  // d == 3: cones over a triangulated subdivision of the unit-cube surface.
  // Each face splits into k x k subsquares, each into 2 triangles; k minimal
  // such that every simplicial cone's extreme rays stay within theta.
  Quad c2 = cos2(theta);
  int k = 0;
  for (int kk = 1; kk <= 64 && k == 0; ++kk) {
    // Worst triangle on a face is at a corner; test all on one face.
    bool ok = true;
    Rat w(2, kk);
    for (int ix = 0; ix < kk && ok; ++ix)
      for (int iy = 0; iy < kk && ok; ++iy) {
        Rat x0 = Rat(-1) + w * ix, x1 = x0 + w;
        Rat y0 = Rat(-1) + w * iy, y1 = y0 + w;
        std::vector<Direction> t1 = {rational_dir3(x0, y0, 1),
                                     rational_dir3(x1, y0, 1),
                                     rational_dir3(x1, y1, 1)};
        std::vector<Direction> t2 = {rational_dir3(x0, y0, 1),
                                     rational_dir3(x1, y1, 1),
                                     rational_dir3(x0, y1, 1)};
        ok = rays_within(t1, c2) && rays_within(t2, c2);
      }
    if (ok) k = kk;
  }
  if (k == 0) throw std::invalid_argument("no cube subdivision meets theta");

  // Face frames: map (u, v) on the face to 3-space, outward axis last.
  struct Face {
    int ax[3];   // coordinate index of u, v, w
    int sgn[3];  // sign of each
  };
  const Face faces[6] = {
      {{1, 2, 0}, {1, 1, 1}},    // +x
      {{1, 2, 0}, {-1, -1, -1}}, // -x  (mirrored to keep triangles oriented)
      {{2, 0, 1}, {1, 1, 1}},    // +y
      {{2, 0, 1}, {-1, -1, -1}}, // -y
      {{0, 1, 2}, {1, 1, 1}},    // +z
      {{0, 1, 2}, {-1, -1, -1}}, // -z
  };
  Rat w(2, k);
  int index = 0;
  for (const Face& face : faces) {
    for (int iu = 0; iu < k; ++iu)
      for (int iv = 0; iv < k; ++iv) {
        Rat u0 = Rat(-1) + w * iu, u1 = u0 + w;
        Rat v0 = Rat(-1) + w * iv, v1 = v0 + w;
        auto mk = [&](const Rat& u, const Rat& v) {
          std::array<Rat, 3> p{};
          p[face.ax[0]] = u * face.sgn[0];
          p[face.ax[1]] = v * face.sgn[1];
          p[face.ax[2]] = Rat(face.sgn[2]);
          return rational_dir3(p[0], p[1], p[2]);
        };
        for (int tri = 0; tri < 2; ++tri) {
          std::vector<Direction> rays =
              tri == 0
                  ? std::vector<Direction>{mk(u0, v0), mk(u1, v0), mk(u1, v1)}
                  : std::vector<Direction>{mk(u0, v0), mk(u1, v1), mk(u0, v1)};
          Cone cn;
          cn.index = index++;
          cn.dim = 3;
          cn.rays = rays;
          for (int i = 0; i < 3; ++i) {
            const Direction& a = rays[i];
            const Direction& b = rays[(i + 1) % 3];
            const Direction& opp = rays[(i + 2) % 3];
            Direction n = cross(a, b);
            if (dot_qq(n, opp).sgn() < 0)
              for (auto& q : n.v) q = -q;
            assert(dot_qq(n, opp).sgn() > 0);
            cn.normals.push_back(n);
            cn.strict.push_back(false);  // ownership by smallest cone index
          }
          cn.axis.dim = 3;
          for (int i = 0; i < 3; ++i)
            cn.axis.v[i] = rays[0].v[i] + rays[1].v[i] + rays[2].v[i];
          for (const auto& n : cn.normals)
            cn.normal_tie_sign.push_back(tie_sign_of(n, evec));
          cn.axis_tie_sign = tie_sign_of(cn.axis, evec);
          for (auto& nrm : cn.normals) nrm.refresh_doubles();
          cn.axis.refresh_doubles();
          for (auto& ray : cn.rays) ray.refresh_doubles();
          f.cones_.push_back(std::move(cn));
        }
      }
  }
  return f;
}

bool ConeFamily::contains(int l, const std::array<Rat, 3>& apex,
                          PointId apex_id, const std::array<Rat, 3>& q,
                          PointId q_id) const {
  assert(apex_id != q_id);
  const Cone& cn = cones_[l];
  std::array<Rat, 3> d{};
  for (int i = 0; i < dim_; ++i) d[i] = q[i] - apex[i];
  int id_sign = q_id > apex_id ? 1 : -1;
  for (int i = 0; i < dim_; ++i) {
    int s = dot_dir(d, cn.normals[i]).sgn();
    if (s == 0) s = id_sign * cn.normal_tie_sign[i];
    if (s < 0) return false;
  }
  return true;
}

int ConeFamily::cone_of(const std::array<Rat, 3>& apex, PointId apex_id,
                        const std::array<Rat, 3>& q, PointId q_id) const {
  for (int l = 0; l < size(); ++l)
    if (contains(l, apex, apex_id, q, q_id)) return l;
  throw std::logic_error("cone partition violated");
}

int ConeFamily::direction_cone(const std::array<Rat, 3>& dir) const {
  for (int l = 0; l < size(); ++l) {
    const Cone& cn = cones_[l];
    bool in = true;
    for (int i = 0; i < dim_ && in; ++i) {
      int s = dot_dir(dir, cn.normals[i]).sgn();
      in = cn.strict[i] ? s > 0 : s >= 0;
    }
    if (in) return l;
  }
  return -1;
}

std::string ConeFamily::dump() const {
  std::ostringstream os;
  os << "cone family d=" << dim_ << " theta=pi*" << theta_.num << "/"
     << theta_.den << " c=" << size() << "\n";
  for (const Cone& cn : cones_) {
    os << "cone " << cn.index << ": normals";
    for (const auto& n : cn.normals) {
      os << " (";
      for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << n.v[i].str();
      os << ")";
    }
    os << " axis (";
    for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << cn.axis.v[i].str();
    os << ")\n";
  }
  return os.str();
}

}  // namespace kds
