#include "doctest.h"

#include "kds/cones.hpp"

#include <cmath>
#include <random>
#include <set>

using namespace kds;

namespace {

std::array<Rat, 3> rnd_point(std::mt19937& rng, int dim) {
  std::uniform_int_distribution<int> c(-4096, 4096);
  std::array<Rat, 3> p{};
  for (int i = 0; i < dim; ++i) p[i] = Rat(c(rng), 1024);
  return p;
}

double angle_of(const std::array<Rat, 3>& v) {
  double a = std::atan2(to_double(v[1]), to_double(v[0]));
  if (a < 0) a += 2 * 3.14159265358979323846;
  return a;
}

}  // namespace

TEST_CASE("planar pi/3 family: six 60-degree wedges") {
  auto f = ConeFamily::build(2, Angle{1, 3});
  CHECK(f.size() == 6);
  // axes sit at 30, 90, ..., 330 degrees
  for (int l = 0; l < 6; ++l) {
    const Cone& c = f.cone(l);
    double ax = std::atan2(c.axis.dx(1), c.axis.dx(0)) * 180 / M_PI;
    if (ax < 0) ax += 360;
    CHECK(doctest::Approx(ax).epsilon(1e-9) == 30.0 + 60.0 * l);
    // axis strictly interior: positive dot with both inward normals
    for (int i = 0; i < 2; ++i) {
      Quad d = c.axis.v[0] * c.normals[i].v[0] + c.axis.v[1] * c.normals[i].v[1];
      CHECK(d.sgn() > 0);
    }
  }
  // opposite axes: x_0 == -x_3 exactly
  const Cone& c0 = f.cone(0);
  const Cone& c3 = f.cone(3);
  CHECK((c0.axis.v[0] + c3.axis.v[0]).is_zero());
  CHECK((c0.axis.v[1] + c3.axis.v[1]).is_zero());
}

TEST_CASE("direction partition is exact for every supported planar angle") {
  for (int den : {3, 4, 6, 8, 12}) {
    auto f = ConeFamily::build(2, Angle{1, den}, den >= 3);
    CHECK(f.size() == 2 * den);
    std::mt19937 rng(99 + den);
    for (int iter = 0; iter < 2000; ++iter) {
      auto d = rnd_point(rng, 2);
      if (d[0] == 0 && d[1] == 0) continue;
      int hits = 0;
      for (int l = 0; l < f.size(); ++l) {
        const Cone& c = f.cone(l);
        bool in = true;
        for (int i = 0; i < 2 && in; ++i) {
          int s = dot_dir(d, c.normals[i]).sgn();
          in = c.strict[i] ? s > 0 : s >= 0;
        }
        if (in) ++hits;
      }
      CHECK(hits == 1);  // strict/non-strict flags tile the plane
      // and the claiming wedge brackets the direction's angle
      int l = f.direction_cone(d);
      REQUIRE(l >= 0);
      double a = angle_of(d) * den / M_PI;  // wedge units
      if (std::abs(a - std::round(a)) > 1e-9)  // skip near-boundary doubles
        CHECK(int(std::floor(a)) % (2 * den) == l);
    }
  }
}

TEST_CASE("boundary ray belongs to exactly one wedge") {
  auto f = ConeFamily::build(2, Angle{1, 3});
  // direction at exactly 60 degrees: (1, sqrt3) is the shared boundary of
  // wedges 0 and 1; exact arithmetic cannot represent it as a rational
  // vector, so use the wedge-0/5 boundary (1,0) instead.
  std::array<Rat, 3> d{Rat(7), Rat(0), Rat(0)};
  CHECK(f.direction_cone(d) == 0);  // lower boundary inclusive
  std::array<Rat, 3> up{Rat(0), Rat(5), Rat(0)};  // 90 degrees: wedge 1 lower...
  // 90 deg lies strictly inside wedge 1 ([60,120)); check membership count
  CHECK(f.direction_cone(up) == 1);
}

TEST_CASE("contains matches the angle oracle and perturbation resolves ties") {
  auto f = ConeFamily::build(2, Angle{1, 3});
  std::array<Rat, 3> apex{Rat(0), Rat(0), Rat(0)};
  std::array<Rat, 3> q{Rat(1), Rat(1, 10), Rat(0)};
  CHECK(f.contains(0, apex, 0, q, 1));
  for (int l = 1; l < 6; ++l) CHECK(!f.contains(l, apex, 0, q, 1));
  CHECK(f.cone_of(apex, 0, q, 1) == 0);

  // static point directly above: wedge [60,120)
  std::array<Rat, 3> up{Rat(0), Rat(1), Rat(0)};
  CHECK(f.cone_of(apex, 0, up, 1) == 1);
  // reflected through the apex lands in the opposite cone
  std::array<Rat, 3> down{Rat(0), Rat(-1), Rat(0)};
  CHECK(f.cone_of(apex, 0, down, 1) == 4);

  // coincident points: the id perturbation assigns exactly one cone
  std::array<Rat, 3> same{Rat(0), Rat(0), Rat(0)};
  int hits = 0, owner = -1;
  for (int l = 0; l < 6; ++l)
    if (f.contains(l, apex, 0, same, 7)) {
      ++hits;
      owner = l;
    }
  CHECK(hits == 1);
  // and the reverse order lands in the opposite cone
  int rev = f.cone_of(same, 7, apex, 0);
  CHECK(rev == (owner + 3) % 6);
}

TEST_CASE("point-pair partition: exactly one cone in 2d and 3d") {
  for (int dim : {2, 3}) {
    auto f = ConeFamily::build(dim, Angle{1, 3});
    std::mt19937 rng(31 * dim);
    for (int iter = 0; iter < 3000; ++iter) {
      auto p = rnd_point(rng, dim);
      auto q = rnd_point(rng, dim);
      int hits = 0;
      for (int l = 0; l < f.size(); ++l)
        if (f.contains(l, p, 1, q, 2)) ++hits;
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("reflection duality") {
  auto f = ConeFamily::build(2, Angle{1, 3});
  std::mt19937 rng(47);
  for (int iter = 0; iter < 500; ++iter) {
    auto p = rnd_point(rng, 2);
    auto q = rnd_point(rng, 2);
    for (int l = 0; l < f.size(); ++l) {
      CHECK(f.reflected_contains(l, p, 1, q, 2) == f.contains(l, q, 2, p, 1));
    }
  }
}

TEST_CASE("3d family: 48 cones at pi/3, rays within theta, axes interior") {
  auto f = ConeFamily::build(3, Angle{1, 3});
  CHECK(f.size() == 48);
  Quad c2 = ConeFamily::cos2(Angle{1, 3});
  for (int l = 0; l < f.size(); ++l) {
    const Cone& c = f.cone(l);
    REQUIRE(c.rays.size() == 3);
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = i + 1; j < 3; ++j) {
        Quad dot = c.rays[i].v[0] * c.rays[j].v[0] +
                   c.rays[i].v[1] * c.rays[j].v[1] +
                   c.rays[i].v[2] * c.rays[j].v[2];
        REQUIRE(dot.sgn() > 0);
        Quad n2a = c.rays[i].v[0] * c.rays[i].v[0] +
                   c.rays[i].v[1] * c.rays[i].v[1] +
                   c.rays[i].v[2] * c.rays[i].v[2];
        Quad n2b = c.rays[j].v[0] * c.rays[j].v[0] +
                   c.rays[j].v[1] * c.rays[j].v[1] +
                   c.rays[j].v[2] * c.rays[j].v[2];
        CHECK((dot * dot - c2 * n2a * n2b).sgn() >= 0);
      }
    for (int i = 0; i < 3; ++i) {
      Quad d = c.axis.v[0] * c.normals[i].v[0] +
               c.axis.v[1] * c.normals[i].v[1] +
               c.axis.v[2] * c.normals[i].v[2];
      CHECK(d.sgn() > 0);
    }
  }
  // directions partition
  std::mt19937 rng(5);
  for (int iter = 0; iter < 3000; ++iter) {
    auto d = rnd_point(rng, 3);
    if (d[0] == 0 && d[1] == 0 && d[2] == 0) continue;
    CHECK(f.direction_cone(d) >= 0);
  }
}

TEST_CASE("2d opening-angle audit: boundary rays exactly theta apart") {
  for (int den : {3, 4, 6, 8, 12}) {
    auto f = ConeFamily::build(2, Angle{1, den});
    Quad c2 = ConeFamily::cos2(Angle{1, den});
    for (int l = 0; l < f.size(); ++l) {
      const Cone& c = f.cone(l);
      Quad dot = c.rays[0].v[0] * c.rays[1].v[0] + c.rays[0].v[1] * c.rays[1].v[1];
      Quad n2a = c.rays[0].v[0] * c.rays[0].v[0] + c.rays[0].v[1] * c.rays[0].v[1];
      Quad n2b = c.rays[1].v[0] * c.rays[1].v[0] + c.rays[1].v[1] * c.rays[1].v[1];
      // cos^2(angle) == cos^2(theta) exactly, and the angle is acute
      CHECK(dot.sgn() > 0);
      CHECK((dot * dot - c2 * n2a * n2b).sgn() == 0);
    }
  }
}

TEST_CASE("unsupported angles are rejected") {
  CHECK_THROWS(ConeFamily::build(2, Angle{1, 16}));
  CHECK_THROWS(ConeFamily::build(4, Angle{1, 3}));
  CHECK_THROWS(ConeFamily::build(2, Angle{1, 2}));  // > pi/3 for NN use
  CHECK_NOTHROW(ConeFamily::build(2, Angle{1, 4}, false));
}

TEST_CASE("family dump lists every cone") {
  auto f = ConeFamily::build(2, Angle{1, 3});
  auto text = f.dump();
  CHECK(text.find("cone 0:") != std::string::npos);
  CHECK(text.find("cone 5:") != std::string::npos);
  CHECK(text.find("axis") != std::string::npos);
}
