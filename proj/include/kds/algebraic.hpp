#pragma once

#include "kds/numeric.hpp"
#include "kds/poly.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace kds {

// ---- integer polynomial utilities (constant term first, trimmed) ----

using IPoly = std::vector<Int>;

IPoly to_ipoly(const RatPoly& p);  // clear denominators, primitive part
int ipoly_degree(const IPoly& p);
int ipoly_sign_at(const IPoly& p, const Rat& t);
IPoly ipoly_derivative(const IPoly& p);
IPoly ipoly_primitive(IPoly p);
IPoly ipoly_gcd(IPoly a, IPoly b);    // primitive, positive leading coeff
IPoly ipoly_squarefree(const IPoly& p);
Rat cauchy_root_bound(const IPoly& p);

// Sturm chain of a squarefree integer polynomial.
struct SturmChain {
  explicit SturmChain(IPoly p);
  int variations_at(const Rat& x) const;
  // Number of distinct roots in (a, b]; requires p(a) != 0.
  int count_roots(const Rat& a, const Rat& b) const;
  std::vector<IPoly> seq;
};

// ---- field polynomial utilities ----

// Monic gcd over the coefficient field (Rat or Quad).
template <class K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b);

// (quotient, remainder) of a / b over the field; b nonzero.
template <class K>
std::pair<Poly<K>, Poly<K>> poly_divrem(const Poly<K>& a, const Poly<K>& b);

// Product of the squarefree factors of odd multiplicity (Yun's algorithm).
// The sign of p changes exactly at the real roots of this polynomial.
template <class K>
Poly<K> odd_multiplicity_part(const Poly<K>& p);

// ---- real algebraic numbers ----

// Exact real number: either a rational, or the unique root of a squarefree
// integer polynomial inside an open isolating interval. Comparisons are
// exact; a cached double bracket filters the common cases. Not thread-safe
// (interval refinement mutates shared state).
class Algebraic {
 public:
  Algebraic() : rat_(Rat(0)) {}
  explicit Algebraic(Rat v) : rat_(std::move(v)) {}
  Algebraic(IPoly poly, Rat lo, Rat hi);  // isolating interval, one root

  bool is_rational() const { return rat_.has_value(); }
  const Rat& rat() const { return *rat_; }

  // Rational bracket lo <= x <= hi (equal for rationals).
  Rat lower() const;
  Rat upper() const;
  Rat width() const;  // tolerance: 0 for exact rationals
  double approx() const;

  // The defining polynomial (empty for rationals).
  const IPoly& poly() const;

  void refine() const;                       // one bisection step
  void refine_below(const Rat& width) const;

  static int compare(const Algebraic& a, const Algebraic& b);
  int compare_rat(const Rat& r) const;

  Algebraic plus(const Rat& shift) const;

  friend bool operator<(const Algebraic& a, const Algebraic& b) {
    return compare(a, b) < 0;
  }
  friend bool operator==(const Algebraic& a, const Algebraic& b) {
    return compare(a, b) == 0;
  }
  friend bool operator<=(const Algebraic& a, const Algebraic& b) {
    return compare(a, b) <= 0;
  }

  std::string str() const;

 private:
  struct Root {
    IPoly poly;  // squarefree; exactly one root in (lo, hi)
    Rat lo, hi;
    int sign_lo = 0;  // sign of poly at lo (nonzero)
    Rat shift;        // represented value = root + shift
    double dlo = 0, dhi = 0;
    void refresh_doubles();
    void bisect();
  };

  std::optional<Rat> rat_;
  std::shared_ptr<Root> root_;
};

// Smallest t > t0 at which sign(p) changes (odd-multiplicity root).
// nullopt if p keeps its sign forever after t0 or is identically zero.
template <class K>
std::optional<Algebraic> next_sign_change(const Poly<K>& p,
                                          const Algebraic& t0);

// All sign-change times of p in ascending order (used by oracles/tests).
template <class K>
std::vector<Algebraic> all_sign_changes(const Poly<K>& p);

// Exact sign of p evaluated at an algebraic time.
template <class K>
int sign_at(const Poly<K>& p, const Algebraic& t);

// Sign of p on the open interval just after t (zero only if p == 0).
template <class K>
int sign_just_after(const Poly<K>& p, const Algebraic& t);

// A rational strictly between a and b (requires a < b).
Rat rational_between(const Algebraic& a, const Algebraic& b);

}  // namespace kds
