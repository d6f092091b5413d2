#pragma once

#include "kds/numeric.hpp"
#include "kds/quadratic.hpp"

#include <vector>

namespace kds {

// Dense univariate polynomial, constant term first, trailing zeros trimmed
// (canonical form: degree == index of last nonzero coefficient).
template <class K>
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Poly constant(K v) { return Poly(std::vector<K>{std::move(v)}); }

  bool is_zero() const { return c_.empty(); }
  int degree() const { return int(c_.size()) - 1; }  // -1 for zero poly
  const std::vector<K>& coeffs() const { return c_; }
  const K& operator[](size_t i) const { return c_[i]; }
  const K& leading() const { return c_.back(); }

  K eval(const K& t) const {
    K acc{};
    for (size_t i = c_.size(); i-- > 0;) acc = acc * t + c_[i];
    return acc;
  }

  double eval_double(double t) const {
    double acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * t + coeff_double(c_[i]);
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<K> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * K(long(i));
    return Poly(std::move(d));
  }

  friend Poly operator+(const Poly& x, const Poly& y) {
    std::vector<K> r(std::max(x.c_.size(), y.c_.size()), K{});
    for (size_t i = 0; i < x.c_.size(); ++i) r[i] = x.c_[i];
    for (size_t i = 0; i < y.c_.size(); ++i) r[i] = r[i] + y.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& x, const Poly& y) {
    std::vector<K> r(std::max(x.c_.size(), y.c_.size()), K{});
    for (size_t i = 0; i < x.c_.size(); ++i) r[i] = x.c_[i];
    for (size_t i = 0; i < y.c_.size(); ++i) r[i] = r[i] - y.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly& x) {
    std::vector<K> r(x.c_.size());
    for (size_t i = 0; i < x.c_.size(); ++i) r[i] = -x.c_[i];
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly& x, const Poly& y) {
    if (x.is_zero() || y.is_zero()) return Poly();
    std::vector<K> r(x.c_.size() + y.c_.size() - 1, K{});
    for (size_t i = 0; i < x.c_.size(); ++i)
      for (size_t j = 0; j < y.c_.size(); ++j)
        r[i + j] = r[i + j] + x.c_[i] * y.c_[j];
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly& x, const K& s) {
    std::vector<K> r(x.c_.size());
    for (size_t i = 0; i < x.c_.size(); ++i) r[i] = x.c_[i] * s;
    return Poly(std::move(r));
  }

  friend bool operator==(const Poly& x, const Poly& y) {
    return (x - y).is_zero();
  }

  // Coefficient-wise radical conjugate (identity for rational polys).
  Poly conjugate() const {
    std::vector<K> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = coeff_conj(c_[i]);
    return Poly(std::move(r));
  }

  bool has_radical() const {
    for (const K& v : c_)
      if (coeff_radical(v)) return true;
    return false;
  }

 private:
  static bool is_zero_coeff(const Rat& v) { return v == 0; }
  static bool is_zero_coeff(const Quad& v) { return v.is_zero(); }
  static double coeff_double(const Rat& v) { return to_double(v); }
  static double coeff_double(const Quad& v) { return v.to_double(); }
  static Rat coeff_conj(const Rat& v) { return v; }
  static Quad coeff_conj(const Quad& v) { return v.conj(); }
  static bool coeff_radical(const Rat&) { return false; }
  static bool coeff_radical(const Quad& v) { return !v.is_rational(); }

  void trim() {
    while (!c_.empty() && is_zero_coeff(c_.back())) c_.pop_back();
  }

  std::vector<K> c_;
};

using RatPoly = Poly<Rat>;
using QuadPoly = Poly<Quad>;

inline RatPoly to_rat_poly(const QuadPoly& p) {
  std::vector<Rat> c(p.coeffs().size());
  for (size_t i = 0; i < c.size(); ++i) {
    c[i] = p[i].as_rational();
  }
  return RatPoly(std::move(c));
}

inline QuadPoly to_quad_poly(const RatPoly& p) {
  std::vector<Quad> c(p.coeffs().size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = Quad(p[i]);
  return QuadPoly(std::move(c));
}

}  // namespace kds
