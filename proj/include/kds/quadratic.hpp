#pragma once

#include "kds/numeric.hpp"

#include <cassert>
#include <cmath>

namespace kds {

// Exact scalar of the form a + b*sqrt(k), a,b rational, k in {0,2,3}.
// k == 0 encodes a plain rational (b is identically 0). Mixed-radicand
// arithmetic is only defined when one side is rational; cone frames never
// mix sqrt(2) with sqrt(3) values.
class Quad {
 public:
  Quad() : a_(0), b_(0), k_(0) {}
  Quad(Rat a) : a_(std::move(a)), b_(0), k_(0) {}  // NOLINT(implicit)
  Quad(long v) : a_(v), b_(0), k_(0) {}            // NOLINT(implicit)
  Quad(int v) : a_(v), b_(0), k_(0) {}             // NOLINT(implicit)
  Quad(Rat a, Rat b, int k) : a_(std::move(a)), b_(std::move(b)), k_(k) {
    normalize();
  }

  static Quad sqrt_term(int k, Rat coeff = Rat(1)) {
    return Quad(Rat(0), std::move(coeff), k);
  }

  const Rat& rational_part() const { return a_; }
  const Rat& radical_part() const { return b_; }
  int radicand() const { return k_; }
  bool is_rational() const { return k_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  // Exact value when the radical part vanishes.
  const Rat& as_rational() const {
    assert(k_ == 0);
    return a_;
  }

  friend Quad operator+(const Quad& x, const Quad& y) {
    if (x.k_ == 0 && y.k_ == 0) return Quad(x.a_ + y.a_);
    int k = merge(x, y);
    return Quad(x.a_ + y.a_, x.b_ + y.b_, k);
  }
  friend Quad operator-(const Quad& x, const Quad& y) {
    if (x.k_ == 0 && y.k_ == 0) return Quad(x.a_ - y.a_);
    int k = merge(x, y);
    return Quad(x.a_ - y.a_, x.b_ - y.b_, k);
  }
  friend Quad operator-(const Quad& x) { return Quad(-x.a_, -x.b_, x.k_); }
  friend Quad operator*(const Quad& x, const Quad& y) {
    if (x.k_ == 0) {  // rational * (a + b sqrt k)
      if (x.a_ == 0 || y.k_ == 0) return Quad(x.a_ * y.a_);
      return Quad(x.a_ * y.a_, x.a_ * y.b_, y.k_);
    }
    if (y.k_ == 0) {
      if (y.a_ == 0) return Quad(Rat(0));
      return Quad(x.a_ * y.a_, x.b_ * y.a_, x.k_);
    }
    int k = merge(x, y);
    return Quad(x.a_ * y.a_ + Rat(k) * x.b_ * y.b_,
                x.a_ * y.b_ + x.b_ * y.a_, k);
  }
  Quad& operator+=(const Quad& y) { return *this = *this + y; }
  Quad& operator-=(const Quad& y) { return *this = *this - y; }
  Quad& operator*=(const Quad& y) { return *this = *this * y; }

  // Multiplicative inverse; requires nonzero value.
  Quad inverse() const {
    assert(!is_zero());
    // 1/(a+b√k) = (a−b√k)/(a²−k b²); the norm is nonzero for k nonsquare.
    Rat norm = a_ * a_ - Rat(k_) * b_ * b_;
    assert(norm != 0);
    return Quad(a_ / norm, -b_ / norm, k_);
  }
  friend Quad operator/(const Quad& x, const Quad& y) {
    return x * y.inverse();
  }

  Quad conj() const { return Quad(a_, -b_, k_); }

  int sgn() const {
    if (b_ == 0) return sign(a_);
    if (a_ == 0) return sign(b_);
    int sa = sign(a_), sb = sign(b_);
    if (sa == sb) return sa;
    // sign(a + b√k) with a,b of opposite sign: compare a² with k·b².
    Rat lhs = a_ * a_;
    Rat rhs = Rat(k_) * b_ * b_;
    int cmp = lhs.compare(rhs);
    if (cmp == 0) return 0;  // only for square k; cannot occur for k=2,3
    return cmp > 0 ? sa : sb;
  }

  friend bool operator==(const Quad& x, const Quad& y) {
    return (x - y).is_zero();
  }
  friend bool operator<(const Quad& x, const Quad& y) {
    return (x - y).sgn() < 0;
  }
  friend bool operator<=(const Quad& x, const Quad& y) {
    return (x - y).sgn() <= 0;
  }

  double to_double() const {
    double v = kds::to_double(a_);
    if (b_ != 0) v += kds::to_double(b_) * std::sqrt(double(k_));
    return v;
  }

  std::string str() const {
    if (k_ == 0) return to_string(a_);
    return to_string(a_) + "+" + to_string(b_) + "*sqrt(" +
           std::to_string(k_) + ")";
  }

 private:
  static int merge(const Quad& x, const Quad& y) {
    if (x.k_ == 0) return y.k_;
    if (y.k_ == 0) return x.k_;
    assert(x.k_ == y.k_);
    return x.k_;
  }
  void normalize() {
    if (b_ == 0) k_ = 0;
    assert(k_ == 0 || k_ == 2 || k_ == 3);
  }

  Rat a_, b_;
  int k_;
};

}  // namespace kds
