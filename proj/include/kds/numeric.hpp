#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace kds {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline int sign(const Int& x) { return x.sign(); }
inline int sign(const Rat& x) { return x.sign(); }

// Component constructor that tolerates negative denominators (the underlying
// library's two-argument constructor does not).
inline Rat make_rat(Int num, Int den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return Rat(std::move(num), std::move(den));
}

inline double to_double(const Rat& x) { return x.convert_to<double>(); }

// Conservative double bracket of a rational: [lo, hi] with lo <= x <= hi.
// convert_to<double> does not promise a rounding direction, so pad one ulp
// each way.
void double_bounds(const Rat& x, double& lo, double& hi);

// Parses "123", "-4/7", "0". Returns nullopt on malformed input.
std::optional<Rat> parse_rat(std::string_view text);

std::string to_string(const Rat& x);

inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;
  if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Int rat_floor(const Rat& x) {
  return floor_div(numerator(x), denominator(x));
}

// Largest integer r with r*r <= n. Requires n >= 0.
Int isqrt(const Int& n);

// True iff x is the square of a rational; if so *root is the nonnegative root.
bool rat_sqrt_exact(const Rat& x, Rat* root);

// Brackets sqrt(x) within width <= 2^-bits relative-ish precision.
// Requires x >= 0.
void rat_sqrt_bounds(const Rat& x, int bits, Rat& lo, Rat& hi);

}  // namespace kds
