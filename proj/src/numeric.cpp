#include "kds/numeric.hpp"

#include <cmath>
#include <stdexcept>

namespace kds {

void double_bounds(const Rat& x, double& lo, double& hi) {
  double d = x.convert_to<double>();
  if (!std::isfinite(d)) {
    lo = -std::numeric_limits<double>::infinity();
    hi = std::numeric_limits<double>::infinity();
    return;
  }
  lo = std::nextafter(d, -std::numeric_limits<double>::infinity());
  hi = std::nextafter(d, std::numeric_limits<double>::infinity());
}

std::optional<Rat> parse_rat(std::string_view text) {
  if (text.empty()) return std::nullopt;
  auto parse_int = [](std::string_view s, Int& out) -> bool {
    if (s.empty()) return false;
    size_t i = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) return false;
    Int v = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return false;
      v = v * 10 + (s[i] - '0');
    }
    out = neg ? Int(-v) : v;
    return true;
  };
  size_t slash = text.find('/');
  Int num, den = 1;
  if (slash == std::string_view::npos) {
    if (!parse_int(text, num)) return std::nullopt;
  } else {
    if (!parse_int(text.substr(0, slash), num)) return std::nullopt;
    if (!parse_int(text.substr(slash + 1), den)) return std::nullopt;
    if (den == 0) return std::nullopt;
  }
  return make_rat(std::move(num), std::move(den));
}

std::string to_string(const Rat& x) {
  if (denominator(x) == 1) return numerator(x).str();
  return numerator(x).str() + "/" + denominator(x).str();
}

Int isqrt(const Int& n) {
  if (n < 0) throw std::domain_error("isqrt of negative");
  if (n == 0) return 0;
  return boost::multiprecision::sqrt(n);
}

bool rat_sqrt_exact(const Rat& x, Rat* root) {
  if (x < 0) return false;
  Int n = numerator(x), d = denominator(x);
  Int rn = isqrt(n), rd = isqrt(d);
  if (rn * rn != n || rd * rd != d) return false;
  if (root) *root = Rat(rn, rd);
  return true;
}

void rat_sqrt_bounds(const Rat& x, int bits, Rat& lo, Rat& hi) {
  if (x < 0) throw std::domain_error("sqrt of negative");
  if (x == 0) {
    lo = hi = 0;
    return;
  }
  // sqrt(n/d) = sqrt(n*d)/d; scale so the integer sqrt carries `bits`
  // fractional bits.
  Int n = numerator(x), d = denominator(x);
  Int scaled = n * d;
  scaled <<= 2 * bits;
  Int r = isqrt(scaled);  // r^2 <= scaled < (r+1)^2
  Int den = d;
  den <<= bits;
  lo = Rat(r, den);
  hi = Rat(r + 1, den);
}

}  // namespace kds
