#include "kds/algebraic.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kds {

// ---------------------------------------------------------------- IPoly --

static void ipoly_trim(IPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

int ipoly_degree(const IPoly& p) { return int(p.size()) - 1; }

IPoly to_ipoly(const RatPoly& p) {
  IPoly out;
  if (p.is_zero()) return out;
  Int den = 1;
  for (const Rat& c : p.coeffs()) den = lcm(den, denominator(c));
  out.reserve(p.coeffs().size());
  for (const Rat& c : p.coeffs())
    out.push_back(numerator(c) * (den / denominator(c)));
  out = ipoly_primitive(std::move(out));
  // canonical sign (positive leading coefficient): polynomials that agree up
  // to scaling then compare bitwise equal, which the root-equality probes
  // use as a fast path
  if (!out.empty() && out.back() < 0)
    for (Int& c : out) c = -c;
  return out;
}

IPoly ipoly_primitive(IPoly p) {
  ipoly_trim(p);
  if (p.empty()) return p;
  Int g = 0;
  for (const Int& c : p) g = gcd(g, c);
  if (g > 1)
    for (Int& c : p) c /= g;
  return p;
}

int ipoly_sign_at(const IPoly& p, const Rat& t) {
  if (p.empty()) return 0;
  const Int& num = numerator(t);
  const Int& den = denominator(t);
  Int acc = p.back();
  Int dp = 1;
  for (size_t i = p.size() - 1; i-- > 0;) {
    dp *= den;
    acc = acc * num + p[i] * dp;
  }
  return acc.sign();
}

IPoly ipoly_derivative(const IPoly& p) {
  if (p.size() <= 1) return {};
  IPoly d(p.size() - 1);
  for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * Int(i);
  return d;
}

// Pseudo-remainder: c * rem(a, b) for some positive integer c. The positive
// scale keeps Sturm sign sequences intact.
static IPoly ipoly_pseudo_rem(IPoly a, const IPoly& b) {
  assert(!b.empty());
  int db = ipoly_degree(b);
  Int albs = abs(b.back());
  int lsign = b.back().sign();
  while (ipoly_degree(a) >= db && !a.empty()) {
    Int top = a.back();
    int shift = ipoly_degree(a) - db;
    for (Int& c : a) c *= albs;
    Int f = top * lsign;
    for (int i = 0; i <= db; ++i) a[i + shift] -= f * b[i];
    ipoly_trim(a);
  }
  return a;
}

IPoly ipoly_gcd(IPoly a, IPoly b) {
  a = ipoly_primitive(std::move(a));
  b = ipoly_primitive(std::move(b));
  while (!b.empty()) {
    IPoly r = ipoly_primitive(ipoly_pseudo_rem(a, b));
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() < 0)
    for (Int& c : a) c = -c;
  return a;
}

// Primitive part of a / b, assuming b divides a (used for p / gcd(p, p')).
// Runs over Q and clears denominators at the end.
static IPoly ipoly_exact_div(const IPoly& a, const IPoly& b) {
  assert(!b.empty());
  int db = ipoly_degree(b);
  if (ipoly_degree(a) < db) {
    assert(a.empty());
    return {};
  }
  std::vector<Rat> ra(a.begin(), a.end());
  std::vector<Rat> qq(a.size() - b.size() + 1);
  Rat lb(b.back());
  for (int i = int(ra.size()) - 1; i - db >= 0; --i) {
    Rat c = ra[i] / lb;
    qq[i - db] = c;
    if (c != 0)
      for (int j = 0; j <= db; ++j) ra[i - db + j] -= c * Rat(b[j]);
  }
  return to_ipoly(RatPoly(std::move(qq)));
}

IPoly ipoly_squarefree(const IPoly& p) {
  if (ipoly_degree(p) <= 1) return p;
  IPoly g = ipoly_gcd(p, ipoly_derivative(p));
  if (ipoly_degree(g) < 1) return p;
  return ipoly_primitive(ipoly_exact_div(p, g));
}

Rat cauchy_root_bound(const IPoly& p) {
  assert(!p.empty());
  Rat m = 0;
  Int lead = abs(p.back());
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    Rat r(abs(p[i]), lead);
    if (r > m) m = r;
  }
  return m + 1;
}

SturmChain::SturmChain(IPoly p) {
  p = ipoly_primitive(std::move(p));
  if (p.empty()) return;
  seq.push_back(p);
  IPoly d = ipoly_primitive(ipoly_derivative(p));
  if (d.empty()) return;
  seq.push_back(d);
  while (true) {
    const IPoly& s2 = seq[seq.size() - 2];
    const IPoly& s1 = seq[seq.size() - 1];
    IPoly r = ipoly_pseudo_rem(s2, s1);
    if (r.empty()) break;
    for (Int& c : r) c = -c;
    seq.push_back(ipoly_primitive(std::move(r)));
    if (ipoly_degree(seq.back()) == 0) break;
  }
}

int SturmChain::variations_at(const Rat& x) const {
  int v = 0, prev = 0;
  for (const IPoly& s : seq) {
    int sg = ipoly_sign_at(s, x);
    if (sg == 0) continue;
    if (prev != 0 && sg != prev) ++v;
    prev = sg;
  }
  return v;
}

int SturmChain::count_roots(const Rat& a, const Rat& b) const {
  return variations_at(a) - variations_at(b);
}

// ----------------------------------------------------- field poly utils --

template <class K>
static int ksign(const K& v) {
  if constexpr (std::is_same_v<K, Rat>)
    return sign(v);
  else
    return v.sgn();
}

template <class K>
std::pair<Poly<K>, Poly<K>> poly_divrem(const Poly<K>& a, const Poly<K>& b) {
  assert(!b.is_zero());
  if (a.degree() < b.degree()) return {Poly<K>(), a};
  std::vector<K> r(a.coeffs());
  std::vector<K> q(a.degree() - b.degree() + 1, K{});
  K lb_inv;
  if constexpr (std::is_same_v<K, Rat>)
    lb_inv = Rat(1) / b.leading();
  else
    lb_inv = b.leading().inverse();
  for (int i = int(r.size()) - 1; i - b.degree() >= 0; --i) {
    K c = r[i] * lb_inv;
    if (ksign(c) == 0) continue;
    q[i - b.degree()] = c;
    for (int j = 0; j <= b.degree(); ++j)
      r[i - b.degree() + j] = r[i - b.degree() + j] - c * b[j];
  }
  return {Poly<K>(std::move(q)), Poly<K>(std::move(r))};
}

template <class K>
static Poly<K> poly_monic(const Poly<K>& p) {
  if (p.is_zero()) return p;
  K inv;
  if constexpr (std::is_same_v<K, Rat>)
    inv = Rat(1) / p.leading();
  else
    inv = p.leading().inverse();
  return p * inv;
}

template <class K>
Poly<K> poly_gcd(Poly<K> a, Poly<K> b) {
  while (!b.is_zero()) {
    auto [q, r] = poly_divrem(a, b);
    (void)q;
    a = std::move(b);
    b = poly_monic(r);
  }
  return poly_monic(a);
}

template <class K>
static Poly<K> poly_exact_div(const Poly<K>& a, const Poly<K>& b) {
  auto [q, r] = poly_divrem(a, b);
  assert(r.is_zero());
  return q;
}

template <class K>
Poly<K> odd_multiplicity_part(const Poly<K>& p) {
  if (p.degree() <= 0) return p;
  Poly<K> dp = p.derivative();
  Poly<K> g = poly_gcd(p, dp);
  if (g.degree() < 1) return p;  // squarefree already
  // Yun's squarefree decomposition.
  Poly<K> w = poly_exact_div(p, g);
  Poly<K> y = poly_exact_div(dp, g);
  Poly<K> z = y - w.derivative();
  Poly<K> odd = Poly<K>::constant(K(1));
  int mult = 1;
  while (w.degree() > 0) {
    Poly<K> f = poly_gcd(w, z);
    if (f.degree() > 0 && (mult % 2 == 1)) odd = odd * f;
    w = poly_exact_div(w, f);
    y = poly_exact_div(z, f);
    z = y - w.derivative();
    ++mult;
  }
  return odd;
}

// ------------------------------------------------------------ Algebraic --

void Algebraic::Root::refresh_doubles() {
  double l1, l2, h1, h2;
  double_bounds(lo, l1, l2);
  double_bounds(hi, h1, h2);
  dlo = l1;
  dhi = h2;
}

void Algebraic::Root::bisect() {
  Rat mid = (lo + hi) / 2;
  int s = ipoly_sign_at(poly, mid);
  if (s == 0) {
    // The midpoint is the root itself.
    lo = hi = mid;
    sign_lo = 0;
    refresh_doubles();
    return;
  }
  if (s == sign_lo)
    lo = mid;
  else
    hi = mid;
  refresh_doubles();
}

Algebraic::Algebraic(IPoly poly, Rat lo, Rat hi) {
  auto r = std::make_shared<Root>();
  r->poly = std::move(poly);
  r->lo = std::move(lo);
  r->hi = std::move(hi);
  r->sign_lo = ipoly_sign_at(r->poly, r->lo);
  assert(r->sign_lo != 0);
  assert(ipoly_sign_at(r->poly, r->hi) == -r->sign_lo);
  r->refresh_doubles();
  root_ = std::move(r);
}

Rat Algebraic::lower() const { return rat_ ? *rat_ : root_->lo; }
Rat Algebraic::upper() const { return rat_ ? *rat_ : root_->hi; }
Rat Algebraic::width() const { return rat_ ? Rat(0) : root_->hi - root_->lo; }

double Algebraic::approx() const {
  if (rat_) return to_double(*rat_);
  return 0.5 * (root_->dlo + root_->dhi);
}

const IPoly& Algebraic::poly() const {
  static const IPoly kEmpty;
  return rat_ ? kEmpty : root_->poly;
}

void Algebraic::refine() const {
  if (!rat_ && root_->lo != root_->hi) root_->bisect();
}

void Algebraic::refine_below(const Rat& w) const {
  if (rat_) return;
  Root& r = *root_;
  if (r.lo == r.hi || r.hi - r.lo <= w) return;
  // Double-guided narrowing with exact verification: bisect on double signs,
  // then accept a small dyadic window iff the polynomial provably flips
  // across it. Garbage double evaluations just fail the check.
  int deg = ipoly_degree(r.poly);
  if (deg <= 16) {
    double cd[17];
    bool ok = true;
    for (int i = 0; i <= deg && ok; ++i) {
      cd[i] = r.poly[i].convert_to<double>();
      ok = std::isfinite(cd[i]);
    }
    if (ok) {
      auto evald = [&](double x) {
        double acc = cd[deg];
        for (int i = deg; i-- > 0;) acc = acc * x + cd[i];
        return acc;
      };
      double a = r.dlo, b = r.dhi;
      double sa = evald(a);
      for (int it = 0; it < 80 && b - a > 1e-14 * (std::fabs(a) + 1); ++it) {
        double m = 0.5 * (a + b);
        if ((evald(m) < 0) == (sa < 0))
          a = m;
        else
          b = m;
      }
      double m = 0.5 * (a + b);
      double eps = std::max(2e-13, std::fabs(m) * 2e-13);
      Rat l{m - eps}, h{m + eps};
      if (l < r.lo) l = r.lo;
      if (h > r.hi) h = r.hi;
      if (l < h && ipoly_sign_at(r.poly, l) == r.sign_lo &&
          ipoly_sign_at(r.poly, h) == -r.sign_lo) {
        r.lo = std::move(l);
        r.hi = std::move(h);
        r.refresh_doubles();
      }
    }
  }
  while (r.hi - r.lo > w && r.lo != r.hi) r.bisect();
}

int Algebraic::compare_rat(const Rat& r) const {
  if (rat_) return rat_->compare(r);
  for (;;) {
    if (root_->lo == root_->hi) return root_->lo.compare(r);  // collapsed
    if (r <= root_->lo) return 1;   // root lies strictly above lo
    if (r >= root_->hi) return -1;  // and strictly below hi
    if (ipoly_sign_at(root_->poly, r) == 0) return 0;  // r is the root
    root_->bisect();
  }
}

int Algebraic::compare(const Algebraic& a, const Algebraic& b) {
  if (a.rat_ && b.rat_) return a.rat_->compare(*b.rat_);
  if (a.rat_) return -b.compare_rat(*a.rat_);
  if (b.rat_) return a.compare_rat(*b.rat_);
  if (a.root_ == b.root_) return 0;
  // Double filter.
  if (a.root_->dhi < b.root_->dlo) return -1;
  if (b.root_->dhi < a.root_->dlo) return 1;
  // Collapsed-to-rational cases.
  if (a.root_->lo == a.root_->hi) return -b.compare_rat(a.root_->lo);
  if (b.root_->lo == b.root_->hi) return a.compare_rat(b.root_->lo);
  // Equality probe: a == b iff gcd of the defining polynomials has a root in
  // the intersection of the isolating intervals.
  Rat ilo = std::max(a.root_->lo, b.root_->lo);
  Rat ihi = std::min(a.root_->hi, b.root_->hi);
  if (ilo < ihi) {
    IPoly g = a.root_->poly == b.root_->poly
                  ? a.root_->poly
                  : ipoly_gcd(a.root_->poly, b.root_->poly);
    if (ipoly_degree(g) >= 1) {
      // g divides both defining polynomials, whose isolating-interval
      // endpoints are never roots, so the endpoint signs are nonzero.
      int sl = ipoly_sign_at(g, ilo);
      int sh = ipoly_sign_at(g, ihi);
      assert(sl != 0 && sh != 0);
      if (sl != sh) return 0;
    }
  }
  for (;;) {
    if (a.root_->hi <= b.root_->lo) return -1;
    if (b.root_->hi <= a.root_->lo) return 1;
    a.root_->bisect();
    b.root_->bisect();
    if (a.root_->lo == a.root_->hi) return -b.compare_rat(a.root_->lo);
    if (b.root_->lo == b.root_->hi) return a.compare_rat(b.root_->lo);
  }
}

std::string Algebraic::str() const {
  if (rat_) return to_string(*rat_);
  std::ostringstream os;
  os.precision(17);
  os << approx();
  return os.str();
}

Rat rational_between(const Algebraic& a, const Algebraic& b) {
  if (Algebraic::compare(a, b) >= 0)
    throw std::logic_error("rational_between on a >= b");
  for (;;) {
    Rat ra = a.upper();
    Rat rb = b.lower();
    if (ra < rb) return (ra + rb) / 2;
    a.refine();
    b.refine();
  }
}

// ------------------------------------------------------ root isolation --

namespace {

// Ascending real roots of a squarefree integer polynomial.
// Rational roots come out as exact values, irrational ones as isolating
// intervals with endpoints that are not roots.
void isolate_sturm(const SturmChain& chain, const IPoly& n, const Rat& a,
                   const Rat& b, int va, int vb,
                   std::vector<Algebraic>& out) {
  int cnt = va - vb;
  if (cnt <= 0) return;
  if (cnt == 1) {
    out.emplace_back(n, a, b);
    return;
  }
  Rat mid = (a + b) / 2;
  if (ipoly_sign_at(n, mid) == 0) {
    // Exact rational root at the midpoint; carve out a root-free collar.
    Rat eps = (b - a) / 1024;
    for (;;) {
      Rat l = mid - eps, h = mid + eps;
      if (l > a && h < b && ipoly_sign_at(n, l) != 0 &&
          ipoly_sign_at(n, h) != 0 &&
          chain.variations_at(l) - chain.variations_at(h) == 1) {
        int vl = chain.variations_at(l), vh = chain.variations_at(h);
        isolate_sturm(chain, n, a, l, va, vl, out);
        out.emplace_back(Algebraic(mid));
        isolate_sturm(chain, n, h, b, vh, vb, out);
        return;
      }
      eps /= 2;
    }
  }
  int vm = chain.variations_at(mid);
  isolate_sturm(chain, n, a, mid, va, vm, out);
  isolate_sturm(chain, n, mid, b, vm, vb, out);
}

std::vector<Algebraic> isolate_roots(const IPoly& n) {
  std::vector<Algebraic> out;
  int deg = ipoly_degree(n);
  if (deg <= 0) return out;
  if (deg == 1) {
    out.emplace_back(Algebraic(make_rat(-n[0], n[1])));
    return out;
  }
  if (deg == 2) {
    // Exact closed form. n is squarefree, so the discriminant is nonzero.
    Int A = n[2], B = n[1], C = n[0];
    Int disc = B * B - 4 * A * C;
    if (disc < 0) return out;
    assert(disc != 0);
    Rat s;
    if (rat_sqrt_exact(Rat(disc), &s)) {
      Rat r1 = (Rat(-B) - s) / (2 * Rat(A));
      Rat r2 = (Rat(-B) + s) / (2 * Rat(A));
      if (r2 < r1) std::swap(r1, r2);
      out.emplace_back(Algebraic(r1));
      out.emplace_back(Algebraic(r2));
      return out;
    }
    for (int bits = 64;; bits *= 2) {
      Rat slo, shi;
      rat_sqrt_bounds(Rat(disc), bits, slo, shi);
      Rat twoA(2 * A);
      Rat l1 = (Rat(-B) - shi) / twoA, h1 = (Rat(-B) - slo) / twoA;
      Rat l2 = (Rat(-B) + slo) / twoA, h2 = (Rat(-B) + shi) / twoA;
      if (l1 > h1) std::swap(l1, h1);
      if (l2 > h2) std::swap(l2, h2);
      if (h1 < l2) {
        out.emplace_back(Algebraic(n, l1, h1));
        out.emplace_back(Algebraic(n, l2, h2));
        return out;
      }
      if (h2 < l1) {
        out.emplace_back(Algebraic(n, l2, h2));
        out.emplace_back(Algebraic(n, l1, h1));
        return out;
      }
    }
  }
  SturmChain chain(n);
  Rat bound = cauchy_root_bound(n);
  Rat a = -bound, b = bound;
  assert(ipoly_sign_at(n, a) != 0 && ipoly_sign_at(n, b) != 0);
  isolate_sturm(chain, n, a, b, chain.variations_at(a), chain.variations_at(b),
                out);
  return out;
}

template <class K>
K lift_rat(const Rat& r) {
  if constexpr (std::is_same_v<K, Rat>)
    return r;
  else
    return Quad(r);
}

template <class K>
Poly<K> lift_ipoly(const IPoly& p) {
  std::vector<K> c(p.size());
  for (size_t i = 0; i < p.size(); ++i) c[i] = lift_rat<K>(Rat(p[i]));
  return Poly<K>(std::move(c));
}

// Integer squarefree polynomial whose roots include all roots of p.
// For radical coefficients the conjugate is multiplied in first.
template <class K>
IPoly rationalized_squarefree(const Poly<K>& p) {
  RatPoly rp;
  if constexpr (std::is_same_v<K, Rat>) {
    rp = p;
  } else {
    rp = p.has_radical() ? to_rat_poly(p * p.conjugate()) : to_rat_poly(p);
  }
  return ipoly_squarefree(to_ipoly(rp));
}

// Numeric-guided isolation for a squarefree degree-2 polynomial over the
// field: double-precision roots, exactly verified intervals (sign flip of o
// at rational endpoints plus a Sturm count of one root of n inside). Falls
// back to the generic path on any doubt.
template <class K>
bool isolate_deg2_field(const Poly<K>& o, const IPoly& n,
                        std::vector<Algebraic>& out) {
  auto cd = [](const K& v) {
    if constexpr (std::is_same_v<K, Rat>)
      return to_double(v);
    else
      return v.to_double();
  };
  double a = cd(o[2]), b = cd(o[1]), c = cd(o[0]);
  double disc = b * b - 4 * a * c;
  double scale = b * b + std::fabs(4 * a * c) + 1e-300;
  if (disc < scale * 1e-9) return false;  // near-tangent or complex: punt
  double sq = std::sqrt(disc);
  double r1 = (-b - sq) / (2 * a), r2 = (-b + sq) / (2 * a);
  if (r1 > r2) std::swap(r1, r2);
  if (!std::isfinite(r1) || !std::isfinite(r2)) return false;
  SturmChain chain(n);
  std::vector<Algebraic> local;
  for (double r : {r1, r2}) {
    double w0 = std::max(1e-11, std::fabs(r) * 1e-11);
    bool done = false;
    for (int widen = 0; widen < 8 && !done; ++widen, w0 *= 32) {
      Rat lo(r - w0), hi(r + w0);
      int sl = ksign(o.eval(lift_rat<K>(lo)));
      int sh = ksign(o.eval(lift_rat<K>(hi)));
      if (sl == 0 || sh == 0 || sl == sh) continue;
      if (ipoly_sign_at(n, lo) == 0 || ipoly_sign_at(n, hi) == 0) continue;
      if (chain.count_roots(lo, hi) != 1) continue;
      local.emplace_back(n, lo, hi);
      done = true;
    }
    if (!done) return false;
  }
  out = std::move(local);
  return true;
}

// Roots of the field polynomial `filter` among the isolated roots of n.
// n must be squarefree with roots ⊇ roots(filter); for radical coefficients
// n also contains the conjugate's roots, which get filtered out here.
template <class K>
std::vector<Algebraic> filtered_roots(const IPoly& n, const Poly<K>& filter) {
  std::vector<Algebraic> roots = isolate_roots(n);
  std::vector<Algebraic> out;
  out.reserve(roots.size());
  for (Algebraic& r : roots) {
    if (r.is_rational()) {
      if (ksign(filter.eval(lift_rat<K>(r.rat()))) == 0) out.push_back(r);
    } else {
      int sl = ksign(filter.eval(lift_rat<K>(r.lower())));
      int sh = ksign(filter.eval(lift_rat<K>(r.upper())));
      if (sl != sh) out.push_back(r);
    }
  }
  return out;
}

// Ascending roots of the field polynomial `odd` (already squarefree).
template <class K>
std::vector<Algebraic> field_poly_roots(const Poly<K>& odd) {
  IPoly n = rationalized_squarefree(odd);
  if (odd.degree() == 2 && odd.has_radical()) {
    std::vector<Algebraic> fast;
    if (isolate_deg2_field(odd, n, fast)) return fast;
  }
  return filtered_roots(n, odd);
}

}  // namespace

template <class K>
std::vector<Algebraic> all_sign_changes(const Poly<K>& p) {
  if (p.degree() <= 0) return {};
  Poly<K> odd = odd_multiplicity_part(p);
  if (odd.degree() <= 0) return {};
  return field_poly_roots(odd);
}

template <class K>
std::optional<Algebraic> next_sign_change(const Poly<K>& p,
                                          const Algebraic& t0) {
  if (p.degree() <= 0) return std::nullopt;
  Poly<K> odd = odd_multiplicity_part(p);
  if (odd.degree() <= 0) return std::nullopt;
  static const Rat kTol(1, Int(1) << 40);  // ~9e-13
  for (Algebraic& r : field_poly_roots(odd)) {
    if (Algebraic::compare(r, t0) > 0) {
      r.refine_below(kTol);
      return r;
    }
  }
  return std::nullopt;
}

// Sturm-style root count over an arbitrary ordered field, used only on the
// exact fallback path of sign_at.
template <class K>
static int field_root_count(const Poly<K>& squarefree, const Rat& a,
                            const Rat& b) {
  std::vector<Poly<K>> seq;
  seq.push_back(squarefree);
  Poly<K> d = squarefree.derivative();
  if (!d.is_zero()) {
    seq.push_back(d);
    while (true) {
      auto [q, r] = poly_divrem(seq[seq.size() - 2], seq[seq.size() - 1]);
      (void)q;
      if (r.is_zero()) break;
      seq.push_back(poly_monic(-r));
      if (seq.back().degree() == 0) break;
    }
  }
  auto variations = [&](const Rat& x) {
    int v = 0, prev = 0;
    for (const auto& s : seq) {
      int sg = ksign(s.eval(lift_rat<K>(x)));
      if (sg == 0) continue;
      if (prev != 0 && sg != prev) ++v;
      prev = sg;
    }
    return v;
  };
  return variations(a) - variations(b);
}

template <class K>
int sign_at(const Poly<K>& p, const Algebraic& t) {
  if (p.is_zero()) return 0;
  if (p.degree() == 0) return ksign(p[0]);
  if (t.is_rational()) return ksign(p.eval(lift_rat<K>(t.rat())));
  if (t.upper() == t.lower()) return ksign(p.eval(lift_rat<K>(t.lower())));

  // Double filter: |p(mid)| beyond a conservative slope bound decides.
  {
    double lo = to_double(t.lower()), hi = to_double(t.upper());
    double mid = 0.5 * (lo + hi);
    double scale = 0, tp = 1, amax = std::max({1.0, std::fabs(lo), std::fabs(hi)});
    for (int i = 0; i <= p.degree(); ++i) {
      double c;
      if constexpr (std::is_same_v<K, Rat>)
        c = to_double(p[i]);
      else
        c = p[i].to_double();
      scale += std::fabs(c) * (i + 1) * tp;
      tp *= amax;
    }
    double margin = scale * ((hi - lo) + 1e-14) * 8 + 1e-290;
    double v = p.eval_double(mid);
    if (std::fabs(v) > margin) return v > 0 ? 1 : -1;
  }

  // Exact zero test: p(t) == 0 iff gcd(p, defining poly of t) has a root in
  // t's isolating interval.
  Poly<K> tp = lift_ipoly<K>(t.poly());
  Poly<K> h = poly_gcd(p, tp);
  if (h.degree() >= 1) {
    int sl = ksign(h.eval(lift_rat<K>(t.lower())));
    int sh = ksign(h.eval(lift_rat<K>(t.upper())));
    if (sl != sh && sl != 0 && sh != 0) return 0;
  }

  // Nonzero: refine until the interval is free of roots of p.
  Poly<K> sf = poly_exact_div(p, poly_gcd(p, p.derivative()));
  for (;;) {
    Rat lo = t.lower(), hi = t.upper();
    if (lo == hi) return ksign(p.eval(lift_rat<K>(lo)));
    if (ksign(sf.eval(lift_rat<K>(lo))) != 0 &&
        ksign(sf.eval(lift_rat<K>(hi))) != 0 &&
        field_root_count(sf, lo, hi) == 0) {
      int s = ksign(p.eval(lift_rat<K>((lo + hi) / 2)));
      if (s != 0) return s;
    }
    t.refine();
  }
}

template <class K>
int sign_just_after(const Poly<K>& p, const Algebraic& t) {
  if (p.is_zero()) return 0;
  if (p.degree() == 0) return ksign(p[0]);
  int s = sign_at(p, t);
  if (s != 0) return s;
  // p(t) == 0: evaluate strictly between t and the next root of p.
  Poly<K> sf = poly_exact_div(p, poly_gcd(p, p.derivative()));
  std::optional<Algebraic> next;
  for (Algebraic& r : field_poly_roots(sf)) {
    if (Algebraic::compare(r, t) > 0) {
      next = std::move(r);
      break;
    }
  }
  Rat probe;
  if (next) {
    probe = rational_between(t, *next);
  } else {
    probe = t.upper() + 1;
  }
  int sp = ksign(p.eval(lift_rat<K>(probe)));
  assert(sp != 0);
  return sp;
}

template std::pair<RatPoly, RatPoly> poly_divrem(const RatPoly&,
                                                 const RatPoly&);
template std::pair<QuadPoly, QuadPoly> poly_divrem(const QuadPoly&,
                                                   const QuadPoly&);
template RatPoly poly_gcd(RatPoly, RatPoly);
template QuadPoly poly_gcd(QuadPoly, QuadPoly);
template RatPoly odd_multiplicity_part(const RatPoly&);
template QuadPoly odd_multiplicity_part(const QuadPoly&);
template std::vector<Algebraic> all_sign_changes(const RatPoly&);
template std::vector<Algebraic> all_sign_changes(const QuadPoly&);
template std::optional<Algebraic> next_sign_change(const RatPoly&,
                                                   const Algebraic&);
template std::optional<Algebraic> next_sign_change(const QuadPoly&,
                                                   const Algebraic&);
template int sign_at(const RatPoly&, const Algebraic&);
template int sign_at(const QuadPoly&, const Algebraic&);
template int sign_just_after(const RatPoly&, const Algebraic&);
template int sign_just_after(const QuadPoly&, const Algebraic&);

}  // namespace kds
