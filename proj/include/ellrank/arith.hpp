#pragma once

// Exact arithmetic: big rationals, dense univariate polynomials over Q,
// reduction modulo small primes, and the elementary arithmetic functions.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ellrank/errors.hpp"

namespace ellrank {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using BigInt = boost::multiprecision::cpp_int;
// Always kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::string to_string(const Rational& r) {
  if (denominator_of(r) == 1) return numerator_of(r).str();
  return numerator_of(r).str() + "/" + denominator_of(r).str();
}

// Accepts integers ("12"), fractions ("-3/4") and plain decimals ("0.125").
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (s.empty()) throw InputError("empty rational literal");
  auto is_int = [](std::string_view v) {
    if (!v.empty() && (v.front() == '-' || v.front() == '+')) v.remove_prefix(1);
    return !v.empty() && std::all_of(v.begin(), v.end(), [](unsigned char c) { return std::isdigit(c); });
  };
  auto to_big = [](std::string v) {
    if (!v.empty() && v.front() == '+') v.erase(0, 1);
    return BigInt(v);
  };
  if (auto slash = s.find('/'); slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!is_int(num) || !is_int(den)) throw InputError("malformed rational literal '" + s + "'");
    BigInt d = to_big(den);
    if (d == 0) throw InputError("zero denominator in '" + s + "'");
    return Rational(to_big(num), d);
  }
  if (auto dot = s.find('.'); dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.erase(0, 1);
    if (whole.empty()) whole = "0";
    if (!is_int(whole) || (!frac.empty() && !is_int(frac)) || (!frac.empty() && (frac.front() == '-' || frac.front() == '+')))
      throw InputError("malformed decimal literal '" + s + "'");
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    BigInt digits = BigInt(whole) * scale + (frac.empty() ? BigInt(0) : BigInt(frac));
    return Rational(negative ? BigInt(-digits) : digits, scale);
  }
  if (!is_int(s)) throw InputError("malformed rational literal '" + s + "'");
  return Rational(to_big(s));
}

// ---------------------------------------------------------------------------
// Small-integer number theory.

constexpr u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

constexpr u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

constexpr bool is_prime(u64 n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  if (n % 3 == 0) return n == 3;
  for (u64 d = 5; d * d <= n; d += 6)
    if (n % d == 0 || n % (d + 2) == 0) return false;
  return true;
}

inline std::vector<u64> primes_up_to(u64 limit) {
  std::vector<u64> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (u64 i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return out;
}

struct PrimePower {
  u64 prime;
  int exponent;
  bool operator==(const PrimePower&) const = default;
};

inline std::vector<PrimePower> factorize(u64 n) {
  if (n == 0) throw InputError("cannot factor 0");
  std::vector<PrimePower> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.push_back({d, e});
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

inline u64 divisor_count(u64 n) {
  if (n == 0) throw InputError("divisor_count requires n >= 1");
  u64 d = 1;
  for (auto [p, e] : factorize(n)) d *= static_cast<u64>(e + 1);
  return d;
}

inline u64 euler_phi(u64 n) {
  if (n == 0) throw InputError("euler_phi requires n >= 1");
  u64 phi = n;
  for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

// d(n) and phi(n) bundled together.
struct ArithFn {
  u64 n;
  u64 d_n;
  u64 phi_n;
};

inline ArithFn arith_fn(u64 n) { return {n, divisor_count(n), euler_phi(n)}; }

// Residue of r modulo p, or nullopt when p divides the denominator.
inline std::optional<u64> reduce_mod(const Rational& r, u64 p) {
  auto residue = [p](const BigInt& v) {
    BigInt m = v % p;
    if (m < 0) m += p;
    return static_cast<u64>(m);
  };
  u64 den = residue(denominator_of(r));
  if (den == 0) return std::nullopt;
  u64 num = residue(numerator_of(r));
  return mulmod(num, powmod(den, p - 2, p), p);
}

// Primes <= bound dividing v, plus the cofactor left after trial division.
inline std::pair<std::vector<u64>, BigInt> small_prime_divisors(BigInt v, u64 bound) {
  std::vector<u64> found;
  if (v < 0) v = -v;
  if (v == 0) return {found, BigInt(0)};
  for (u64 d = 2; d <= bound && d * d <= v; ++d) {
    if (v % d != 0) continue;
    found.push_back(d);
    while (v % d == 0) v /= d;
  }
  if (v > 1 && v <= bound) {
    found.push_back(static_cast<u64>(v));
    v = 1;
  }
  return {found, v};
}

// ---------------------------------------------------------------------------
// Dense polynomials over Q, constant term first. The zero polynomial has an
// empty coefficient list; trailing zeros are trimmed on every construction.

class PolyQ {
 public:
  PolyQ() = default;
  explicit PolyQ(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
  PolyQ(std::initializer_list<Rational> coeffs) : coeffs_(coeffs) { trim(); }

  static PolyQ constant(const Rational& c) { return PolyQ(std::vector<Rational>{c}); }
  static PolyQ monomial(const Rational& c, std::size_t degree) {
    std::vector<Rational> v(degree + 1);
    v[degree] = c;
    return PolyQ(std::move(v));
  }
  static PolyQ variable() { return monomial(1, 1); }

  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<Rational>& coeffs() const { return coeffs_; }
  Rational coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rational(0); }
  Rational leading() const { return is_zero() ? Rational(0) : coeffs_.back(); }

  PolyQ derivative() const {
    std::vector<Rational> d;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] * static_cast<long long>(i));
    return PolyQ(std::move(d));
  }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  PolyQ monic() const {
    if (is_zero()) return {};
    Rational lc = leading();
    std::vector<Rational> v = coeffs_;
    for (auto& c : v) c /= lc;
    return PolyQ(std::move(v));
  }

  // Coefficients reduced mod p; nullopt if some denominator vanishes mod p.
  std::optional<std::vector<u64>> reduce(u64 p) const {
    std::vector<u64> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) {
      auto r = reduce_mod(c, p);
      if (!r) return std::nullopt;
      out.push_back(*r);
    }
    return out;
  }

  friend PolyQ operator+(const PolyQ& a, const PolyQ& b) {
    std::vector<Rational> v(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.coeff(i) + b.coeff(i);
    return PolyQ(std::move(v));
  }
  friend PolyQ operator-(const PolyQ& a) {
    std::vector<Rational> v = a.coeffs_;
    for (auto& c : v) c = -c;
    return PolyQ(std::move(v));
  }
  friend PolyQ operator-(const PolyQ& a, const PolyQ& b) { return a + (-b); }
  friend PolyQ operator*(const PolyQ& a, const PolyQ& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> v(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return PolyQ(std::move(v));
  }
  friend PolyQ operator*(const Rational& c, const PolyQ& a) { return PolyQ::constant(c) * a; }
  friend bool operator==(const PolyQ& a, const PolyQ& b) { return a.coeffs_ == b.coeffs_; }

  std::string to_string(char var = 't') const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      const Rational& c = coeffs_[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      Rational mag = c < 0 ? Rational(-c) : c;
      if (!first) os << (c < 0 ? " - " : " + ");
      else if (c < 0) os << "-";
      first = false;
      bool unit = mag == 1 && i > 0;
      if (!unit) os << ellrank::to_string(mag);
      if (i > 0) os << var;
      if (i > 1) os << '^' << i;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }
  std::vector<Rational> coeffs_;
};

inline PolyQ pow(const PolyQ& a, unsigned e) {
  PolyQ r = PolyQ::constant(1);
  for (unsigned i = 0; i < e; ++i) r = r * a;
  return r;
}

// Euclidean division over Q: a = q*b + r with deg r < deg b.
inline std::pair<PolyQ, PolyQ> divmod(const PolyQ& a, const PolyQ& b) {
  if (b.is_zero()) throw InputError("polynomial division by zero");
  std::vector<Rational> rem = a.coeffs();
  const int db = b.degree();
  if (a.degree() < db) return {PolyQ{}, a};
  std::vector<Rational> quot(static_cast<std::size_t>(a.degree() - db + 1));
  const Rational lc = b.leading();
  for (int i = a.degree(); i >= db; --i) {
    Rational c = rem[static_cast<std::size_t>(i)] / lc;
    quot[static_cast<std::size_t>(i - db)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(i - db + j)] -= c * b.coeffs()[static_cast<std::size_t>(j)];
  }
  return {PolyQ(std::move(quot)), PolyQ(std::move(rem))};
}

inline bool divides(const PolyQ& d, const PolyQ& a) {
  if (d.is_zero()) return a.is_zero();
  return divmod(a, d).second.is_zero();
}

inline PolyQ exact_quotient(const PolyQ& a, const PolyQ& d) {
  auto [q, r] = divmod(a, d);
  check_invariant(r.is_zero(), "exact polynomial division left a remainder");
  return q;
}

namespace detail {

using IntPoly = std::vector<BigInt>;

inline void trim(IntPoly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

inline BigInt content(const IntPoly& p) {
  BigInt g = 0;
  for (const auto& c : p) g = boost::multiprecision::gcd(g, c);
  return g;
}

inline IntPoly primitive_part(IntPoly p) {
  trim(p);
  if (p.empty()) return p;
  BigInt g = content(p);
  if (p.back() < 0) g = -g;
  for (auto& c : p) c /= g;
  return p;
}

// Scales a rational polynomial to a primitive integer polynomial with positive leading coefficient.
inline IntPoly to_primitive_int(const PolyQ& a) {
  BigInt l = 1;
  for (const auto& c : a.coeffs()) l = boost::multiprecision::lcm(l, denominator_of(c));
  IntPoly out;
  out.reserve(a.coeffs().size());
  for (const auto& c : a.coeffs()) out.push_back(numerator_of(c) * (l / denominator_of(c)));
  return primitive_part(std::move(out));
}

inline PolyQ to_polyq(const IntPoly& p) {
  std::vector<Rational> v(p.begin(), p.end());
  return PolyQ(std::move(v));
}

// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a mod b, computed over Z.
inline IntPoly pseudo_remainder(IntPoly a, const IntPoly& b) {
  const std::size_t db = b.size() - 1;
  const BigInt& lc = b.back();
  while (a.size() >= b.size()) {
    BigInt lead = a.back();
    std::size_t shift = a.size() - b.size();
    for (auto& c : a) c *= lc;
    for (std::size_t j = 0; j <= db; ++j) a[shift + j] -= lead * b[j];
    trim(a);
  }
  return a;
}

}  // namespace detail

// Monic gcd over Q via the primitive remainder sequence. gcd(0, 0) = 0.
inline PolyQ poly_gcd(const PolyQ& a, const PolyQ& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  detail::IntPoly x = detail::to_primitive_int(a), y = detail::to_primitive_int(b);
  if (x.size() < y.size()) std::swap(x, y);
  while (!y.empty()) {
    detail::IntPoly r = detail::primitive_part(detail::pseudo_remainder(x, y));
    x = std::move(y);
    y = std::move(r);
  }
  return detail::to_polyq(x).monic();
}

// Squarefree part a / gcd(a, a'), made monic.
inline PolyQ radical(const PolyQ& a) {
  if (a.is_zero()) throw InputError("radical of the zero polynomial");
  return exact_quotient(a, poly_gcd(a, a.derivative())).monic();
}

// Monic product of the distinct irreducible factors of multiplicity >= k:
// the radical of gcd(a, a', ..., a^(k-1)).
inline PolyQ multiplicity_split(const PolyQ& a, unsigned k) {
  if (a.is_zero()) throw InputError("multiplicity_split of the zero polynomial");
  if (k == 0) throw InputError("multiplicity_split requires k >= 1");
  PolyQ g = a.monic();
  PolyQ d = a;
  for (unsigned i = 1; i < k && g.degree() > 0; ++i) {
    d = d.derivative();
    g = poly_gcd(g, d);
  }
  return radical(g);
}

inline Rational rational_pow(const Rational& base, unsigned e) {
  Rational r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

// Resultant over Q via the Euclidean remainder sequence.
inline Rational resultant(const PolyQ& a, const PolyQ& b) {
  if (a.is_zero() || b.is_zero()) return 0;
  if (a.degree() == 0) return rational_pow(a.leading(), static_cast<unsigned>(b.degree()));
  if (b.degree() == 0) return rational_pow(b.leading(), static_cast<unsigned>(a.degree()));
  const int m = a.degree(), n = b.degree();
  if (m < n) {
    Rational r = resultant(b, a);
    return (m * n) % 2 ? Rational(-r) : r;
  }
  PolyQ r = divmod(a, b).second;
  if (r.is_zero()) return 0;
  // res(a, b) = (-1)^(mn) lc(b)^(m - deg r) res(b, r)
  Rational factor = rational_pow(b.leading(), static_cast<unsigned>(m - r.degree()));
  Rational sub = resultant(b, r);
  Rational out = factor * sub;
  return (m * n) % 2 ? Rational(-out) : out;
}

// Integer discriminant-style quantity: resultant of the primitive integer
// model of a with its derivative. Zero iff a has a repeated root.
inline BigInt integer_discriminant(const PolyQ& a) {
  if (a.degree() < 1) return 1;
  PolyQ prim = detail::to_polyq(detail::to_primitive_int(a));
  Rational r = resultant(prim, prim.derivative());
  check_invariant(denominator_of(r) == 1, "integer resultant has a denominator");
  return numerator_of(r);
}

inline BigInt integer_resultant(const PolyQ& a, const PolyQ& b) {
  PolyQ pa = detail::to_polyq(detail::to_primitive_int(a));
  PolyQ pb = detail::to_polyq(detail::to_primitive_int(b));
  Rational r = resultant(pa, pb);
  check_invariant(denominator_of(r) == 1, "integer resultant has a denominator");
  return numerator_of(r);
}

// Number of distinct roots in F_p of a polynomial given by reduced coefficients.
inline u64 count_roots_mod(const std::vector<u64>& coeffs, u64 p) {
  bool all_zero = std::all_of(coeffs.begin(), coeffs.end(), [](u64 c) { return c == 0; });
  if (all_zero) return p;
  u64 count = 0;
  for (u64 x = 0; x < p; ++x) {
    u64 acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (mulmod(acc, x, p) + *it) % p;
    if (acc == 0) ++count;
  }
  return count;
}

}  // namespace ellrank
