#pragma once

// Short Weierstrass curves y^2 = x^3 + a4 x + a6 over prime fields F_p, p >= 5:
// group law, quadratic-character point counting, exhaustive enumeration and
// torsion kernels.

#include <cmath>
#include <compare>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ellrank/arith.hpp"

namespace ellrank {

inline constexpr u64 kDefaultEnumerationCap = 50021;

// Per-prime lookup tables shared by every curve over the same F_p:
// quadratic character, one square root per residue, and cubes.
class ResidueTable {
 public:
  explicit ResidueTable(u64 p) : p_(p), chi_(p, -1), chi3_(3 * p), root_(p, -1), cube_(p) {
    if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
    chi_[0] = 0;
    root_[0] = 0;
    for (u64 y = 1; y <= p / 2; ++y) {
      u64 sq = y * y % p;
      chi_[sq] = 1;
      root_[sq] = static_cast<std::int32_t>(y);
    }
    for (u64 x = 0; x < p; ++x) cube_[x] = static_cast<std::uint32_t>(x * x % p * x % p);
    for (u64 v = 0; v < 3 * p; ++v) chi3_[v] = chi_[v % p];
  }

  u64 p() const { return p_; }
  int chi(u64 v) const { return chi_[v]; }
  // Smallest square root of v in [0, p/2], or -1 if v is a non-residue.
  std::int64_t root(u64 v) const { return root_[v]; }

  // Sum over x in F_p of chi(x^3 + a4 x + a6).
  // cube + a4 x + a6 stays below 3p, so it indexes a tripled character table
  // directly. The running a4 x is split into four strided chains so the
  // reductions do not serialize the loop.
  i64 character_sum(u64 a4, u64 a6) const {
    const auto p = static_cast<std::uint32_t>(p_);
    const auto c = static_cast<std::uint32_t>(a6);
    const std::uint32_t* cube = cube_.data();
    const std::int8_t* chi = chi3_.data();
    auto reduce = [p](std::uint32_t v) { return v - (p & (0u - std::uint32_t(v >= p))); };
    const auto b = static_cast<std::uint32_t>(a4);
    const std::uint32_t b4 = static_cast<std::uint32_t>(4 * a4 % p_);
    std::uint32_t ax0 = 0, ax1 = b, ax2 = reduce(b + b), ax3 = reduce(ax2 + b);
    i64 s0 = 0, s1 = 0, s2 = 0, s3 = 0;
    std::uint32_t x = 0;
    for (; x + 4 <= p; x += 4) {
      s0 += chi[cube[x] + ax0 + c];
      s1 += chi[cube[x + 1] + ax1 + c];
      s2 += chi[cube[x + 2] + ax2 + c];
      s3 += chi[cube[x + 3] + ax3 + c];
      ax0 = reduce(ax0 + b4);
      ax1 = reduce(ax1 + b4);
      ax2 = reduce(ax2 + b4);
      ax3 = reduce(ax3 + b4);
    }
    i64 sum = s0 + s1 + s2 + s3;
    for (; x < p; ++x) sum += chi[cube[x] + static_cast<std::uint32_t>(a4 * x % p_) + c];
    return sum;
  }

 private:
  u64 p_;
  std::vector<std::int8_t> chi_;
  std::vector<std::int8_t> chi3_;
  std::vector<std::int32_t> root_;
  std::vector<std::uint32_t> cube_;
};

struct PointFp {
  u64 x = 0;
  u64 y = 0;
  bool infinity = true;

  static PointFp origin() { return {}; }
  static PointFp affine(u64 x, u64 y) { return {x, y, false}; }
  bool operator==(const PointFp&) const = default;
  auto operator<=>(const PointFp& o) const {
    if (infinity != o.infinity) return infinity ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = x <=> o.x; c != 0) return c;
    return y <=> o.y;
  }
};

inline u64 to_residue(i64 v, u64 p) {
  i64 m = v % static_cast<i64>(p);
  return static_cast<u64>(m < 0 ? m + static_cast<i64>(p) : m);
}

// 4 a4^3 + 27 a6^2 mod p; zero exactly when the cubic has a repeated root.
inline u64 curve_discriminant_core(u64 p, u64 a4, u64 a6) {
  return (4 * mulmod(mulmod(a4, a4, p), a4, p) + 27 * mulmod(a6, a6, p)) % p;
}

class CurveFp {
 public:
  CurveFp(u64 p, i64 a4, i64 a6) : p_(p), a4_(to_residue(a4, p)), a6_(to_residue(a6, p)) {
    if (p < 5 || !is_prime(p)) throw InputError("curve modulus must be a prime >= 5, got " + std::to_string(p));
    if (curve_discriminant_core(p_, a4_, a6_) == 0)
      throw InputError("singular curve y^2 = x^3 + " + std::to_string(a4_) + "x + " + std::to_string(a6_) + " mod " + std::to_string(p_));
  }

  static bool is_singular(u64 p, u64 a4, u64 a6) { return curve_discriminant_core(p, a4 % p, a6 % p) == 0; }

  u64 p() const { return p_; }
  u64 a4() const { return a4_; }
  u64 a6() const { return a6_; }

  u64 rhs(u64 x) const { return (mulmod(mulmod(x, x, p_), x, p_) + mulmod(a4_, x, p_) + a6_) % p_; }

  bool contains(const PointFp& P) const {
    if (P.infinity) return true;
    return P.x < p_ && P.y < p_ && mulmod(P.y, P.y, p_) == rhs(P.x);
  }

  bool operator==(const CurveFp&) const = default;

 private:
  u64 p_;
  u64 a4_;
  u64 a6_;
};

inline i64 trace_of_frobenius(const CurveFp& c, const ResidueTable& table) {
  if (table.p() != c.p()) throw InputError("residue table built for a different prime");
  return -table.character_sum(c.a4(), c.a6());
}

inline i64 trace_of_frobenius(const CurveFp& c) { return trace_of_frobenius(c, ResidueTable(c.p())); }

inline u64 point_count(const CurveFp& c) { return static_cast<u64>(static_cast<i64>(c.p()) + 1 - trace_of_frobenius(c)); }

inline PointFp negate(const CurveFp& c, const PointFp& P) {
  if (P.infinity || P.y == 0) return P;
  return PointFp::affine(P.x, c.p() - P.y);
}

namespace detail {

inline PointFp add_unchecked(const CurveFp& c, const PointFp& P, const PointFp& Q) {
  if (P.infinity) return Q;
  if (Q.infinity) return P;
  const u64 p = c.p();
  u64 lambda;
  if (P.x == Q.x) {
    if ((P.y + Q.y) % p == 0) return PointFp::origin();
    u64 num = (3 * mulmod(P.x, P.x, p) + c.a4()) % p;
    lambda = mulmod(num, powmod(2 * P.y % p, p - 2, p), p);
  } else {
    u64 num = (Q.y + p - P.y) % p;
    u64 den = (Q.x + p - P.x) % p;
    lambda = mulmod(num, powmod(den, p - 2, p), p);
  }
  u64 x3 = (mulmod(lambda, lambda, p) + 2 * p - P.x - Q.x) % p;
  u64 y3 = (mulmod(lambda, (P.x + p - x3) % p, p) + p - P.y) % p;
  return PointFp::affine(x3, y3);
}

inline PointFp scalar_mul_unchecked(const CurveFp& c, PointFp P, u64 n) {
  PointFp acc = PointFp::origin();
  while (n > 0) {
    if (n & 1) acc = add_unchecked(c, acc, P);
    P = add_unchecked(c, P, P);
    n >>= 1;
  }
  return acc;
}

inline void require_on_curve(const CurveFp& c, const PointFp& P) {
  if (!c.contains(P)) throw InputError("point (" + std::to_string(P.x) + ", " + std::to_string(P.y) + ") is not on the curve");
}

}  // namespace detail

inline PointFp add(const CurveFp& c, const PointFp& P, const PointFp& Q) {
  detail::require_on_curve(c, P);
  detail::require_on_curve(c, Q);
  return detail::add_unchecked(c, P, Q);
}

// Double-and-add; negative n multiplies the negated point.
inline PointFp scalar_mul(const CurveFp& c, const PointFp& P, i64 n) {
  detail::require_on_curve(c, P);
  if (n < 0) return detail::scalar_mul_unchecked(c, negate(c, P), static_cast<u64>(-n));
  return detail::scalar_mul_unchecked(c, P, static_cast<u64>(n));
}

// All points, O first, then ascending by x and then y.
inline std::vector<PointFp> enumerate_points(const CurveFp& c, const ResidueTable& table, u64 cap = kDefaultEnumerationCap) {
  const u64 p = c.p();
  if (p > cap) throw InputError("prime " + std::to_string(p) + " exceeds enumeration cap " + std::to_string(cap));
  if (table.p() != p) throw InputError("residue table built for a different prime");
  std::vector<PointFp> pts;
  pts.reserve(p + 1 + 2 * static_cast<std::size_t>(std::sqrt(static_cast<double>(p)) + 1));
  pts.push_back(PointFp::origin());
  for (u64 x = 0; x < p; ++x) {
    const std::int64_t r = table.root(c.rhs(x));
    if (r < 0) continue;
    const u64 y = static_cast<u64>(r);
    if (y == 0) {
      pts.push_back(PointFp::affine(x, 0));
    } else {
      pts.push_back(PointFp::affine(x, y));
      pts.push_back(PointFp::affine(x, p - y));
    }
  }
  return pts;
}

inline std::vector<PointFp> enumerate_points(const CurveFp& c, u64 cap = kDefaultEnumerationCap) {
  if (c.p() > cap) throw InputError("prime " + std::to_string(c.p()) + " exceeds enumeration cap " + std::to_string(cap));
  return enumerate_points(c, ResidueTable(c.p()), cap);
}

// |E[n](F_p)| by testing every point of an already-enumerated group.
inline u64 torsion_kernel_size(const CurveFp& c, const std::vector<PointFp>& points, u64 n) {
  if (n == 0) throw InputError("torsion kernel requires n >= 1");
  u64 count = 0;
  for (const auto& P : points)
    if (detail::scalar_mul_unchecked(c, P, n).infinity) ++count;
  return count;
}

inline u64 torsion_kernel_size(const CurveFp& c, u64 n, u64 cap = kDefaultEnumerationCap) {
  if (n == 0) throw InputError("torsion kernel requires n >= 1");
  return torsion_kernel_size(c, enumerate_points(c, cap), n);
}

struct GroupStructure {
  u64 d1;
  u64 d2;
  bool operator==(const GroupStructure&) const = default;
};

// E(F_p) = Z/d1 x Z/d2 with d1 | d2. For each l^e || #E the l-Sylow is
// Z/l^a x Z/l^(e-a), where a is the largest k with |E[l^k]| = l^(2k).
inline GroupStructure group_structure(const CurveFp& c, u64 cap = kDefaultEnumerationCap) {
  const auto points = enumerate_points(c, cap);
  const u64 order = points.size();
  u64 d1 = 1;
  for (auto [l, e] : factorize(order)) {
    u64 lk = 1;
    for (int k = 1; 2 * k <= e; ++k) {
      lk *= l;
      if (torsion_kernel_size(c, points, lk) != lk * lk) break;
      d1 *= l;
    }
  }
  return {d1, order / d1};
}

}  // namespace ellrank
