#pragma once

// Elliptic surfaces Y^2 = X^3 + a4 X + a6 over the function field of a base
// curve: the projective line (coefficients in t) or an elliptic curve
// y^2 = x^3 + A x + B (coefficients u(x) + v(x) y). Computes c4, c6, Delta,
// the exact conductor degree by gcd splits, and the excluded-prime set S.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ellrank/arith.hpp"
#include "ellrank/errors.hpp"

namespace ellrank {

enum class BaseKind { p1, elliptic };

inline const char* to_string(BaseKind k) { return k == BaseKind::p1 ? "p1" : "elliptic"; }

struct BaseDescriptor {
  BaseKind kind = BaseKind::p1;
  Rational A = 0;
  Rational B = 0;

  static BaseDescriptor p1() { return {}; }
  static BaseDescriptor elliptic(Rational a, Rational b) { return {BaseKind::elliptic, std::move(a), std::move(b)}; }

  int genus() const { return kind == BaseKind::p1 ? 0 : 1; }
  // x^3 + A x + B; the zero polynomial for a P^1 base.
  PolyQ cubic() const { return kind == BaseKind::p1 ? PolyQ{} : PolyQ{B, A, 0, 1}; }
  Rational discriminant_core() const { return 4 * A * A * A + 27 * B * B; }

  bool operator==(const BaseDescriptor&) const = default;
};

// A function u + v*y on the base; v is zero on P^1 and for x-only coefficients.
struct BaseFunction {
  PolyQ u;
  PolyQ v;

  BaseFunction() = default;
  BaseFunction(PolyQ u_part, PolyQ v_part = {}) : u(std::move(u_part)), v(std::move(v_part)) {}

  bool is_zero() const { return u.is_zero() && v.is_zero(); }
  bool depends_on_y() const { return !v.is_zero(); }
  bool operator==(const BaseFunction&) const = default;
};

// Arithmetic in Q[x, y]/(y^2 - g(x)); with g = 0 unused (P^1 has no y part).
class BaseRing {
 public:
  explicit BaseRing(PolyQ cubic) : g_(std::move(cubic)) {}

  BaseFunction add(const BaseFunction& a, const BaseFunction& b) const { return {a.u + b.u, a.v + b.v}; }
  BaseFunction scale(const Rational& c, const BaseFunction& a) const { return {c * a.u, c * a.v}; }
  BaseFunction mul(const BaseFunction& a, const BaseFunction& b) const {
    return {a.u * b.u + a.v * b.v * g_, a.u * b.v + a.v * b.u};
  }

 private:
  PolyQ g_;
};

struct Section {
  BaseFunction x;
  BaseFunction y;
  bool operator==(const Section&) const = default;
};

// Plain description of a surface, as read from a spec file.
struct SurfaceSpec {
  std::string name;
  BaseDescriptor base;
  BaseFunction a4;
  BaseFunction a6;
  std::set<u64> excluded_primes;
  std::vector<Section> sections;
};

struct WeierstrassInvariants {
  PolyQ c4;
  PolyQ c6;
  PolyQ delta;
};

// An integer whose prime divisors are excluded (or flagged), with its origin.
struct BadInteger {
  std::string label;
  BigInt value;
};

// The set S: user primes, p < 5, and every prime dividing one of the
// recorded integers. Membership is exact; listing uses trial division.
class ExclusionSet {
 public:
  static constexpr u64 kListingBound = 1'000'000;

  ExclusionSet() = default;
  ExclusionSet(std::set<u64> user, std::vector<BadInteger> sources) : user_(std::move(user)), sources_(std::move(sources)) {}

  bool excludes(u64 p) const {
    if (p < 5 || user_.count(p)) return true;
    return std::any_of(sources_.begin(), sources_.end(), [p](const BadInteger& b) { return b.value % p == 0; });
  }

  const std::set<u64>& user_primes() const { return user_; }
  const std::vector<BadInteger>& sources() const { return sources_; }

  // Final S: user primes, 2, 3 and prime divisors <= kListingBound of the sources.
  std::vector<u64> listed_primes() const {
    std::set<u64> all(user_.begin(), user_.end());
    all.insert(2);
    all.insert(3);
    for (const auto& src : sources_)
      for (u64 q : small_prime_divisors(src.value, kListingBound).first) all.insert(q);
    return {all.begin(), all.end()};
  }

  // Sources whose trial division left a cofactor above the listing bound.
  std::vector<BadInteger> unfactored() const {
    std::vector<BadInteger> out;
    for (const auto& src : sources_) {
      BigInt rest = small_prime_divisors(src.value, kListingBound).second;
      if (rest > 1) out.push_back({src.label, rest});
    }
    return out;
  }

 private:
  std::set<u64> user_;
  std::vector<BadInteger> sources_;
};

namespace detail {

inline std::string canonical_text(const PolyQ& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.coeffs().size(); ++i) s += (i ? "," : "") + to_string(p.coeffs()[i]);
  return s + "]";
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Every denominator appearing in a function's coefficients.
inline void collect_denominators(const PolyQ& p, const std::string& label, std::vector<BadInteger>& out) {
  BigInt l = 1;
  for (const auto& c : p.coeffs()) l = boost::multiprecision::lcm(l, denominator_of(c));
  if (l != 1) out.push_back({"denominators of " + label, l});
}

inline void collect_leading(const PolyQ& p, const std::string& label, std::vector<BadInteger>& out) {
  if (p.is_zero()) return;
  BigInt num = numerator_of(p.leading());
  BigInt den = denominator_of(p.leading());
  BigInt prod = num * den;
  if (prod != 1 && prod != -1) out.push_back({"leading coefficient of " + label, prod});
}

}  // namespace detail

// A validated surface: nonsingular generic fiber, nonconstant j, consistent base.
class Surface {
 public:
  explicit Surface(SurfaceSpec spec) : spec_(std::move(spec)), ring_(spec_.base.cubic()) {
    validate_base();
    if (spec_.base.kind == BaseKind::p1 && (spec_.a4.depends_on_y() || spec_.a6.depends_on_y()))
      throw InputError("P^1 base coefficients cannot involve y");
    for (u64 p : spec_.excluded_primes)
      if (!is_prime(p)) throw InputError("excluded prime list contains non-prime " + std::to_string(p));

    c4_ = ring_.scale(-48, spec_.a4);
    c6_ = ring_.scale(-864, spec_.a6);
    BaseFunction a4_cubed = ring_.mul(ring_.mul(spec_.a4, spec_.a4), spec_.a4);
    BaseFunction a6_squared = ring_.mul(spec_.a6, spec_.a6);
    delta_ = ring_.scale(-16, ring_.add(ring_.scale(4, a4_cubed), ring_.scale(27, a6_squared)));
    if (delta_.is_zero()) throw InputError("singular surface: discriminant vanishes identically");
    if (j_is_constant()) throw InputError("constant j-invariant: the surface must be nonconstant (j not in Q)");

    build_exclusions();
    if (spec_.base.kind == BaseKind::p1) {
      const int da4 = spec_.a4.u.degree(), da6 = spec_.a6.u.degree();
      infinity_weight_ = 0;
      while (4 * infinity_weight_ < da4 || 6 * infinity_weight_ < da6) ++infinity_weight_;
    }
    for (const auto& s : spec_.sections) {
      if (!is_on_surface(s)) throw InputError("declared section does not satisfy the Weierstrass equation");
    }
  }

  const SurfaceSpec& spec() const { return spec_; }
  const std::string& name() const { return spec_.name; }
  const BaseDescriptor& base() const { return spec_.base; }
  bool is_p1() const { return spec_.base.kind == BaseKind::p1; }
  int genus() const { return spec_.base.genus(); }
  bool depends_on_y() const { return spec_.a4.depends_on_y() || spec_.a6.depends_on_y(); }

  const BaseFunction& c4() const { return c4_; }
  const BaseFunction& c6() const { return c6_; }
  const BaseFunction& delta() const { return delta_; }

  const ExclusionSet& exclusions() const { return exclusions_; }
  bool excludes(u64 p) const { return exclusions_.excludes(p); }

  // Smallest k with deg a4 <= 4k and deg a6 <= 6k: the model at infinity is
  // s^(4k) a4(1/s), s^(6k) a6(1/s).
  int infinity_weight() const { return infinity_weight_; }

  // Verified on construction; every declared section lies on the surface.
  std::size_t section_count() const { return spec_.sections.size(); }

  bool is_on_surface(const Section& s) const {
    BaseFunction lhs = ring_.mul(s.y, s.y);
    BaseFunction rhs = ring_.add(ring_.add(ring_.mul(ring_.mul(s.x, s.x), s.x), ring_.mul(spec_.a4, s.x)), spec_.a6);
    return lhs == rhs;
  }

  std::string canonical_text() const {
    std::ostringstream os;
    os << "base=" << ellrank::to_string(spec_.base.kind);
    if (!is_p1()) os << ":" << to_string(spec_.base.A) << ":" << to_string(spec_.base.B);
    os << ";a4=" << detail::canonical_text(spec_.a4.u) << "+y" << detail::canonical_text(spec_.a4.v);
    os << ";a6=" << detail::canonical_text(spec_.a6.u) << "+y" << detail::canonical_text(spec_.a6.v);
    os << ";S=";
    for (u64 p : spec_.excluded_primes) os << p << ",";
    return os.str();
  }

  std::uint64_t hash() const { return detail::fnv1a(canonical_text()); }

 private:
  void validate_base() {
    if (spec_.base.kind == BaseKind::elliptic && spec_.base.discriminant_core() == 0)
      throw InputError("elliptic base curve is singular (4A^3 + 27B^2 = 0)");
  }

  // j constant iff c4^3 = j * Delta for a rational j.
  bool j_is_constant() const {
    if (c4_.is_zero()) return true;
    BaseFunction c4_cubed = ring_.mul(ring_.mul(c4_, c4_), c4_);
    const PolyQ& ref = delta_.u.is_zero() ? delta_.v : delta_.u;
    const PolyQ& num = delta_.u.is_zero() ? c4_cubed.v : c4_cubed.u;
    Rational j = num.leading() / ref.leading();
    if (num.degree() != ref.degree()) return false;
    return c4_cubed == ring_.scale(j, delta_);
  }

  void build_exclusions() {
    std::vector<BadInteger> sources;
    detail::collect_denominators(spec_.a4.u, "a4", sources);
    detail::collect_denominators(spec_.a4.v, "a4 (y part)", sources);
    detail::collect_denominators(spec_.a6.u, "a6", sources);
    detail::collect_denominators(spec_.a6.v, "a6 (y part)", sources);
    if (spec_.base.kind == BaseKind::elliptic) {
      Rational disc = spec_.base.discriminant_core();
      BigInt d = numerator_of(disc) * denominator_of(spec_.base.A) * denominator_of(spec_.base.B);
      sources.push_back({"base discriminant 4A^3+27B^2", d});
    }
    detail::collect_leading(c4_.u, "c4", sources);
    detail::collect_leading(c4_.v, "c4 (y part)", sources);
    detail::collect_leading(delta_.u, "Delta", sources);
    detail::collect_leading(delta_.v, "Delta (y part)", sources);
    exclusions_ = ExclusionSet(spec_.excluded_primes, std::move(sources));
  }

  SurfaceSpec spec_;
  BaseRing ring_;
  BaseFunction c4_, c6_, delta_;
  ExclusionSet exclusions_;
  int infinity_weight_ = 0;
};

// c4 = -48 a4, c6 = -864 a6, Delta = -16 (4 a4^3 + 27 a6^2) as polynomials in
// the base parameter. Rejects y-dependent coefficients.
inline WeierstrassInvariants weierstrass_invariants(const Surface& s) {
  if (s.depends_on_y()) throw InputError("exact conductor unsupported for y-dependent coefficients");
  return {s.c4().u, s.c6().u, s.delta().u};
}

// Same formulas on raw coefficients, without surface validation.
inline WeierstrassInvariants weierstrass_invariants(const PolyQ& a4, const PolyQ& a6) {
  PolyQ delta = Rational(-16) * (Rational(4) * pow(a4, 3) + Rational(27) * pow(a6, 2));
  if (delta.is_zero()) throw InputError("singular surface: discriminant vanishes identically");
  return {Rational(-48) * a4, Rational(-864) * a6, delta};
}

// ---------------------------------------------------------------------------
// Conductor.

enum class FiberType { good, multiplicative, additive };

inline const char* to_string(FiberType t) {
  switch (t) {
    case FiberType::good: return "good";
    case FiberType::multiplicative: return "multiplicative";
    case FiberType::additive: return "additive";
  }
  return "?";
}

inline int conductor_exponent(FiberType t) { return t == FiberType::multiplicative ? 1 : t == FiberType::additive ? 2 : 0; }

// A union of closed points sharing one reduction type, cut out by a squarefree
// polynomial in the base parameter. degree is the total closed-point degree:
// deg(locus) on P^1 and at y = 0, 2*deg(locus) over x-values with y != 0.
struct PlaceLocus {
  std::string label;
  PolyQ locus;
  int degree = 0;
  FiberType type = FiberType::good;

  int contribution() const { return conductor_exponent(type) * degree; }
};

struct InfinityValuations {
  int weight = 0;
  int v_c4 = 0;
  int v_c6 = 0;
  int v_delta = 0;
};

struct ConductorReport {
  BaseKind base_kind = BaseKind::p1;
  int genus = 0;
  std::vector<PlaceLocus> affine_places;
  std::optional<PlaceLocus> infinity_place;
  std::optional<InfinityValuations> infinity_valuations;
  int total_degree = 0;
  int geometric_bound = 0;
  // Integers whose prime divisors may change the place structure mod p.
  std::vector<BadInteger> unstable;
};

inline int recompute_total_degree(const ConductorReport& r) {
  int total = 0;
  for (const auto& pl : r.affine_places) total += pl.contribution();
  if (r.infinity_place) total += r.infinity_place->contribution();
  return total;
}

namespace detail {

inline void require_minimal(const PolyQ& c4, const PolyQ& delta, const PolyQ& where, unsigned delta_mult,
                            unsigned c4_mult, const std::string& label) {
  if (where.degree() < 1) return;
  PolyQ heavy = poly_gcd(poly_gcd(multiplicity_split(delta, delta_mult), multiplicity_split(c4, c4_mult)), where);
  if (heavy.degree() > 0)
    throw InputError("non-minimal model at " + label + " places " + heavy.to_string('t') +
                     "; supply a minimal Weierstrass model");
}

inline void add_locus(std::vector<PlaceLocus>& out, std::string label, PolyQ locus, int point_factor, FiberType type) {
  if (locus.degree() < 1) return;
  const int degree = point_factor * locus.degree();
  out.push_back({std::move(label), std::move(locus), degree, type});
}

// Splits the radical of Delta into additive (c4 also vanishes) and
// multiplicative loci, optionally separating the zeros of a base cubic.
struct LocusSplit {
  PolyQ additive;
  PolyQ multiplicative;
};

inline LocusSplit split_by_c4(const PolyQ& part, const PolyQ& c4) {
  if (part.degree() < 1) return {PolyQ::constant(1), PolyQ::constant(1)};
  PolyQ rc4 = c4.is_zero() ? part : radical(c4);
  PolyQ add = poly_gcd(part, rc4);
  PolyQ mul = exact_quotient(part, add).monic();
  return {add, mul};
}

inline void add_unstable(std::vector<BadInteger>& out, const std::string& label, const BigInt& v) {
  if (v != 1 && v != -1 && v != 0) out.push_back({label, v});
}

}  // namespace detail

// Affine gcd split on an elliptic base: loci at points with y = 0 (factors of
// g) count deg, the rest count 2*deg. Exposed for tests on raw invariants.
inline std::vector<PlaceLocus> elliptic_base_places(const PolyQ& cubic, const PolyQ& c4, const PolyQ& delta) {
  std::vector<PlaceLocus> places;
  PolyQ w = radical(delta);
  PolyQ w_g = poly_gcd(w, cubic);
  PolyQ w_ng = exact_quotient(w, w_g).monic();
  auto at_two_torsion = detail::split_by_c4(w_g, c4);
  auto elsewhere = detail::split_by_c4(w_ng, c4);
  detail::add_locus(places, "y=0", at_two_torsion.multiplicative, 1, FiberType::multiplicative);
  detail::add_locus(places, "y=0", at_two_torsion.additive, 1, FiberType::additive);
  detail::add_locus(places, "y!=0", elsewhere.multiplicative, 2, FiberType::multiplicative);
  detail::add_locus(places, "y!=0", elsewhere.additive, 2, FiberType::additive);
  return places;
}

inline ConductorReport conductor_p1(const Surface& s) {
  if (!s.is_p1()) throw InputError("conductor_p1 requires a P^1 base");
  const auto inv = weierstrass_invariants(s);
  detail::require_minimal(inv.c4, inv.delta, radical(inv.delta), 12, 4, "finite");

  ConductorReport report;
  report.base_kind = BaseKind::p1;
  report.genus = 0;

  PolyQ r = radical(inv.delta);
  auto split = detail::split_by_c4(r, inv.c4);
  detail::add_locus(report.affine_places, "affine", split.multiplicative, 1, FiberType::multiplicative);
  detail::add_locus(report.affine_places, "affine", split.additive, 1, FiberType::additive);
  check_invariant(r.degree() == std::max(0, split.multiplicative.degree()) + std::max(0, split.additive.degree()),
                  "multiplicative/additive split is not a partition of rad(Delta)");

  // Valuations at t = infinity with a zero polynomial counted as +infinity.
  constexpr int kInfinite = 1 << 20;
  auto deg = [](const PolyQ& p) { return p.degree(); };
  InfinityValuations v;
  v.weight = 0;
  auto val = [&](const PolyQ& p, int w) { return p.is_zero() ? kInfinite : w * v.weight - deg(p); };
  while (val(inv.c4, 4) < 0 || val(inv.c6, 6) < 0 || val(inv.delta, 12) < 0) ++v.weight;
  while (v.weight > 0 && val(inv.c4, 4) >= 4 && val(inv.c6, 6) >= 6 && val(inv.delta, 12) >= 12) --v.weight;
  v.v_c4 = val(inv.c4, 4);
  v.v_c6 = val(inv.c6, 6);
  v.v_delta = val(inv.delta, 12);
  FiberType at_inf = v.v_delta == 0 ? FiberType::good : v.v_c4 == 0 ? FiberType::multiplicative : FiberType::additive;
  report.infinity_place = PlaceLocus{"infinity", PolyQ::constant(1), 1, at_inf};
  report.infinity_valuations = v;

  report.total_degree = recompute_total_degree(report);
  report.geometric_bound = report.total_degree + 4 * report.genus - 4;

  detail::add_unstable(report.unstable, "disc(multiplicative locus)", integer_discriminant(split.multiplicative));
  detail::add_unstable(report.unstable, "disc(additive locus)", integer_discriminant(split.additive));
  detail::add_unstable(report.unstable, "Res(multiplicative, additive)", integer_resultant(split.multiplicative, split.additive));
  return report;
}

inline ConductorReport conductor_elliptic_base(const Surface& s) {
  if (s.is_p1()) throw InputError("conductor_elliptic_base requires an elliptic base");
  const auto inv = weierstrass_invariants(s);
  const PolyQ g = s.base().cubic();
  PolyQ w = radical(inv.delta);
  PolyQ w_g = poly_gcd(w, g);
  detail::require_minimal(inv.c4, inv.delta, w_g, 6, 2, "y=0");
  detail::require_minimal(inv.c4, inv.delta, exact_quotient(w, w_g), 12, 4, "finite");

  ConductorReport report;
  report.base_kind = BaseKind::elliptic;
  report.genus = 1;
  report.affine_places = elliptic_base_places(g, inv.c4, inv.delta);
  report.total_degree = recompute_total_degree(report);
  report.geometric_bound = report.total_degree + 4 * report.genus - 4;

  PolyQ w_ng = exact_quotient(w, w_g).monic();
  detail::add_unstable(report.unstable, "disc(rad Delta)", integer_discriminant(w));
  detail::add_unstable(report.unstable, "Res(rad Delta off y=0, base cubic)", integer_resultant(w_ng, g));
  return report;
}

inline ConductorReport conductor(const Surface& s) { return s.is_p1() ? conductor_p1(s) : conductor_elliptic_base(s); }

struct PullbackConductor {
  long long total_degree;
  long long geometric_bound;
};

// Conductor of the pullback along [n] on an elliptic base: degree n^2, g' = 1.
inline PullbackConductor pullback_conductor(const ConductorReport& report, u64 n) {
  if (n == 0) throw InputError("pullback requires n >= 1");
  if (report.base_kind != BaseKind::elliptic)
    throw InputError("P^1 has no unramified abelian covers; pullback needs an elliptic base");
  const long long n2 = static_cast<long long>(n * n);
  const long long total = n2 * report.total_degree;
  return {total, total + 4 * 1 - 4};
}

// ---------------------------------------------------------------------------
// Numeric cross-check: singular fibers over affine F_p-points of the base.

struct BadFiberRow {
  u64 p = 0;
  u64 observed_multiplicative = 0;
  u64 observed_additive = 0;
  u64 predicted_multiplicative = 0;
  u64 predicted_additive = 0;
  bool consistent() const {
    return observed_multiplicative == predicted_multiplicative && observed_additive == predicted_additive;
  }
};

struct BadFiberCensus {
  std::vector<BadFiberRow> rows;
  std::size_t consistent_count() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const BadFiberRow& r) { return r.consistent(); }));
  }
  double consistent_fraction() const { return rows.empty() ? 1.0 : double(consistent_count()) / double(rows.size()); }
};

inline BadFiberCensus bad_fiber_census(const Surface& s, const ConductorReport& report, u64 pmax) {
  const auto inv = weierstrass_invariants(s);
  const PolyQ g = s.base().cubic();
  BadFiberCensus census;
  for (u64 p : primes_up_to(pmax)) {
    if (s.excludes(p)) continue;
    auto delta = inv.delta.reduce(p);
    auto c4 = inv.c4.reduce(p);
    auto gp = g.reduce(p);
    check_invariant(delta && c4 && gp, "reduction of a good prime failed");
    auto eval = [p](const std::vector<u64>& c, u64 x) {
      u64 acc = 0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (mulmod(acc, x, p) + *it) % p;
      return acc;
    };
    // Number of base points above x: 1 on P^1, #{y : y^2 = g(x)} otherwise.
    auto fiber_points = [&](u64 x) -> u64 {
      if (s.is_p1()) return 1;
      u64 r = eval(*gp, x);
      if (r == 0) return 1;
      return powmod(r, (p - 1) / 2, p) == 1 ? 2 : 0;
    };
    BadFiberRow row;
    row.p = p;
    for (u64 x = 0; x < p; ++x) {
      if (eval(*delta, x) != 0) continue;
      (eval(*c4, x) != 0 ? row.observed_multiplicative : row.observed_additive) += fiber_points(x);
    }
    for (const auto& pl : report.affine_places) {
      // Integer model of the locus; its roots mod p are unchanged.
      auto loc = detail::to_polyq(detail::to_primitive_int(pl.locus)).reduce(p);
      u64 count = 0;
      for (u64 x = 0; x < p; ++x)
        if (eval(*loc, x) == 0) count += fiber_points(x);
      (pl.type == FiberType::multiplicative ? row.predicted_multiplicative : row.predicted_additive) += count;
    }
    census.rows.push_back(row);
  }
  return census;
}

}  // namespace ellrank
