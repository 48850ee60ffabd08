#pragma once

// Finite group actions: Burnside counting, the subgroup-orbit inequality,
// GL_r(Z/n) orbits on (Z/n)^r, the unit-gcd identity, and Frobenius
// fixed-point sampling of C0[n] as an estimate of the number of Galois orbits.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ellrank/arith.hpp"
#include "ellrank/elliptic_core.hpp"
#include "ellrank/parallel.hpp"
#include "ellrank/surface_model.hpp"

namespace ellrank {

using Permutation = std::vector<std::uint32_t>;

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }
  std::size_t classes() {
    std::size_t c = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) c += find(i) == i;
    return c;
  }

 private:
  std::vector<std::size_t> parent_;
};

inline Permutation compose(const Permutation& a, const Permutation& b) {
  // (a o b)(x) = a(b(x))
  Permutation c(b.size());
  for (std::size_t x = 0; x < b.size(); ++x) c[x] = a[b[x]];
  return c;
}

inline Permutation inverse(const Permutation& a) {
  Permutation inv(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) inv[a[x]] = static_cast<std::uint32_t>(x);
  return inv;
}

inline Permutation identity_permutation(std::size_t n) {
  Permutation id(n);
  std::iota(id.begin(), id.end(), 0u);
  return id;
}

}  // namespace detail

// A finite group given by its full list of permutations of {0, ..., set_size-1}.
class FiniteAction {
 public:
  static constexpr std::size_t kClosureCap = 1'000'000;

  FiniteAction(std::size_t set_size, std::vector<Permutation> elements) : set_size_(set_size), elements_(std::move(elements)) {
    if (set_size_ == 0) throw InputError("action needs a nonempty set");
    if (elements_.empty()) throw InputError("action needs at least the identity");
    for (const auto& g : elements_) {
      if (g.size() != set_size_) throw InputError("permutation has wrong length");
      std::vector<bool> seen(set_size_, false);
      for (auto v : g) {
        if (v >= set_size_ || seen[v]) throw InputError("element is not a bijection");
        seen[v] = true;
      }
    }
    std::set<Permutation> members(elements_.begin(), elements_.end());
    if (members.size() != elements_.size()) throw InputError("duplicate group elements");
    if (!members.count(detail::identity_permutation(set_size_))) throw InputError("element list lacks the identity");
    for (const auto& g : elements_) {
      if (!members.count(detail::inverse(g))) throw InputError("element list is not closed under inverses");
      for (const auto& h : elements_)
        if (!members.count(detail::compose(g, h))) throw InputError("element list is not closed under composition");
    }
    closure_checked_ = true;
  }

  // Closure of a generator list, capped at kClosureCap elements.
  static FiniteAction generated_by(std::size_t set_size, const std::vector<Permutation>& generators) {
    std::set<Permutation> seen{detail::identity_permutation(set_size)};
    std::vector<Permutation> frontier(seen.begin(), seen.end());
    for (const auto& g : generators)
      if (g.size() != set_size) throw InputError("generator has wrong length");
    while (!frontier.empty()) {
      std::vector<Permutation> next;
      for (const auto& a : frontier)
        for (const auto& g : generators) {
          Permutation c = detail::compose(g, a);
          if (seen.insert(c).second) {
            if (seen.size() > kClosureCap) throw InputError("generated group exceeds the closure cap");
            next.push_back(std::move(c));
          }
        }
      frontier = std::move(next);
    }
    return FiniteAction(set_size, std::vector<Permutation>(seen.begin(), seen.end()), Trusted{});
  }

  std::size_t set_size() const { return set_size_; }
  std::size_t order() const { return elements_.size(); }
  const std::vector<Permutation>& elements() const { return elements_; }
  bool closure_checked() const { return closure_checked_; }

 private:
  struct Trusted {};
  FiniteAction(std::size_t set_size, std::vector<Permutation> elements, Trusted)
      : set_size_(set_size), elements_(std::move(elements)), closure_checked_(true) {}

  std::size_t set_size_;
  std::vector<Permutation> elements_;
  bool closure_checked_ = false;
};

inline std::size_t fixed_points(const Permutation& g) {
  std::size_t c = 0;
  for (std::size_t x = 0; x < g.size(); ++x) c += g[x] == x;
  return c;
}

// (1/|G|) * sum of fixed-point counts; the sum must divide exactly.
inline std::size_t burnside_orbit_count(const FiniteAction& a) {
  std::size_t total = 0;
  for (const auto& g : a.elements()) total += fixed_points(g);
  check_invariant(total % a.order() == 0, "Burnside sum not divisible by |G|");
  return total / a.order();
}

// Orbit count from an explicit partition of the set.
inline std::size_t orbit_count_by_partition(const FiniteAction& a) {
  detail::UnionFind uf(a.set_size());
  for (const auto& g : a.elements())
    for (std::size_t x = 0; x < g.size(); ++x) uf.unite(x, g[x]);
  return uf.classes();
}

struct SubgroupOrbitReport {
  std::size_t h_orbits = 0;
  std::size_t g_orbits = 0;
  std::size_t index = 0;
  bool equality_holds = false;
  bool stabilizers_match = false;
};

// #H-orbits <= (G:H) * #G-orbits, with equality iff H_x = G_x for every x.
inline SubgroupOrbitReport subgroup_orbit_check(const FiniteAction& g, const std::vector<Permutation>& h_elements) {
  std::set<Permutation> in_g(g.elements().begin(), g.elements().end());
  for (const auto& h : h_elements)
    if (!in_g.count(h)) throw InputError("H is not a subset of G");
  FiniteAction h(g.set_size(), h_elements);  // validates the group axioms

  SubgroupOrbitReport rep;
  rep.h_orbits = orbit_count_by_partition(h);
  rep.g_orbits = orbit_count_by_partition(g);
  check_invariant(g.order() % h.order() == 0, "|H| does not divide |G|");
  rep.index = g.order() / h.order();
  rep.equality_holds = rep.h_orbits == rep.index * rep.g_orbits;
  rep.stabilizers_match = true;
  for (std::size_t x = 0; x < g.set_size(); ++x) {
    auto stab = [x](const FiniteAction& grp) {
      return std::count_if(grp.elements().begin(), grp.elements().end(), [x](const Permutation& s) { return s[x] == x; });
    };
    if (stab(h) != stab(g)) rep.stabilizers_match = false;
  }
  check_invariant(rep.h_orbits <= rep.index * rep.g_orbits, "subgroup orbit inequality");
  check_invariant(rep.equality_holds == rep.stabilizers_match, "equality <=> stabilizer-match biconditional");
  return rep;
}

// ---------------------------------------------------------------------------
// GL_r(Z/n) acting on (Z/n)^r.

enum class OrbitMethod { formula, brute };

inline constexpr u64 kBruteMaxN = 12;
inline constexpr u64 kBruteMaxR = 2;

namespace detail {

inline std::size_t vector_index(const std::vector<u64>& v, u64 n) {
  std::size_t idx = 0;
  for (u64 c : v) idx = idx * n + c;
  return idx;
}

}  // namespace detail

// Orbits of invertible r x r matrices mod n acting on column vectors mod n.
inline u64 glr_orbit_count_brute(u64 n, u64 r) {
  if (n == 0 || r == 0) throw InputError("n and r must be >= 1");
  if (n > kBruteMaxN || r > kBruteMaxR) throw InputError("brute GL orbit enumeration limited to n <= 12, r <= 2");
  std::size_t vectors = 1;
  for (u64 i = 0; i < r; ++i) vectors *= n;
  detail::UnionFind uf(vectors);
  const std::size_t entries = r * r;
  std::size_t matrices = 1;
  for (std::size_t i = 0; i < entries; ++i) matrices *= n;
  std::vector<u64> m(entries), v(r), w(r);
  for (std::size_t code = 0; code < matrices; ++code) {
    std::size_t c = code;
    for (std::size_t i = 0; i < entries; ++i) {
      m[i] = c % n;
      c /= n;
    }
    const u64 det = r == 1 ? m[0] : (m[0] * m[3] + n * n - m[1] * m[2]) % n;
    if (std::gcd(det, n) != 1) continue;
    for (std::size_t vi = 0; vi < vectors; ++vi) {
      std::size_t t = vi;
      for (std::size_t k = r; k-- > 0;) {
        v[k] = t % n;
        t /= n;
      }
      for (std::size_t row = 0; row < r; ++row) {
        u64 acc = 0;
        for (std::size_t col = 0; col < r; ++col) acc += m[row * r + col] * v[col];
        w[row] = acc % n;
      }
      uf.unite(vi, detail::vector_index(w, n));
    }
  }
  return uf.classes();
}

inline u64 glr_orbit_count(u64 n, u64 r, OrbitMethod method) {
  if (n == 0 || r == 0) throw InputError("n and r must be >= 1");
  if (method == OrbitMethod::formula) return divisor_count(n);
  return glr_orbit_count_brute(n, r);
}

struct OrdValue {
  u64 prime = 0;
  int exponent = 0;  // e with p^e || n
  int ord = 0;       // min(ord_p(v_i), e)
  bool operator==(const OrdValue&) const = default;
};

// The complete orbit invariant of v in (Z/n)^r: per prime power p^e || n,
// min over coordinates of ord_p, capped at e.
inline std::vector<OrdValue> orbit_invariant(const std::vector<u64>& v, u64 n) {
  if (n == 0) throw InputError("n must be >= 1");
  std::vector<OrdValue> out;
  if (n == 1) return out;
  for (auto [p, e] : factorize(n)) {
    int best = e;
    for (u64 c : v) {
      u64 x = c % n;
      int k = 0;
      while (k < e && x % p == 0) {
        x /= p;
        ++k;
      }
      best = std::min(best, k);
    }
    out.push_back({p, e, best});
  }
  return out;
}

struct GcdIdentity {
  u64 lhs = 0;
  u64 rhs = 0;
  bool equal = false;
};

// sum over units a mod n of gcd(a - 1, n)  versus  d(n) * phi(n).
inline GcdIdentity gcd_identity_check(u64 n) {
  if (n == 0) throw InputError("n must be >= 1");
  GcdIdentity g;
  for (u64 a = 0; a < n; ++a) {
    if (std::gcd(a, n) != 1) continue;
    g.lhs += std::gcd(a == 0 ? n - 1 : a - 1, n);
  }
  g.rhs = divisor_count(n) * euler_phi(n);
  g.equal = g.lhs == g.rhs;
  check_invariant(g.equal, "gcd identity fails at n = " + std::to_string(n));
  return g;
}

// ---------------------------------------------------------------------------
// Frobenius sampling on C0[n].

struct TorsionRow {
  u64 p = 0;
  u64 h0 = 0;
  u64 image_size = 0;
  u64 b_size = 0;  // n^2 / h0: image of Frobenius - 1 on C0[n]
  double running_average = 0;
};

struct TorsionActionReport {
  u64 n = 1;
  std::vector<TorsionRow> rows;
  double running_average = 0;
  double estimated_orbits = 0;
  std::size_t sample_count() const { return rows.size(); }
};

// h0 = |C0[n](F_p)| and the image size of [n] on C0(F_p).
inline TorsionRow torsion_row(const CurveFp& c, u64 n) {
  const auto points = enumerate_points(c);
  TorsionRow row;
  row.p = c.p();
  row.h0 = torsion_kernel_size(c, points, n);
  check_invariant(points.size() % row.h0 == 0, "h0 does not divide #C0(F_p)");
  row.image_size = points.size() / row.h0;
  check_invariant((n * n) % row.h0 == 0, "h0 does not divide n^2");
  row.b_size = n * n / row.h0;
  check_invariant(row.b_size * row.h0 == n * n, "|B| * h0 != n^2");
  return row;
}

// Primes p <= pmax where the base curve has good reduction and p does not divide n.
inline std::vector<u64> torsion_sample_primes(const BaseDescriptor& base, u64 n, u64 pmax) {
  std::vector<u64> out;
  for (u64 p : primes_up_to(pmax)) {
    if (p < 5 || n % p == 0) continue;
    auto A = reduce_mod(base.A, p);
    auto B = reduce_mod(base.B, p);
    if (!A || !B || CurveFp::is_singular(p, *A, *B)) continue;
    out.push_back(p);
  }
  return out;
}

// Chebotarev-style average of h0 over good primes: converges to the number of
// Galois orbits on C0[n] by the orbit-counting lemma.
inline TorsionActionReport orbit_average_estimate(const BaseDescriptor& base, u64 n, u64 pmax, std::size_t workers = 1) {
  if (base.kind != BaseKind::elliptic) throw InputError("orbit estimate needs an elliptic base curve");
  if (n == 0) throw InputError("n must be >= 1");
  if (base.discriminant_core() == 0) throw InputError("base curve is singular");
  const auto primes = torsion_sample_primes(base, n, pmax);
  if (primes.empty()) throw InputError("no good primes up to " + std::to_string(pmax));
  auto rows = parallel_map(primes, workers, [&](u64 p) {
    return torsion_row(CurveFp(p, static_cast<i64>(*reduce_mod(base.A, p)), static_cast<i64>(*reduce_mod(base.B, p))), n);
  });
  TorsionActionReport rep;
  rep.n = n;
  u64 sum = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    sum += rows[i].h0;
    rows[i].running_average = static_cast<double>(sum) / static_cast<double>(i + 1);
  }
  rep.rows = std::move(rows);
  rep.running_average = rep.rows.back().running_average;
  rep.estimated_orbits = rep.running_average;
  return rep;
}

inline std::string torsion_report_csv(const TorsionActionReport& rep) {
  std::ostringstream os;
  os << "p,h0,image_size,running_average\n";
  for (const auto& r : rep.rows) {
    os << r.p << ',' << r.h0 << ',' << r.image_size << ',';
    os << std::fixed;
    os.precision(6);
    os << r.running_average << '\n';
  }
  return os.str();
}

}  // namespace ellrank
