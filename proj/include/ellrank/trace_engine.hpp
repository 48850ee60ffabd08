#pragma once

// Fiber-trace scans. For a prime p outside S, a_p(E_R) is the Frobenius trace
// of the fiber over a base point R (0 on singular fibers), and
// s_p = sum_R a_p(E_R) = p * A_p is accumulated exactly.

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ellrank/elliptic_core.hpp"
#include "ellrank/parallel.hpp"
#include "ellrank/surface_model.hpp"

namespace ellrank {

struct BasePoint {
  enum class Kind { affine_t, infinity, affine_xy, origin };
  Kind kind = Kind::affine_t;
  u64 x = 0;
  u64 y = 0;

  static BasePoint t(u64 value) { return {Kind::affine_t, value, 0}; }
  static BasePoint infinity() { return {Kind::infinity, 0, 0}; }
  static BasePoint xy(u64 x, u64 y) { return {Kind::affine_xy, x, y}; }
  static BasePoint origin() { return {Kind::origin, 0, 0}; }
  static BasePoint on_base(const PointFp& P) { return P.infinity ? origin() : xy(P.x, P.y); }
};

struct TraceRecord {
  u64 p = 0;
  i64 s_p = 0;
  u64 fibers_good = 0;
  u64 fibers_singular = 0;
  u64 fibers_skipped = 0;
  bool operator==(const TraceRecord&) const = default;
};

struct TowerTraceRecord {
  TraceRecord trace;
  u64 n = 1;
  u64 h0 = 1;
  // Size of [n] C0(F_p) in the full group, O included.
  u64 image_size = 0;
  bool operator==(const TowerTraceRecord&) const = default;
};

struct FiberValue {
  i64 trace = 0;
  bool singular = false;
};

// Everything needed to evaluate fibers of one surface modulo one prime.
class FiberEvaluator {
 public:
  FiberEvaluator(const Surface& s, u64 p, u64 cap = kDefaultEnumerationCap) : surface_(&s), p_(p) {
    if (!is_prime(p)) throw InputError(std::to_string(p) + " is not prime");
    if (s.excludes(p)) throw InputError("prime " + std::to_string(p) + " is in the excluded set S");
    if (p > cap) throw InputError("prime " + std::to_string(p) + " exceeds enumeration cap " + std::to_string(cap));
    table_.emplace(p);
    auto reduce = [p](const PolyQ& f) {
      auto r = f.reduce(p);
      check_invariant(r.has_value(), "coefficient denominator vanishes at a prime outside S");
      return *r;
    };
    a4u_ = reduce(s.spec().a4.u);
    a4v_ = reduce(s.spec().a4.v);
    a6u_ = reduce(s.spec().a6.u);
    a6v_ = reduce(s.spec().a6.v);
    if (s.is_p1()) {
      const auto k = static_cast<std::size_t>(s.infinity_weight());
      a4_inf_ = *reduce_mod(s.spec().a4.u.coeff(4 * k), p);
      a6_inf_ = *reduce_mod(s.spec().a6.u.coeff(6 * k), p);
    } else {
      auto A = reduce_mod(s.base().A, p);
      auto B = reduce_mod(s.base().B, p);
      check_invariant(A && B, "base coefficients do not reduce at a prime outside S");
      base_.emplace(p, static_cast<i64>(*A), static_cast<i64>(*B));
    }
  }

  u64 p() const { return p_; }
  const ResidueTable& table() const { return *table_; }
  const Surface& surface() const { return *surface_; }
  // The base curve C0 mod p (elliptic base only).
  const CurveFp& base_curve() const {
    if (!base_) throw InputError("surface has a P^1 base");
    return *base_;
  }

  // Reduced (a4, a6) of the fiber over R.
  std::pair<u64, u64> fiber_coefficients(const BasePoint& R) const {
    using K = BasePoint::Kind;
    const bool p1 = surface_->is_p1();
    if (p1 && (R.kind == K::affine_xy || R.kind == K::origin)) throw InputError("base point is not on P^1");
    if (!p1 && (R.kind == K::affine_t || R.kind == K::infinity)) throw InputError("base point is not on the elliptic base");
    switch (R.kind) {
      case K::infinity:
        return {a4_inf_, a6_inf_};
      case K::origin:
        throw InputError("coefficient pole at the base origin O");
      case K::affine_t:
        if (R.x >= p_) throw InputError("base point out of range");
        return {eval(a4u_, R.x), eval(a6u_, R.x)};
      case K::affine_xy: {
        if (!base_->contains(PointFp::affine(R.x, R.y))) throw InputError("base point is not on C0 mod p");
        u64 a4 = (eval(a4u_, R.x) + mulmod(eval(a4v_, R.x), R.y, p_)) % p_;
        u64 a6 = (eval(a6u_, R.x) + mulmod(eval(a6v_, R.x), R.y, p_)) % p_;
        return {a4, a6};
      }
    }
    return {0, 0};
  }

  FiberValue evaluate(const BasePoint& R) const {
    auto [a4, a6] = fiber_coefficients(R);
    if (CurveFp::is_singular(p_, a4, a6)) return {0, true};
    return {-table_->character_sum(a4, a6), false};
  }

 private:
  u64 eval(const std::vector<u64>& c, u64 x) const {
    u64 acc = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (mulmod(acc, x, p_) + *it) % p_;
    return acc;
  }

  const Surface* surface_;
  u64 p_;
  std::optional<ResidueTable> table_;
  std::optional<CurveFp> base_;
  std::vector<u64> a4u_, a4v_, a6u_, a6v_;
  u64 a4_inf_ = 0, a6_inf_ = 0;
};

// a_p of the fiber over R; 0 when the fiber is singular.
inline i64 fiber_trace(const Surface& s, u64 p, const BasePoint& R) { return FiberEvaluator(s, p).evaluate(R).trace; }

inline void tally(TraceRecord& rec, const FiberValue& v, u64 multiplicity = 1) {
  rec.s_p += v.trace * static_cast<i64>(multiplicity);
  (v.singular ? rec.fibers_singular : rec.fibers_good) += multiplicity;
}

// s_p over every base point: t in F_p plus t = infinity on P^1; the affine
// points of C0(F_p) on an elliptic base (O is skipped and counted as such).
inline TraceRecord average_trace(const FiberEvaluator& ev) {
  TraceRecord rec;
  rec.p = ev.p();
  if (ev.surface().is_p1()) {
    for (u64 t = 0; t < ev.p(); ++t) tally(rec, ev.evaluate(BasePoint::t(t)));
    tally(rec, ev.evaluate(BasePoint::infinity()));
  } else {
    for (const auto& P : enumerate_points(ev.base_curve(), ev.table())) {
      if (P.infinity) {
        ++rec.fibers_skipped;
        continue;
      }
      tally(rec, ev.evaluate(BasePoint::on_base(P)));
    }
  }
  return rec;
}

inline TraceRecord average_trace(const Surface& s, u64 p) { return average_trace(FiberEvaluator(s, p)); }

// Record for a P^1 or elliptic scan stored in the tower layout (n = 1).
inline TowerTraceRecord as_level_one(const TraceRecord& rec, const Surface& s) {
  TowerTraceRecord out;
  out.trace = rec;
  out.n = 1;
  out.h0 = 1;
  out.image_size = s.is_p1() ? rec.p + 1 : rec.fibers_good + rec.fibers_singular + rec.fibers_skipped;
  return out;
}

// Trace sum of the pullback E_n along [n]: C0 -> C0, grouped by image point.
// Every image point has exactly h0 = |C0[n](F_p)| preimages, so each distinct
// image fiber is evaluated once and weighted by its preimage count. Points P
// with [n]P = O (the kernel, O included) are skipped.
inline TowerTraceRecord tower_average_trace(const FiberEvaluator& ev, u64 n) {
  if (n == 0) throw InputError("tower level n must be >= 1");
  if (ev.surface().is_p1()) throw InputError("P^1 has no unramified abelian covers; tower needs an elliptic base");
  const CurveFp& base = ev.base_curve();
  const auto points = enumerate_points(base, ev.table());

  std::map<PointFp, u64> preimages;
  for (const auto& P : points) ++preimages[detail::scalar_mul_unchecked(base, P, n)];

  TowerTraceRecord rec;
  rec.n = n;
  rec.trace.p = ev.p();
  rec.h0 = preimages.at(PointFp::origin());
  rec.image_size = preimages.size();
  for (const auto& [Q, mult] : preimages)
    check_invariant(mult == rec.h0, "image point with preimage count != |C0[n](F_p)| at p=" + std::to_string(ev.p()));
  check_invariant(rec.h0 * rec.image_size == points.size(), "h0 * image_size != #C0(F_p)");
  check_invariant((n * n) % rec.h0 == 0, "h0 does not divide n^2");

  rec.trace.fibers_skipped = rec.h0;
  for (const auto& [Q, mult] : preimages) {
    if (Q.infinity) continue;
    tally(rec.trace, ev.evaluate(BasePoint::on_base(Q)), mult);
  }
  return rec;
}

inline TowerTraceRecord tower_average_trace(const Surface& s, u64 n, u64 p) {
  return tower_average_trace(FiberEvaluator(s, p), n);
}

// Ungrouped evaluation: one fiber evaluation per affine preimage point.
inline TowerTraceRecord tower_average_trace_direct(const FiberEvaluator& ev, u64 n) {
  if (n == 0) throw InputError("tower level n must be >= 1");
  const CurveFp& base = ev.base_curve();
  const auto points = enumerate_points(base, ev.table());
  TowerTraceRecord rec;
  rec.n = n;
  rec.trace.p = ev.p();
  rec.h0 = 0;
  std::map<PointFp, bool> images;
  for (const auto& P : points) {
    const PointFp Q = detail::scalar_mul_unchecked(base, P, n);
    images[Q] = true;
    if (Q.infinity) {
      ++rec.h0;
      continue;
    }
    tally(rec.trace, ev.evaluate(BasePoint::on_base(Q)));
  }
  rec.image_size = images.size();
  rec.trace.fibers_skipped = rec.h0;
  return rec;
}

// ---------------------------------------------------------------------------
// Prime scans.

// Primes in [pmin, pmax] outside S.
inline std::vector<u64> scan_primes(const Surface& s, u64 pmin, u64 pmax) {
  std::vector<u64> out;
  for (u64 p : primes_up_to(pmax))
    if (p >= pmin && !s.excludes(p)) out.push_back(p);
  return out;
}

inline std::vector<TraceRecord> scan_average_traces(const Surface& s, const std::vector<u64>& primes, std::size_t workers) {
  return parallel_map(primes, workers, [&s](u64 p) { return average_trace(s, p); });
}

inline std::vector<TowerTraceRecord> scan_tower_traces(const Surface& s, u64 n, const std::vector<u64>& primes,
                                                       std::size_t workers) {
  return parallel_map(primes, workers, [&s, n](u64 p) { return tower_average_trace(s, n, p); });
}

struct MichelRow {
  u64 p = 0;
  i64 s_p = 0;
  double slack = 0;
};

struct MichelScan {
  long long bound = 0;
  std::vector<MichelRow> rows;
  std::optional<MichelRow> worst;
};

// slack(p) = (|s_p|/p - (|N| + 4g - 4)) * sqrt(p): the empirical constant in
// the O(1/sqrt p) term of the fiber-average bound.
inline double michel_slack(i64 s_p, u64 p, long long bound) {
  const double avg = std::abs(static_cast<double>(s_p)) / static_cast<double>(p);
  return (avg - static_cast<double>(bound)) * std::sqrt(static_cast<double>(p));
}

inline MichelScan michel_bound_scan(const std::vector<TraceRecord>& records, long long bound) {
  MichelScan scan;
  scan.bound = bound;
  for (const auto& r : records) {
    MichelRow row{r.p, r.s_p, michel_slack(r.s_p, r.p, bound)};
    scan.rows.push_back(row);
    if (!scan.worst || row.slack > scan.worst->slack) scan.worst = row;
  }
  return scan;
}

inline MichelScan michel_bound_scan(const Surface& s, const ConductorReport& report, u64 pmax, u64 pmin = 5,
                                    std::size_t workers = 1) {
  return michel_bound_scan(scan_average_traces(s, scan_primes(s, pmin, pmax), workers), report.geometric_bound);
}

// Empirical constant c in |s_p|/p <= (h0/n^2)(n^2 |N| + 4g' - 4) + c/sqrt(p).
inline double tower_bound_slack(const TowerTraceRecord& r, long long base_conductor) {
  const double avg = std::abs(static_cast<double>(r.trace.s_p)) / static_cast<double>(r.trace.p);
  const double bound = static_cast<double>(r.h0) * static_cast<double>(base_conductor);
  return (avg - bound) * std::sqrt(static_cast<double>(r.trace.p));
}

}  // namespace ellrank
