#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace ellrank;

namespace {

TraceRecord rec(u64 p, i64 s) {
  TraceRecord r;
  r.p = p;
  r.s_p = s;
  return r;
}

// Double-precision reference for the two sums.
double ref_pnt(const std::vector<TraceRecord>& rs, u64 x) {
  double s = 0;
  for (const auto& r : rs)
    if (r.p <= x) s += -double(r.s_p) / double(r.p) * std::log(double(r.p));
  return s / double(x);
}
double ref_mertens(const std::vector<TraceRecord>& rs, u64 x) {
  double s = 0;
  for (const auto& r : rs)
    if (r.p <= x) s += -double(r.s_p) / (double(r.p) * double(r.p)) * std::log(double(r.p));
  return s / std::log(double(x));
}

}  // namespace

TEST(Nagao, SinglePrimeExample) {
  std::vector<TraceRecord> rs{rec(5, -5)};
  EXPECT_NEAR(nagao_estimate(rs, 5, NagaoForm::pnt), std::log(5.0) / 5.0, 1e-12);
  EXPECT_NEAR(nagao_estimate(rs, 5, NagaoForm::mertens), 0.2, 1e-12);
  EXPECT_EQ(fixed6(nagao_estimate(rs, 5, NagaoForm::pnt)), "0.321888");
  EXPECT_EQ(fixed6(nagao_estimate(rs, 5, NagaoForm::mertens)), "0.200000");
}

TEST(Nagao, ZeroSumsAndEmptyRange) {
  std::vector<TraceRecord> zeros{rec(5, 0), rec(7, 0), rec(11, 0)};
  EXPECT_EQ(nagao_estimate(zeros, 11, NagaoForm::pnt), 0.0);
  EXPECT_EQ(nagao_estimate(zeros, 11, NagaoForm::mertens), 0.0);
  try {
    nagao_estimate(zeros, 4, NagaoForm::pnt);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("no primes in range"), std::string::npos);
  }
  EXPECT_THROW(nagao_estimate({}, 100, NagaoForm::mertens), InputError);
}

TEST(Nagao, MatchesDoubleReference) {
  gen::Rng rng(5);
  std::vector<TraceRecord> rs;
  for (u64 p : primes_up_to(3000))
    if (p >= 5) rs.push_back(rec(p, rng.range(-3 * static_cast<i64>(p), 3 * static_cast<i64>(p))));
  for (u64 x : {5u, 100u, 1000u, 3000u}) {
    EXPECT_NEAR(nagao_estimate(rs, x, NagaoForm::pnt), ref_pnt(rs, x), 1e-9);
    EXPECT_NEAR(nagao_estimate(rs, x, NagaoForm::mertens), ref_mertens(rs, x), 1e-9);
  }
}

TEST(GeometricBound, Examples) {
  ConductorReport r;
  r.total_degree = 5;
  r.genus = 0;
  EXPECT_EQ(geometric_bound(r), 1);
  r.total_degree = 6;
  r.genus = 1;
  EXPECT_EQ(geometric_bound(r), 6);
  r.total_degree = 7;
  r.genus = 0;
  EXPECT_EQ(geometric_bound(r), 3);
}

TEST(TowerBound, KnownValues) {
  EXPECT_DOUBLE_EQ(tower_rank_bound_measured(6, 2, 2), 12.0);
  EXPECT_DOUBLE_EQ(tower_rank_bound_measured(6, 1, 1), 6.0);
  EXPECT_EQ(tower_rank_bound_serre(6, 6, 1), 24);
  EXPECT_THROW(tower_rank_bound_measured(6, 0, 1), InputError);
  EXPECT_THROW(tower_rank_bound_serre(6, 0, 1), InputError);
  EXPECT_THROW(tower_rank_bound_measured(6, 2, 5), InputError);  // more orbits than points
  EXPECT_THROW(tower_rank_bound_measured(6, 2, 0.5), InputError);
}

TEST(TowerBound, OrderingAgainstPullbackGeometricBound) {
  for (u64 n = 1; n <= 12; ++n)
    for (double orbits = 1; orbits <= double(n * n); orbits += 0.5) {
      const double b = tower_rank_bound_measured(6, n, orbits);
      EXPECT_LE(b, double(n * n) * 6.0);
    }
  for (u64 n = 1; n <= 12; ++n) EXPECT_EQ(tower_rank_bound_serre(6, n, 1), static_cast<long long>(divisor_count(n)) * 6);
}

TEST(RankReport, PrefixConsistencyAndValidation) {
  gen::Rng rng(9);
  std::vector<TraceRecord> rs;
  for (u64 p : primes_up_to(2000))
    if (p >= 5) rs.push_back(rec(p, rng.range(-50, 50)));
  auto full = build_rank_report("r", rs, {100, 500, 1000, 2000}, 3);
  auto prefix = build_rank_report("r", rs, {100, 500}, 3);
  for (std::size_t i = 0; i < prefix.rows.size(); ++i) {
    EXPECT_EQ(fixed6(prefix.rows[i].r_n), fixed6(full.rows[i].r_n));
    EXPECT_EQ(fixed6(prefix.rows[i].r_m), fixed6(full.rows[i].r_m));
    EXPECT_EQ(prefix.rows[i].primes, full.rows[i].primes);
  }
  EXPECT_THROW(build_rank_report("r", rs, {500, 100}, 3), InputError);
  EXPECT_THROW(build_rank_report("r", rs, {100, 100}, 3), InputError);
  EXPECT_THROW(build_rank_report("r", rs, {}, 3), InputError);
}

TEST(RankReport, SectionSoftCheckAndRendering) {
  std::vector<TraceRecord> rs{rec(5, -5), rec(7, -14)};
  auto rep = build_rank_report("E", rs, {5, 7}, 3, 1LL);
  ASSERT_TRUE(rep.section_check);
  const double floor = 0.4;
  EXPECT_EQ(*rep.section_check, rep.rows.back().r_n > floor && rep.rows.back().r_m > floor);
  auto j = rank_report_to_json(rep);
  EXPECT_EQ(j["label"], "conditional estimate");
  EXPECT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["rows"][0]["R_M"], "0.200000");
  EXPECT_NE(rank_report_table(rep).find("conditional estimate"), std::string::npos);
  EXPECT_EQ(rank_report_csv(rep).substr(0, 28), "X,primes,R_N,R_M,geometric_b");
}

TEST(RankEstimates, RecomputableFromScanRecords) {
  Surface s(SurfaceSpec{"E1", BaseDescriptor::p1(), BaseFunction(PolyQ{0, 1}), BaseFunction(PolyQ{0, 0, 0, -1}), {2, 3}, {}});
  auto primes = scan_primes(s, 2, 300);
  auto recs = scan_average_traces(s, primes, 1);
  auto rep = build_rank_report("E1", recs, {50, 300}, 3);
  EXPECT_NEAR(rep.rows.back().r_m, ref_mertens(recs, 300), 1e-9);
  EXPECT_NEAR(rep.rows.back().r_n, ref_pnt(recs, 300), 1e-9);
}
