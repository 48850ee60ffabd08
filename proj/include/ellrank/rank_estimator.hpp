#pragma once

// Truncated Nagao sums and the rank bounds they are compared against.
//
//   R_N(X) = (1/X)     * sum_{p <= X, p not in S} -(s_p / p)   * log p
//   R_M(X) = (1/log X) * sum_{p <= X, p not in S} -(s_p / p^2) * log p
//
// Under the Tate conjecture both tend to the Mordell-Weil rank; outputs are
// labelled as conditional estimates.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ellrank/arith.hpp"
#include "ellrank/surface_model.hpp"
#include "ellrank/trace_engine.hpp"

namespace ellrank {

using Float80 = boost::multiprecision::number<
    boost::multiprecision::cpp_bin_float<80, boost::multiprecision::digit_base_2>, boost::multiprecision::et_off>;

inline constexpr const char* kConditionalLabel = "conditional estimate";

enum class NagaoForm { pnt, mertens };

inline std::string fixed6(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << (v == 0 ? 0.0 : v);
  return os.str();
}

namespace detail {

inline Float80 to_float80(const Rational& r) { return Float80(numerator_of(r)) / Float80(denominator_of(r)); }

}  // namespace detail

// Records must already exclude p in S. Only records with p <= cutoff enter.
inline double nagao_estimate(const std::vector<TraceRecord>& records, u64 cutoff, NagaoForm form) {
  Float80 sum = 0;
  std::size_t used = 0;
  for (const auto& r : records) {
    if (r.p > cutoff) continue;
    const i64 power = form == NagaoForm::pnt ? 1 : 2;
    BigInt den = power == 1 ? BigInt(r.p) : BigInt(r.p) * r.p;
    Rational weight(BigInt(-r.s_p), den);
    sum += detail::to_float80(weight) * log(Float80(r.p));
    ++used;
  }
  if (used == 0) throw InputError("no primes in range for cutoff " + std::to_string(cutoff));
  Float80 norm = form == NagaoForm::pnt ? Float80(cutoff) : log(Float80(cutoff));
  return static_cast<double>(sum / norm);
}

inline long long geometric_bound(const ConductorReport& report) {
  return static_cast<long long>(report.total_degree) + 4LL * report.genus - 4;
}

// (orbits / n^2) * (|N(E_n)| + 4g' - 4) with |N(E_n)| = n^2 |N| and g' = 1.
inline double tower_rank_bound_measured(long long base_conductor, u64 n, double orbit_count) {
  if (n == 0) throw InputError("tower level n must be >= 1");
  const double n2 = static_cast<double>(n * n);
  if (!(orbit_count >= 1.0)) throw InputError("orbit count must be >= 1");
  if (orbit_count > n2) throw InputError("orbit count exceeds |C[n]| = n^2");
  const double bound = orbit_count / n2 * (n2 * static_cast<double>(base_conductor));
  check_invariant(bound <= n2 * static_cast<double>(base_conductor) + 1e-9, "measured tower bound exceeds geometric bound");
  return bound;
}

// Orbits <= I * d(n), so the bound becomes I * d(n) * |N|.
inline long long tower_rank_bound_serre(long long base_conductor, u64 n, u64 index_bound) {
  if (n == 0) throw InputError("tower level n must be >= 1");
  if (index_bound == 0) throw InputError("index bound I must be >= 1");
  return static_cast<long long>(index_bound * divisor_count(n)) * base_conductor;
}

struct RankRow {
  u64 cutoff = 0;
  std::size_t primes = 0;
  double r_n = 0;
  double r_m = 0;
};

struct RankReport {
  std::string surface;
  std::vector<RankRow> rows;
  long long geometric_bound = 0;
  std::optional<double> tower_bound;
  std::optional<long long> section_lower_bound;
  // Soft check: both final estimates exceed section_lower_bound - 0.6.
  std::optional<bool> section_check;
};

inline RankReport build_rank_report(const std::string& name, const std::vector<TraceRecord>& records,
                                    std::vector<u64> cutoffs, long long geometric,
                                    std::optional<long long> sections = std::nullopt) {
  if (cutoffs.empty()) throw InputError("at least one cutoff is required");
  for (std::size_t i = 1; i < cutoffs.size(); ++i)
    if (cutoffs[i] <= cutoffs[i - 1]) throw InputError("cutoffs must be strictly increasing");
  RankReport rep;
  rep.surface = name;
  rep.geometric_bound = geometric;
  for (u64 x : cutoffs) {
    RankRow row;
    row.cutoff = x;
    row.primes = static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [x](const TraceRecord& r) { return r.p <= x; }));
    row.r_n = nagao_estimate(records, x, NagaoForm::pnt);
    row.r_m = nagao_estimate(records, x, NagaoForm::mertens);
    rep.rows.push_back(row);
  }
  if (sections) {
    rep.section_lower_bound = sections;
    const auto& last = rep.rows.back();
    const double floor = static_cast<double>(*sections) - 0.6;
    rep.section_check = last.r_n > floor && last.r_m > floor;
  }
  return rep;
}

inline nlohmann::json rank_report_to_json(const RankReport& rep) {
  nlohmann::json j;
  j["surface"] = rep.surface;
  j["label"] = kConditionalLabel;
  j["geometric_bound"] = rep.geometric_bound;
  if (rep.tower_bound) j["tower_bound"] = fixed6(*rep.tower_bound);
  if (rep.section_lower_bound) j["section_lower_bound"] = *rep.section_lower_bound;
  if (rep.section_check) j["section_check"] = *rep.section_check ? "pass" : "fail";
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : rep.rows)
    rows.push_back({{"X", r.cutoff}, {"primes", r.primes}, {"R_N", fixed6(r.r_n)}, {"R_M", fixed6(r.r_m)}});
  j["rows"] = rows;
  return j;
}

inline std::string rank_report_table(const RankReport& rep) {
  std::ostringstream os;
  os << "# " << rep.surface << " (" << kConditionalLabel << ")\n";
  os << std::setw(10) << "X" << std::setw(8) << "primes" << std::setw(14) << "R_N" << std::setw(14) << "R_M"
     << std::setw(8) << "geom";
  if (rep.tower_bound) os << std::setw(14) << "tower";
  os << '\n';
  for (const auto& r : rep.rows) {
    os << std::setw(10) << r.cutoff << std::setw(8) << r.primes << std::setw(14) << fixed6(r.r_n) << std::setw(14)
       << fixed6(r.r_m) << std::setw(8) << rep.geometric_bound;
    if (rep.tower_bound) os << std::setw(14) << fixed6(*rep.tower_bound);
    os << '\n';
  }
  if (rep.section_lower_bound)
    os << "# declared sections: " << *rep.section_lower_bound << " (soft check "
       << (rep.section_check.value_or(false) ? "pass" : "fail") << ")\n";
  return os.str();
}

inline std::string rank_report_csv(const RankReport& rep) {
  std::ostringstream os;
  os << "X,primes,R_N,R_M,geometric_bound" << (rep.tower_bound ? ",tower_bound" : "") << '\n';
  for (const auto& r : rep.rows) {
    os << r.cutoff << ',' << r.primes << ',' << fixed6(r.r_n) << ',' << fixed6(r.r_m) << ',' << rep.geometric_bound;
    if (rep.tower_bound) os << ',' << fixed6(*rep.tower_bound);
    os << '\n';
  }
  return os.str();
}

}  // namespace ellrank
