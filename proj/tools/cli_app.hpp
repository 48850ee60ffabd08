#pragma once

// The ellrank command line, runnable in-process so tests can drive it with
// captured streams. main() in ellrank.cpp is a thin wrapper.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ellrank/ellrank.hpp"

namespace ellrank::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kInputError = 2, kMissingData = 3, kInvariantViolation = 4 };

// One output table plus "key: value" summary lines. Integer cells stay exact,
// decimals are rendered with fixed6 by the caller and stored as strings.
struct Output {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  std::vector<std::pair<std::string, json>> summary;

  void add_row(std::vector<json> r) { rows.push_back(std::move(r)); }
  void note(std::string key, json value) { summary.emplace_back(std::move(key), std::move(value)); }
};

inline std::string cell_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "-";
  return v.dump();
}

inline void render(const Output& o, const std::string& format, std::ostream& out) {
  if (format == "json") {
    json j;
    j["title"] = o.title;
    json rows = json::array();
    for (const auto& r : o.rows) {
      json obj = json::object();
      for (std::size_t i = 0; i < o.columns.size(); ++i) obj[o.columns[i]] = r[i];
      rows.push_back(obj);
    }
    j["rows"] = rows;
    json summary = json::object();
    for (const auto& [k, v] : o.summary) summary[k] = v;
    j["summary"] = summary;
    out << j.dump(2) << '\n';
    return;
  }
  if (format == "csv") {
    for (std::size_t i = 0; i < o.columns.size(); ++i) out << (i ? "," : "") << o.columns[i];
    out << '\n';
    for (const auto& r : o.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << cell_text(r[i]);
      out << '\n';
    }
    return;
  }
  std::vector<std::size_t> width(o.columns.size());
  for (std::size_t i = 0; i < o.columns.size(); ++i) width[i] = o.columns[i].size();
  for (const auto& r : o.rows)
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], cell_text(r[i]).size());
  if (!o.title.empty()) out << "# " << o.title << '\n';
  if (!o.columns.empty()) {
    for (std::size_t i = 0; i < o.columns.size(); ++i) out << (i ? "  " : "") << std::setw(int(width[i])) << o.columns[i];
    out << '\n';
    for (const auto& r : o.rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "  " : "") << std::setw(int(width[i])) << cell_text(r[i]);
      out << '\n';
    }
  }
  for (const auto& [k, v] : o.summary) out << "# " << k << ": " << cell_text(v) << '\n';
}

struct RunConfig {
  std::string spec_path;
  u64 pmax = 1000;
  u64 sample_pmax = 10000;
  std::string n_range;
  u64 n = 0;
  u64 r = 2;
  u64 nmax = 100;
  std::optional<u64> index_bound;
  std::size_t workers = 1;
  std::string format = "table";
  std::string cache_path;
  std::vector<u64> cutoffs;
  bool brute = false;
  bool no_scan = false;
  std::string action_path;
  std::optional<std::uint32_t> seed;
};

namespace detail {

inline std::pair<u64, u64> parse_n_range(const std::string& text) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) throw InputError("--n-range must look like a..b");
  auto num = [&](std::string_view s) {
    u64 v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw InputError("bad number in --n-range '" + text + "'");
    return v;
  };
  const std::string_view all(text);
  u64 a = num(all.substr(0, dots)), b = num(all.substr(dots + 2));
  if (a == 0 || b < a) throw InputError("--n-range needs 1 <= a <= b");
  return {a, b};
}

inline std::vector<u64> levels(const RunConfig& cfg) {
  if (!cfg.n_range.empty()) {
    auto [a, b] = parse_n_range(cfg.n_range);
    std::vector<u64> out;
    for (u64 n = a; n <= b; ++n) out.push_back(n);
    return out;
  }
  if (cfg.n == 0) throw InputError("give --n or --n-range");
  return {cfg.n};
}

inline std::string join(const std::vector<u64>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

// Level-n records for the given primes, served from the cache where present.
// With no_scan a missing record is a MissingData error.
inline std::vector<TowerTraceRecord> level_records(const Surface& s, u64 n, const std::vector<u64>& primes,
                                                   const RunConfig& cfg) {
  std::optional<ScanCache> cache;
  if (!cfg.cache_path.empty()) cache.emplace(cfg.cache_path, s.hash());
  std::vector<TowerTraceRecord> out(primes.size());
  std::vector<u64> missing;
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < primes.size(); ++i) {
    auto hit = cache ? cache->find(n, primes[i]) : std::nullopt;
    if (hit) {
      out[i] = *hit;
    } else {
      missing.push_back(primes[i]);
      slots.push_back(i);
    }
  }
  if (!missing.empty() && cfg.no_scan)
    throw MissingData("cache miss: " + std::to_string(missing.size()) + " record(s) at n=" + std::to_string(n) +
                      " not in cache (first p=" + std::to_string(missing.front()) + ")");
  std::vector<TowerTraceRecord> fresh;
  if (n == 1) {
    auto recs = scan_average_traces(s, missing, cfg.workers);
    for (const auto& r : recs) fresh.push_back(as_level_one(r, s));
  } else {
    fresh = scan_tower_traces(s, n, missing, cfg.workers);
  }
  for (std::size_t k = 0; k < fresh.size(); ++k) {
    out[slots[k]] = fresh[k];
    if (cache) cache->put(fresh[k]);
  }
  if (cache && !fresh.empty()) cache->finalize();
  return out;
}

inline std::vector<TraceRecord> traces_of(const std::vector<TowerTraceRecord>& recs) {
  std::vector<TraceRecord> out;
  out.reserve(recs.size());
  for (const auto& r : recs) out.push_back(r.trace);
  return out;
}

inline std::string ledger_of(const ConductorReport& rep) {
  std::string s;
  for (const auto& u : rep.unstable) s += (s.empty() ? "" : "; ") + u.label + " = " + ellrank::to_string(Rational(u.value));
  return s.empty() ? "none" : s;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands.

inline Output cmd_conductor(const RunConfig& cfg) {
  Surface s(load_surface_spec(cfg.spec_path));
  const auto rep = conductor(s);
  Output o;
  o.title = s.name() + ": conductor";
  o.columns = {"place", "locus", "degree", "type", "exponent", "contribution"};
  for (const auto& pl : rep.affine_places)
    o.add_row({pl.label, pl.locus.to_string(rep.base_kind == BaseKind::p1 ? 't' : 'x'), pl.degree, to_string(pl.type),
               conductor_exponent(pl.type), pl.contribution()});
  if (rep.infinity_place)
    o.add_row({"infinity", "-", 1, to_string(rep.infinity_place->type), conductor_exponent(rep.infinity_place->type),
               rep.infinity_place->contribution()});
  o.note("base", to_string(rep.base_kind));
  o.note("genus", rep.genus);
  if (rep.infinity_valuations) {
    const auto& v = *rep.infinity_valuations;
    o.note("infinity model", "k=" + std::to_string(v.weight) + " v(c4)=" + std::to_string(v.v_c4) +
                                 " v(c6)=" + std::to_string(v.v_c6) + " v(Delta)=" + std::to_string(v.v_delta));
  }
  if (rep.base_kind == BaseKind::elliptic) o.note("base origin", "excluded");
  o.note("conductor degree", rep.total_degree);
  o.note("geometric bound", rep.geometric_bound);
  o.note("excluded primes", detail::join(s.exclusions().listed_primes()));
  o.note("conductor-unstable integers", detail::ledger_of(rep));
  return o;
}

inline Output cmd_ap_scan(const RunConfig& cfg) {
  Surface s(load_surface_spec(cfg.spec_path));
  std::optional<ConductorReport> rep;
  std::string why;
  try {
    rep = conductor(s);
  } catch (const InputError& e) {
    why = e.what();
  }
  const auto primes = scan_primes(s, 2, cfg.pmax);
  const auto recs = detail::level_records(s, 1, primes, cfg);
  Output o;
  o.title = s.name() + ": fiber trace scan";
  o.columns = {"p", "s_p", "good", "singular", "skipped", "A_p"};
  if (rep) o.columns.push_back("slack");
  for (const auto& r : recs) {
    const auto& t = r.trace;
    std::vector<json> row{t.p, t.s_p, t.fibers_good, t.fibers_singular, t.fibers_skipped,
                          fixed6(static_cast<double>(t.s_p) / static_cast<double>(t.p))};
    if (rep) row.push_back(fixed6(michel_slack(t.s_p, t.p, rep->geometric_bound)));
    o.add_row(std::move(row));
  }
  o.note("primes scanned", recs.size());
  if (rep) {
    auto scan = michel_bound_scan(detail::traces_of(recs), rep->geometric_bound);
    o.note("geometric bound", rep->geometric_bound);
    if (scan.worst)
      o.note("max slack", fixed6(scan.worst->slack) + " at p=" + std::to_string(scan.worst->p));
    else
      o.note("max slack", "none (empty scan)");
  } else {
    o.note("slack", "unavailable: " + why);
  }
  return o;
}

inline Output cmd_nagao(const RunConfig& cfg) {
  Surface s(load_surface_spec(cfg.spec_path));
  const auto rep = conductor(s);
  std::vector<u64> cutoffs = cfg.cutoffs.empty() ? std::vector<u64>{cfg.pmax} : cfg.cutoffs;
  const u64 top = *std::max_element(cutoffs.begin(), cutoffs.end());
  const auto recs = detail::level_records(s, 1, scan_primes(s, 2, top), cfg);
  std::optional<long long> sections;
  if (s.section_count() > 0) sections = static_cast<long long>(s.section_count());
  auto report = build_rank_report(s.name(), detail::traces_of(recs), cutoffs, rep.geometric_bound, sections);
  Output o;
  o.title = s.name() + ": Nagao sums (" + kConditionalLabel + ")";
  o.columns = {"X", "primes", "R_N", "R_M", "geometric_bound"};
  for (const auto& r : report.rows) o.add_row({r.cutoff, r.primes, fixed6(r.r_n), fixed6(r.r_m), report.geometric_bound});
  o.note("label", kConditionalLabel);
  for (std::size_t i = 0; i < s.spec().sections.size(); ++i) {
    const auto& sec = s.spec().sections[i];
    o.note("section " + std::to_string(i + 1), "x=" + sec.x.u.to_string('t') + " y=" + sec.y.u.to_string('t') + " (verified)");
  }
  if (report.section_lower_bound) {
    o.note("section lower bound", *report.section_lower_bound);
    o.note("section check", *report.section_check ? "pass" : "fail");
  }
  return o;
}

inline Output cmd_tower(const RunConfig& cfg) {
  Surface s(load_surface_spec(cfg.spec_path));
  if (s.is_p1()) throw InputError("P^1 has no unramified abelian covers; tower needs an elliptic base");
  const auto rep = conductor(s);
  const long long base_n = rep.total_degree;
  const auto primes = scan_primes(s, 2, cfg.pmax);
  Output o;
  o.title = s.name() + ": unramified tower bounds";
  o.columns = {"n", "samples", "orbit_estimate", "orbits", "d(n)", "|N(E_n)|", "measured", "serre", "geometric", "R_N", "R_M"};
  for (u64 n : detail::levels(cfg)) {
    const auto est = orbit_average_estimate(s.base(), n, cfg.sample_pmax, cfg.workers);
    const double n2 = static_cast<double>(n * n);
    const double rounded = std::clamp(std::round(est.estimated_orbits), 1.0, n2);
    const auto pull = pullback_conductor(rep, n);
    const double measured = tower_rank_bound_measured(base_n, n, rounded);
    json serre = nullptr;
    if (cfg.index_bound) serre = tower_rank_bound_serre(base_n, n, *cfg.index_bound);
    const auto recs = detail::traces_of(detail::level_records(s, n, primes, cfg));
    json rn = nullptr, rm = nullptr;
    if (!recs.empty()) {
      rn = fixed6(nagao_estimate(recs, cfg.pmax, NagaoForm::pnt));
      rm = fixed6(nagao_estimate(recs, cfg.pmax, NagaoForm::mertens));
    }
    o.add_row({n, est.sample_count(), fixed6(est.estimated_orbits), static_cast<long long>(rounded), divisor_count(n),
               pull.total_degree, static_cast<long long>(std::llround(measured)), serre, pull.geometric_bound, rn, rm});
  }
  o.note("base conductor degree", base_n);
  o.note("orbit sampling", "good primes <= " + std::to_string(cfg.sample_pmax));
  o.note("trace scan", "primes <= " + std::to_string(cfg.pmax));
  o.note("measured bound", "rounded orbit estimate * |N|");
  if (cfg.index_bound) o.note("index bound I", *cfg.index_bound);
  o.note("label", kConditionalLabel);
  return o;
}

inline Output cmd_orbits_gl(const RunConfig& cfg, u64 r) {
  if (cfg.n == 0) throw InputError("--n must be >= 1");
  const auto method = cfg.brute ? OrbitMethod::brute : OrbitMethod::formula;
  Output o;
  o.title = "GL_" + std::to_string(r) + "(Z/" + std::to_string(cfg.n) + ") orbits on (Z/" + std::to_string(cfg.n) + ")^" +
            std::to_string(r);
  o.columns = {"n", "r", "method", "orbits", "d(n)"};
  o.add_row({cfg.n, r, cfg.brute ? "brute" : "formula", glr_orbit_count(cfg.n, r, method), divisor_count(cfg.n)});
  return o;
}

inline FiniteAction load_action(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open action file '" + path + "'");
  try {
    json j;
    in >> j;
    std::vector<Permutation> elems;
    for (const auto& e : j.at("elements")) elems.push_back(e.get<Permutation>());
    return FiniteAction(j.at("set_size").get<std::size_t>(), std::move(elems));
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed action file: ") + e.what());
  }
}

inline Output cmd_orbits_burnside(const RunConfig& cfg) {
  const auto a = load_action(cfg.action_path);
  const auto burnside = burnside_orbit_count(a);
  const auto partition = orbit_count_by_partition(a);
  check_invariant(burnside == partition, "Burnside count differs from the orbit partition");
  Output o;
  o.title = "orbit count";
  o.columns = {"set_size", "group_order", "burnside", "partition"};
  o.add_row({a.set_size(), a.order(), burnside, partition});
  return o;
}

inline Output cmd_orbits_average(const RunConfig& cfg) {
  Surface s(load_surface_spec(cfg.spec_path));
  if (cfg.n == 0) throw InputError("--n must be >= 1");
  const auto rep = orbit_average_estimate(s.base(), cfg.n, cfg.pmax, cfg.workers);
  Output o;
  o.title = s.name() + ": h0 average on C0[" + std::to_string(cfg.n) + "]";
  o.columns = {"p", "h0", "image_size", "B", "running_average"};
  for (const auto& r : rep.rows) o.add_row({r.p, r.h0, r.image_size, r.b_size, fixed6(r.running_average)});
  o.note("samples", rep.sample_count());
  o.note("estimated orbits", fixed6(rep.estimated_orbits));
  return o;
}

inline Output cmd_identity_gcd(const RunConfig& cfg) {
  if (cfg.nmax == 0) throw InputError("--nmax must be >= 1");
  Output o;
  o.title = "sum over units a of gcd(a-1, n) vs d(n) phi(n)";
  o.columns = {"n", "lhs", "rhs", "equal"};
  u64 passes = 0;
  for (u64 n = 1; n <= cfg.nmax; ++n) {
    auto g = gcd_identity_check(n);
    passes += g.equal;
    o.add_row({n, g.lhs, g.rhs, g.equal ? "yes" : "no"});
  }
  o.note("passes", std::to_string(passes) + "/" + std::to_string(cfg.nmax));
  return o;
}

// Oracle suite: each line compares a library path with an independent one.
inline Output cmd_selftest(const RunConfig& cfg) {
  Output o;
  o.title = "selftest";
  o.columns = {"check", "cases", "result"};
  auto record = [&](const std::string& name, u64 cases, bool ok) { o.add_row({name, cases, ok ? "PASS" : "FAIL"}); };

  {
    u64 cases = 0;
    bool ok = true;
    for (u64 r = 1; r <= 2; ++r)
      for (u64 n = 1; n <= 12; ++n, ++cases) ok &= glr_orbit_count(n, r, OrbitMethod::brute) == divisor_count(n);
    record("GL_r orbits brute = d(n)", cases, ok);
  }
  {
    std::mt19937 rng(cfg.seed.value_or(20240601u));
    u64 cases = 0;
    bool ok = true;
    for (int i = 0; i < 40; ++i, ++cases) {
      const std::size_t size = 1 + rng() % 8;
      std::vector<Permutation> gens;
      for (int k = 0; k < 2; ++k) {
        Permutation g = ellrank::detail::identity_permutation(size);
        std::shuffle(g.begin(), g.end(), rng);
        gens.push_back(g);
      }
      auto a = FiniteAction::generated_by(size, gens);
      ok &= burnside_orbit_count(a) == orbit_count_by_partition(a);
    }
    record("Burnside = orbit partition", cases, ok);
  }
  {
    u64 cases = 0;
    bool ok = true;
    for (u64 n = 1; n <= 1000; ++n, ++cases) ok &= gcd_identity_check(n).equal;
    record("gcd identity n <= 1000", cases, ok);
  }
  {
    Surface s(SurfaceSpec{"tower", BaseDescriptor::elliptic(-1, 1), BaseFunction(PolyQ{0, 1}), BaseFunction(PolyQ{1}), {}, {}});
    u64 cases = 0;
    bool ok = true;
    for (u64 p : scan_primes(s, 5, 100)) {
      FiberEvaluator ev(s, p);
      for (u64 n = 1; n <= 4; ++n, ++cases) {
        auto g = tower_average_trace(ev, n);
        auto d = tower_average_trace_direct(ev, n);
        ok &= g.trace.s_p == d.trace.s_p && g.h0 == d.h0 && g.image_size == d.image_size;
      }
    }
    record("tower grouped = direct", cases, ok);
  }
  {
    u64 cases = 0;
    bool ok = true;
    for (u64 p : primes_up_to(61)) {
      if (p < 5) continue;
      for (i64 a = 0; a < 3; ++a)
        for (i64 b = 1; b < 4; ++b) {
          if (CurveFp::is_singular(p, static_cast<u64>(a), static_cast<u64>(b))) continue;
          CurveFp c(p, a, b);
          u64 count = 1;
          for (u64 x = 0; x < p; ++x)
            for (u64 y = 0; y < p; ++y) count += c.contains(PointFp::affine(x, y));
          ok &= trace_of_frobenius(c) == static_cast<i64>(p + 1) - static_cast<i64>(count);
          ++cases;
        }
    }
    record("character-sum trace = naive count", cases, ok);
  }
  u64 failed = 0;
  for (const auto& r : o.rows) failed += r[2] == "FAIL";
  o.note("failed", failed);
  return o;
}

// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ellrank: conductors, fiber-trace scans, Nagao sums and tower rank bounds for elliptic surfaces"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&cfg](CLI::App* sub, bool with_spec) {
    if (with_spec) sub->add_option("spec", cfg.spec_path, "surface spec JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", cfg.format, "json | csv | table")->check(CLI::IsMember({"json", "csv", "table"}));
  };
  auto scans = [&cfg](CLI::App* sub) {
    sub->add_option("--pmax", cfg.pmax, "largest prime scanned");
    sub->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--cache", cfg.cache_path, "scan cache file");
    sub->add_flag("--no-scan", cfg.no_scan, "fail with exit 3 instead of scanning missing primes");
  };

  auto* conductor_cmd = app.add_subcommand("conductor", "conductor places, |N| and the geometric bound");
  common(conductor_cmd, true);

  auto* ap = app.add_subcommand("ap-scan", "per-prime fiber trace sums and the average-bound slack");
  common(ap, true);
  scans(ap);

  auto* nagao = app.add_subcommand("nagao", "truncated Nagao sums at increasing cutoffs");
  common(nagao, true);
  scans(nagao);
  nagao->add_option("--cutoffs", cfg.cutoffs, "cutoffs x1,x2,...")->delimiter(',');

  auto* tower = app.add_subcommand("tower", "rank bounds along the multiplication-by-n tower");
  common(tower, true);
  scans(tower);
  tower->add_option("--n", cfg.n, "tower level");
  tower->add_option("--n-range", cfg.n_range, "levels a..b");
  tower->add_option("--index-bound", cfg.index_bound, "index bound I for the serre-mode bound")->check(CLI::PositiveNumber);
  tower->add_option("--sample-pmax", cfg.sample_pmax, "largest prime used for the orbit estimate");

  auto* orbits = app.add_subcommand("orbits", "orbit counting");
  orbits->require_subcommand(1);
  std::vector<std::pair<CLI::App*, u64>> gl;
  for (auto [name, r] : {std::pair{"gl1", 1}, std::pair{"gl2", 2}, std::pair{"glr", 0}}) {
    auto* sub = orbits->add_subcommand(name, "GL_r(Z/n) orbits on (Z/n)^r");
    common(sub, false);
    sub->add_option("--n", cfg.n, "modulus")->required();
    if (r == 0) sub->add_option("--r", cfg.r, "rank")->check(CLI::PositiveNumber);
    sub->add_flag("--brute", cfg.brute, "enumerate the matrix group");
    gl.emplace_back(sub, static_cast<u64>(r));
  }
  auto* burnside = orbits->add_subcommand("burnside", "orbit count of a finite action");
  common(burnside, false);
  burnside->add_option("--file", cfg.action_path, "action JSON")->required();
  auto* average = orbits->add_subcommand("average", "h0 average of Frobenius on C0[n]");
  common(average, true);
  average->add_option("--n", cfg.n, "level")->required();
  average->add_option("--pmax", cfg.pmax, "largest sampled prime");
  average->add_option("--workers", cfg.workers, "worker threads")->check(CLI::PositiveNumber);

  auto* identity = app.add_subcommand("identity", "finite identities");
  identity->require_subcommand(1);
  auto* gcd = identity->add_subcommand("gcd", "sum over units of gcd(a-1,n) = d(n) phi(n)");
  common(gcd, false);
  gcd->add_option("--nmax", cfg.nmax, "check 1..nmax");

  auto* selftest = app.add_subcommand("selftest", "oracle suite");
  common(selftest, false);
  selftest->add_option("--seed", cfg.seed, "seed for random actions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (cfg.pmax < 2) throw InputError("--pmax must be >= 2");
    Output o;
    if (*conductor_cmd) o = cmd_conductor(cfg);
    else if (*ap) o = cmd_ap_scan(cfg);
    else if (*nagao) o = cmd_nagao(cfg);
    else if (*tower) o = cmd_tower(cfg);
    else if (*burnside) o = cmd_orbits_burnside(cfg);
    else if (*average) o = cmd_orbits_average(cfg);
    else if (*gcd) o = cmd_identity_gcd(cfg);
    else if (*selftest) o = cmd_selftest(cfg);
    else {
      for (auto [sub, r] : gl)
        if (*sub) o = cmd_orbits_gl(cfg, r == 0 ? cfg.r : r);
    }
    render(o, cfg.format, out);
    if (*selftest && o.summary.front().second != 0) return kInvariantViolation;
    return kOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const MissingData& e) {
    err << "error: " << e.what() << '\n';
    return kMissingData;
  } catch (const InvariantViolation& e) {
    err << "invariant violation: " << e.what() << '\n';
    return kInvariantViolation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInvariantViolation;
  }
}

}  // namespace ellrank::cli
