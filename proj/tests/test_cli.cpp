#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli_app.hpp"

using ellrank::cli::run_cli;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ellrank");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string spec(const std::string& name) { return std::string(ELLRANK_SPECS_DIR) + "/" + name; }

json summary_of(const Run& r) { return json::parse(r.out).at("summary"); }

}  // namespace

TEST(Cli, ConductorSamples) {
  auto e1 = run({"conductor", spec("e1.json"), "--format", "json"});
  ASSERT_EQ(e1.code, 0) << e1.err;
  EXPECT_EQ(summary_of(e1)["conductor degree"], 7);
  EXPECT_EQ(summary_of(e1)["geometric bound"], 3);

  auto x = run({"conductor", spec("x3_tx_1.json"), "--format", "json"});
  ASSERT_EQ(x.code, 0) << x.err;
  EXPECT_EQ(summary_of(x)["conductor degree"], 5);
  EXPECT_EQ(summary_of(x)["geometric bound"], 1);

  auto eb = run({"conductor", spec("elliptic_base.json")});
  ASSERT_EQ(eb.code, 0) << eb.err;
  EXPECT_NE(eb.out.find("# conductor degree: 6"), std::string::npos);
  EXPECT_NE(eb.out.find("# geometric bound: 6"), std::string::npos);
  EXPECT_NE(eb.out.find("-11735"), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"conductor", "/nonexistent.json"}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  auto ydep = run({"conductor", spec("y_dependent.json")});
  EXPECT_EQ(ydep.code, 2);
  EXPECT_NE(ydep.err.find("exact conductor unsupported for y-dependent coefficients"), std::string::npos);
  EXPECT_EQ(run({"tower", spec("e1.json"), "--n", "2"}).code, 2);
  EXPECT_EQ(run({"ap-scan", spec("e1.json"), "--pmax", "1"}).code, 2);
}

TEST(Cli, ApScanSmallAndEmpty) {
  auto r = run({"ap-scan", spec("e1.json"), "--pmax", "5", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "p,s_p,good,singular,skipped,A_p,slack");
  EXPECT_NE(r.out.find("\n5,-4,3,3,0,"), std::string::npos);

  auto empty = run({"ap-scan", spec("e1.json"), "--pmax", "4", "--format", "json"});
  ASSERT_EQ(empty.code, 0);
  EXPECT_TRUE(json::parse(empty.out)["rows"].empty());

  auto ydep = run({"ap-scan", spec("y_dependent.json"), "--pmax", "50", "--format", "csv"});
  ASSERT_EQ(ydep.code, 0) << ydep.err;
  EXPECT_EQ(ydep.out.substr(0, ydep.out.find('\n')), "p,s_p,good,singular,skipped,A_p");
}

TEST(Cli, WorkerCountDoesNotChangeOutput) {
  for (std::string f : {"e1.json", "x3_tx_1.json", "elliptic_base.json"}) {
    auto one = run({"ap-scan", spec(f), "--pmax", "300", "--workers", "1"});
    auto many = run({"ap-scan", spec(f), "--pmax", "300", "--workers", "8"});
    ASSERT_EQ(one.code, 0);
    EXPECT_EQ(one.out, many.out) << f;
  }
  auto t1 = run({"tower", spec("elliptic_base.json"), "--n-range", "1..3", "--pmax", "200", "--sample-pmax", "500"});
  auto t8 = run({"tower", spec("elliptic_base.json"), "--n-range", "1..3", "--pmax", "200", "--sample-pmax", "500",
                 "--workers", "8"});
  ASSERT_EQ(t1.code, 0) << t1.err;
  EXPECT_EQ(t1.out, t8.out);
}

TEST(Cli, NagaoEchoesSectionAndUsesCache) {
  auto cache = std::filesystem::temp_directory_path() / "ellrank_cli_cache.tsv";
  std::filesystem::remove(cache);
  auto miss = run({"nagao", spec("e1.json"), "--cutoffs", "100", "--cache", cache.string(), "--no-scan"});
  EXPECT_EQ(miss.code, 3);
  EXPECT_NE(miss.err.find("cache miss"), std::string::npos);

  auto fill = run({"nagao", spec("e1.json"), "--cutoffs", "5,100,1000", "--cache", cache.string(), "--format", "json"});
  ASSERT_EQ(fill.code, 0) << fill.err;
  auto j = json::parse(fill.out);
  EXPECT_EQ(j["rows"].size(), 3u);
  EXPECT_EQ(j["summary"]["section 1"], "x=t y=t (verified)");
  EXPECT_EQ(j["summary"]["section check"], "pass");

  auto cached = run({"nagao", spec("e1.json"), "--cutoffs", "5,100,1000", "--cache", cache.string(), "--format", "json",
                     "--no-scan"});
  ASSERT_EQ(cached.code, 0) << cached.err;
  EXPECT_EQ(cached.out, fill.out);

  auto other = run({"nagao", spec("x3_tx_1.json"), "--cutoffs", "100", "--cache", cache.string()});
  EXPECT_EQ(other.code, 2);  // header hash mismatch
  std::filesystem::remove(cache);

  EXPECT_EQ(run({"nagao", spec("e1.json"), "--cutoffs", "100,50"}).code, 2);
}

TEST(Cli, TowerBounds) {
  auto r = run({"tower", spec("elliptic_base.json"), "--n-range", "1..2", "--index-bound", "1", "--pmax", "300",
                "--sample-pmax", "3000", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = json::parse(r.out)["rows"];
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0]["measured"], 6);
  EXPECT_EQ(rows[0]["serre"], 6);
  EXPECT_EQ(rows[0]["geometric"], 6);
  EXPECT_EQ(rows[1]["orbits"], 2);
  EXPECT_EQ(rows[1]["measured"], 12);
  EXPECT_EQ(rows[1]["serre"], 12);
  EXPECT_EQ(rows[1]["geometric"], 24);
  EXPECT_EQ(rows[1]["|N(E_n)|"], 24);
}

TEST(Cli, OrbitsAndIdentity) {
  auto gl = run({"orbits", "gl2", "--n", "12", "--brute", "--format", "json"});
  ASSERT_EQ(gl.code, 0) << gl.err;
  EXPECT_EQ(json::parse(gl.out)["rows"][0]["orbits"], 6);
  auto glr = run({"orbits", "glr", "--n", "30", "--r", "4", "--format", "json"});
  EXPECT_EQ(json::parse(glr.out)["rows"][0]["orbits"], 8);
  EXPECT_EQ(run({"orbits", "glr", "--n", "13", "--brute"}).code, 2);

  auto triv = run({"orbits", "burnside", "--file", spec("trivial_action.json"), "--format", "json"});
  ASSERT_EQ(triv.code, 0) << triv.err;
  EXPECT_EQ(json::parse(triv.out)["rows"][0]["burnside"], 7);
  auto conj = run({"orbits", "burnside", "--file", spec("s3_conjugation.json"), "--format", "json"});
  EXPECT_EQ(json::parse(conj.out)["rows"][0]["partition"], 3);

  auto avg = run({"orbits", "average", spec("elliptic_base.json"), "--n", "2", "--pmax", "5", "--format", "csv"});
  ASSERT_EQ(avg.code, 0) << avg.err;
  EXPECT_NE(avg.out.find("\n5,2,4,2,2.000000"), std::string::npos);

  auto id = run({"identity", "gcd", "--nmax", "100"});
  ASSERT_EQ(id.code, 0);
  EXPECT_NE(id.out.find("# passes: 100/100"), std::string::npos);
}

TEST(Cli, Selftest) {
  auto r = run({"selftest", "--seed", "7"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("# failed: 0"), std::string::npos);
}
