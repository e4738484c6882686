#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "nls/core/error.hpp"
#include "nls/harness/acceptance.hpp"
#include "nls/harness/config.hpp"
#include "nls/harness/csv.hpp"
#include "nls/harness/manifest.hpp"
#include "nls/harness/presets.hpp"

using namespace nls;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("nls_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::Usage;
}

template <class F>
std::string message_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  FAIL("no error raised");
  return {};
}

}  // namespace

TEST_CASE("config parses sections into dotted keys") {
  const auto c = Config::parse("top = 7\n[physics]\np = 3\nq = 2.5\n[diag]\nradii = 8, 12,16\n");
  CHECK(c.get_int("top") == 7);
  CHECK(c.get_double("physics.p") == 3.0);
  CHECK(c.get_double("physics.q") == 2.5);
  CHECK(c.get_list("diag.radii") == std::vector<double>{8, 12, 16});
  CHECK(c.get("missing", "x") == "x");
  CHECK(c.get_seed() == 0);
  CHECK(kind_of([&] { c.get("physics.omega"); }) == ErrorKind::Usage);
  CHECK(kind_of([&] { Config::parse("[physics]\np = three\n").get_double("physics.p"); }) == ErrorKind::Usage);
  CHECK(kind_of([] { Config::parse("[unterminated\n"); }) == ErrorKind::Usage);
}

TEST_CASE("config overrides: full keys, unique short keys, ambiguity") {
  auto c = Config::parse("[physics]\np = 3\n[grid]\nn = 64\n[ground]\nm = 10\n[grid2]\nm = 11\n");
  c.apply_override("physics.p=2.8");
  CHECK(c.get_double("physics.p") == 2.8);
  c.apply_override("n=128");
  CHECK(c.get_int("grid.n") == 128);
  CHECK(kind_of([&] { c.apply_override("m=5"); }) == ErrorKind::Usage);
  CHECK(message_of([&] { c.apply_override("bogus=1"); }).find("bogus") != std::string::npos);
  CHECK(kind_of([&] { c.apply_override("no_equals_sign"); }) == ErrorKind::Usage);
  c.apply_override("run.seed=42");
  CHECK(c.get_seed() == 42);
}

TEST_CASE("config merge, unknown keys and INI round trip") {
  auto a = Config::parse("[physics]\np = 3\nq = 2.5\n");
  a.merge(Config::parse("[physics]\np = 4\n[run]\nseed = 9\n"));
  CHECK(a.get_double("physics.p") == 4.0);
  CHECK(a.get_double("physics.q") == 2.5);
  CHECK_NOTHROW(a.require_known({"physics.p", "physics.q", "run.seed"}));
  CHECK(message_of([&] { a.require_known({"physics.p", "physics.q"}); }).find("run.seed") != std::string::npos);
  a.set("loose", "1");
  const auto back = Config::parse(a.to_ini());
  CHECK(back.values() == a.values());
}

TEST_CASE("config load reads files and reports missing ones") {
  const auto dir = scratch("config");
  spit(dir / "a.ini", "[evolve]\nt_end = 0.5\n");
  CHECK(Config::load(dir / "a.ini").get_double("evolve.t_end") == 0.5);
  CHECK_THROWS_AS(Config::load(dir / "absent.ini"), Error);
}

TEST_CASE("format_double survives a text round trip") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> e(-300, 300), m(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double v = m(rng) * std::pow(10.0, e(rng));
    CHECK(std::stod(format_double(v)) == v);
  }
  CHECK(std::stod(format_double(0.1)) == 0.1);
  CHECK(std::strtod(format_double(std::numeric_limits<double>::denorm_min()).c_str(), nullptr) ==
        std::numeric_limits<double>::denorm_min());
}

TEST_CASE("csv round trip and column lookup") {
  const auto dir = scratch("csv");
  {
    CsvWriter w(dir / "t.csv", {"a", "b"});
    w.row(std::vector<double>{1.0 / 3.0, -2e-300});
    w.row(std::vector<std::string>{"x", "y"});
    CHECK(kind_of([&] { w.row(std::vector<double>{1.0}); }) == ErrorKind::Format);
    w.close();
  }
  const auto t = read_csv(dir / "t.csv");
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.size() == 2);
  CHECK(std::stod(t.rows[0][0]) == 1.0 / 3.0);
  CHECK(std::stod(t.rows[0][1]) == -2e-300);
  CHECK(t.index("b") == 1);
  CHECK(message_of([&] { t.index("energy"); }).find("missing column 'energy'") != std::string::npos);
}

TEST_CASE("csv reader rejects ragged rows and empty files") {
  const auto dir = scratch("ragged");
  spit(dir / "r.csv", "a,b\n1,2\n3\n");
  CHECK(kind_of([&] { read_csv(dir / "r.csv"); }) == ErrorKind::Format);
  spit(dir / "e.csv", "");
  CHECK(kind_of([&] { read_csv(dir / "e.csv"); }) == ErrorKind::Format);
  spit(dir / "h.csv", "a,b\n");
  CHECK(read_csv(dir / "h.csv").size() == 0);
  CHECK(kind_of([&] { read_csv(dir / "nope.csv"); }) == ErrorKind::Io);
}

TEST_CASE("schemas carry the documented leading columns") {
  CHECK(schema::trajectory.front() == "time");
  CHECK(std::find(schema::trajectory.begin(), schema::trajectory.end(), "membership") != schema::trajectory.end());
  CHECK(schema::steps == std::vector<std::string>{"t", "dt", "max_abs", "kinetic"});
  CHECK(schema::virial == std::vector<std::string>{"time", "v", "v_dot", "v_ddot", "eight_g", "kinetic"});
  CHECK(schema::standing_wave == std::vector<std::string>{"time", "max_error", "relative_error"});
  for (const auto* s : {&schema::morawetz, &schema::coercivity, &schema::ratefit, &schema::invariance}) {
    CHECK(s->front() == "time");
    std::set<std::string> uniq(s->begin(), s->end());
    CHECK(uniq.size() == s->size());
  }
}

TEST_CASE("sha256 of a known string") {
  const auto dir = scratch("sha");
  spit(dir / "abc", "abc");
  CHECK(sha256_file(dir / "abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  spit(dir / "empty", "");
  CHECK(sha256_file(dir / "empty") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("manifest round trip and tamper detection") {
  const auto dir = scratch("manifest");
  spit(dir / "data.csv", "a\n1\n");
  RunManifest m;
  m.preset = "demo";
  m.version = "1";
  m.config = Config::parse("[physics]\np = 3\n");
  m.grid = "radial";
  m.regime = "scattering";
  m.termination = "reached_t";
  m.wall_seconds = 1.5;
  m.steps = 10;
  m.samples = 3;
  m.results["x"] = 1.0 / 7.0;
  m.results["big"] = std::numeric_limits<double>::infinity();
  m.results["bad"] = std::numeric_limits<double>::quiet_NaN();
  m.notes["check"] = "pass";
  m.passed = false;
  m.add_file(dir, "data.csv", "csv");
  write_manifest(dir / "manifest.json", m);

  const auto r = read_manifest(dir / "manifest.json");
  CHECK(r.preset == "demo");
  CHECK(r.config.values() == m.config.values());
  CHECK(r.steps == 10);
  CHECK(r.results.at("x") == 1.0 / 7.0);
  CHECK(std::isinf(r.results.at("big")));
  CHECK(std::isnan(r.results.at("bad")));
  CHECK(r.notes.at("check") == "pass");
  CHECK_FALSE(r.passed);
  REQUIRE(r.files.size() == 1);
  CHECK(r.files[0].bytes == 4);
  CHECK(verify_manifest(dir / "manifest.json", r).empty());

  spit(dir / "data.csv", "a\n2\n");
  CHECK(verify_manifest(dir / "manifest.json", r) == std::vector<std::string>{"data.csv: checksum mismatch"});
  fs::remove(dir / "data.csv");
  CHECK(verify_manifest(dir / "manifest.json", r) == std::vector<std::string>{"data.csv: missing"});

  spit(dir / "broken.json", "{\"preset\": ");
  CHECK(kind_of([&] { read_manifest(dir / "broken.json"); }) == ErrorKind::Format);
}

TEST_CASE("preset errors are usage or regime errors") {
  const auto dir = scratch("preset_errors");
  CHECK(preset_names().size() == 7);
  for (const auto& n : preset_names()) CHECK_NOTHROW(preset_defaults(n));
  CHECK(message_of([] { preset_defaults("nope"); }).find("aplus-scatter") != std::string::npos);
  CHECK(kind_of([&] { run_scenario("morawetz-verify", {"diag.unheard=1"}, dir); }) == ErrorKind::Usage);
  CHECK(kind_of([&] { run_scenario("morawetz-verify", {"nonsense=1"}, dir); }) == ErrorKind::Usage);
  CHECK(kind_of([&] { run_scenario("aplus-scatter", {"physics.p=6"}, dir); }) == ErrorKind::Regime);
  CHECK(kind_of([&] { run_scenario("aminus-cylindrical-blowup", {"physics.p=3"}, dir); }) == ErrorKind::Regime);
  CHECK(kind_of([&] { run_scenario("morawetz-verify", {"grid.kind=spherical"}, dir); }) == ErrorKind::Usage);
}

TEST_CASE("preset building blocks") {
  auto c = preset_defaults("morawetz-verify");
  CHECK(std::holds_alternative<CartesianGrid>(grid_from(c)));
  const auto u = datum_from(c, nullptr);
  CHECK(u.size() == 32u * 32u * 32u);
  c.set("datum.kind", "ground");
  CHECK(kind_of([&] { datum_from(c, nullptr); }) == ErrorKind::Precondition);
  const auto pol = policy_from(preset_defaults("standing-wave"));
  CHECK(pol.dt_max == 5e-5);
  CHECK(params_from(preset_defaults("aminus-cylindrical-blowup")).p == 2.8);
}

TEST_CASE("scenario runs are deterministic, checksummed and replayable") {
  const auto a = scratch("run_a"), b = scratch("run_b");
  const auto ma = run_scenario("morawetz-verify", {}, a);
  const auto mb = run_scenario("morawetz-verify", {}, b);
  CHECK(ma.passed);
  CHECK(ma.termination == "reached_t");
  CHECK(ma.results.at("mass.drift") < 1e-12);
  CHECK(ma.results.at("morawetz.identity_residual") < 1e-2);

  const auto da = a / "morawetz-verify", db = b / "morawetz-verify";
  for (const auto* f : {"trajectory.csv", "steps.csv", "morawetz.csv", "final.nls"})
    CHECK_MESSAGE(slurp(da / f) == slurp(db / f), f);

  const auto back = read_manifest(da / "manifest.json");
  CHECK(verify_manifest(da / "manifest.json", back).empty());
  CHECK(back.files.size() >= 6);
  CHECK(Config::load(da / "config.ini").values() == back.config.values());

  const auto traj = read_csv(da / "trajectory.csv");
  CHECK(traj.header == schema::trajectory);
  CHECK(traj.size() == back.samples);
  const auto mor = read_csv(da / "morawetz.csv");
  CHECK(mor.header == schema::morawetz);

  CHECK(replay_manifest(da / "manifest.json", scratch("run_c")) < 1e-12);

  spit(da / "steps.csv", "tampered\n");
  CHECK(kind_of([&] { replay_manifest(da / "manifest.json", scratch("run_d")); }) == ErrorKind::Format);
}

TEST_CASE("the deliberate Morawetz fault flips the scenario verdict") {
  const auto m = run_scenario("morawetz-verify", {"diag.flip_term4=1"}, scratch("flip"));
  CHECK_FALSE(m.passed);
  CHECK(m.results.at("morawetz.identity_residual") > 1e-2);
}

TEST_CASE("acceptance bookkeeping") {
  CHECK(parse_verify_level("quick") == VerifyLevel::Quick);
  CHECK(parse_verify_level("full") == VerifyLevel::Full);
  CHECK(kind_of([] { parse_verify_level("medium"); }) == ErrorKind::Usage);
  CHECK(criterion_names(VerifyLevel::Full).size() == 10);
  CHECK(criterion_names(VerifyLevel::Quick).size() == 8);
  CriterionResult r{"demo", true, "fine", 1.25, 10};
  CHECK(format_result(r).rfind("PASS demo: fine", 0) == 0);
  r.passed = false;
  CHECK(format_result(r).rfind("FAIL demo", 0) == 0);

  AcceptanceOptions opt;
  opt.only = {"exponent-algebra"};
  const auto res = run_acceptance(VerifyLevel::Quick, opt);
  REQUIRE(res.size() == 1);
  CHECK(res[0].passed);
  opt.only = {"no-such-criterion"};
  CHECK(kind_of([&] { run_acceptance(VerifyLevel::Quick, opt); }) == ErrorKind::Usage);
}
