#include <doctest.h>

#include "support.hpp"
#include "zeropi/commands.hpp"
#include "zeropi/config.hpp"
#include "zeropi/output.hpp"

using namespace zp;

TEST_CASE("unknown keys are named in the error") {
  RunConfig c;
  try {
    apply_entries(c, {{"gate.frobnicate", "1"}});
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("gate.frobnicate") != std::string::npos);
  }
  try {
    apply_entries(c, {{"circuit.E_J", "abc"}});
    FAIL("no error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("circuit.E_J") != std::string::npos);
  }
}

TEST_CASE("list and number syntax") {
  auto v = parse_list("0, 0.5pi, 1pi");
  REQUIRE(v.size() == 3);
  CHECK(v[1] == doctest::Approx(0.5 * kPi));
  CHECK(v[2] == doctest::Approx(kPi));
  auto l = parse_list("linspace(1, 2, 5)");
  REQUIRE(l.size() == 5);
  CHECK(l[3] == doctest::Approx(1.75));
  auto g = parse_list("geomspace(1e-4, 1e-2, 3)");
  REQUIRE(g.size() == 3);
  CHECK(g[1] == doctest::Approx(1e-3));
  CHECK_THROWS_AS(parse_list("linspace(1, 2)"), ConfigError);
  CHECK_THROWS_AS(parse_list("geomspace(0, 1, 3)"), ConfigError);
}

TEST_CASE("INI text and overrides") {
  KeyValues kv = parse_ini_string("# comment\n[circuit]\nE_J = 0.2\n[gate]\nM = 24\n");
  RunConfig c;
  apply_entries(c, kv);
  apply_entries(c, {parse_override("gate.M=30")});
  finalize(c);
  CHECK(c.circuit.E_J == 0.2);
  CHECK(c.gate.M == 30);
  CHECK(c.circuit.C == doctest::Approx(0.5 * (1.0 / c.circuit.E_C_theta - 1.0 / c.circuit.E_C_phi)));
  CHECK_THROWS_AS(parse_override("gate.M"), ConfigError);
  CHECK_THROWS_AS(parse_override("M=3"), ConfigError);
  CHECK_THROWS_AS(parse_ini_string("E_J = 1\n"), ConfigError);
}

TEST_CASE("validation rejects inconsistent settings") {
  RunConfig c;
  apply_entries(c, {{"circuit.E_C_theta", "-1"}});
  CHECK_THROWS_AS(finalize(c), ConfigError);
  RunConfig d;
  apply_entries(d, {{"raman.E_J", "0.1,0.2"}});
  CHECK_THROWS_AS(finalize(d), ConfigError);
  RunConfig e;
  apply_entries(e, {{"robustness.axes", "sigma,wobble"}});
  CHECK_THROWS_AS(finalize(e), ConfigError);
}

TEST_CASE("snapshot round trip") {
  RunConfig a = load_config("fig10", "", {"cooling.M=18"});
  std::string text = snapshot_text(a);
  RunConfig b;
  apply_entries(b, parse_ini_string(text));
  finalize(b);
  CHECK(snapshot_text(b) == text);
  CHECK(config_hash(a) == config_hash(b));
}

TEST_CASE("hash ignores output location and worker count") {
  RunConfig a = load_config("fig5", "", {"run.output_dir=x", "run.workers=1"});
  RunConfig b = load_config("fig5", "", {"run.output_dir=y", "run.workers=4"});
  CHECK(config_hash(a) == config_hash(b));
  RunConfig c = load_config("fig5", "", {"gate.M=22"});
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("catalog sets load") {
  for (const auto& n : catalog_names()) {
    CAPTURE(n);
    CHECK_NOTHROW(load_config(n, "", {}));
    CHECK_FALSE(catalog_description(n).empty());
  }
  CHECK_THROWS_AS(load_config("fig99", "", {}), ConfigError);
}

TEST_CASE("table output") {
  Table t({"a", "b", "c"});
  t.add({1.5, 2LL, std::string("x,y")});
  t.add({true, 0.25, std::string("z")});
  std::string csv = t.csv("abc");
  CHECK(csv.rfind("# config_hash=abc\n", 0) == 0);
  CHECK(csv.find("\"x,y\"") != std::string::npos);
  CHECK(csv.find("1,0.25,z") != std::string::npos);
}
