#include <filesystem>

#include "doctest.h"
#include "tld/suite.hpp"

using namespace tld;

TEST_CASE("suite config round trip and input hash") {
  SuiteConfig c;
  c.suite = "ldp-decay";
  c.seed = 7;
  c.count = 12;
  c.ring_sizes = {3, 4};
  c.tolerances["recursive-relation"] = 0.5;
  c.out_dir = "/tmp/x";
  c.invocation = "tld suite ldp-decay";
  const auto back = SuiteConfig::from_json(Json::parse(c.to_json().dump()));
  CHECK(back.to_json() == c.to_json());
  CHECK(back.input_hash() == c.input_hash());

  SuiteConfig moved = c;
  moved.out_dir = "/elsewhere";
  moved.invocation = "other";
  moved.threads = 3;
  CHECK(moved.input_hash() == c.input_hash());
  moved.seed = 8;
  CHECK(moved.input_hash() != c.input_hash());
  CHECK(c.input_hash().size() == 40);
}

TEST_CASE("unknown suite") {
  SuiteConfig c;
  c.suite = "nope";
  CHECK_THROWS_AS(run_suite(c), Error);
}

TEST_CASE("suite names cover the criteria in order") {
  const auto& names = suite_names();
  REQUIRE(names.size() == 11);
  CHECK(names.front() == "stationarity");
  CHECK(names.back() == "recursive-relation");
}

TEST_CASE("report is independent of the thread count") {
  SuiteConfig c;
  c.suite = "flux-equivalence";
  c.count = 300;
  c.threads = 1;
  const auto a = run_suite(c);
  c.threads = 4;
  const auto b = run_suite(c);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].id == b.checks[i].id);
    CHECK(a.checks[i].measured == b.checks[i].measured);
    CHECK(a.checks[i].detail == b.checks[i].detail);
  }
  CHECK(a.pass());
}

TEST_CASE("a failing threshold fails the report") {
  SuiteConfig c;
  c.suite = "recursive-relation";
  c.count = 2;
  c.tolerances["recursive-relation"] = -1;
  const auto r = run_suite(c);
  CHECK_FALSE(r.pass());
  c.tolerances.clear();
  CHECK(run_suite(c).pass());
}

TEST_CASE("report files") {
  const auto dir = std::filesystem::temp_directory_path() / "tld_test_suite_report";
  std::filesystem::remove_all(dir);
  SuiteConfig c;
  c.suite = "ldp-decay";
  c.out_dir = dir.string();
  const auto r = run_suite(c);
  CHECK(r.pass());
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "ldp-decay.csv"));
  const auto j = Json::parse(read_text(dir / "report.json"));
  CHECK(j.at("pass").get<bool>());
  CHECK(j.at("input_hash") == c.input_hash());
  CHECK(SuiteConfig::from_json(j.at("config")).input_hash() == c.input_hash());
  std::filesystem::remove_all(dir);
}
