#pragma once

// Batch acceptance suites: each one draws seeded instances, runs an oracle
// pair over them and reports a measured statistic against a threshold.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tld/io.hpp"

namespace tld {

struct SuiteConfig {
  std::string suite = "all";
  std::uint64_t seed = 20240607;
  int threads = 0;                  // 0: hardware concurrency
  std::optional<long> count;        // instances per family/regime
  std::vector<int> ring_sizes;      // stationarity: N values
  std::vector<int> class_counts;    // stationarity: k values
  std::optional<int> replicas;      // had-invariance
  std::optional<double> horizon;    // had-invariance
  std::map<std::string, double> tolerances;  // by check id
  std::string out_dir;              // empty: no files written
  std::string invocation;

  Json to_json() const;
  static SuiteConfig from_json(const Json& j);
  /// Hash of the fields that determine the results.
  std::string input_hash() const;
};

struct CheckResult {
  std::string id;
  std::string suite;
  int criterion = 0;
  bool pass = false;
  double measured = 0;
  double threshold = 0;
  std::string relation;  // how measured is compared with threshold
  std::string detail;
  double seconds = 0;
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<CheckResult> checks;
  std::map<std::string, CsvTable> tables;  // written as <name>.csv

  bool pass() const;
  Json to_json() const;
  /// Writes report.json and one CSV per table into `dir`.
  void write(const std::string& dir) const;
};

/// Suite names in criterion order; "all" runs every one.
const std::vector<std::string>& suite_names();

SuiteReport run_suite(const SuiteConfig& config);

}  // namespace tld
