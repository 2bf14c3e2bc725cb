// Runs every acceptance suite with the pinned defaults and prints one line per
// criterion. Exit status is nonzero when any criterion fails.

#include <cstdio>
#include <map>
#include <string>

#include "tld/suite.hpp"

int main(int argc, char** argv) {
  tld::SuiteConfig config;
  if (argc > 1) config.out_dir = argv[1];
  config.invocation = "acceptance";
  const auto report = tld::run_suite(config);

  std::map<int, std::vector<const tld::CheckResult*>> by_criterion;
  for (const auto& c : report.checks) by_criterion[c.criterion].push_back(&c);
  bool all = true;
  for (const auto& [criterion, checks] : by_criterion) {
    bool pass = true;
    double seconds = 0;
    for (const auto* c : checks) {
      pass = pass && c->pass;
      seconds = std::max(seconds, c->seconds);
    }
    all = all && pass;
    std::printf("%s criterion %2d %-24s (%.1f s)\n", pass ? "PASS" : "FAIL", criterion, checks.front()->suite.c_str(),
                seconds);
    for (const auto* c : checks) {
      std::printf("     %s %-30s %s %s %s  %s\n", c->pass ? "ok  " : "FAIL", c->id.c_str(),
                  tld::format_double(c->measured).c_str(), c->relation.c_str(),
                  tld::format_double(c->threshold).c_str(), c->detail.c_str());
    }
  }
  std::printf("%s: %zu criteria\n", all ? "ALL PASS" : "SOME FAILED", by_criterion.size());
  return all ? 0 : 1;
}
