#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "tld/dynamics.hpp"

using namespace tld;
using namespace tld::testing;

TEST_CASE("bond update sorts the stronger class to the left") {
  std::vector<int> labels{0, 1, 2};
  CHECK(tasep_bond_update(labels, 0));
  CHECK(labels == std::vector<int>{1, 0, 2});
  CHECK_FALSE(tasep_bond_update(labels, 0));
  CHECK(tasep_bond_update(labels, 2));  // bond (2, 0) wraps
  CHECK(labels == std::vector<int>{2, 0, 1});
}

TEST_CASE("full ring never changes") {
  std::vector<int> labels(5, 1);
  tld::Rng rng(1);
  int events = 0;
  tasep_simulate(labels, 50, rng, [&](const TasepEvent& ev, const std::vector<int>&) {
    CHECK_FALSE(ev.changed);
    ++events;
  });
  CHECK(events > 0);
  CHECK(labels == std::vector<int>(5, 1));
}

TEST_CASE("one-class stationary law is uniform") {
  for (int n = 2; n <= 6; ++n) {
    for (int m = 0; m <= n; ++m) {
      const auto t = exact_stationary({Model::Tasep, n, {m}});
      for (const auto& p : t.probabilities) CHECK(p * static_cast<long>(t.states.size()) == 1);
    }
  }
}

TEST_CASE("pushforward equals the stationary law on small rings") {
  const std::vector<ProcessSpec> specs{
      {Model::Tasep, 3, {1, 1}}, {Model::Tasep, 4, {1, 1, 1}}, {Model::Tasep, 4, {1, 2}}, {Model::Tasep, 5, {2, 1, 1}}};
  for (const auto& s : specs) {
    const auto a = exact_stationary(s);
    const auto b = pushforward_distribution(s);
    CHECK(a.states.size() == b.states.size());
    CHECK(a.total_variation(b) == 0);
  }
  const auto k1 = pushforward_distribution({Model::Tasep, 5, {2}});
  for (const auto& p : k1.probabilities) CHECK(p == q(1, 10));
}

TEST_CASE("single particle position is uniform in the long run") {
  tld::Rng rng(7);
  const auto freq = tasep_occupation({1, 0, 0, 0}, 10, 20000, rng);
  REQUIRE(freq.size() == 4);
  // chi-square over time fractions, with ~20000 effective visits
  double chi2 = 0;
  for (const auto& [state, f] : freq) chi2 += std::pow(f - 0.25, 2) / 0.25;
  CHECK(chi2 * 20000 < 16.27);  // 3 dof, p = 0.001
}

TEST_CASE("long-run frequencies match the exact table") {
  const ProcessSpec s{Model::Tasep, 3, {1, 1}};
  const auto table = exact_stationary(s);
  tld::Rng rng(3);
  const double horizon = 40000;
  const auto freq = tasep_occupation({1, 2, 0}, 10, horizon, rng);
  for (std::size_t i = 0; i < table.states.size(); ++i) {
    const double p = to_double(table.probabilities[i]);
    const double f = freq.count(table.states[i]) ? freq.at(table.states[i]) : 0.0;
    // time averages decorrelate on an O(1) time scale
    CHECK(std::abs(f - p) < 3 * std::sqrt(p * (1 - p) * 4 / horizon) + 1e-3);
  }
}

TEST_CASE("HAD marks preserve inclusion") {
  tld::Rng rng(12);
  const ProcessSpec s{Model::Had, 0, {4, 4, 8}};
  auto layers = sample_invariant_had(s, rng);
  CHECK(validate_ordered(std::span<const PointConfig>(layers)).ok);
  auto state = HadState::from_points(layers);
  had_simulate(state, 500, rng, [&](const HadEvent&, const HadState& now) {
    const auto pts = now.to_points();
    REQUIRE(validate_ordered(std::span<const PointConfig>(pts)).ok);
    REQUIRE(pts[0].size() == 4);
    REQUIRE(pts[2].size() == 16);
  });
}

TEST_CASE("HAD mark moves the nearest point to the left") {
  HadState s;
  s.layers = {{10, 50}, {10, 30, 50}};
  CHECK(had_apply_mark(s, 40));
  CHECK(s.layers[0] == std::vector<std::uint64_t>{40, 50});
  CHECK(s.layers[1] == std::vector<std::uint64_t>{10, 40, 50});
  CHECK(had_apply_mark(s, 5));  // wraps: the last point moves
  CHECK(s.layers[0] == std::vector<std::uint64_t>{5, 40});
  CHECK(s.layers[1] == std::vector<std::uint64_t>{5, 10, 40});
  CHECK_FALSE(had_apply_mark(s, 40));
}

TEST_CASE("TASEP sampler yields ordered tuples with the right sizes") {
  tld::Rng rng(5);
  const ProcessSpec s{Model::Tasep, 20, {3, 4, 5}};
  for (int i = 0; i < 50; ++i) {
    const auto t = sample_invariant_tasep(s, rng);
    CHECK(t[0].particles() == 3);
    CHECK(t[2].particles() == 12);
  }
}

TEST_CASE("seeds") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 5) == derive_seed(1, 5));
  tld::Rng a(9), b(9);
  CHECK(a.bits() == b.bits());
}
