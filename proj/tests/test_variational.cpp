#include <cmath>

#include "doctest.h"
#include "generators.hpp"
#include "tld/collapse.hpp"
#include "tld/instances.hpp"
#include "tld/variational.hpp"

using namespace tld;
using tld::testing::q;

TEST_CASE("lattice enumeration") {
  const auto all = lattice_measures({2, 2}, q(1, 2), q(1), 100);
  CHECK(all.size() == 3);
  for (const auto& m : all) CHECK(m.total_mass() == q(1, 2));
  CHECK(lattice_measures({2, 2}, q(1, 3), q(1), 100).empty());
  CHECK(lattice_measures({3, 4}, q(1, 2), q(1, 4), 100).empty());  // cap too low
  CHECK_THROWS_AS(lattice_measures({8, 16}, q(1, 2), q(1), 10), Error);
  // compositions of 4 into 3 parts, each at most 2
  CHECK(lattice_measures({3, 2}, q(2, 3), q(1), 100).size() == 6);
}

TEST_CASE("DP oracle on the counterexample profiles") {
  const auto rho1 = TorusMeasure::indicator(q(1, 4), q(1, 2));
  const auto rho2 = TorusMeasure::indicator(q(1, 4), 1);
  const auto dp = s2_dp_oracle(rho1, rho2, q(1, 4), q(3, 4), Family::Tasep);
  REQUIRE(dp.finite);
  CHECK(std::abs(dp.value - s2(rho1, rho2, q(1, 4), q(3, 4), Family::Tasep).value) < 1e-12);
  CHECK(dp.transitions > 0);
}

TEST_CASE("DP oracle matches the closed form") {
  Rng rng(6);
  for (Family fam : {Family::Tasep, Family::Had}) {
    for (int t = 0; t < 15; ++t) {
      const auto inst = random_chain(rng, fam, 2, 8, 8, 4);
      const auto dp = s2_dp_oracle(inst.rho[0], inst.rho[1], inst.masses[0], inst.masses[1], fam);
      const auto cf = s2(inst.rho[0], inst.rho[1], inst.masses[0], inst.masses[1], fam);
      REQUIRE(dp.finite);
      CHECK(std::abs(dp.value - cf.value) < 1e-3);
      CHECK(dp.value >= cf.value - 1e-12);  // the envelope is optimal
    }
  }
}

TEST_CASE("DP oracle domain") {
  const auto c = TorusMeasure::constant(q(1, 4));
  CHECK_FALSE(s2_dp_oracle(c, TorusMeasure::indicator(0, q(1, 2)), q(1, 4), q(1, 2), Family::Tasep).finite);
  CHECK_FALSE(s2_dp_oracle(c, c, q(1, 4), q(1, 8), Family::Tasep).finite);
  const auto d = s2_dp_oracle(c, c, q(1, 4), q(1, 4), Family::Tasep);
  CHECK(d.finite);
  CHECK(d.value == 0);
}

TEST_CASE("S_k oracle at constants") {
  const std::vector<TorusMeasure> rho{TorusMeasure::constant(q(1, 4)), TorusMeasure::constant(q(1, 2)),
                                      TorusMeasure::constant(q(3, 4))};
  const std::vector<Rational> m{q(1, 4), q(1, 2), q(3, 4)};
  SkOracleOptions opt;
  opt.lattice = {4, 8};
  const auto d = sk_oracle(rho, m, Family::Tasep, opt);
  REQUIRE(d.finite);
  CHECK(d.value == 0);
  CHECK(d.minimizers == 1);
  const auto r = sk_oracle_recursive(rho, m, Family::Tasep, opt);
  CHECK(r.value == 0);
}

TEST_CASE("S_k oracle rejects unordered tuples") {
  const std::vector<TorusMeasure> rho{TorusMeasure::indicator(0, q(1, 2)), TorusMeasure::indicator(q(1, 2), 1)};
  const auto d = sk_oracle(rho, {q(1, 2), q(1, 2)}, Family::Tasep);
  CHECK_FALSE(d.finite);
  CHECK_THROWS_AS(sk_oracle({rho[0], rho[0], rho[0], rho[0]}, {q(1, 2), q(1, 2), q(1, 2), q(1, 2)}, Family::Tasep),
                  Error);
}

TEST_CASE("S_2 from the lattice oracle agrees with the closed form") {
  Rng rng(10);
  SkOracleOptions opt;
  opt.lattice = {4, 48};  // envelope slopes over 1..4 cells are lattice points
  opt.threads = 0;
  for (int t = 0; t < 10; ++t) {
    const auto inst = random_chain(rng, Family::Tasep, 2, 4, 4, 2);
    const auto d = sk_oracle(inst.rho, inst.masses, Family::Tasep, opt);
    const auto cf = s2(inst.rho[0], inst.rho[1], inst.masses[0], inst.masses[1], Family::Tasep);
    REQUIRE(d.finite);
    CHECK(std::abs(d.value - cf.value) < 1e-3);
    // the best lattice preimage really collapses onto rho1
    CHECK(collapse(d.best[0], inst.rho[1]) == inst.rho[0]);
  }
}

TEST_CASE("k = 3: direct oracle and recursion through S_2") {
  Rng rng(1);
  SkOracleOptions opt;
  opt.lattice = {4, 16};
  for (int t = 0; t < 6; ++t) {
    const auto inst = random_chain(rng, Family::Tasep, 3, 4, 4, 2);
    const auto d = sk_oracle(inst.rho, inst.masses, Family::Tasep, opt);
    const auto r = sk_oracle_recursive(inst.rho, inst.masses, Family::Tasep, opt);
    REQUIRE(d.finite);
    REQUIRE(r.finite);
    CHECK(std::abs(d.value - r.value) < 1e-2);
    CHECK(d.minimizers >= 1);
    const auto image = collapse_k(d.best).parts();
    CHECK(image == inst.rho);
  }
}

TEST_CASE("contraction over the middle class") {
  // inf over rho2 of S3 is S2 of the outer pair; the lattice minimum over
  // the middle profile cannot beat it
  const auto rho1 = TorusMeasure::indicator(0, q(1, 4), q(1, 2));
  const auto rho3 = TorusMeasure::indicator(0, q(1, 2), q(3, 4));
  const Rational m1(1, 8), m3(3, 8);
  const double outer = s2(rho1, rho3, m1, m3, Family::Tasep).value;
  SkOracleOptions opt;
  opt.lattice = {4, 8};
  double best = kInfinity;
  for (const auto& mid : lattice_measures(opt.lattice, q(1, 4), q(1), 1000)) {
    if (!dominated_by(rho1, mid) || !dominated_by(mid, rho3)) continue;
    const auto r = sk_oracle({rho1, mid, rho3}, {m1, q(1, 4), m3}, Family::Tasep, opt);
    if (r.finite) best = std::min(best, r.value);
  }
  CHECK(best >= outer - 1e-12);
  CHECK(best - outer < 1e-2);
}
