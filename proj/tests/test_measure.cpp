#include "doctest.h"
#include "generators.hpp"
#include "tld/measure.hpp"

using namespace tld;
using namespace tld::testing;

TEST_CASE("measure construction and canonical form") {
  const TorusMeasure zero;
  CHECK(zero.total_mass() == 0);
  CHECK(zero.absolutely_continuous());

  const auto ind = TorusMeasure::indicator(q(3, 4), q(1, 4), 2);  // wraps through 0
  CHECK(ind.total_mass() == 1);
  CHECK(ind.density_at(0) == 2);
  CHECK(ind.density_at(q(1, 2)) == 0);
  CHECK(ind.density_integral(q(7, 8), q(1, 8)) == q(1, 2));

  const TorusMeasure split({0, q(1, 2)}, {1, 1});
  CHECK(split == TorusMeasure::constant(1));
  CHECK(split.canonical().breakpoints().size() == 1);

  CHECK_THROWS_AS(TorusMeasure({q(1, 2), q(1, 4)}, {1, 1}), Error);
  CHECK_THROWS_AS(TorusMeasure({0}, {-1}), Error);
  CHECK_THROWS_AS(TorusMeasure::atomic({{q(1, 2), 1}, {q(1, 2), 1}}), Error);
  CHECK(TorusMeasure::indicator(0, 1).total_mass() == 1);
}

TEST_CASE("interval mass") {
  const auto leb = TorusMeasure::constant(1);
  CHECK(interval_mass(leb, 0, q(1, 2)) == q(1, 2));
  const auto delta = TorusMeasure::atomic({{q(1, 2), 1}});
  CHECK(interval_mass(delta, q(1, 4), q(1, 2)) == 1);
  CHECK(interval_mass(delta, q(1, 2), q(3, 4)) == 0);
  const auto rho = TorusMeasure::indicator(q(1, 4), q(1, 2), 2);
  CHECK(interval_mass(rho, 0, q(3, 8)) == q(1, 4));
  CHECK(interval_mass(rho, q(3, 8), q(3, 8)) == 0);
  const auto wrap = TorusMeasure::atomic({{0, q(1, 3)}});
  CHECK(interval_mass(wrap, q(7, 8), q(1, 8)) == q(1, 3));
}

TEST_CASE("combine and domination") {
  const auto a = TorusMeasure::indicator(0, q(1, 2));
  const auto b = TorusMeasure::constant(1);
  CHECK(combine(a, q(1, 2), b, q(1, 2)).total_mass() == q(3, 4));
  CHECK(dominated_by(a, b));
  CHECK_FALSE(dominated_by(b, a));
  CHECK_FALSE(dominated_by(TorusMeasure::atomic({{q(1, 2), 1}}), b));
}

TEST_CASE("plateau set") {
  SUBCASE("paper example") {
    const auto rho1 = TorusMeasure::indicator(q(1, 4), q(1, 2));
    const auto rho2 = TorusMeasure::indicator(q(1, 4), 1);
    const auto u = plateau_set(rho1, rho2);
    REQUIRE(u.intervals.size() == 1);
    CHECK(u.intervals[0] == Arc{0, q(1, 2)});
    CHECK_FALSE(u.full);
    const auto comp = u.complement();
    REQUIRE(comp.size() == 1);
    CHECK(comp[0] == Arc{q(1, 2), q(1, 2)});
  }
  SUBCASE("equal measures") {
    const auto rho = TorusMeasure::indicator(q(1, 8), q(3, 8));
    const auto u = plateau_set(rho, rho);
    CHECK(u.full);
    CHECK(u.complement().empty());
  }
  SUBCASE("distinct constants") {
    const auto u = plateau_set(TorusMeasure::constant(q(1, 4)), TorusMeasure::constant(q(1, 2)));
    CHECK(u.intervals.empty());
    CHECK(u.complement().size() == 1);
  }
  SUBCASE("wrapping plateau") {
    const auto rho1 = TorusMeasure::indicator(q(7, 8), q(1, 8));
    const auto rho2 = TorusMeasure({0, q(1, 8), q(7, 8)}, {1, q(1, 2), 1});
    const auto u = plateau_set(rho1, rho2);
    REQUIRE(u.intervals.size() == 1);
    CHECK(u.intervals[0] == Arc{q(7, 8), q(1, 4)});
  }
  SUBCASE("atoms rejected") {
    CHECK_THROWS_AS(plateau_set(TorusMeasure::atomic({{0, 1}}), TorusMeasure::constant(1)), Error);
  }
  SUBCASE("approximate equality") {
    const auto a = TorusMeasure::constant(q(1000000, 1000001));
    const auto b = TorusMeasure::constant(1);
    CHECK(plateau_set(a, b).intervals.empty());
    CHECK(plateau_set(a, b, 1e-5).full);
  }
}

TEST_CASE("plateau set is symmetric and refinement invariant") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_measure(rng, uniform_int(rng, 1, 6), 0, 16, 2);
    const auto b = random_measure(rng, uniform_int(rng, 1, 6), 0, 16, 2);
    const auto u = plateau_set(a, b);
    const auto v = plateau_set(b, a);
    CHECK(u.intervals == v.intervals);
    CHECK(u.full == v.full);
    // refine a with redundant breakpoints
    std::vector<Rational> bps;
    std::vector<Rational> dens;
    for (int i = 0; i < 32; ++i) {
      bps.push_back(q(i, 32));
      dens.push_back(a.density_at(q(i, 32)));
    }
    const auto grid = common_grid({&a});
    bool aligned = std::all_of(grid.begin(), grid.end(), [](const Rational& g) { return Rational(g * 32).get_den() == 1; });
    if (!aligned) continue;
    const TorusMeasure refined(bps, dens);
    CHECK(plateau_set(refined, b).intervals == u.intervals);
  }
}

TEST_CASE("cumulative function") {
  SUBCASE("constant density") {
    const auto f = cumulative(TorusMeasure::constant(q(1, 3)), Arc{q(1, 4), q(1, 2)});
    REQUIRE(f.knots().size() == 2);
    CHECK(f.slopes() == std::vector<Rational>{q(1, 3)});
  }
  SUBCASE("paper example") {
    const auto f = cumulative(TorusMeasure::indicator(q(1, 4), q(1, 2)), Arc{0, q(1, 2)});
    CHECK(f.knots() == std::vector<Knot>{{0, 0}, {q(1, 4), 0}, {q(1, 2), q(1, 4)}});
    CHECK(!f.at(q(3, 4)).has_value());
    CHECK(*f.at(q(3, 8)) == q(1, 8));
  }
  SUBCASE("knots agree with interval mass") {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
      const auto rho = random_measure(rng, 3, 0, 64, 5, 2);
      const Arc arc{random_unit_point(rng, 64), q(uniform_int(rng, 1, 64), 64)};
      const auto f = cumulative(rho, arc);
      CHECK(f.knots().front().value == 0);
      for (const auto& k : f.knots()) {
        if (k.offset == 1) {
          CHECK(k.value == rho.total_mass());
        } else {
          CHECK(k.value == interval_mass(rho, arc.start, arc.start + k.offset));
        }
      }
    }
  }
  SUBCASE("atoms inside the arc are rejected") {
    CHECK_THROWS_AS(cumulative(TorusMeasure::atomic({{q(1, 4), 1}}), Arc{0, q(1, 2)}), Error);
  }
}

namespace {

// max(F(x), best chord value over knots p <= x <= q)
Rational chord_sup(const CumulativeFunction& f, const Rational& x) {
  Rational best = *f.at_offset(x);
  const auto& k = f.knots();
  for (std::size_t i = 0; i < k.size(); ++i) {
    for (std::size_t j = i + 1; j < k.size(); ++j) {
      if (k[i].offset <= x && x <= k[j].offset) {
        const Rational v = k[i].value + (k[j].value - k[i].value) * (x - k[i].offset) / (k[j].offset - k[i].offset);
        best = std::max(best, v);
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("concave envelope") {
  SUBCASE("paper example") {
    const auto f = cumulative(TorusMeasure::indicator(q(1, 4), q(1, 2)), Arc{0, q(1, 2)});
    const auto env = concave_envelope(f);
    CHECK(env.density == TorusMeasure::indicator(0, q(1, 2), q(1, 2)));
  }
  SUBCASE("concave input is a fixed point") {
    const auto rho = TorusMeasure({0, q(1, 4), q(1, 2)}, {1, q(1, 2), 0});
    const auto f = cumulative(rho, Arc{0, 1});
    const auto env = concave_envelope(f);
    CHECK(env.density == rho);
  }
  SUBCASE("decreasing input rejected") {
    CumulativeFunction f(Arc{0, q(1, 2)}, {{0, 0}, {q(1, 2), -1}});
    CHECK_THROWS_AS(concave_envelope(f), Error);
  }
  SUBCASE("random 20-cell densities against chord supremum") {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
      const auto rho = random_measure(rng, 20, 0, 1000, 10, 10);
      const Arc arc{random_unit_point(rng, 1000), q(uniform_int(rng, 100, 1000), 1000)};
      const auto f = cumulative(rho, arc);
      const auto env = concave_envelope(f);
      for (int i = 0; i <= 1000; ++i) {
        const Rational x = arc.length * q(i, 1000);
        REQUIRE(*env.hull.at_offset(x) == chord_sup(f, x));
      }
      // slopes nonincreasing, bounded by the input slopes, mass preserved
      const auto s = env.hull.slopes();
      CHECK(std::is_sorted(s.rbegin(), s.rend()));
      CHECK(env.hull.knots().back().value == f.knots().back().value);
      CHECK(env.density.max_density() <= rho.max_density());
      // idempotence
      const auto again = concave_envelope(env.hull);
      CHECK(again.hull.knots() == env.hull.knots());
    }
  }
}
