#include "doctest.h"
#include "generators.hpp"
#include "tld/lattice.hpp"
#include "tld/measure.hpp"

using namespace tld;
using namespace tld::testing;

namespace {

TorusConfig cfg(std::initializer_list<int> bits) {
  std::vector<std::uint8_t> v;
  for (int b : bits) v.push_back(static_cast<std::uint8_t>(b));
  return TorusConfig(v);
}

TorusConfig sites(int n, std::initializer_list<int> s) {
  std::vector<int> v(s);
  return TorusConfig::from_sites(n, v);
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("3/6") == q(1, 2));
  CHECK(parse_rational("-0.25") == q(-1, 4));
  CHECK(parse_rational("7") == q(7));
  CHECK(format_rational(q(2, 4)) == "1/2");
  CHECK(format_rational(q(3)) == "3/1");
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK(wrap_unit(q(-1, 4)) == q(3, 4));
  CHECK(wrap_unit(q(5, 4)) == q(1, 4));
  CHECK(forward_distance(q(3, 4), q(1, 4)) == q(1, 2));
  CHECK(dyadic_from_bits(~0ULL) < 1);
}

TEST_CASE("class labels") {
  SUBCASE("two classes") {
    std::vector<TorusConfig> t{cfg({1, 0, 0}), cfg({1, 1, 0})};
    CHECK(class_label_encode(t) == std::vector<int>{1, 2, 0});
  }
  SUBCASE("one class") {
    std::vector<TorusConfig> t{cfg({0, 1})};
    CHECK(class_label_encode(t) == std::vector<int>{0, 1});
  }
  SUBCASE("three classes") {
    std::vector<TorusConfig> t{cfg({0, 0, 0, 1}), cfg({0, 1, 0, 1}), cfg({1, 1, 0, 1})};
    CHECK(class_label_encode(t) == std::vector<int>{3, 2, 0, 1});
  }
  SUBCASE("unordered pair is rejected with its index") {
    std::vector<TorusConfig> t{cfg({1, 0}), cfg({1, 1}), cfg({0, 1})};
    try {
      class_label_encode(t);
      FAIL("expected OrderError");
    } catch (const OrderError& e) {
      CHECK(e.violation().pair == 1);
      CHECK(e.violation().site == 0);
    }
  }
}

TEST_CASE("label round trip is exhaustive for N <= 6, k <= 3") {
  for (int n = 1; n <= 6; ++n) {
    for (int k = 1; k <= 3; ++k) {
      std::vector<int> labels(n, 0);
      // every vector in {0..k}^n
      for (;;) {
        const auto parts = class_label_decode(labels, k);
        REQUIRE(validate_ordered(std::span<const TorusConfig>(parts)).ok);
        REQUIRE(class_label_encode(parts) == labels);
        int pos = 0;
        while (pos < n && labels[pos] == k) labels[pos++] = 0;
        if (pos == n) break;
        ++labels[pos];
      }
    }
  }
}

TEST_CASE("discrete excess") {
  const auto eta1 = sites(6, {0, 3});
  const auto eta2 = sites(6, {1, 2, 5});
  CHECK(discrete_excess(eta1, eta2, TorusInterval(6, 0, 0)) == 1);
  CHECK(discrete_excess(eta1, eta2, TorusInterval(6, 0, 5)) == -1);
  CHECK(discrete_excess(eta1, eta1, TorusInterval(6, 4, 2)) == 0);
  CHECK_THROWS_AS(discrete_excess(eta1, sites(5, {1}), TorusInterval(6, 0, 1)), Error);

  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = uniform_int(rng, 1, 20);
    const auto a = random_config(rng, n, uniform_int(rng, 0, n));
    const auto b = random_config(rng, n, uniform_int(rng, 0, n));
    CHECK(discrete_excess(a, b, TorusInterval::whole(n, uniform_int(rng, 0, n - 1))) ==
          a.particles() - b.particles());
    // additivity over a split point
    const int first = uniform_int(rng, 0, n - 1);
    const int len = uniform_int(rng, 1, n);
    const int cut = uniform_int(rng, 1, len);
    const TorusInterval whole(n, first, wrap_site(first + len - 1LL, n));
    const TorusInterval left(n, first, wrap_site(first + cut - 1LL, n));
    const int total = discrete_excess(a, b, whole);
    if (cut == len) {
      CHECK(total == discrete_excess(a, b, left));
    } else {
      const TorusInterval right(n, wrap_site(first + cut, n), wrap_site(first + len - 1LL, n));
      CHECK(total == discrete_excess(a, b, left) + discrete_excess(a, b, right));
    }
  }
}

TEST_CASE("interval membership is rotation invariant") {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = uniform_int(rng, 1, 15);
    const TorusInterval iv(n, uniform_int(rng, 0, n - 1), uniform_int(rng, 0, n - 1));
    const int shift = uniform_int(rng, -20, 20);
    const auto r = iv.rotated(shift);
    CHECK(r.length() == iv.length());
    for (int x = 0; x < n; ++x) CHECK(iv.contains(x) == r.contains(wrap_site(x + static_cast<long long>(shift), n)));
  }
}

TEST_CASE("validate_ordered") {
  std::vector<TorusConfig> ok{cfg({1, 0}), cfg({1, 1})};
  CHECK(validate_ordered(std::span<const TorusConfig>(ok)).ok);
  std::vector<TorusConfig> bad{cfg({1, 1}), cfg({1, 0})};
  const auto check = validate_ordered(std::span<const TorusConfig>(bad));
  CHECK_FALSE(check.ok);
  CHECK(check.violation->site == 1);

  std::vector<TorusMeasure> measures{TorusMeasure::constant(q(1, 2)), TorusMeasure::constant(1)};
  CHECK(validate_ordered(std::span<const TorusMeasure>(measures)).ok);
  std::swap(measures[0], measures[1]);
  CHECK_FALSE(validate_ordered(std::span<const TorusMeasure>(measures)).ok);

  std::vector<PointConfig> pts{PointConfig({q(1, 3)}), PointConfig({q(1, 3), q(1, 2)})};
  CHECK(validate_ordered(std::span<const PointConfig>(pts)).ok);
  CHECK_THROWS_AS(OrderedTuple<PointConfig>({pts[1], pts[0]}), OrderError);
}

TEST_CASE("point configurations") {
  CHECK_THROWS_AS(PointConfig({q(1, 2), q(1, 2)}), Error);
  CHECK_THROWS_AS(PointConfig({q(1)}), Error);
  PointConfig p({q(3, 4), q(1, 4)});
  CHECK(p[0] == q(1, 4));
}

TEST_CASE("enumeration helpers") {
  const auto all = enumerate_configs(5, 2);
  CHECK(all.size() == 10);
  CHECK(all.front().bits() == std::vector<std::uint8_t>{0, 0, 0, 1, 1});
  CHECK_THROWS_AS(enumerate_configs(13, 2), Error);
  const std::vector<int> counts{1, 1};
  const auto labels = enumerate_label_vectors(3, counts);
  CHECK(labels.size() == 6);
  CHECK(labels.front() == std::vector<int>{0, 1, 2});
  const std::vector<int> many{1, 1, 1, 1, 1, 1, 1};
  CHECK_THROWS_AS(enumerate_label_vectors(12, many), Error);
}
