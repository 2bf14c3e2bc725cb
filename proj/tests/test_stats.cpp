#include <cmath>

#include "doctest.h"
#include "tld/stats.hpp"

using namespace tld;

namespace {

std::vector<double> uniform_sample(tld::Rng& rng, std::size_t n, double shift = 0) {
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(rng.uniform() + shift);
  return out;
}

std::vector<double> spacing_sample(const std::vector<HadState>& states, bool first) {
  std::vector<double> out;
  for (const auto& s : states) {
    const auto sp = had_spacing(s);
    out.push_back(first ? sp.max_second_gap : sp.first_class_gaps);
  }
  return out;
}

}  // namespace

TEST_CASE("Kolmogorov survival function") {
  CHECK(kolmogorov_survival(0) == 1);
  // tabulated critical values: Q(1.358) = 0.05, Q(1.628) = 0.01
  CHECK(kolmogorov_survival(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_survival(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
}

TEST_CASE("identical samples") {
  tld::Rng rng(1);
  const auto a = uniform_sample(rng, 100);
  const auto r = ks_two_sample(a, a);
  CHECK(r.statistic == 0);
  CHECK(r.p_value == 1);
  CHECK_THROWS_AS(ks_two_sample(std::vector<double>(49, 0.0), a), Error);
}

TEST_CASE("statistic by hand") {
  std::vector<double> a, b;
  for (int i = 0; i < 50; ++i) {
    a.push_back(i);
    b.push_back(i + 25);
  }
  CHECK(ks_two_sample(a, b).statistic == doctest::Approx(0.5));
}

TEST_CASE("calibration: uniform against uniform") {
  tld::Rng rng(2);
  int accepted = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) accepted += ks_two_sample(uniform_sample(rng, 1000), uniform_sample(rng, 1000)).p_value > 0.01;
  CHECK(accepted >= 0.95 * reps);
}

TEST_CASE("calibration: shifted uniform") {
  tld::Rng rng(3);
  CHECK(ks_two_sample(uniform_sample(rng, 1000), uniform_sample(rng, 1000, 0.25)).p_value < 1e-6);
}

TEST_CASE("HAD spacing by hand") {
  const std::uint64_t u = std::uint64_t{1} << (kDyadicBits - 3);  // 1/8
  HadState s;
  s.layers = {{0}, {0, u, 4 * u}};
  const auto sp = had_spacing(s);
  CHECK(sp.max_second_gap == doctest::Approx(5.0 / 8));
  CHECK(sp.first_class_gaps == doctest::Approx(1.0 / 8));
}

TEST_CASE("spacing statistics separate a clustered start from the invariant law") {
  tld::Rng rng(4);
  const ProcessSpec spec{Model::Had, 0, {8, 8}};
  std::vector<HadState> invariant, clustered;
  for (int r = 0; r < 300; ++r) {
    invariant.push_back(HadState::from_points(sample_invariant_had(spec, rng)));
    // all first-class points in [0, 1/4) and the rest in [1/2, 3/4)
    HadState s;
    std::vector<std::uint64_t> a, b;
    for (int i = 0; i < 8; ++i) a.push_back(rng.bits() >> (64 - kDyadicBits + 2));
    for (int i = 0; i < 8; ++i) b.push_back((rng.bits() >> (64 - kDyadicBits + 2)) + (std::uint64_t{1} << (kDyadicBits - 1)));
    std::sort(a.begin(), a.end());
    std::vector<std::uint64_t> all = a;
    all.insert(all.end(), b.begin(), b.end());
    std::sort(all.begin(), all.end());
    s.layers = {a, all};
    clustered.push_back(s);
  }
  for (bool first : {true, false}) {
    CHECK(ks_two_sample(spacing_sample(invariant, first), spacing_sample(clustered, first)).p_value < 1e-6);
  }
}
