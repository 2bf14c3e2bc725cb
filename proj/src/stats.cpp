#include "tld/stats.hpp"

#include <algorithm>
#include <cmath>

namespace tld {

double kolmogorov_survival(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0;
  double sign = 1;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.size() < 50 || b.size() < 50) throw Error("KS test needs at least 50 values per sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_survival((en + 0.12 + 0.11 / en) * d);
  return r;
}

HadSpacing had_spacing(const HadState& state) {
  if (state.layers.size() != 2) throw Error("spacing statistics need exactly two layers");
  const auto& first = state.layers[0];
  const auto& all = state.layers[1];
  const double scale = std::ldexp(1.0, -kDyadicBits);
  const std::uint64_t ring = std::uint64_t{1} << kDyadicBits;
  auto gap = [&](std::uint64_t from, std::uint64_t to) { return static_cast<double>((to + ring - from) % ring) * scale; };

  std::vector<std::uint64_t> second;
  std::set_difference(all.begin(), all.end(), first.begin(), first.end(), std::back_inserter(second));
  HadSpacing s;
  if (second.size() == 1) s.max_second_gap = 1;
  for (std::size_t i = 0; second.size() > 1 && i < second.size(); ++i) {
    s.max_second_gap = std::max(s.max_second_gap, gap(second[i], second[(i + 1) % second.size()]));
  }
  for (auto x : first) {
    auto it = std::upper_bound(all.begin(), all.end(), x);
    const std::uint64_t next = it == all.end() ? all.front() : *it;
    s.first_class_gaps += all.size() == 1 ? 1.0 : gap(x, next);
  }
  return s;
}

}  // namespace tld
