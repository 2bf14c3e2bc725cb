#include "tld/instances.hpp"

#include <algorithm>

namespace tld {

ChainInstance random_chain(Rng& rng, Family family, int k, int cells, long top_den, int fraction_den) {
  if (k < 1 || cells < 1) throw Error("chain needs k >= 1 and cells >= 1");
  std::vector<Rational> bps;
  for (int c = 0; c < cells; ++c) {
    Rational b(c, cells);
    b.canonicalize();
    bps.push_back(b);
  }
  const long top_max = family == Family::Tasep ? top_den - 1 : 2 * top_den;
  for (;;) {
    std::vector<std::vector<Rational>> dens(static_cast<std::size_t>(k));
    for (int c = 0; c < cells; ++c) {
      Rational d(rng.index(static_cast<int>(top_max) + 1), top_den);
      d.canonicalize();
      dens.back().push_back(d);
    }
    for (int i = k - 2; i >= 0; --i) {
      for (int c = 0; c < cells; ++c) {
        const Rational& above = dens[static_cast<std::size_t>(i) + 1][static_cast<std::size_t>(c)];
        const int pick = rng.index(3 * fraction_den);
        Rational d = pick >= 2 * fraction_den ? above : Rational(above * Rational(pick % fraction_den, fraction_den));
        d.canonicalize();
        dens[static_cast<std::size_t>(i)].push_back(d);
      }
    }
    ChainInstance out;
    for (auto& d : dens) out.rho.emplace_back(bps, d);
    for (auto& r : out.rho) out.masses.push_back(r.total_mass());
    bool ok = out.masses.front() > 0 && (family == Family::Had || out.masses.back() < 1);
    for (int i = 0; i + 1 < k; ++i) ok = ok && out.masses[static_cast<std::size_t>(i)] < out.masses[static_cast<std::size_t>(i) + 1];
    if (ok) return out;
  }
}

std::pair<TorusConfig, TorusConfig> random_discrete_pair(Rng& rng, int max_n) {
  const int n = 1 + rng.index(max_n);
  int m1 = rng.index(n + 1);
  int m2 = rng.index(n + 1);
  if (m1 > m2) std::swap(m1, m2);
  return {uniform_config(n, m1, rng), uniform_config(n, m2, rng)};
}

TorusMeasure random_grid_measure(Rng& rng, int max_cells, int max_atoms, int denominator) {
  const int cells = 1 + rng.index(max_cells);
  std::vector<Rational> bps;
  while (static_cast<int>(bps.size()) < cells) {
    Rational b(rng.index(denominator), denominator);
    b.canonicalize();
    if (std::find(bps.begin(), bps.end(), b) == bps.end()) bps.push_back(b);
  }
  std::sort(bps.begin(), bps.end());
  std::vector<Rational> dens;
  for (int c = 0; c < cells; ++c) {
    Rational d(rng.index(17), 8);
    d.canonicalize();
    dens.push_back(d);
  }
  std::vector<Atom> atoms;
  const int n_atoms = rng.index(max_atoms + 1);
  for (int a = 0; a < n_atoms; ++a) {
    Rational x(rng.index(denominator), denominator);
    x.canonicalize();
    if (std::any_of(atoms.begin(), atoms.end(), [&](const Atom& o) { return o.at == x; })) continue;
    Rational m(1 + rng.index(4), 8);
    m.canonicalize();
    atoms.push_back({x, m});
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.at < b.at; });
  return TorusMeasure(std::move(bps), std::move(dens), std::move(atoms));
}

std::pair<TorusMeasure, TorusMeasure> random_measure_pair(Rng& rng) {
  for (;;) {
    auto a = random_grid_measure(rng, 6, 2, 24);
    auto b = random_grid_measure(rng, 6, 2, 24);
    if (a.total_mass() == 0 || b.total_mass() == 0) continue;
    if (a.total_mass() > b.total_mass()) std::swap(a, b);
    return {a, b};
  }
}

}  // namespace tld
