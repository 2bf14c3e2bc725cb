#include "tld/collapse.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tld {

Rational FluxProfile::gamma_total() const {
  Rational total = 0;
  for (const auto& g : gamma_atoms) total += g;
  for (const auto& g : gamma_cells) total += g;
  return total;
}

namespace {

void check_pair(const TorusConfig& eta1, const TorusConfig& eta2) {
  if (eta1.size() != eta2.size()) throw Error("collapse needs configurations on the same ring");
  if (eta1.particles() > eta2.particles()) throw Error("collapse needs M1 <= M2");
}

}  // namespace

TorusConfig collapse_discrete_algorithmic(const TorusConfig& eta1, const TorusConfig& eta2,
                                          std::span<const int> order) {
  check_pair(eta1, eta2);
  const int n = eta1.size();
  std::vector<int> pos(order.begin(), order.end());
  {
    std::vector<int> sorted = pos;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != eta1.sites()) throw Error("order must list every particle of the first configuration once");
  }
  std::vector<std::uint8_t> occ = eta1.bits();
  for (;;) {
    auto it = std::find_if(pos.begin(), pos.end(), [&](int x) { return !eta2.occupied(x); });
    if (it == pos.end()) break;
    int y = *it;
    for (int step = 1; step <= n; ++step) {
      const int z = wrap_site(static_cast<long long>(*it) + step, n);
      if (eta2.occupied(z) && !occ[z]) {
        y = z;
        break;
      }
    }
    if (y == *it) throw InternalError("no free target site while collapsing");
    occ[*it] = 0;
    occ[y] = 1;
    *it = y;
  }
  return TorusConfig(std::move(occ));
}

TorusConfig collapse_discrete_algorithmic(const TorusConfig& eta1, const TorusConfig& eta2) {
  const auto sites = eta1.sites();
  return collapse_discrete_algorithmic(eta1, eta2, sites);
}

DiscreteCollapse collapse_discrete_flux(const TorusConfig& eta1, const TorusConfig& eta2) {
  check_pair(eta1, eta2);
  const int n = eta1.size();
  std::vector<int> e(n);
  for (int x = 0; x < n; ++x) e[x] = static_cast<int>(eta1.occupied(x)) - static_cast<int>(eta2.occupied(x));

  // J(x) = max(0, sup over cyclic [y, x] of the excess)
  std::vector<int> flux(n, 0);
  for (int x = 0; x < n; ++x) {
    int acc = 0;
    int best = 0;
    for (int len = 0; len < n; ++len) {
      acc += e[wrap_site(static_cast<long long>(x) - len, n)];
      best = std::max(best, acc);
    }
    flux[x] = best;
  }

  DiscreteCollapse out;
  FluxProfile& f = out.flux;
  f.domain = FluxProfile::Domain::Sites;
  std::vector<std::uint8_t> bits(n);
  for (int x = 0; x < n; ++x) {
    const int left = flux[wrap_site(x - 1LL, n)];
    const int value = static_cast<int>(eta1.occupied(x)) + left - flux[x];
    if (value != 0 && value != 1) throw InternalError("flux collapse produced an invalid occupation");
    bits[x] = static_cast<std::uint8_t>(value);
    f.positions.emplace_back(x);
    f.values.emplace_back(flux[x]);
    f.left_values.emplace_back(left);
    f.gamma_atoms.emplace_back(left - flux[x]);
    f.gamma_cells.emplace_back(0);
  }
  if (std::all_of(flux.begin(), flux.end(), [](int j) { return j > 0; })) {
    throw InternalError("positive flux on the whole ring");
  }
  const int origin = static_cast<int>(std::find(flux.begin(), flux.end(), 0) - flux.begin());
  for (int step = 1; step <= n; ++step) {
    const int x = wrap_site(static_cast<long long>(origin) + step, n);
    if (flux[x] == 0) continue;
    int len = 0;
    while (flux[wrap_site(static_cast<long long>(x) + len, n)] > 0) ++len;
    f.intervals.push_back({Rational(x), Rational(x + len), true});
    step += len - 1;
  }
  out.result = TorusConfig(std::move(bits));
  return out;
}

PointConfig collapse_points(const PointConfig& x, const PointConfig& y) {
  if (x.size() > y.size()) throw Error("collapse needs |x| <= |y|");
  std::vector<Rational> cur = x.points();
  std::set<Rational> occupied(cur.begin(), cur.end());
  const auto& target = y.points();
  for (;;) {
    auto it = std::find_if(cur.begin(), cur.end(), [&](const Rational& p) { return !y.contains(p); });
    if (it == cur.end()) break;
    const auto start = static_cast<std::size_t>(std::upper_bound(target.begin(), target.end(), *it) - target.begin());
    std::optional<Rational> dest;
    for (std::size_t step = 0; step < target.size(); ++step) {
      const Rational& z = target[(start + step) % target.size()];
      if (!occupied.count(z)) {
        dest = z;
        break;
      }
    }
    if (!dest) throw InternalError("no free target point while collapsing");
    occupied.erase(*it);
    occupied.insert(*dest);
    *it = *dest;
  }
  return PointConfig(std::move(cur));
}

namespace {

struct GridData {
  std::vector<Rational> grid, len, d1, d2, a1, a2;
};

GridData grid_data(const TorusMeasure& rho1, const TorusMeasure& rho2) {
  GridData g;
  g.grid = common_grid({&rho1, &rho2});
  const std::size_t n = g.grid.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Rational next = j + 1 < n ? g.grid[j + 1] : Rational(1);
    g.len.push_back(next - g.grid[j]);
    g.d1.push_back(rho1.density_at(g.grid[j]));
    g.d2.push_back(rho2.density_at(g.grid[j]));
    g.a1.push_back(rho1.atom_at(g.grid[j]));
    g.a2.push_back(rho2.atom_at(g.grid[j]));
  }
  return g;
}

Rational positive(const Rational& v) { return v > 0 ? v : Rational(0); }

// Two passes of J(g) = max(0, atom + J(g-)), J(next-) = max(0, J(g) + d*len).
void flux_linear(const GridData& g, std::vector<Rational>& left, std::vector<Rational>& right) {
  const std::size_t n = g.grid.size();
  left.assign(n, 0);
  right.assign(n, 0);
  Rational j = 0;
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t c = 0; c < n; ++c) {
      const Rational l = j;
      const Rational r = positive(g.a1[c] - g.a2[c] + l);
      j = positive(r + (g.d1[c] - g.d2[c]) * g.len[c]);
      if (pass == 1) {
        left[c] = l;
        right[c] = r;
      }
    }
  }
}

// Direct supremum over left endpoints u in {g, g+} for every grid point.
void flux_quadratic(const GridData& g, std::vector<Rational>& left, std::vector<Rational>& right) {
  const std::size_t n = g.grid.size();
  left.assign(n, 0);
  right.assign(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    for (int closed = 0; closed < 2; ++closed) {
      Rational acc = closed ? Rational(g.a1[j] - g.a2[j]) : Rational(0);
      Rational best = positive(acc);
      for (std::size_t back = 1; back <= n; ++back) {
        const std::size_t c = (j + n - back) % n;
        acc += (g.d1[c] - g.d2[c]) * g.len[c];
        best = std::max(best, acc);
        if (back < n) {
          acc += g.a1[c] - g.a2[c];
          best = std::max(best, acc);
        }
      }
      (closed ? right : left)[j] = best;
    }
  }
}

}  // namespace

MeasureCollapse collapse_measure(const TorusMeasure& rho1, const TorusMeasure& rho2,
                                 const MeasureCollapseOptions& options) {
  if (rho1.total_mass() > rho2.total_mass()) throw Error("collapse needs mass(rho1) <= mass(rho2)");
  const GridData g = grid_data(rho1, rho2);
  std::vector<Rational> gl, gr;
  if (options.method == FluxMethod::Linear) {
    flux_linear(g, gl, gr);
  } else {
    flux_quadratic(g, gl, gr);
  }

  // Refine with interior zero crossings of J.
  struct Point {
    Rational at, left, right, d1, d2, a1, a2;
  };
  std::vector<Point> pts;
  const std::size_t n = g.grid.size();
  for (std::size_t j = 0; j < n; ++j) {
    pts.push_back({g.grid[j], gl[j], gr[j], g.d1[j], g.d2[j], g.a1[j], g.a2[j]});
    const Rational slope = g.d1[j] - g.d2[j];
    if (slope < 0 && gr[j] > 0 && gr[j] + slope * g.len[j] < 0) {
      pts.push_back({g.grid[j] + gr[j] / (-slope), 0, 0, g.d1[j], g.d2[j], 0, 0});
    }
  }
  const std::size_t m = pts.size();
  auto next_at = [&](std::size_t i) { return i + 1 < m ? pts[i + 1].at : Rational(1); };
  auto cell_positive = [&](std::size_t i) { return pts[i].right > 0 || pts[(i + 1) % m].left > 0; };

  MeasureCollapse out;
  FluxProfile& f = out.flux;
  f.domain = FluxProfile::Domain::Grid;
  for (std::size_t i = 0; i < m; ++i) {
    f.positions.push_back(pts[i].at);
    f.values.push_back(pts[i].right);
    f.left_values.push_back(pts[i].left);
    f.gamma_atoms.push_back(pts[i].left - pts[i].right);
    f.gamma_cells.push_back(pts[i].right - pts[(i + 1) % m].left);
  }

  // Elements in cyclic order: point 0, cell 0, point 1, cell 1, ...
  const std::size_t elems = 2 * m;
  auto elem_positive = [&](std::size_t e) { return e % 2 == 0 ? pts[e / 2].right > 0 : cell_positive(e / 2); };
  std::size_t origin = elems;
  for (std::size_t e = 0; e < elems; ++e) {
    if (!elem_positive(e)) {
      origin = e;
      break;
    }
  }
  if (origin == elems) {
    f.full = true;
    f.intervals.push_back({0, 1, true});
    if (rho1.total_mass() < rho2.total_mass()) {
      throw InternalError("positive flux on the whole torus with mass(rho1) < mass(rho2)");
    }
    out.result = rho2.canonical();
    return out;
  }

  std::vector<bool> inside_point(m, false), inside_cell(m, false);
  std::map<Rational, Rational> extra;  // excess mass dropped at the right end of each interval
  for (std::size_t step = 1; step <= elems; ++step) {
    const std::size_t e = (origin + step) % elems;
    if (!elem_positive(e)) continue;
    FluxInterval iv;
    iv.left = pts[e / 2].at;
    iv.left_closed = e % 2 == 0;
    Rational excess = 0;
    std::size_t last = e;
    for (std::size_t k = e; elem_positive(k % elems); ++k, ++step) {
      const std::size_t idx = (k % elems) / 2;
      if (k % 2 == 0) {
        inside_point[idx] = true;
        excess += pts[idx].a1 - pts[idx].a2;
      } else {
        inside_cell[idx] = true;
        excess += (pts[idx].d1 - pts[idx].d2) * (next_at(idx) - pts[idx].at);
      }
      last = k % elems;
    }
    if (last % 2 == 0) throw InternalError("flux interval ends on a point");
    iv.right = wrap_unit(next_at(last / 2));
    extra[iv.right] += excess;
    f.intervals.push_back(iv);
  }
  std::sort(f.intervals.begin(), f.intervals.end(),
            [](const FluxInterval& a, const FluxInterval& b) { return a.left < b.left; });

  std::vector<Rational> bps, dens;
  std::vector<Atom> atoms;
  std::map<Rational, Rational> atom_mass;
  for (std::size_t i = 0; i < m; ++i) {
    bps.push_back(pts[i].at);
    if (options.construction == Construction::Representation) {
      dens.push_back(inside_cell[i] ? pts[i].d2 : pts[i].d1);
      atom_mass[pts[i].at] += inside_point[i] ? pts[i].a2 : pts[i].a1;
    } else {
      const Rational width = next_at(i) - pts[i].at;
      dens.push_back(pts[i].d1 - (pts[(i + 1) % m].left - pts[i].right) / width);
      atom_mass[pts[i].at] += pts[i].a1 + pts[i].left - pts[i].right;
    }
  }
  if (options.construction == Construction::Representation) {
    for (const auto& [at, mass] : extra) atom_mass[at] += mass;
  }
  for (const auto& [at, mass] : atom_mass) {
    if (mass < 0) throw InternalError("collapse produced a negative atom");
    if (mass > 0) atoms.push_back({at, mass});
  }
  for (const auto& d : dens) {
    if (d < 0) throw InternalError("collapse produced a negative density");
  }
  out.result = TorusMeasure(std::move(bps), std::move(dens), std::move(atoms)).canonical();
  return out;
}

TorusMeasure empirical(const TorusConfig& eta, EmpiricalMode mode) {
  const long n = eta.size();
  if (mode == EmpiricalMode::Atomic) {
    std::vector<Atom> atoms;
    for (int x : eta.sites()) atoms.push_back({Rational(x, n), Rational(1, n)});
    for (auto& a : atoms) a.at.canonicalize(), a.mass.canonicalize();
    return TorusMeasure::atomic(std::move(atoms));
  }
  std::vector<Piece> pieces;
  for (int x : eta.sites()) {
    Rational start(2 * x - 1, 2 * n);
    start.canonicalize();
    Rational len(1, n);
    len.canonicalize();
    pieces.push_back({start, len, 1});
  }
  return TorusMeasure::from_pieces(pieces);
}

TorusMeasure empirical(const PointConfig& x, long scale) {
  if (scale <= 0) throw Error("empirical scale must be positive");
  Rational mass(1, scale);
  mass.canonicalize();
  std::vector<Atom> atoms;
  for (const auto& p : x.points()) atoms.push_back({p, mass});
  return TorusMeasure::atomic(std::move(atoms));
}

bool commutation_check(const std::vector<TorusConfig>& tuple, EmpiricalMode mode) {
  const auto collapsed = collapse_k(tuple);
  std::vector<TorusMeasure> projected;
  for (const auto& c : tuple) projected.push_back(empirical(c, mode));
  const auto other = collapse_k(projected);
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (!(empirical(collapsed[i], mode) == other[i])) return false;
  }
  return true;
}

bool commutation_check(const std::vector<PointConfig>& tuple, long scale) {
  const auto collapsed = collapse_k(tuple);
  std::vector<TorusMeasure> projected;
  for (const auto& c : tuple) projected.push_back(empirical(c, scale));
  const auto other = collapse_k(projected);
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (!(empirical(collapsed[i], scale) == other[i])) return false;
  }
  return true;
}

}  // namespace tld
