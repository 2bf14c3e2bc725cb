#include "tld/variational.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "tld/collapse.hpp"
#include "tld/parallel.hpp"

namespace tld {

namespace {

bool in_domain(const TorusMeasure& rho, const Rational& m, Family family) {
  return rho.absolutely_continuous() && rho.total_mass() == m && (family == Family::Had || rho.bounded_density());
}

Rational ceil_div(const Rational& a, const Rational& q) {
  const Rational r = a / q;
  BigInt c;
  mpz_cdiv_q(c.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return Rational(c);
}

double dp_plateau(const TorusMeasure& rho1, const Arc& arc, const EntropyKernel& kernel, Family family,
                  const DpOracleOptions& opt, std::size_t& transitions) {
  std::vector<Rational> cuts{Rational(0), arc.length};
  for (const auto& b : rho1.breakpoints()) {
    const Rational off = forward_distance(arc.start, b);
    if (off > 0 && off < arc.length) cuts.push_back(off);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Rational> knots{Rational(0)};
  Rational cap = family == Family::Tasep ? Rational(1) : Rational(0);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Rational step = (cuts[i + 1] - cuts[i]) / opt.subdivide;
    for (int s = 1; s <= opt.subdivide; ++s) knots.push_back(cuts[i] + step * s);
    if (family == Family::Had) cap = std::max(cap, rho1.density_at(arc.start + (cuts[i] + cuts[i + 1]) / 2));
  }

  const Rational quantum(1, opt.quantum_den);
  std::vector<Rational> lower{Rational(0)};
  Rational acc = 0;
  for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
    const Rational mid = arc.start + (knots[j] + knots[j + 1]) / 2;
    acc += rho1.density_at(mid) * (knots[j + 1] - knots[j]);
    lower.push_back(ceil_div(acc, quantum));
  }
  const Rational total = acc / quantum;
  if (total.get_den() != 1) throw Error("oracle quantum does not divide the plateau mass");
  const long top = total.get_num().get_si();

  std::vector<double> best(static_cast<std::size_t>(top) + 1, kInfinity);
  best[0] = 0;
  for (std::size_t j = 0; j + 1 < knots.size(); ++j) {
    const Rational width = knots[j + 1] - knots[j];
    const double wd = to_double(width);
    const Rational inc_cap = cap * width / quantum;
    BigInt fl;
    mpz_fdiv_q(fl.get_mpz_t(), inc_cap.get_num_mpz_t(), inc_cap.get_den_mpz_t());
    const long max_inc = fl.get_si();
    std::vector<double> cost(static_cast<std::size_t>(max_inc) + 1);
    for (long i = 0; i <= max_inc; ++i) cost[static_cast<std::size_t>(i)] = wd * kernel(Rational(quantum * i / width));
    const long lo = lower[j + 1].get_num().get_si();
    std::vector<double> next(best.size(), kInfinity);
    for (long v = std::max(lo, 0L); v <= top; ++v) {
      double b = kInfinity;
      for (long i = 0; i <= max_inc && i <= v; ++i) {
        const double prev = best[static_cast<std::size_t>(v - i)];
        if (prev == kInfinity) continue;
        b = std::min(b, prev + cost[static_cast<std::size_t>(i)]);
        ++transitions;
      }
      next[static_cast<std::size_t>(v)] = b;
    }
    best.swap(next);
  }
  return best[static_cast<std::size_t>(top)];
}

}  // namespace

DpOracleResult s2_dp_oracle(const TorusMeasure& rho1, const TorusMeasure& rho2, const Rational& m1,
                            const Rational& m2, Family family, const DpOracleOptions& options) {
  DpOracleResult out;
  const EntropyKernel k1(family, m1);
  const EntropyKernel k2(family, m2);
  if (m1 > m2 || !in_domain(rho1, m1, family) || !in_domain(rho2, m2, family) || !dominated_by(rho1, rho2)) {
    return out;
  }
  if (m1 == m2) {
    out.value = k2.integral(rho2);
    out.finite = true;
    return out;
  }
  const auto u = plateau_set(rho1, rho2);
  double value = k2.integral(rho2);
  for (const auto& arc : u.complement()) value += k1.integral(rho1, arc);
  for (const auto& arc : u.intervals) value += dp_plateau(rho1, arc, k1, family, options, out.transitions);
  out.value = value;
  out.finite = value < kInfinity;
  return out;
}

std::vector<TorusMeasure> lattice_measures(const Lattice& lattice, const Rational& mass, const Rational& cap,
                                           std::size_t limit) {
  if (lattice.cells <= 0 || lattice.density_den <= 0) throw Error("lattice needs positive cells and density denominator");
  const Rational units_r = mass * lattice.cells * lattice.density_den;
  if (units_r.get_den() != 1) return {};
  const long units = units_r.get_num().get_si();
  const Rational cap_r = cap * lattice.density_den;
  BigInt fl;
  mpz_fdiv_q(fl.get_mpz_t(), cap_r.get_num_mpz_t(), cap_r.get_den_mpz_t());
  const long per_cell = fl.get_si();

  std::vector<Rational> bps;
  for (int c = 0; c < lattice.cells; ++c) bps.push_back(Rational(c, lattice.cells));
  for (auto& b : bps) b.canonicalize();

  std::vector<TorusMeasure> out;
  std::vector<long> counts(static_cast<std::size_t>(lattice.cells), 0);
  std::function<void(int, long)> fill = [&](int cell, long left) {
    if (cell + 1 == lattice.cells) {
      if (left > per_cell) return;
      counts[static_cast<std::size_t>(cell)] = left;
      if (out.size() >= limit) throw Error("lattice has more than " + std::to_string(limit) + " measures of this mass");
      std::vector<Rational> dens;
      for (long n : counts) {
        Rational d(n, lattice.density_den);
        d.canonicalize();
        dens.push_back(d);
      }
      out.emplace_back(bps, std::move(dens));
      return;
    }
    const long remaining_cells = lattice.cells - cell - 1;
    for (long n = 0; n <= std::min(per_cell, left); ++n) {
      if (left - n > remaining_cells * per_cell) continue;
      counts[static_cast<std::size_t>(cell)] = n;
      fill(cell + 1, left - n);
    }
  };
  fill(0, units);
  return out;
}

namespace {

struct Prepared {
  std::size_t k = 0;
  std::vector<EntropyKernel> kernels;
  Rational cap;
  bool ok = false;
};

Prepared prepare(const std::vector<TorusMeasure>& rho, const std::vector<Rational>& masses, Family family) {
  if (rho.empty() || rho.size() > 3) throw Error("variational oracle supports 1 <= k <= 3");
  if (masses.size() != rho.size()) throw Error("one mass per profile");
  Prepared p;
  p.k = rho.size();
  for (const auto& m : masses) p.kernels.emplace_back(family, m);
  p.ok = true;
  for (std::size_t i = 0; i < p.k; ++i) {
    if (!in_domain(rho[i], masses[i], family)) p.ok = false;
    if (i + 1 < p.k && (masses[i] > masses[i + 1] || !dominated_by(rho[i], rho[i + 1]))) p.ok = false;
  }
  if (family == Family::Tasep) {
    p.cap = 1;
  } else {
    p.cap = 0;
    for (const auto& r : rho) p.cap = std::max(p.cap, r.max_density());
  }
  return p;
}

// Per-slot partial results folded in slot order.
struct Partial {
  double best = kInfinity;
  std::vector<TorusMeasure> tuple;
  std::vector<double> near;  // costs within near_tol of this slot's best
  std::size_t checked = 0;

  void offer(double cost, const std::vector<TorusMeasure>& t, double tol) {
    ++checked;
    if (cost == kInfinity) return;
    if (cost < best) {
      best = cost;
      tuple = t;
      std::erase_if(near, [&](double c) { return c > best + tol; });
    }
    if (cost <= best + tol) near.push_back(cost);
  }
};

SkOracleResult fold(std::vector<Partial>& parts, double tol, double offset) {
  SkOracleResult out;
  double best = kInfinity;
  for (const auto& p : parts) {
    out.checked += p.checked;
    if (p.best < best) {
      best = p.best;
      out.best = p.tuple;
    }
  }
  if (best == kInfinity) return out;
  for (const auto& p : parts) {
    for (double c : p.near) out.minimizers += c <= best + tol;
  }
  out.value = best + offset;
  out.finite = true;
  return out;
}

std::vector<TorusMeasure> preimages(const std::vector<TorusMeasure>& candidates, const TorusMeasure& target,
                                    const TorusMeasure& top, int threads) {
  std::vector<char> keep(candidates.size(), 0);
  parallel_for(candidates.size(), threads, [&](std::size_t i) { keep[i] = collapse(candidates[i], top) == target; });
  std::vector<TorusMeasure> out;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (keep[i]) out.push_back(candidates[i]);
  }
  return out;
}

}  // namespace

SkOracleResult sk_oracle(const std::vector<TorusMeasure>& rho, const std::vector<Rational>& masses, Family family,
                         const SkOracleOptions& options) {
  const auto p = prepare(rho, masses, family);
  if (!p.ok) return {};
  const std::size_t k = p.k;
  const double top_cost = p.kernels[k - 1].integral(rho[k - 1]);
  if (k == 1) {
    SkOracleResult out;
    out.value = top_cost;
    out.finite = true;
    out.minimizers = 1;
    out.best = rho;
    return out;
  }
  // level k-2 first: its constraint involves only rho_k
  const auto second = preimages(lattice_measures(options.lattice, masses[k - 2], p.cap, options.max_candidates),
                                rho[k - 2], rho[k - 1], options.threads);
  std::vector<Partial> parts(second.size());
  if (k == 2) {
    for (std::size_t i = 0; i < second.size(); ++i) {
      parts[i].offer(p.kernels[0].integral(second[i]), {second[i], rho[1]}, options.near_tol);
    }
    return fold(parts, options.near_tol, top_cost);
  }
  const auto first = lattice_measures(options.lattice, masses[0], p.cap, options.max_candidates);
  if (first.size() * std::max<std::size_t>(second.size(), 1) > options.max_candidates * 10) {
    throw Error("direct oracle search exceeds the candidate cap; coarsen the lattice");
  }
  parallel_for(second.size(), options.threads, [&](std::size_t i) {
    const auto& psi2 = second[i];
    const double c2 = p.kernels[1].integral(psi2);
    for (const auto& psi1 : first) {
      if (collapse(collapse(psi1, psi2), rho[2]) != rho[0]) {
        ++parts[i].checked;
        continue;
      }
      parts[i].offer(p.kernels[0].integral(psi1) + c2, {psi1, psi2, rho[2]}, options.near_tol);
    }
  });
  return fold(parts, options.near_tol, top_cost);
}

SkOracleResult sk_oracle_recursive(const std::vector<TorusMeasure>& rho, const std::vector<Rational>& masses,
                                   Family family, const SkOracleOptions& options) {
  const auto p = prepare(rho, masses, family);
  if (p.k < 2) throw Error("recursion needs k >= 2");
  if (!p.ok) return {};
  const std::size_t k = p.k;
  const double top_cost = p.kernels[k - 1].integral(rho[k - 1]);
  std::vector<std::vector<TorusMeasure>> sets;
  for (std::size_t i = 0; i + 1 < k; ++i) {
    sets.push_back(preimages(lattice_measures(options.lattice, masses[i], p.cap, options.max_candidates), rho[i],
                             rho[k - 1], options.threads));
  }
  if (k == 2) {
    std::vector<Partial> parts(sets[0].size());
    for (std::size_t i = 0; i < sets[0].size(); ++i) {
      parts[i].offer(p.kernels[0].integral(sets[0][i]), {sets[0][i]}, options.near_tol);
    }
    return fold(parts, options.near_tol, top_cost);
  }
  std::vector<Partial> parts(sets[1].size());
  parallel_for(sets[1].size(), options.threads, [&](std::size_t i) {
    const auto& phi2 = sets[1][i];
    for (const auto& phi1 : sets[0]) {
      if (!dominated_by(phi1, phi2)) {
        ++parts[i].checked;
        continue;
      }
      parts[i].offer(s2(phi1, phi2, masses[0], masses[1], family).value, {phi1, phi2}, options.near_tol);
    }
  });
  return fold(parts, options.near_tol, top_cost);
}

}  // namespace tld
