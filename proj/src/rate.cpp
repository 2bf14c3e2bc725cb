#include "tld/rate.hpp"

#include <algorithm>
#include <cmath>

#include "tld/collapse.hpp"

namespace tld {

const char* family_name(Family f) { return f == Family::Tasep ? "tasep" : "had"; }

Family parse_family(const std::string& name) {
  if (name == "tasep") return Family::Tasep;
  if (name == "had") return Family::Had;
  throw Error("unknown family '" + name + "'");
}

EntropyKernel::EntropyKernel(Family family, Rational m) : family_(family), m_(std::move(m)) {
  m_.canonicalize();
  if (m_ <= 0) throw Error("kernel mass parameter must be positive");
  if (family_ == Family::Tasep && m_ >= 1) throw Error("exclusion kernel needs 0 < m < 1");
  md_ = to_double(m_);
}

namespace {

double xlogx_over(double x, double m) { return x == 0 ? 0.0 : x * std::log(x / m); }

}  // namespace

double EntropyKernel::operator()(double x) const {
  if (x < 0) return kInfinity;
  if (family_ == Family::Had) return xlogx_over(x, md_) - x + md_;
  if (x > 1) return kInfinity;
  return xlogx_over(x, md_) + xlogx_over(1 - x, 1 - md_);
}

double EntropyKernel::operator()(const Rational& x) const {
  if (x < 0 || (family_ == Family::Tasep && x > 1)) return kInfinity;
  if (x == m_) return 0;
  return (*this)(to_double(x));
}

double EntropyKernel::integral(const TorusMeasure& rho) const {
  double total = 0;
  const auto& b = rho.breakpoints();
  const auto& d = rho.densities();
  for (std::size_t j = 0; j < b.size(); ++j) {
    const Rational len = j + 1 < b.size() ? Rational(b[j + 1] - b[j]) : Rational(1 - b[j] + b[0]);
    total += to_double(len) * (*this)(d[j]);
  }
  return total;
}

double EntropyKernel::integral(const TorusMeasure& rho, const Arc& arc) const {
  std::vector<Rational> offsets{Rational(0), arc.length};
  for (const auto& b : rho.breakpoints()) {
    const Rational off = forward_distance(arc.start, b);
    if (off > 0 && off < arc.length) offsets.push_back(off);
  }
  std::sort(offsets.begin(), offsets.end());
  double total = 0;
  for (std::size_t i = 0; i + 1 < offsets.size(); ++i) {
    const Rational len = offsets[i + 1] - offsets[i];
    total += to_double(len) * (*this)(rho.density_at(arc.start + offsets[i]));
  }
  return total;
}

double s1(const TorusMeasure& rho, const EntropyKernel& kernel) {
  if (!rho.absolutely_continuous()) return kInfinity;
  if (rho.total_mass() != kernel.m()) return kInfinity;
  if (kernel.family() == Family::Tasep && !rho.bounded_density()) return kInfinity;
  return kernel.integral(rho);
}

namespace {

std::string membership_failure(const TorusMeasure& rho, const Rational& m, Family family, const char* name) {
  if (!rho.absolutely_continuous()) return std::string(name) + " has atoms";
  if (rho.total_mass() != m) return std::string(name) + " has the wrong mass";
  if (family == Family::Tasep && !rho.bounded_density()) return std::string(name) + " has density above 1";
  return {};
}

}  // namespace

RateResult s2(const TorusMeasure& rho1, const TorusMeasure& rho2, const Rational& m1, const Rational& m2,
              Family family) {
  RateResult out;
  const EntropyKernel k1(family, m1);
  const EntropyKernel k2(family, m2);
  if (m1 > m2) {
    out.reason = "m1 > m2";
    return out;
  }
  if (auto why = membership_failure(rho1, m1, family, "rho1"); !why.empty()) {
    out.reason = why;
    return out;
  }
  if (auto why = membership_failure(rho2, m2, family, "rho2"); !why.empty()) {
    out.reason = why;
    return out;
  }
  if (!dominated_by(rho1, rho2)) {
    out.reason = "rho1 is not dominated by rho2";
    return out;
  }
  out.plateaus = plateau_set(rho1, rho2);
  if (m1 == m2) {
    // ordered with equal masses forces rho1 == rho2
    out.diagonal = true;
    out.terms.second = k2.integral(rho2);
    out.value = out.terms.second;
    out.finite = true;
    return out;
  }
  for (const auto& arc : out.plateaus.complement()) out.terms.complement += k1.integral(rho1, arc);
  for (const auto& arc : out.plateaus.intervals) {
    const auto env = concave_envelope(cumulative(rho1, arc));
    out.terms.plateaus += k1.integral(env.density, arc);
    out.envelopes.push_back(env.density);
  }
  out.terms.second = k2.integral(rho2);
  out.value = out.terms.complement + out.terms.plateaus + out.terms.second;
  out.finite = true;
  return out;
}

double s2_excess_over_s1(const TorusMeasure& rho1, const TorusMeasure& rho2, const Rational& m2, Family family) {
  const EntropyKernel k2(family, m2);
  const auto u = plateau_set(rho1, rho2);
  double total = 0;
  for (const auto& arc : u.complement()) total += k2.integral(rho2, arc);
  for (const auto& arc : u.intervals) {
    const auto env = concave_envelope(cumulative(rho2, arc));
    total += k2.integral(env.density, arc);
  }
  return total;
}

bool preimage_conditions(const TorusMeasure& psi1, const TorusMeasure& rho1, const TorusMeasure& rho2) {
  if (!psi1.absolutely_continuous() || !rho1.absolutely_continuous() || !rho2.absolutely_continuous()) {
    throw Error("preimage conditions need measures without atoms");
  }
  const auto u = plateau_set(rho1, rho2);
  if (u.full) return psi1 == rho1;
  for (const auto& arc : u.complement()) {
    const auto fp = cumulative(psi1, arc);
    const auto fr = cumulative(rho1, arc);
    for (const auto* f : {&fp, &fr}) {
      for (const auto& k : f->knots()) {
        if (*fp.at_offset(k.offset) != *fr.at_offset(k.offset)) return false;
      }
    }
  }
  for (const auto& arc : u.intervals) {
    const auto fp = cumulative(psi1, arc);
    const auto fr = cumulative(rho1, arc);
    if (fp.knots().back().value != fr.knots().back().value) return false;
    for (const auto* f : {&fp, &fr}) {
      for (const auto& k : f->knots()) {
        if (*fp.at_offset(k.offset) < *fr.at_offset(k.offset)) return false;
      }
    }
  }
  return true;
}

TorusMeasure optimal_preimage(const TorusMeasure& rho1, const TorusMeasure& rho2) {
  const auto u = plateau_set(rho1, rho2);
  if (u.full) return rho1;
  std::vector<TorusMeasure> envelopes;
  std::vector<Rational> extra;
  for (const auto& arc : u.intervals) {
    envelopes.push_back(concave_envelope(cumulative(rho1, arc)).density);
    extra.push_back(arc.start);
    extra.push_back(arc.end());
    for (const auto& b : envelopes.back().breakpoints()) extra.push_back(b);
  }
  const auto grid = common_grid({&rho1}, extra);
  std::vector<Rational> dens;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Rational next = j + 1 < grid.size() ? grid[j + 1] : Rational(1);
    const Rational mid = (grid[j] + next) / 2;
    Rational d = rho1.density_at(mid);
    for (std::size_t i = 0; i < u.intervals.size(); ++i) {
      if (u.intervals[i].contains(mid)) d = envelopes[i].density_at(mid);
    }
    dens.push_back(d);
  }
  return TorusMeasure(grid, dens).canonical();
}

TorusMeasure minimizer_rho1(const TorusMeasure& rho2, const Rational& m1) {
  if (!rho2.absolutely_continuous()) throw Error("minimizer needs rho2 without atoms");
  if (m1 > rho2.total_mass()) throw Error("minimizer needs m1 <= mass(rho2)");
  return collapse(TorusMeasure::constant(m1), rho2);
}

BumpArcs minimizer_rho2_arcs(const TorusMeasure& rho1, const Rational& m2) {
  if (!rho1.absolutely_continuous()) throw Error("minimizer needs rho1 without atoms");
  if (rho1.total_mass() >= m2) throw Error("minimizer needs mass(rho1) < m2");
  const auto c = rho1.canonical();
  const auto& b = c.breakpoints();
  const auto& d = c.densities();
  const std::size_t n = b.size();
  auto cell_start = [&](std::size_t j) { return b[j % n]; };
  auto cell_len = [&](std::size_t j) { return j + 1 < n ? Rational(b[j + 1] - b[j]) : Rational(1 - b[j] + b[0]); };

  BumpArcs out;
  std::vector<bool> above(n);
  for (std::size_t j = 0; j < n; ++j) above[j] = d[j] > m2;
  const auto first_below = std::find(above.begin(), above.end(), false);
  if (first_below == above.end()) throw InternalError("density above m2 everywhere with mass below m2");
  const std::size_t origin = static_cast<std::size_t>(first_below - above.begin());
  for (std::size_t step = 1; step <= n; ++step) {
    const std::size_t j = (origin + step) % n;
    if (!above[j]) continue;
    // maximal run of cells above m2 starting at j
    std::size_t last = j;
    while (above[(last + 1) % n] && (last + 1) % n != origin) last = (last + 1) % n, ++step;
    const Rational right = wrap_unit(cell_start(last) + cell_len(last));
    // walk left from the right end until the integral of (m2 - rho1) returns to zero
    Rational acc = 0;  // integral from the current point to `right`
    std::size_t cell = last;
    Rational w;
    Rational covered = 0;
    for (;;) {
      const Rational len = cell_len(cell);
      const Rational slope = m2 - d[cell];
      const Rational next = acc + slope * len;
      if (acc < 0 && next >= 0) {
        w = wrap_unit(cell_start(cell) + len - (-acc) / slope);
        covered += (-acc) / slope;
        break;
      }
      acc = next;
      covered += len;
      if (covered >= 1) throw InternalError("no zero of the bump integral on the torus");
      cell = (cell + n - 1) % n;
    }
    out.all.push_back(Arc{w, covered});
  }
  for (std::size_t i = 0; i < out.all.size(); ++i) {
    bool nested = false;
    for (std::size_t j = 0; j < out.all.size() && !nested; ++j) {
      if (i == j) continue;
      const Arc& a = out.all[i];
      const Arc& o = out.all[j];
      nested = forward_distance(o.start, a.start) + a.length <= o.length && !(a == o && i < j);
    }
    if (!nested) out.kept.push_back(out.all[i]);
  }
  return out;
}

TorusMeasure minimizer_rho2(const TorusMeasure& rho1, const Rational& m2) {
  const auto arcs = minimizer_rho2_arcs(rho1, m2);
  std::vector<Rational> extra;
  for (const auto& a : arcs.kept) {
    extra.push_back(a.start);
    extra.push_back(a.end());
  }
  const auto grid = common_grid({&rho1}, extra);
  std::vector<Rational> dens;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const Rational next = j + 1 < grid.size() ? grid[j + 1] : Rational(1);
    const Rational mid = (grid[j] + next) / 2;
    const bool inside = std::any_of(arcs.kept.begin(), arcs.kept.end(), [&](const Arc& a) { return a.contains(mid); });
    dens.push_back(inside ? rho1.density_at(grid[j]) : m2);
  }
  return TorusMeasure(grid, dens).canonical();
}

namespace {

struct CounterexampleData {
  Rational m1{1, 4};
  Rational m2{3, 4};
  TorusMeasure rho1 = TorusMeasure::indicator(Rational(1, 4), Rational(1, 2));
  TorusMeasure rho1_star = TorusMeasure::indicator(Rational(1, 2), 1, Rational(1, 2));
  TorusMeasure rho2 = TorusMeasure::indicator(Rational(1, 4), 1);
};

}  // namespace

double nonconvexity_margin(const Rational& c) {
  if (c < 0 || c > 1) throw Error("convex weight must lie in [0,1]");
  const CounterexampleData d;
  const double a = s2(d.rho1, d.rho2, d.m1, d.m2, Family::Tasep).value;
  const double b = s2(d.rho1_star, d.rho2, d.m1, d.m2, Family::Tasep).value;
  const auto mix = combine(d.rho1, c, d.rho1_star, 1 - c);
  const double mixed = s2(mix, d.rho2, d.m1, d.m2, Family::Tasep).value;
  const double cd = to_double(c);
  return cd * a + (1 - cd) * b - mixed;
}

NonconvexityCertificate nonconvexity_certificate() {
  NonconvexityCertificate out;
  for (long den : {10L, 100L, 1000L}) {
    Rational c(den - 1, den);
    c.canonicalize();
    const double margin = nonconvexity_margin(c);
    out.points.push_back({c, margin});
    out.most_negative = std::min(out.most_negative, margin);
  }
  const CounterexampleData d;
  const EntropyKernel h(Family::Tasep, d.m1);
  const Arc left{0, Rational(1, 2)};
  out.limit = h.integral(TorusMeasure::constant(Rational(1, 2)), left) - h.integral(d.rho1, left);
  return out;
}

ContractionResiduals contraction_identity_check(const TorusMeasure& rho, const Rational& m_low,
                                                const Rational& m_high, Family family) {
  const Rational& m = rho.total_mass();
  if (!(m_low < m && m < m_high)) throw Error("contraction check needs m_low < mass(rho) < m_high");
  ContractionResiduals r;
  const double own = s1(rho, EntropyKernel(family, m));
  r.first = std::abs(s2(minimizer_rho1(rho, m_low), rho, m_low, m, family).value - own);
  r.second = std::abs(s2(rho, minimizer_rho2(rho, m_high), m, m_high, family).value - own);
  return r;
}

namespace {

constexpr long kExactLimit = 100000;

double log_binomial(long n, long k, bool exact) {
  if (exact) {
    BigInt r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    long e = 0;
    const double mant = mpz_get_d_2exp(&e, r.get_mpz_t());
    return std::log(mant) + static_cast<double>(e) * std::log(2.0);
  }
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

std::vector<LdpRow> ldp_decay_exact(const std::vector<Rational>& bin_densities, const std::vector<long>& sizes) {
  const long bins = static_cast<long>(bin_densities.size());
  if (bins == 0) throw Error("profile needs at least one bin");
  Rational m = 0;
  for (const auto& p : bin_densities) {
    if (p < 0 || p > 1) throw Error("bin densities must lie in [0,1]");
    m += p;
  }
  m /= bins;
  const EntropyKernel h(Family::Tasep, m);
  double rate = 0;
  for (const auto& p : bin_densities) rate += h(p) / static_cast<double>(bins);

  std::vector<LdpRow> rows;
  for (long n : sizes) {
    if (n <= 0 || n % bins != 0) throw Error("N must be a positive multiple of the bin count");
    const long width = n / bins;
    LdpRow row;
    row.n = n;
    row.exact = n <= kExactLimit;
    const Rational total_r = m * n;
    if (total_r.get_den() != 1) throw Error("m N is not an integer");
    double log_p = -log_binomial(n, total_r.get_num().get_si(), row.exact);
    for (const auto& p : bin_densities) {
      const Rational j = p * width;
      if (j.get_den() != 1) throw Error("bin count is not an integer at N = " + std::to_string(n));
      log_p += log_binomial(width, j.get_num().get_si(), row.exact);
    }
    row.decay = -log_p / static_cast<double>(n);
    row.s1 = rate;
    row.gap = std::abs(row.decay - rate);
    row.bound = static_cast<double>(bins) * (1 + std::log(n + 1.0)) / static_cast<double>(n);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tld
