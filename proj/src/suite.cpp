#include "tld/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "tld/collapse.hpp"
#include "tld/dynamics.hpp"
#include "tld/instances.hpp"
#include "tld/parallel.hpp"
#include "tld/rate.hpp"
#include "tld/stats.hpp"
#include "tld/variational.hpp"

namespace tld {

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "stationarity",         "flux-equivalence", "order-independence", "commutation",
      "measure-representation", "s2-oracle",      "minimizer-identities", "nonconvexity",
      "ldp-decay",            "had-invariance",   "recursive-relation"};
  return names;
}

Json SuiteConfig::to_json() const {
  Json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["threads"] = threads;
  if (count) j["count"] = *count;
  if (!ring_sizes.empty()) j["ring_sizes"] = ring_sizes;
  if (!class_counts.empty()) j["class_counts"] = class_counts;
  if (replicas) j["replicas"] = *replicas;
  if (horizon) j["horizon"] = *horizon;
  if (!tolerances.empty()) j["tolerances"] = tolerances;
  j["out_dir"] = out_dir;
  j["invocation"] = invocation;
  return j;
}

SuiteConfig SuiteConfig::from_json(const Json& j) {
  SuiteConfig c;
  c.suite = j.value("suite", c.suite);
  c.seed = j.value("seed", c.seed);
  c.threads = j.value("threads", c.threads);
  if (j.contains("count")) c.count = j.at("count").get<long>();
  if (j.contains("ring_sizes")) c.ring_sizes = j.at("ring_sizes").get<std::vector<int>>();
  if (j.contains("class_counts")) c.class_counts = j.at("class_counts").get<std::vector<int>>();
  if (j.contains("replicas")) c.replicas = j.at("replicas").get<int>();
  if (j.contains("horizon")) c.horizon = j.at("horizon").get<double>();
  if (j.contains("tolerances")) c.tolerances = j.at("tolerances").get<std::map<std::string, double>>();
  c.out_dir = j.value("out_dir", std::string());
  c.invocation = j.value("invocation", std::string());
  return c;
}

std::string SuiteConfig::input_hash() const {
  Json j = to_json();
  j.erase("out_dir");
  j.erase("invocation");
  j.erase("threads");
  return git_blob_hash(j.dump());
}

bool SuiteReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

Json SuiteReport::to_json() const {
  Json j;
  j["config"] = config.to_json();
  j["input_hash"] = config.input_hash();
  j["pass"] = pass();
  Json cs = Json::array();
  for (const auto& c : checks) {
    cs.push_back(Json{{"id", c.id},
                      {"suite", c.suite},
                      {"criterion", c.criterion},
                      {"pass", c.pass},
                      {"measured", format_double(c.measured)},
                      {"relation", c.relation},
                      {"threshold", format_double(c.threshold)},
                      {"detail", c.detail},
                      {"seconds", c.seconds}});
  }
  j["checks"] = cs;
  Json files = Json::array();
  for (const auto& [name, table] : tables) files.push_back(name + ".csv");
  j["tables"] = files;
  return j;
}

void SuiteReport::write(const std::string& dir) const {
  const std::filesystem::path base(dir);
  write_text(base / "report.json", to_json().dump(2) + "\n");
  for (const auto& [name, table] : tables) write_text(base / (name + ".csv"), table.str());
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Context {
  const SuiteConfig& config;
  SuiteReport& report;
  std::string suite;
  int criterion;
  Clock::time_point start = Clock::now();

  long count(long fallback) const { return config.count.value_or(fallback); }
  double tolerance(const std::string& id, double fallback) const {
    auto it = config.tolerances.find(id);
    return it == config.tolerances.end() ? fallback : it->second;
  }
  /// Seed for instance `i` of this suite, independent of scheduling.
  std::uint64_t seed(std::uint64_t i) const { return derive_seed(config.seed, static_cast<std::uint64_t>(criterion) * 1'000'000'007ULL + i); }

  void check(const std::string& id, double measured, const std::string& relation, double threshold, std::string detail) {
    bool pass = false;
    if (relation == "==") pass = measured == threshold;
    else if (relation == "<=") pass = measured <= threshold;
    else if (relation == "<") pass = measured < threshold;
    else if (relation == ">=") pass = measured >= threshold;
    else if (relation == ">") pass = measured > threshold;
    else throw InternalError("unknown relation " + relation);
    report.checks.push_back({id, suite, criterion, pass, measured, threshold, relation, std::move(detail), since(start)});
  }
  CsvTable& table(const std::string& name, std::vector<std::string> header) {
    return report.tables.emplace(name, CsvTable(std::move(header))).first->second;
  }
};

std::string join(const std::vector<int>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
  return out;
}

// --- 1 -------------------------------------------------------------------------

void class_vectors(int ring, int k, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  const int used = std::accumulate(cur.begin(), cur.end(), 0);
  const int remaining = k - static_cast<int>(cur.size()) - 1;
  for (int d = 1; used + d + remaining <= ring; ++d) {
    cur.push_back(d);
    class_vectors(ring, k, cur, out);
    cur.pop_back();
  }
}

void suite_stationarity(Context& ctx) {
  const auto ns = ctx.config.ring_sizes.empty() ? std::vector<int>{3, 4, 5, 6} : ctx.config.ring_sizes;
  const auto ks = ctx.config.class_counts.empty() ? std::vector<int>{2, 3} : ctx.config.class_counts;
  std::vector<ProcessSpec> specs;
  for (int n : ns) {
    for (int k : ks) {
      std::vector<int> cur;
      std::vector<std::vector<int>> vecs;
      class_vectors(n, k, cur, vecs);
      for (auto& d : vecs) specs.push_back({Model::Tasep, n, d});
    }
  }
  struct Row {
    std::size_t states = 0;
    Rational tv;
  };
  std::vector<Row> rows(specs.size());
  parallel_for(specs.size(), ctx.config.threads, [&](std::size_t i) {
    const auto a = exact_stationary(specs[i]);
    const auto b = pushforward_distribution(specs[i]);
    rows[i] = {a.states.size(), a.total_variation(b)};
  });
  auto& t = ctx.table("stationarity", {"ring", "deltas", "states", "total_variation"});
  Rational worst = 0;
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    t.add({std::to_string(specs[i].ring), join(specs[i].deltas), std::to_string(rows[i].states), format_rational(rows[i].tv)});
    worst = std::max(worst, rows[i].tv);
    nonzero += rows[i].tv != 0;
  }
  ctx.check("stationarity-tv", to_double(worst), "==", 0,
            std::to_string(specs.size()) + " instances, " + std::to_string(nonzero) + " with nonzero TV, worst " +
                format_rational(worst));
  ctx.check("stationarity-runtime", since(ctx.start), "<", ctx.tolerance("stationarity-runtime", 300),
            "seconds for the whole sweep");
}

// --- 2, 3 ------------------------------------------------------------------------

// count(C, [a, b]) = count(eta1, [a, b]) + J(a-1) - J(b) over every cyclic interval.
bool interval_ledger_holds(const TorusConfig& eta1, const TorusConfig& result, const std::vector<Rational>& j) {
  const int n = eta1.size();
  std::vector<long> p1(2 * n + 1, 0), pc(2 * n + 1, 0);
  for (int x = 0; x < 2 * n; ++x) {
    p1[x + 1] = p1[x] + eta1.occupied(x);
    pc[x + 1] = pc[x] + result.occupied(x);
  }
  for (int a = 0; a < n; ++a) {
    for (int len = 1; len <= n; ++len) {
      const int b = a + len - 1;
      const Rational lhs(pc[b + 1] - pc[a]);
      const Rational rhs = Rational(p1[b + 1] - p1[a]) + j[wrap_site(a - 1LL, n)] - j[b % n];
      if (lhs != rhs) return false;
    }
  }
  return true;
}

void suite_flux(Context& ctx) {
  const long count = ctx.count(10000);
  std::vector<int> bad(static_cast<std::size_t>(count), 0);
  parallel_for(bad.size(), ctx.config.threads, [&](std::size_t i) {
    Rng rng(ctx.seed(i));
    const auto [eta1, eta2] = random_discrete_pair(rng, 64);
    const auto alg = collapse_discrete_algorithmic(eta1, eta2);
    const auto fl = collapse_discrete_flux(eta1, eta2);
    int b = 0;
    if (!(alg == fl.result)) b |= 1;
    if (!interval_ledger_holds(eta1, fl.result, fl.flux.values)) b |= 2;
    bad[i] = b;
  });
  const long rule = std::count_if(bad.begin(), bad.end(), [](int b) { return b & 1; });
  const long ledger = std::count_if(bad.begin(), bad.end(), [](int b) { return b & 2; });
  ctx.check("flux-equivalence", static_cast<double>(rule + ledger), "==", 0,
            std::to_string(count) + " pairs with N <= 64: " + std::to_string(rule) + " rule/formula mismatches, " +
                std::to_string(ledger) + " ledger failures");
}

void suite_order(Context& ctx) {
  const long count = ctx.count(1000);
  std::vector<int> bad(static_cast<std::size_t>(count), 0);
  parallel_for(bad.size(), ctx.config.threads, [&](std::size_t i) {
    Rng rng(ctx.seed(i));
    const auto [eta1, eta2] = random_discrete_pair(rng, 64);
    const auto reference = collapse_discrete_algorithmic(eta1, eta2);
    auto order = eta1.sites();
    for (int r = 0; r < 10; ++r) {
      std::shuffle(order.begin(), order.end(), rng.engine());
      bad[i] += !(collapse_discrete_algorithmic(eta1, eta2, order) == reference);
    }
  });
  const long total = std::accumulate(bad.begin(), bad.end(), 0L);
  ctx.check("order-independence", static_cast<double>(total), "==", 0,
            std::to_string(count) + " pairs x 10 orders");
}

// --- 4 -------------------------------------------------------------------------

std::vector<int> random_layer_sizes(Rng& rng, int n) {
  const int k = 2 + rng.index(3);
  std::vector<int> sizes;
  for (int i = 0; i < k; ++i) sizes.push_back(rng.index(n + 1));
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

PointConfig grid_points(Rng& rng, int count, int den) {
  std::set<int> picks;
  while (static_cast<int>(picks.size()) < count) picks.insert(rng.index(den));
  std::vector<Rational> pts;
  for (int p : picks) {
    Rational r(p, den);
    r.canonicalize();
    pts.push_back(r);
  }
  return PointConfig(std::move(pts));
}

void suite_commutation(Context& ctx) {
  const long count = ctx.count(1000);
  const std::vector<std::string> regimes{"lattice-atomic", "lattice-binned", "points"};
  for (std::size_t r = 0; r < regimes.size(); ++r) {
    std::vector<char> ok(static_cast<std::size_t>(count), 0);
    parallel_for(ok.size(), ctx.config.threads, [&](std::size_t i) {
      Rng rng(ctx.seed(r * 10'000'000 + i));
      const int n = 1 + rng.index(24);
      const auto sizes = random_layer_sizes(rng, n);
      if (r < 2) {
        std::vector<TorusConfig> t;
        for (int m : sizes) t.push_back(uniform_config(n, m, rng));
        ok[i] = commutation_check(t, r == 0 ? EmpiricalMode::Atomic : EmpiricalMode::Binned);
      } else {
        std::vector<PointConfig> t;
        for (int m : sizes) t.push_back(grid_points(rng, m, 4 * n));
        ok[i] = commutation_check(t, n);
      }
    });
    const long failures = std::count(ok.begin(), ok.end(), 0);
    ctx.check("commutation-" + regimes[r], static_cast<double>(failures), "==", 0,
              std::to_string(count) + " tuples with 2..4 classes");
  }
}

// --- 5 -------------------------------------------------------------------------

void suite_measure_representation(Context& ctx) {
  const long count = ctx.count(1000);
  std::vector<int> bad(static_cast<std::size_t>(count), 0);
  std::vector<char> flux_nonempty(bad.size(), 0);
  parallel_for(bad.size(), ctx.config.threads, [&](std::size_t i) {
    Rng rng(ctx.seed(i));
    const auto [a, b] = random_measure_pair(rng);
    const auto rep = collapse_measure(a, b, {FluxMethod::Linear, Construction::Representation});
    const auto led = collapse_measure(a, b, {FluxMethod::Linear, Construction::Ledger});
    const auto quad = collapse_measure(a, b, {FluxMethod::Quadratic, Construction::Representation});
    int f = 0;
    if (!(rep.result == led.result)) f |= 1;
    if (rep.flux.gamma_total() != 0 || led.flux.gamma_total() != 0) f |= 2;
    if (!dominated_by(rep.result, b)) f |= 4;
    if (!(rep.flux.values == quad.flux.values) || !(rep.result == quad.result)) f |= 8;
    if (rep.result.total_mass() != a.total_mass()) f |= 16;
    bad[i] = f;
    flux_nonempty[i] = !rep.flux.intervals.empty();
  });
  auto n_of = [&](int bit) { return std::count_if(bad.begin(), bad.end(), [&](int f) { return f & bit; }); };
  std::ostringstream d;
  d << count << " pairs (" << std::count(flux_nonempty.begin(), flux_nonempty.end(), 1)
    << " with flux intervals): representation/ledger " << n_of(1) << ", gamma " << n_of(2) << ", domination "
    << n_of(4) << ", flux paths " << n_of(8) << ", mass " << n_of(16);
  const long total = std::count_if(bad.begin(), bad.end(), [](int f) { return f != 0; });
  ctx.check("measure-representation", static_cast<double>(total), "==", 0, d.str());
}

// --- 6 -------------------------------------------------------------------------

void suite_s2_oracle(Context& ctx) {
  const long count = ctx.count(50);
  auto& t = ctx.table("s2-oracle", {"family", "instance", "closed_form", "oracle", "difference", "oracle_seconds"});
  double worst = 0, slowest = 0;
  for (Family fam : {Family::Tasep, Family::Had}) {
    struct Row {
      double cf = 0, dp = 0, seconds = 0;
    };
    std::vector<Row> rows(static_cast<std::size_t>(count));
    parallel_for(rows.size(), ctx.config.threads, [&](std::size_t i) {
      Rng rng(ctx.seed((fam == Family::Had ? 1'000'000 : 0) + i));
      const auto inst = random_chain(rng, fam, 2, 8, 8, 4);
      const auto t0 = Clock::now();
      const auto dp = s2_dp_oracle(inst.rho[0], inst.rho[1], inst.masses[0], inst.masses[1], fam);
      rows[i].seconds = since(t0);
      rows[i].dp = dp.value;
      rows[i].cf = s2(inst.rho[0], inst.rho[1], inst.masses[0], inst.masses[1], fam).value;
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double diff = std::abs(rows[i].cf - rows[i].dp);
      worst = std::max(worst, std::isnan(diff) ? kInfinity : diff);
      slowest = std::max(slowest, rows[i].seconds);
      t.add({family_name(fam), std::to_string(i), format_double(rows[i].cf), format_double(rows[i].dp),
             format_double(diff), format_double(rows[i].seconds)});
    }
  }
  ctx.check("s2-oracle-difference", worst, "<=", ctx.tolerance("s2-oracle-difference", 1e-3),
            std::to_string(count) + " eight-cell instances per family");
  ctx.check("s2-oracle-runtime", slowest, "<", ctx.tolerance("s2-oracle-runtime", 10), "slowest oracle call, seconds");
}

// --- 7 -------------------------------------------------------------------------

struct IdentityResiduals {
  double rho1_identity = 0;   // S2(C_{rho2}[m1], rho2) - S1(rho2)
  double rho2_identity = 0;   // S2(rho1, rho2*) - S1(rho1)
  double excess = 0;          // S2 - S1(rho1) against the second-profile formula
  double optimality = 0;      // how far either minimizer is beaten by the instance itself
  bool nested = false;
};

IdentityResiduals identity_residuals(const TorusMeasure& rho1, const TorusMeasure& rho2, Family fam) {
  const Rational m1 = rho1.total_mass(), m2 = rho2.total_mass();
  const EntropyKernel k1(fam, m1), k2(fam, m2);
  IdentityResiduals r;
  const double s = s2(rho1, rho2, m1, m2, fam).value;
  const auto star1 = minimizer_rho1(rho2, m1);
  const double a = s2(star1, rho2, m1, m2, fam).value;
  r.rho1_identity = std::abs(a - s1(rho2, k2));
  const auto arcs = minimizer_rho2_arcs(rho1, m2);
  r.nested = arcs.kept.size() < arcs.all.size();
  const auto star2 = minimizer_rho2(rho1, m2);
  const double b = s2(rho1, star2, m1, m2, fam).value;
  r.rho2_identity = std::abs(b - s1(rho1, k1));
  r.excess = std::abs(s - s1(rho1, k1) - s2_excess_over_s1(rho1, rho2, m2, fam));
  r.optimality = std::max({0.0, a - s, b - s});
  return r;
}

void suite_minimizers(Context& ctx) {
  const long count = ctx.count(20);
  auto& t = ctx.table("minimizer-identities",
                      {"family", "instance", "rho1_identity", "rho2_identity", "excess_identity", "optimality", "nested"});
  double worst = 0;
  int nested = 0;
  for (Family fam : {Family::Tasep, Family::Had}) {
    std::vector<IdentityResiduals> rows(static_cast<std::size_t>(count) + 1);
    parallel_for(rows.size(), ctx.config.threads, [&](std::size_t i) {
      if (i == rows.size() - 1) {
        // two bumps above m2 = 1/2 whose extended arcs nest
        const auto rho1 = combine(TorusMeasure::indicator(Rational(3, 10), Rational(7, 20)), 1,
                                  TorusMeasure::indicator(Rational(2, 5), Rational(3, 5)), 1);
        rows[i] = identity_residuals(rho1, minimizer_rho2(rho1, Rational(1, 2)), fam);
        return;
      }
      Rng rng(ctx.seed((fam == Family::Had ? 1'000'000 : 0) + i));
      const auto inst = random_chain(rng, fam, 2, 8, 8, 4);
      rows[i] = identity_residuals(inst.rho[0], inst.rho[1], fam);
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      worst = std::max({worst, r.rho1_identity, r.rho2_identity, r.excess, r.optimality});
      nested += r.nested;
      t.add({family_name(fam), i + 1 == rows.size() ? "nested" : std::to_string(i), format_double(r.rho1_identity),
             format_double(r.rho2_identity), format_double(r.excess), format_double(r.optimality),
             r.nested ? "1" : "0"});
    }
  }
  ctx.check("minimizer-identities", worst, "<=", ctx.tolerance("minimizer-identities", 1e-12),
            std::to_string(count) + " random instances per family plus the nested one");
  ctx.check("minimizer-nested-instances", nested, ">=", 1, "instances whose extended arcs nest");
}

// --- 8 -------------------------------------------------------------------------

void suite_nonconvexity(Context& ctx) {
  const auto cert = nonconvexity_certificate();
  auto& t = ctx.table("nonconvexity", {"c", "margin"});
  for (const auto& p : cert.points) t.add({format_rational(p.c), format_double(p.margin)});
  t.add({"limit", format_double(cert.limit)});
  ctx.check("nonconvexity-margin", cert.points.back().margin, "<", 0,
            "margin at c = 999/1000; limit " + format_double(cert.limit));

  const Rational e(1, 10);
  auto ind = [](const Rational& a, const Rational& b, const Rational& h) { return TorusMeasure::indicator(a, b, h); };
  auto add = [](const TorusMeasure& x, const TorusMeasure& y) { return combine(x, 1, y, 1); };
  const Rational r18(1, 8), r14(1, 4), r38(3, 8), r12(1, 2), r58(5, 8), r34(3, 4), r78(7, 8);
  const std::vector<TorusMeasure> psi{ind(r18, r18 + e, 2), add(ind(0, e, 4), ind(r78, r78 + e, 4)),
                                      add(ind(r14, r14 + e, 4), ind(r12, r12 + e, 8))};
  const std::vector<TorusMeasure> tilde{ind(r58, r58 + e, 2), add(ind(r38, r38 + e, 4), ind(r34, r34 + e, 4)), psi[2]};
  const std::vector<TorusMeasure> rho{ind(r14, r14 + e / 2, 4), add(ind(r14, r14 + e, 4), ind(r12, r12 + e / 2, 8)),
                                      psi[2]};
  std::vector<TorusMeasure> mid;
  for (int i = 0; i < 3; ++i) mid.push_back(combine(psi[i], Rational(1, 2), tilde[i], Rational(1, 2)));
  const int failures = !(collapse_k(psi).parts() == rho) + !(collapse_k(tilde).parts() == rho) +
                       (collapse_k(mid).parts() == rho);
  ctx.check("constraint-set-nonconvex", failures, "==", 0,
            "both triples collapse onto rho exactly and the midpoint does not (eps = 1/10)");
}

// --- 9 -------------------------------------------------------------------------

void suite_ldp(Context& ctx) {
  const std::vector<long> sizes{100, 1000, 10000};
  Rng rng(ctx.seed(0));
  std::vector<Rational> four;
  for (;;) {
    four.clear();
    long sum = 0;
    for (int b = 0; b < 4; ++b) {
      const int j = rng.index(26);
      sum += j;
      Rational d(j, 25);
      d.canonicalize();
      four.push_back(d);
    }
    if (sum > 0 && sum < 100) break;
  }
  const std::vector<std::vector<Rational>> profiles{{Rational(1, 2), Rational(0)}, four};
  auto& t = ctx.table("ldp-decay", {"bins", "profile", "N", "decay", "s1", "gap", "bound"});
  int over = 0, not_decreasing = 0;
  for (const auto& p : profiles) {
    std::string name;
    for (const auto& d : p) name += (name.empty() ? "" : " ") + format_rational(d);
    const auto rows = ldp_decay_exact(p, sizes);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      over += rows[i].gap > rows[i].bound;
      if (i > 0) not_decreasing += !(rows[i].gap < rows[i - 1].gap);
      t.add({std::to_string(p.size()), name, std::to_string(rows[i].n), format_double(rows[i].decay),
             format_double(rows[i].s1), format_double(rows[i].gap), format_double(rows[i].bound)});
    }
  }
  ctx.check("ldp-gap-bound", over, "==", 0, "gaps above B (1 + log(N + 1)) / N");
  ctx.check("ldp-gap-decreasing", not_decreasing, "==", 0, "consecutive N with a non-decreasing gap");
}

// --- 10 ------------------------------------------------------------------------

// First-class points in [0, 1/4), second-class points in [1/2, 3/4).
HadState clustered_had_state(Rng& rng, int first, int second) {
  const std::uint64_t quarter_bits = kDyadicBits - 2;
  std::set<std::uint64_t> a, b;
  while (static_cast<int>(a.size()) < first) a.insert(rng.bits() >> (64 - quarter_bits));
  while (static_cast<int>(b.size()) < second) b.insert((rng.bits() >> (64 - quarter_bits)) + (std::uint64_t{1} << (kDyadicBits - 1)));
  HadState s;
  s.layers.emplace_back(a.begin(), a.end());
  std::vector<std::uint64_t> all(a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  s.layers.push_back(all);
  return s;
}

struct HadSeedResult {
  double p_gap = 0, p_first = 0, p = 0;
};

HadSeedResult had_seed(const Context& ctx, std::uint64_t seed, int replicas, double horizon) {
  const ProcessSpec spec{Model::Had, 0, {8, 8}};
  std::vector<double> a1, b1, a2, b2;
  std::vector<HadSpacing> inv(static_cast<std::size_t>(replicas)), sim(static_cast<std::size_t>(replicas));
  parallel_for(inv.size(), ctx.config.threads, [&](std::size_t r) {
    Rng rng(derive_seed(seed, 2 * r));
    inv[r] = had_spacing(HadState::from_points(sample_invariant_had(spec, rng)));
    Rng rng2(derive_seed(seed, 2 * r + 1));
    auto state = clustered_had_state(rng2, 8, 8);
    had_simulate(state, horizon, rng2);
    sim[r] = had_spacing(state);
  });
  for (std::size_t r = 0; r < inv.size(); ++r) {
    a1.push_back(inv[r].max_second_gap);
    b1.push_back(inv[r].first_class_gaps);
    a2.push_back(sim[r].max_second_gap);
    b2.push_back(sim[r].first_class_gaps);
  }
  HadSeedResult out;
  out.p_gap = ks_two_sample(a1, a2).p_value;
  out.p_first = ks_two_sample(b1, b2).p_value;
  out.p = std::min(1.0, 2 * std::min(out.p_gap, out.p_first));
  return out;
}

void suite_had(Context& ctx) {
  const int replicas = ctx.config.replicas.value_or(1000);
  const double horizon = ctx.config.horizon.value_or(2000);
  auto& t = ctx.table("had-invariance", {"seed", "horizon", "p_max_second_gap", "p_first_class_gaps", "p_combined"});
  int accepted = 0, rejected_short = 0;
  for (std::uint64_t s = 0; s < 8; ++s) {
    const std::uint64_t seed = ctx.seed(s);
    const auto r = had_seed(ctx, seed, replicas, horizon);
    accepted += r.p > 0.01;
    t.add({std::to_string(seed), format_double(horizon), format_double(r.p_gap), format_double(r.p_first), format_double(r.p)});
    // negative control: the clustered start after a very short run
    const auto c = had_seed(ctx, seed, replicas, 20);
    rejected_short += c.p <= 0.01;
    t.add({std::to_string(seed), "20", format_double(c.p_gap), format_double(c.p_first), format_double(c.p)});
  }
  ctx.check("had-invariance", accepted, ">=", 7,
            "seeds with combined KS p > 0.01 (N2 = 16, N1 = 8, " + std::to_string(replicas) + " replicas)");
  ctx.check("had-negative-control", rejected_short, ">=", 7, "seeds rejecting the clustered start at horizon 20");
}

// --- 11 ------------------------------------------------------------------------

void suite_recursive(Context& ctx) {
  const long count = ctx.count(10);
  auto& t = ctx.table("recursive-relation", {"instance", "direct", "recursive", "difference", "minimizers", "checked"});
  SkOracleOptions opt;
  opt.lattice = {4, 16};
  opt.threads = ctx.config.threads;
  double worst = 0;
  for (long i = 0; i < count; ++i) {
    Rng rng(ctx.seed(static_cast<std::uint64_t>(i)));
    const auto inst = random_chain(rng, Family::Tasep, 3, 4, 4, 2);
    const auto d = sk_oracle(inst.rho, inst.masses, Family::Tasep, opt);
    const auto r = sk_oracle_recursive(inst.rho, inst.masses, Family::Tasep, opt);
    const double diff = d.finite && r.finite ? std::abs(d.value - r.value) : kInfinity;
    worst = std::max(worst, diff);
    t.add({std::to_string(i), format_double(d.value), format_double(r.value), format_double(diff),
           std::to_string(d.minimizers), std::to_string(d.checked)});
  }
  ctx.check("recursive-relation", worst, "<=", ctx.tolerance("recursive-relation", 1e-2),
            std::to_string(count) + " three-class instances on a 4-cell lattice, densities in Z/16");
}

using SuiteFn = void (*)(Context&);

const std::vector<SuiteFn>& suite_functions() {
  static const std::vector<SuiteFn> fns{suite_stationarity, suite_flux,       suite_order,       suite_commutation,
                                        suite_measure_representation, suite_s2_oracle, suite_minimizers,
                                        suite_nonconvexity, suite_ldp,        suite_had,         suite_recursive};
  return fns;
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& config) {
  const auto& names = suite_names();
  std::vector<std::size_t> selected;
  if (config.suite == "all") {
    for (std::size_t i = 0; i < names.size(); ++i) selected.push_back(i);
  } else {
    const auto it = std::find(names.begin(), names.end(), config.suite);
    if (it == names.end()) throw Error("unknown suite '" + config.suite + "'");
    selected.push_back(static_cast<std::size_t>(it - names.begin()));
  }
  SuiteReport report;
  report.config = config;
  for (std::size_t i : selected) {
    Context ctx{config, report, names[i], static_cast<int>(i) + 1};
    try {
      suite_functions()[i](ctx);
    } catch (const std::exception& e) {
      ctx.check(names[i] + "-error", 1, "==", 0, e.what());
    }
  }
  if (!config.out_dir.empty()) report.write(config.out_dir);
  return report;
}

}  // namespace tld
