#include "tld/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace tld {

std::vector<int> ProcessSpec::layer_sizes() const {
  std::vector<int> out;
  int acc = 0;
  for (int d : deltas) out.push_back(acc += d);
  return out;
}

void ProcessSpec::validate() const {
  if (deltas.empty()) throw Error("process needs at least one class");
  for (int d : deltas) {
    if (d < 0) throw Error("class counts must be nonnegative");
  }
  if (model == Model::Tasep) {
    if (ring <= 0) throw Error("ring size must be positive");
    if (layer_sizes().back() > ring) throw Error("more particles than sites");
  }
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ splitmix64(stream);
  return splitmix64(state);
}

namespace {

int rank(int label, int holes_rank) { return label == 0 ? holes_rank : label; }

}  // namespace

bool tasep_bond_update(std::vector<int>& labels, int x) {
  const int n = static_cast<int>(labels.size());
  const int y = (x + 1) % n;
  const int weakest = n + 1;
  if (rank(labels[y], weakest) < rank(labels[x], weakest)) {
    std::swap(labels[x], labels[y]);
    return true;
  }
  return false;
}

void tasep_simulate(std::vector<int>& labels, double horizon, Rng& rng,
                    const std::function<void(const TasepEvent&, const std::vector<int>&)>& on_event) {
  const int n = static_cast<int>(labels.size());
  if (n == 0) return;
  double t = 0;
  for (;;) {
    t += rng.exponential(n);
    if (t > horizon) break;
    TasepEvent ev{t, rng.index(n), false};
    ev.changed = tasep_bond_update(labels, ev.site);
    if (on_event) on_event(ev, labels);
  }
}

std::map<std::vector<int>, double> tasep_occupation(std::vector<int> labels, double burn_in, double horizon, Rng& rng) {
  tasep_simulate(labels, burn_in, rng);
  std::map<std::vector<int>, double> freq;
  double last = 0;
  tasep_simulate(labels, horizon, rng, [&](const TasepEvent& ev, const std::vector<int>& now) {
    if (!ev.changed) return;
    // `now` is the state after the event; the previous state held until ev.time.
    std::vector<int> before = now;
    std::swap(before[ev.site], before[(ev.site + 1) % before.size()]);
    freq[before] += ev.time - last;
    last = ev.time;
  });
  freq[labels] += horizon - last;
  for (auto& [state, w] : freq) w /= horizon;
  return freq;
}

Rational StationaryTable::probability_of(const std::vector<int>& state) const {
  auto it = std::lower_bound(states.begin(), states.end(), state);
  if (it == states.end() || *it != state) return 0;
  return probabilities[static_cast<std::size_t>(it - states.begin())];
}

Rational StationaryTable::total_variation(const StationaryTable& other) const {
  std::set<std::vector<int>> all(states.begin(), states.end());
  all.insert(other.states.begin(), other.states.end());
  Rational sum = 0;
  for (const auto& s : all) sum += abs(Rational(probability_of(s) - other.probability_of(s)));
  return sum / 2;
}

namespace {

// Solves A x = b in place by Gaussian elimination over the rationals.
std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = a.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw InternalError("singular balance system");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    const Rational inv = 1 / a[col][col];
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational factor = a[r][col] * inv;
      for (std::size_t c = col; c < n; ++c) {
        if (a[col][c] != 0) a[r][c] -= factor * a[col][c];
      }
      b[r] -= factor * b[col];
    }
  }
  std::vector<Rational> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

}  // namespace

StationaryTable exact_stationary(const ProcessSpec& spec) {
  spec.validate();
  if (spec.model != Model::Tasep) throw Error("exact stationary tables exist only for TASEP");
  StationaryTable table;
  table.states = enumerate_label_vectors(spec.ring, spec.deltas);
  const std::size_t n = table.states.size();
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[table.states[i]] = i;

  // a[i][j] = rate j -> i, diagonal minus the exit rate; last row normalises.
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n, 0));
  for (std::size_t j = 0; j < n; ++j) {
    for (int x = 0; x < spec.ring; ++x) {
      auto next = table.states[j];
      if (!tasep_bond_update(next, x)) continue;
      const std::size_t i = index.at(next);
      a[i][j] += 1;
      a[j][j] -= 1;
    }
  }
  std::vector<Rational> b(n, 0);
  std::fill(a[n - 1].begin(), a[n - 1].end(), Rational(1));
  b[n - 1] = 1;
  table.probabilities = solve_exact(std::move(a), std::move(b));
  return table;
}

StationaryTable pushforward_distribution(const ProcessSpec& spec) {
  spec.validate();
  if (spec.model != Model::Tasep) throw Error("exact pushforward exists only for TASEP");
  const auto sizes = spec.layer_sizes();
  std::vector<std::vector<TorusConfig>> spaces;
  BigInt total = 1;
  for (int m : sizes) {
    spaces.push_back(enumerate_configs(spec.ring, m));
    total *= static_cast<unsigned long>(spaces.back().size());
  }
  if (total > 10000000) throw Error("pushforward enumeration refuses more than 1e7 tuples");

  std::map<std::vector<int>, long> counts;
  std::vector<std::size_t> pick(sizes.size(), 0);
  std::vector<TorusConfig> tuple(sizes.size());
  for (;;) {
    for (std::size_t j = 0; j < sizes.size(); ++j) tuple[j] = spaces[j][pick[j]];
    const auto collapsed = collapse_k(tuple);
    ++counts[class_label_encode(collapsed.parts())];
    std::size_t pos = 0;
    while (pos < pick.size() && ++pick[pos] == spaces[pos].size()) pick[pos++] = 0;
    if (pos == pick.size()) break;
  }
  StationaryTable table;
  for (const auto& [state, c] : counts) {
    table.states.push_back(state);
    Rational p(BigInt(c), total);
    p.canonicalize();
    table.probabilities.push_back(p);
  }
  return table;
}

TorusConfig uniform_config(int ring, int particles, Rng& rng) {
  std::vector<std::uint8_t> bits(ring, 0);
  std::fill(bits.begin(), bits.begin() + particles, 1);
  std::shuffle(bits.begin(), bits.end(), rng.engine());
  return TorusConfig(std::move(bits));
}

std::vector<TorusConfig> sample_invariant_tasep(const ProcessSpec& spec, Rng& rng) {
  spec.validate();
  std::vector<TorusConfig> layers;
  for (int m : spec.layer_sizes()) layers.push_back(uniform_config(spec.ring, m, rng));
  return collapse_k(layers).parts();
}

namespace {

std::uint64_t to_dyadic(const Rational& r) {
  Rational scaled = r * Rational(BigInt(1) << kDyadicBits);
  if (scaled.get_den() != 1) throw Error("HAD points must be multiples of 2^-53");
  return scaled.get_num().get_ui();
}

Rational from_dyadic(std::uint64_t v) {
  Rational r(BigInt(static_cast<unsigned long>(v)), BigInt(1) << kDyadicBits);
  r.canonicalize();
  return r;
}

}  // namespace

HadState HadState::from_points(const std::vector<PointConfig>& layers) {
  if (auto check = validate_ordered(std::span<const PointConfig>(layers)); !check.ok) throw OrderError(*check.violation);
  HadState s;
  for (const auto& layer : layers) {
    std::vector<std::uint64_t> pts;
    for (const auto& p : layer.points()) pts.push_back(to_dyadic(p));
    s.layers.push_back(std::move(pts));
  }
  return s;
}

std::vector<PointConfig> HadState::to_points() const {
  std::vector<PointConfig> out;
  for (const auto& layer : layers) {
    std::vector<Rational> pts;
    for (auto v : layer) pts.push_back(from_dyadic(v));
    out.emplace_back(std::move(pts));
  }
  return out;
}

bool had_apply_mark(HadState& state, std::uint64_t u) {
  for (const auto& layer : state.layers) {
    if (std::binary_search(layer.begin(), layer.end(), u)) return false;
  }
  for (auto& layer : state.layers) {
    if (layer.empty()) continue;
    auto it = std::lower_bound(layer.begin(), layer.end(), u);
    if (it == layer.begin()) {
      layer.pop_back();  // the last point wraps around to u
      layer.insert(layer.begin(), u);
    } else {
      --it;
      *it = u;  // stays sorted: no point lies strictly between *it and u
    }
  }
  return true;
}

void had_simulate(HadState& state, double horizon, Rng& rng,
                  const std::function<void(const HadEvent&, const HadState&)>& on_event) {
  double t = 0;
  for (;;) {
    t += rng.exponential(1.0);
    if (t > horizon) break;
    HadEvent ev{t, 0};
    do {
      ev.mark = rng.bits() >> (64 - kDyadicBits);
    } while (!had_apply_mark(state, ev.mark));
    if (on_event) on_event(ev, state);
  }
}

PointConfig uniform_points(std::size_t count, Rng& rng) {
  std::set<std::uint64_t> pts;
  while (pts.size() < count) pts.insert(rng.bits() >> (64 - kDyadicBits));
  std::vector<Rational> out;
  for (auto v : pts) out.push_back(from_dyadic(v));
  return PointConfig(std::move(out));
}

std::vector<PointConfig> sample_invariant_had(const ProcessSpec& spec, Rng& rng) {
  spec.validate();
  std::vector<PointConfig> layers;
  for (int m : spec.layer_sizes()) layers.push_back(uniform_points(static_cast<std::size_t>(m), rng));
  return collapse_k(layers).parts();
}

}  // namespace tld
