#pragma once

// Multiclass TASEP on Z_N and the HAD process on the torus under the basic
// coupling, exact stationary tables, and invariant samplers built by collapsing.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "tld/collapse.hpp"
#include "tld/lattice.hpp"
#include "tld/rational.hpp"

namespace tld {

enum class Model { Tasep, Had };

struct ProcessSpec {
  Model model = Model::Tasep;
  int ring = 0;                // N for TASEP; unused for HAD
  std::vector<int> deltas;     // particles of class i+1

  int classes() const { return static_cast<int>(deltas.size()); }
  /// M_j = deltas[0] + ... + deltas[j]: particles in layer j.
  std::vector<int> layer_sizes() const;
  void validate() const;
};

/// Seeded 64-bit generator shared by every stochastic routine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double exponential(double rate) { return std::exponential_distribution<double>(rate)(engine_); }
  int index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t& state);
/// Independent seed for replica `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// --- TASEP -----------------------------------------------------------------

/// Bond (x, x+1) update on a label vector: the stronger class (smaller
/// positive label, holes weakest) ends at x.
bool tasep_bond_update(std::vector<int>& labels, int x);

struct TasepEvent {
  double time = 0;
  int site = 0;       // left end of the bond
  bool changed = false;
};

/// Continuous-time run up to `horizon`; `on_event` sees the labels after each event.
void tasep_simulate(std::vector<int>& labels, double horizon, Rng& rng,
                    const std::function<void(const TasepEvent&, const std::vector<int>&)>& on_event = {});

/// Time-weighted state frequencies over [burn_in, burn_in + horizon].
std::map<std::vector<int>, double> tasep_occupation(std::vector<int> labels, double burn_in, double horizon, Rng& rng);

struct StationaryTable {
  std::vector<std::vector<int>> states;  // lexicographic label vectors
  std::vector<Rational> probabilities;

  Rational total_variation(const StationaryTable& other) const;
  Rational probability_of(const std::vector<int>& state) const;
};

/// Exact solution of the balance equations of the k-class chain.
StationaryTable exact_stationary(const ProcessSpec& spec);

/// Exact law of C_k applied to independent uniform layers.
StationaryTable pushforward_distribution(const ProcessSpec& spec);

/// Uniform configuration with `particles` particles.
TorusConfig uniform_config(int ring, int particles, Rng& rng);
std::vector<TorusConfig> sample_invariant_tasep(const ProcessSpec& spec, Rng& rng);

// --- HAD -------------------------------------------------------------------

/// Layers of points stored as numerators over 2^53, each layer sorted.
struct HadState {
  std::vector<std::vector<std::uint64_t>> layers;

  static HadState from_points(const std::vector<PointConfig>& layers);
  std::vector<PointConfig> to_points() const;
};

constexpr int kDyadicBits = 53;

/// Applies the mark u to every layer: the nearest point strictly left of u
/// (cyclically) moves to u. Returns false if u hits an existing point.
bool had_apply_mark(HadState& state, std::uint64_t u);

struct HadEvent {
  double time = 0;
  std::uint64_t mark = 0;
};

/// Rate-one Poisson marks on the torus up to `horizon`.
void had_simulate(HadState& state, double horizon, Rng& rng,
                  const std::function<void(const HadEvent&, const HadState&)>& on_event = {});

/// `count` distinct uniform dyadic points.
PointConfig uniform_points(std::size_t count, Rng& rng);
std::vector<PointConfig> sample_invariant_had(const ProcessSpec& spec, Rng& rng);

}  // namespace tld
