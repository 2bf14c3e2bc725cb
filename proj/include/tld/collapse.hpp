#pragma once

// Collapsing of a smaller configuration onto a larger one: discrete ring,
// point sets on the torus and measures, plus the k-fold composition.

#include <vector>

#include "tld/lattice.hpp"
#include "tld/measure.hpp"
#include "tld/rational.hpp"

namespace tld {

/// Maximal piece of the positive-flux set; always open on the right.
struct FluxInterval {
  Rational left;
  Rational right;
  bool left_closed = false;
  bool operator==(const FluxInterval&) const = default;
};

struct FluxProfile {
  enum class Domain { Sites, Grid };

  Domain domain = Domain::Sites;
  // Sites 0..N-1 in the discrete regime; refined breakpoints in the measure regime.
  std::vector<Rational> positions;
  std::vector<Rational> values;       // J at each position
  std::vector<Rational> left_values;  // J just left of each position (J(x-1) on sites)
  std::vector<FluxInterval> intervals;
  // Signed difference between collapsed and original: point mass at each
  // position and mass on the cell from it to the next position.
  std::vector<Rational> gamma_atoms;
  std::vector<Rational> gamma_cells;
  bool full = false;  // J > 0 on the whole torus

  Rational gamma_total() const;
};

struct DiscreteCollapse {
  TorusConfig result;
  FluxProfile flux;
};

/// Moves particles one at a time following `order` (initial sites of η1's particles).
TorusConfig collapse_discrete_algorithmic(const TorusConfig& eta1, const TorusConfig& eta2,
                                          std::span<const int> order);
/// Same with particles taken in ascending site order.
TorusConfig collapse_discrete_algorithmic(const TorusConfig& eta1, const TorusConfig& eta2);

DiscreteCollapse collapse_discrete_flux(const TorusConfig& eta1, const TorusConfig& eta2);

inline TorusConfig collapse(const TorusConfig& eta1, const TorusConfig& eta2) {
  return collapse_discrete_flux(eta1, eta2).result;
}

PointConfig collapse_points(const PointConfig& x, const PointConfig& y);
inline PointConfig collapse(const PointConfig& x, const PointConfig& y) { return collapse_points(x, y); }

enum class FluxMethod { Linear, Quadratic };
enum class Construction { Representation, Ledger };

struct MeasureCollapseOptions {
  FluxMethod method = FluxMethod::Linear;
  Construction construction = Construction::Representation;
};

struct MeasureCollapse {
  TorusMeasure result;
  FluxProfile flux;
};

MeasureCollapse collapse_measure(const TorusMeasure& rho1, const TorusMeasure& rho2,
                                 const MeasureCollapseOptions& options = {});
inline TorusMeasure collapse(const TorusMeasure& rho1, const TorusMeasure& rho2) {
  return collapse_measure(rho1, rho2).result;
}

inline std::size_t mass_of(const TorusConfig& c) { return static_cast<std::size_t>(c.particles()); }
inline std::size_t mass_of(const PointConfig& c) { return c.size(); }
inline const Rational& mass_of(const TorusMeasure& m) { return m.total_mass(); }

/// xi_k = eta_k and xi_i = C_{eta_k}[... C_{eta_{i+1}}[eta_i] ...].
template <class T>
OrderedTuple<T> collapse_k(const std::vector<T>& parts) {
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (mass_of(parts[i]) > mass_of(parts[i + 1])) {
      throw Error("collapse_k needs nondecreasing masses");
    }
  }
  std::vector<T> out(parts.size());
  if (parts.empty()) return OrderedTuple<T>(out);
  out.back() = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) {
    T x = parts[i];
    for (std::size_t j = i + 1; j < parts.size(); ++j) x = collapse(x, parts[j]);
    out[i] = std::move(x);
  }
  return OrderedTuple<T>(std::move(out));
}

enum class EmpiricalMode { Atomic, Binned };

/// (1/N) sum of unit masses at x/N, or density one on [x/N - 1/2N, x/N + 1/2N).
TorusMeasure empirical(const TorusConfig& eta, EmpiricalMode mode = EmpiricalMode::Atomic);
/// (1/scale) sum of unit masses at the points.
TorusMeasure empirical(const PointConfig& x, long scale);

/// pi(C_k(tuple)) == C_k(pi(tuple)) as exact measures.
bool commutation_check(const std::vector<TorusConfig>& tuple, EmpiricalMode mode = EmpiricalMode::Atomic);
bool commutation_check(const std::vector<PointConfig>& tuple, long scale);

}  // namespace tld
