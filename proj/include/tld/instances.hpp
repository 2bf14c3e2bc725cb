#pragma once

// Seeded random inputs shared by the suites and the acceptance run.

#include <utility>
#include <vector>

#include "tld/dynamics.hpp"
#include "tld/measure.hpp"
#include "tld/rate.hpp"

namespace tld {

struct ChainInstance {
  std::vector<TorusMeasure> rho;  // ordered, masses strictly increasing
  std::vector<Rational> masses;
};

/// Ordered k-tuple constant on `cells` equal cells. The top profile has
/// densities in (1/top_den) Z (below 1 for TASEP, at most 2 for HAD); each
/// lower profile equals the one above on some cells and is a multiple j/fraction_den
/// of it elsewhere, so plateaus are common.
ChainInstance random_chain(Rng& rng, Family family, int k, int cells, long top_den, int fraction_den);

/// Discrete pair (eta1, eta2) with M1 <= M2 on a ring of size at most max_n.
std::pair<TorusConfig, TorusConfig> random_discrete_pair(Rng& rng, int max_n);

/// Piecewise-constant measure with up to `max_cells` cells and `max_atoms` atoms on the
/// 1/denominator grid; densities and atom masses in (1/8) Z.
TorusMeasure random_grid_measure(Rng& rng, int max_cells, int max_atoms, int denominator);

/// Measures with mass(a) <= mass(b), both positive.
std::pair<TorusMeasure, TorusMeasure> random_measure_pair(Rng& rng);

}  // namespace tld
