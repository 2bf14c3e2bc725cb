#pragma once

// Brute-force minimisation of the contraction-principle variational problems,
// used as oracles for the closed-form rate functionals.

#include <cstddef>
#include <vector>

#include "tld/measure.hpp"
#include "tld/rate.hpp"

namespace tld {

struct DpOracleOptions {
  int subdivide = 2;          // subknots per cell of the common grid
  long quantum_den = 4096;    // cumulative values are multiples of 1/quantum_den
};

struct DpOracleResult {
  double value = kInfinity;
  bool finite = false;
  std::size_t transitions = 0;
};

/// Minimum of S1(psi1) + S1(rho2) over psi1 satisfying the plateau preimage
/// conditions, by dynamic programming over quantized cumulative functions on
/// each plateau.
DpOracleResult s2_dp_oracle(const TorusMeasure& rho1, const TorusMeasure& rho2, const Rational& m1,
                            const Rational& m2, Family family, const DpOracleOptions& options = {});

/// Measures constant on `cells` equal cells with densities in (1/density_den) Z.
struct Lattice {
  int cells = 4;
  long density_den = 16;
};

struct SkOracleOptions {
  Lattice lattice;
  double near_tol = 1e-9;          // candidates this close to the best count as minimizers
  std::size_t max_candidates = 2'000'000;
  int threads = 1;
};

struct SkOracleResult {
  double value = kInfinity;
  bool finite = false;
  std::size_t minimizers = 0;       // tuples within near_tol of the best
  std::size_t checked = 0;          // candidate tuples evaluated
  std::vector<TorusMeasure> best;   // best preimage (direct) or intermediate tuple (recursive)
};

/// Direct path: minimum of sum_i S1(psi_i) over lattice tuples with
/// C_k(psi) = rho, each constraint checked with the collapse operator.
SkOracleResult sk_oracle(const std::vector<TorusMeasure>& rho, const std::vector<Rational>& masses, Family family,
                         const SkOracleOptions& options = {});

/// Recursive path: S1(rho_k) plus the minimum of the closed-form S_{k-1}
/// over lattice tuples (phi_1..phi_{k-1}) ordered with C_{rho_k}[phi_i] = rho_i.
SkOracleResult sk_oracle_recursive(const std::vector<TorusMeasure>& rho, const std::vector<Rational>& masses,
                                   Family family, const SkOracleOptions& options = {});

/// Every lattice measure of the given mass (densities capped by `cap`).
std::vector<TorusMeasure> lattice_measures(const Lattice& lattice, const Rational& mass, const Rational& cap,
                                           std::size_t limit);

}  // namespace tld
