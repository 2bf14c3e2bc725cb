#pragma once

// Positive measures on the unit torus: piecewise-constant density plus
// finitely many atoms, all in exact rational arithmetic.

#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

#include "tld/lattice.hpp"
#include "tld/rational.hpp"

namespace tld {

struct Atom {
  Rational at;
  Rational mass;
  bool operator==(const Atom&) const = default;
};

/// Closed arc [start, start + length] of the torus, 0 < length <= 1.
struct Arc {
  Rational start;
  Rational length;

  Rational end() const { return wrap_unit(start + length); }
  bool full() const { return length == 1; }
  bool contains(const Rational& x) const;
  bool operator==(const Arc&) const = default;
};

/// Constant-density run used to assemble measures; zero elsewhere.
struct Piece {
  Rational start;
  Rational length;
  Rational density;
};

class TorusMeasure {
 public:
  /// The zero measure.
  TorusMeasure();

  /// Cell j is [breakpoints[j], breakpoints[j+1]) with the last cell wrapping
  /// through 0. Empty breakpoints mean zero density.
  TorusMeasure(std::vector<Rational> breakpoints, std::vector<Rational> densities,
               std::vector<Atom> atoms = {});

  static TorusMeasure constant(const Rational& density);
  static TorusMeasure from_pieces(std::span<const Piece> pieces, std::vector<Atom> atoms = {});
  /// height * indicator of the arc from `a` rightward to `b` (b may equal 1).
  static TorusMeasure indicator(const Rational& a, const Rational& b, const Rational& height = 1);
  static TorusMeasure atomic(std::vector<Atom> atoms);

  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<Rational>& densities() const { return densities_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const Rational& total_mass() const { return total_mass_; }

  bool absolutely_continuous() const { return atoms_.empty(); }
  bool bounded_density() const;  // density <= 1 everywhere
  Rational max_density() const;

  /// Density of the cell containing x, x in [0,1).
  Rational density_at(const Rational& x) const;
  Rational atom_at(const Rational& x) const;

  /// Integral of the density over the arc from a rightward to b; zero when a == b.
  Rational density_integral(const Rational& a, const Rational& b) const;

  /// Merges equal neighbouring cells and orders atoms.
  TorusMeasure canonical() const;

  TorusMeasure scaled(const Rational& factor) const;

  bool operator==(const TorusMeasure& other) const;

 private:
  Rational integral_from_zero(const Rational& t) const;  // t in [0,1]
  void build_cache();

  std::vector<Rational> breakpoints_;
  std::vector<Rational> densities_;
  std::vector<Atom> atoms_;
  Rational total_mass_;
  // Segments of [0,1) in increasing order (wrap cell split at 0).
  std::vector<Rational> seg_start_;
  std::vector<Rational> seg_density_;
  std::vector<Rational> seg_prefix_;
};

/// Nonnegative linear combination; throws if the result would be negative.
TorusMeasure combine(const TorusMeasure& a, const Rational& ca, const TorusMeasure& b, const Rational& cb);

/// Mass of the half-open cyclic interval (a, b]; empty when a == b.
Rational interval_mass(const TorusMeasure& rho, const Rational& a, const Rational& b);

/// Sorted union of breakpoints and atom locations (plus `extra`), always containing 0.
std::vector<Rational> common_grid(std::initializer_list<const TorusMeasure*> measures,
                                  std::span<const Rational> extra = {});

/// Setwise order: density and atoms of `lower` never exceed those of `upper`.
OrderCheck validate_ordered(std::span<const TorusMeasure> parts);
bool dominated_by(const TorusMeasure& lower, const TorusMeasure& upper);

/// Maximal closed arcs where two densities agree.
struct PlateauDecomposition {
  std::vector<Arc> intervals;
  bool full = false;  // the densities agree everywhere

  std::vector<Arc> complement() const;
  bool contains(const Rational& x) const;
};

/// Plateaus of (rho1, rho2). With eq_tol > 0 densities are equal when
/// |d1 - d2| <= eq_tol * max(|d1|, |d2|). Rejects measures with atoms.
PlateauDecomposition plateau_set(const TorusMeasure& rho1, const TorusMeasure& rho2, double eq_tol = 0.0);

struct Knot {
  Rational offset;  // distance from the base point along the arc
  Rational value;
  bool operator==(const Knot&) const = default;
};

/// Piecewise-linear function on a closed arc, -infinity outside it.
class CumulativeFunction {
 public:
  CumulativeFunction(Arc base, std::vector<Knot> knots);

  const Arc& base() const { return base_; }
  const std::vector<Knot>& knots() const { return knots_; }

  /// Value at distance t from the base point; nullopt (minus infinity) outside [0, length].
  std::optional<Rational> at_offset(const Rational& t) const;
  /// Value at torus position u.
  std::optional<Rational> at(const Rational& u) const;
  std::vector<Rational> slopes() const;
  bool nondecreasing() const;

 private:
  Arc base_;
  std::vector<Knot> knots_;
};

/// Cumulative mass of rho along the arc, with a knot at every breakpoint inside it.
CumulativeFunction cumulative(const TorusMeasure& rho, const Arc& base);

struct Envelope {
  CumulativeFunction hull;
  TorusMeasure density;  // slope of the hull on the arc, zero off the arc
};

/// Smallest concave majorant of a nondecreasing piecewise-linear function.
Envelope concave_envelope(const CumulativeFunction& f);

}  // namespace tld
