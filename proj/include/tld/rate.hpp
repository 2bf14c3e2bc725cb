#pragma once

// Rate functionals of one- and two-class empirical measures, their
// minimizers, and exact finite-N decay rates.

#include <limits>
#include <string>
#include <vector>

#include "tld/measure.hpp"
#include "tld/rational.hpp"

namespace tld {

enum class Family { Tasep, Had };

const char* family_name(Family f);
Family parse_family(const std::string& name);

/// h_m (exclusion) or k_m (Poisson) relative entropy density. k_m carries the
/// -x + m terms so it is pointwise nonnegative; its integral against a
/// mass-m density equals that of x log(x/m).
class EntropyKernel {
 public:
  EntropyKernel(Family family, Rational m);

  Family family() const { return family_; }
  const Rational& m() const { return m_; }

  /// +infinity outside the domain ([0,1] for TASEP, [0,inf) for HAD).
  double operator()(const Rational& x) const;
  double operator()(double x) const;
  /// Integral of the kernel of a measure's density over the whole torus.
  double integral(const TorusMeasure& rho) const;
  /// Same restricted to a closed arc.
  double integral(const TorusMeasure& rho, const Arc& arc) const;

 private:
  Family family_;
  Rational m_;
  double md_;
};

constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// One-class rate: sum of cell_length * kernel(density), +infinity off the domain.
double s1(const TorusMeasure& rho, const EntropyKernel& kernel);

struct RateTerms {
  double complement = 0;  // off the plateaus, kernel_{m1}(rho1)
  double plateaus = 0;    // on the plateaus, kernel_{m1} of the envelope density
  double second = 0;      // kernel_{m2}(rho2) over the torus
};

struct RateResult {
  double value = kInfinity;
  bool finite = false;
  std::string reason;  // why the value is infinite
  bool diagonal = false;
  PlateauDecomposition plateaus;
  std::vector<TorusMeasure> envelopes;  // one per plateau, zero off it
  RateTerms terms;
};

/// Two-class rate functional.
RateResult s2(const TorusMeasure& rho1, const TorusMeasure& rho2, const Rational& m1, const Rational& m2,
              Family family);

/// Right-hand side of S2(rho1, rho2) - S1(rho1): kernel_{m2} of rho2 off the
/// plateaus plus kernel_{m2} of the envelope on them. Assumes s2 is finite.
double s2_excess_over_s1(const TorusMeasure& rho1, const TorusMeasure& rho2, const Rational& m2, Family family);

/// Whether C_{rho2}[psi1] = rho1, via the plateau conditions.
bool preimage_conditions(const TorusMeasure& psi1, const TorusMeasure& rho1, const TorusMeasure& rho2);

/// rho1 off the plateaus, the concave-envelope density on each plateau: the
/// preimage first profile attaining S2.
TorusMeasure optimal_preimage(const TorusMeasure& rho1, const TorusMeasure& rho2);

/// rho1 minimising S2(., rho2) at mass m1: the collapse of the constant m1.
TorusMeasure minimizer_rho1(const TorusMeasure& rho2, const Rational& m1);

/// rho2 minimising S2(rho1, .) at mass m2 > mass(rho1).
TorusMeasure minimizer_rho2(const TorusMeasure& rho1, const Rational& m2);

/// Arcs [w_i, v_i^r] used by minimizer_rho2, before and after dropping nested ones.
struct BumpArcs {
  std::vector<Arc> all;
  std::vector<Arc> kept;
};
BumpArcs minimizer_rho2_arcs(const TorusMeasure& rho1, const Rational& m2);

struct NonconvexityCertificate {
  struct Point {
    Rational c;
    double margin;
  };
  std::vector<Point> points;
  double most_negative = 0;
  double limit = 0;  // value of the margin as c -> 1
};

/// c S2(rho1, rho2) + (1-c) S2(rho1*, rho2) - S2(c rho1 + (1-c) rho1*, rho2) on
/// the exclusion counterexample rho1 = 1[1/4,1/2], rho1* = 1/2 1[1/2,1], rho2 = 1[1/4,1].
double nonconvexity_margin(const Rational& c);

/// Margins at c in {9/10, 99/100, 999/1000} and the c -> 1 limit.
NonconvexityCertificate nonconvexity_certificate();

struct ContractionResiduals {
  double first = 0;   // |S2(minimizer_rho1(rho), rho) - S1(rho)|, rho as the second profile
  double second = 0;  // |S2(rho, minimizer_rho2(rho)) - S1(rho)|, rho as the first profile
};

/// `rho` has mass m; m_low < m < m_high are the masses of the other profile.
ContractionResiduals contraction_identity_check(const TorusMeasure& rho, const Rational& m_low,
                                                const Rational& m_high, Family family);

struct LdpRow {
  long n = 0;
  double decay = 0;  // -(1/N) log P
  double s1 = 0;
  double gap = 0;    // |decay - s1|
  double bound = 0;  // B (1 + log(N + 1)) / N
  bool exact = true; // big-integer binomials (false: log-gamma)
};

/// Exact probability that N/B-site bins of a uniform configuration with
/// m N particles carry the given bin densities.
std::vector<LdpRow> ldp_decay_exact(const std::vector<Rational>& bin_densities, const std::vector<long>& sizes);

}  // namespace tld
