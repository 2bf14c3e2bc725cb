#pragma once

// Two-sample Kolmogorov-Smirnov test and spacing statistics of two-class HAD
// configurations.

#include <vector>

#include "tld/dynamics.hpp"

namespace tld {

struct KsResult {
  double statistic = 0;
  double p_value = 1;
};

/// Asymptotic two-sample KS test. Both samples need at least 50 values.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Kolmogorov survival function Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_survival(double lambda);

/// Scalars of a two-layer HAD state: the largest cyclic gap between consecutive
/// second-class points, and the summed gaps from each first-class point to the
/// next point of either class.
struct HadSpacing {
  double max_second_gap = 0;
  double first_class_gaps = 0;
};

HadSpacing had_spacing(const HadState& state);

}  // namespace tld
