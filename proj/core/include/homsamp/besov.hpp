#pragma once

#include <vector>

#include "homsamp/coefficients.hpp"

namespace homsamp {

/// Exponents of B^s_{p,q}. p and q may be kInfinity.
struct BesovParams {
  double s = 0.0;
  double p = 2.0;  // [1, inf]
  double q = 1.0;  // (0, inf]

  void validate() const;
};

/// Per-level terms b^{j(s + d(1/2 - 1/p))} ||c_j||_{l^p}, indexed by j - j_min.
std::vector<double> besov_level_terms(const CoefficientTable& coeffs, const BesovParams& params,
                                      double d);

/// l^q norm of besov_level_terms over the table's levels.
double besov_norm(const CoefficientTable& coeffs, const BesovParams& params, double d);

/// Discrete l^p norm of a sequence (sup at p = inf), scaled to avoid overflow.
double sequence_lp_norm(const std::vector<double>& values, double p);

}  // namespace homsamp
