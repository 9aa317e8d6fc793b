#include "homsamp/besov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "homsamp/error.hpp"
#include "homsamp/numeric.hpp"
#include "homsamp/parallel.hpp"

namespace homsamp {

void BesovParams::validate() const {
  if (!std::isfinite(s)) throw InvalidArgument("besov: s must be finite");
  if (!(p >= 1.0)) throw InvalidArgument("besov: p must be >= 1 (got " + std::to_string(p) + ")");
  if (!(q > 0.0)) throw InvalidArgument("besov: q must be > 0 (got " + std::to_string(q) + ")");
}

double sequence_lp_norm(const std::vector<double>& values, double p) {
  double scale = 0.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  if (std::isinf(p) || scale == 0.0) return scale;
  CompensatedSum s;
  for (double v : values) s.add(std::pow(std::abs(v) / scale, p));
  return scale * std::pow(s.value(), 1.0 / p);
}

std::vector<double> besov_level_terms(const CoefficientTable& coeffs, const BesovParams& params,
                                      double d) {
  params.validate();
  if (coeffs.empty()) throw InvalidArgument("besov: empty coefficient table");
  if (!(d > 0.0)) throw InvalidArgument("besov: dimension must be > 0");
  const double inv_p = std::isinf(params.p) ? 0.0 : 1.0 / params.p;
  const double exponent = params.s + d * (0.5 - inv_p);
  std::vector<double> terms(coeffs.level_count());
  parallel_for(terms.size(), [&](std::size_t l) {
    const int j = coeffs.j_min() + int(l);
    const auto level = coeffs.level(j);
    const double norm = sequence_lp_norm({level.begin(), level.end()}, params.p);
    terms[l] = norm == 0.0 ? 0.0 : level_scale(double(coeffs.base()), double(j) * exponent) * norm;
  });
  return terms;
}

double besov_norm(const CoefficientTable& coeffs, const BesovParams& params, double d) {
  return sequence_lp_norm(besov_level_terms(coeffs, params, d), params.q);
}

}  // namespace homsamp
