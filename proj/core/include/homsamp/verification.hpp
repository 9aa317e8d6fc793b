#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "homsamp/space.hpp"

namespace homsamp {

/// Outcome of one structural check. `estimated_constant` is recomputable
/// from `worst_witness` (and, for radius-dependent checks, the witness
/// radius stored in `extras`).
struct VerificationReport {
  std::string axiom;
  double estimated_constant = 0.0;
  std::vector<std::size_t> worst_witness;
  bool pass = false;
  std::map<std::string, double> extras;
};

struct VerifyOptions {
  std::size_t budget = 20000;   // sampled triples / centres
  double tolerance = 1.10;      // multiplicative slack on declared constants
  std::uint64_t seed = 0;
};

/// max over sampled triples (x, y, z) of rho(x,y) / (rho(x,z) + rho(z,y)).
VerificationReport estimate_quasi_triangle(const PointCloudSpace& space, std::size_t budget,
                                           std::uint64_t seed);

/// Regularity exponent fitted from the upper envelope of
/// log(|rho(x,y) - rho(x',y)| / S) against log(rho(x,x') / S),
/// S = rho(x,y) + rho(x',y). Clamped to [0.05, 1].
double estimate_theta(const PointCloudSpace& space, std::size_t budget, std::uint64_t seed);

/// Checks the quasi-triangle inequality, the two-sided ball-measure bound
/// and the regularity of rho against the declared parameters. Reports are
/// returned in that order. Radii must lie strictly between the smallest
/// nearest-neighbour distance and the diameter.
std::vector<VerificationReport> verify_space(const PointCloudSpace& space,
                                             const std::vector<double>& radii,
                                             const VerifyOptions& options = {});

/// Least-squares slope of the mean of log mu(B(x,r)) against log r.
double fit_dimension(const PointCloudSpace& space, const std::vector<double>& radii,
                     std::size_t max_centres = 4096, std::uint64_t seed = 0);

/// `count` log-spaced radii between the radius at which every sampled ball
/// holds at least `min_points` points and the radius at which some ball
/// reaches `max_mass_fraction` of the total mass.
std::vector<double> resolvable_radii(const PointCloudSpace& space, std::size_t count = 12,
                                     std::size_t min_points = 32,
                                     double max_mass_fraction = 0.4);

/// For one exponent alpha, the interval of
/// ball_power_integral(x, r, alpha) / r^{alpha + d} over the sampled centres
/// and the given radii. Passes when max/min <= spread_limit.
VerificationReport verify_ball_power(const PointCloudSpace& space, double alpha,
                                     const std::vector<double>& radii,
                                     std::size_t max_centres = 256, double spread_limit = 4.0,
                                     std::uint64_t seed = 0);

/// Centres used by the sweeps: every point when the cloud is small enough,
/// otherwise a seeded sample without replacement, sorted.
std::vector<std::size_t> sample_centres(const PointCloudSpace& space, std::size_t max_centres,
                                        std::uint64_t seed);

}  // namespace homsamp
