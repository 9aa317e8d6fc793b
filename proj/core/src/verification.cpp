#include "homsamp/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "homsamp/error.hpp"
#include "homsamp/numeric.hpp"
#include "homsamp/parallel.hpp"

namespace homsamp {
namespace {

std::size_t draw(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

double slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = double(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

// Sorted (distance, weight) list for every point within radius r of x.
std::vector<std::pair<double, double>> ring(const PointCloudSpace& space, std::size_t x, double r) {
  std::vector<std::size_t> members;
  space.ball(x, r, members, BallKind::closed);
  std::vector<std::pair<double, double>> out;
  out.reserve(members.size());
  for (std::size_t z : members) out.emplace_back(space.distance(x, z), space.weight(z));
  std::sort(out.begin(), out.end());
  return out;
}

// Mass of the open ball of radius r given a sorted ring and its prefix sums.
double mass_below(const std::vector<std::pair<double, double>>& sorted,
                  const std::vector<double>& prefix, double r) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), std::make_pair(r, -kInfinity));
  return prefix[std::size_t(it - sorted.begin())];
}

void check_radii(const PointCloudSpace& space, const std::vector<double>& radii) {
  if (radii.empty()) throw InvalidArgument("verify_space: empty radius list");
  for (double r : radii) {
    if (!(r > space.min_separation() && r < space.params().diam)) {
      throw InvalidArgument("verify_space: radius " + std::to_string(r) +
                            " outside the resolvable range (" +
                            std::to_string(space.min_separation()) + ", " +
                            std::to_string(space.params().diam) + ")");
    }
  }
}

}  // namespace

std::vector<std::size_t> sample_centres(const PointCloudSpace& space, std::size_t max_centres,
                                        std::uint64_t seed) {
  const std::size_t n = space.size();
  std::vector<std::size_t> ids(n);
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  if (max_centres >= n) return ids;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < max_centres; ++i) {
    std::swap(ids[i], ids[i + draw(rng, n - i)]);
  }
  ids.resize(max_centres);
  std::sort(ids.begin(), ids.end());
  return ids;
}

VerificationReport estimate_quasi_triangle(const PointCloudSpace& space, std::size_t budget,
                                           std::uint64_t seed) {
  if (budget == 0) throw InvalidArgument("verify_space: budget must be positive");
  VerificationReport rep;
  rep.axiom = "quasi-triangle";
  const std::size_t n = space.size();
  std::mt19937_64 rng(seed);
  double best = 0.0;
  for (std::size_t t = 0; t < budget; ++t) {
    const std::size_t x = draw(rng, n);
    const std::size_t y = draw(rng, n);
    const std::size_t z = draw(rng, n);
    const double num = space.distance(x, y);
    const double den = space.distance(x, z) + space.distance(z, y);
    if (den <= 0.0) continue;
    const double ratio = num / den;
    if (ratio > best) {
      best = ratio;
      rep.worst_witness = {x, y, z};
    }
  }
  rep.estimated_constant = best;
  rep.pass = best <= space.params().A;
  return rep;
}

double estimate_theta(const PointCloudSpace& space, std::size_t budget, std::uint64_t seed) {
  const std::size_t n = space.size();
  if (n < 3) return 1.0;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<std::pair<double, double>> samples;
  samples.reserve(budget);
  for (std::size_t t = 0; t < budget; ++t) {
    const std::size_t x = draw(rng, n);
    const std::size_t xp = draw(rng, n);
    const std::size_t y = draw(rng, n);
    if (x == xp) continue;
    const double a = space.distance(x, y);
    const double b = space.distance(xp, y);
    const double s = a + b;
    const double delta = std::abs(a - b);
    if (s <= 0.0 || delta <= 0.0) continue;
    samples.emplace_back(std::log(space.distance(x, xp) / s), std::log(delta / s));
  }
  if (samples.size() < 16) return 1.0;
  double umin = kInfinity;
  double umax = -kInfinity;
  for (const auto& [u, v] : samples) {
    umin = std::min(umin, u);
    umax = std::max(umax, u);
  }
  if (!(umax > umin)) return 1.0;
  constexpr std::size_t kBins = 16;
  std::vector<double> envelope(kBins, -kInfinity);
  for (const auto& [u, v] : samples) {
    auto b = static_cast<std::size_t>((u - umin) / (umax - umin) * double(kBins));
    b = std::min(b, kBins - 1);
    envelope[b] = std::max(envelope[b], v);
  }
  std::vector<double> us;
  std::vector<double> vs;
  for (std::size_t b = 0; b < kBins; ++b) {
    if (envelope[b] == -kInfinity) continue;
    us.push_back(umin + (double(b) + 0.5) / double(kBins) * (umax - umin));
    vs.push_back(envelope[b]);
  }
  if (us.size() < 3) return 1.0;
  return std::clamp(slope(us, vs), 0.05, 1.0);
}

double fit_dimension(const PointCloudSpace& space, const std::vector<double>& radii,
                     std::size_t max_centres, std::uint64_t seed) {
  if (radii.size() < 2) throw InvalidArgument("fit_dimension: need at least two radii");
  const auto centres = sample_centres(space, max_centres, seed);
  const double rmax = *std::max_element(radii.begin(), radii.end());
  std::vector<std::vector<double>> logs(centres.size(), std::vector<double>(radii.size()));
  parallel_for(centres.size(), [&](std::size_t c) {
    const auto sorted = ring(space, centres[c], rmax);
    std::vector<double> prefix(sorted.size() + 1, 0.0);
    for (std::size_t i = 0; i < sorted.size(); ++i) prefix[i + 1] = prefix[i] + sorted[i].second;
    for (std::size_t k = 0; k < radii.size(); ++k) {
      logs[c][k] = std::log(mass_below(sorted, prefix, radii[k]));
    }
  });
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    double acc = 0.0;
    for (std::size_t c = 0; c < centres.size(); ++c) acc += logs[c][k];
    xs.push_back(std::log(radii[k]));
    ys.push_back(acc / double(centres.size()));
  }
  return slope(xs, ys);
}

std::vector<VerificationReport> verify_space(const PointCloudSpace& space,
                                             const std::vector<double>& radii,
                                             const VerifyOptions& options) {
  if (options.budget == 0) throw InvalidArgument("verify_space: budget must be positive");
  check_radii(space, radii);
  const SpaceParams& params = space.params();
  std::vector<VerificationReport> reports;

  auto tri = estimate_quasi_triangle(space, options.budget, options.seed);
  tri.pass = tri.estimated_constant <= params.A * options.tolerance;
  tri.extras["declared_A"] = params.A;
  reports.push_back(tri);

  {
    VerificationReport rep;
    rep.axiom = "ball-measure";
    const auto centres = sample_centres(space, options.budget, options.seed);
    const double rmax = *std::max_element(radii.begin(), radii.end());
    std::vector<double> hi(centres.size(), 0.0);
    std::vector<double> lo(centres.size(), kInfinity);
    std::vector<std::size_t> hi_k(centres.size(), 0);
    std::vector<std::size_t> lo_k(centres.size(), 0);
    parallel_for(centres.size(), [&](std::size_t c) {
      const auto sorted = ring(space, centres[c], rmax);
      std::vector<double> prefix(sorted.size() + 1, 0.0);
      for (std::size_t i = 0; i < sorted.size(); ++i) prefix[i + 1] = prefix[i] + sorted[i].second;
      for (std::size_t k = 0; k < radii.size(); ++k) {
        const double ratio = mass_below(sorted, prefix, radii[k]) / std::pow(radii[k], params.d);
        if (ratio > hi[c]) {
          hi[c] = ratio;
          hi_k[c] = k;
        }
        if (ratio < lo[c]) {
          lo[c] = ratio;
          lo_k[c] = k;
        }
      }
    });
    const auto ih = std::size_t(std::max_element(hi.begin(), hi.end()) - hi.begin());
    const auto il = std::size_t(std::min_element(lo.begin(), lo.end()) - lo.begin());
    const double upper = hi[ih];
    const double lower = lo[il];
    const bool upper_binds = upper >= 1.0 / lower;
    rep.estimated_constant = std::max(upper, 1.0 / lower);
    rep.worst_witness = {upper_binds ? centres[ih] : centres[il]};
    rep.extras["witness_radius"] = radii[upper_binds ? hi_k[ih] : lo_k[il]];
    rep.extras["upper_ratio"] = upper;
    rep.extras["lower_ratio"] = lower;
    rep.extras["r_min_resolvable"] = space.min_separation();
    rep.extras["declared_C"] = params.C_reg;
    rep.extras["declared_d"] = params.d;
    if (radii.size() >= 2) {
      rep.extras["fitted_dimension"] = fit_dimension(space, radii, 4096, options.seed);
    }
    rep.pass = upper <= options.tolerance * params.C_reg &&
               lower >= 1.0 / (options.tolerance * params.C_reg);
    reports.push_back(rep);
  }

  {
    VerificationReport rep;
    rep.axiom = "rho-regularity";
    const std::size_t n = space.size();
    std::mt19937_64 rng(options.seed + 1);
    double best = 0.0;
    for (std::size_t t = 0; t < options.budget; ++t) {
      const std::size_t x = draw(rng, n);
      const std::size_t xp = draw(rng, n);
      const std::size_t y = draw(rng, n);
      if (x == xp) continue;
      const double a = space.distance(x, y);
      const double b = space.distance(xp, y);
      const double den =
          std::pow(space.distance(x, xp), params.theta) * std::pow(a + b, 1.0 - params.theta);
      if (den <= 0.0) continue;
      const double ratio = std::abs(a - b) / den;
      if (ratio > best) {
        best = ratio;
        rep.worst_witness = {x, xp, y};
      }
    }
    rep.estimated_constant = best;
    rep.extras["declared_theta"] = params.theta;
    rep.extras["fitted_theta"] = estimate_theta(space, options.budget, options.seed);
    rep.pass = best <= options.tolerance * params.C_reg;
    reports.push_back(rep);
  }
  return reports;
}

std::vector<double> resolvable_radii(const PointCloudSpace& space, std::size_t count,
                                     std::size_t min_points, double max_mass_fraction) {
  if (count < 2) throw InvalidArgument("resolvable_radii: count must be >= 2");
  const auto centres = sample_centres(space, 256, 0);
  const double target = max_mass_fraction * space.total_mass();
  double r_lo = space.min_separation();
  double r_hi = kInfinity;
  for (std::size_t x : centres) {
    std::vector<std::pair<double, double>> all;
    all.reserve(space.size());
    for (std::size_t z = 0; z < space.size(); ++z) all.emplace_back(space.distance(x, z), space.weight(z));
    std::sort(all.begin(), all.end());
    const std::size_t k = std::clamp<std::size_t>(min_points, 1, all.size());
    r_lo = std::max(r_lo, std::nextafter(all[k - 1].first, kInfinity));
    double acc = 0.0;
    for (const auto& [dist, w] : all) {
      acc += w;
      if (acc >= target) {
        r_hi = std::min(r_hi, dist);
        break;
      }
    }
  }
  r_hi = std::min(r_hi, std::nextafter(space.params().diam, 0.0));
  if (!(r_hi > r_lo)) {
    throw InvalidArgument("resolvable_radii: the cloud is too coarse for a radius sweep");
  }
  std::vector<double> radii(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = double(k) / double(count - 1);
    radii[k] = std::exp(std::log(r_lo) + t * (std::log(r_hi) - std::log(r_lo)));
  }
  return radii;
}

VerificationReport verify_ball_power(const PointCloudSpace& space, double alpha,
                                     const std::vector<double>& radii, std::size_t max_centres,
                                     double spread_limit, std::uint64_t seed) {
  if (radii.empty()) throw InvalidArgument("verify_ball_power: empty radius list");
  const double d = space.params().d;
  const auto centres = sample_centres(space, max_centres, seed);
  VerificationReport rep;
  rep.axiom = "ball-power";
  double lower = kInfinity;
  double upper = 0.0;
  std::size_t lo_c = 0;
  std::size_t hi_c = 0;
  for (std::size_t x : centres) {
    for (double r : radii) {
      const double ratio = ball_power_integral(space, x, r, alpha).value / std::pow(r, alpha + d);
      if (ratio < lower) {
        lower = ratio;
        lo_c = x;
      }
      if (ratio > upper) {
        upper = ratio;
        hi_c = x;
      }
    }
  }
  rep.estimated_constant = lower > 0.0 ? upper / lower : kInfinity;
  rep.worst_witness = {lo_c, hi_c};
  rep.extras["alpha"] = alpha;
  rep.extras["lower_ratio"] = lower;
  rep.extras["upper_ratio"] = upper;
  rep.pass = lower > 0.0 && rep.estimated_constant <= spread_limit;
  return rep;
}

}  // namespace homsamp
