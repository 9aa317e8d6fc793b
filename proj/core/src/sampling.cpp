#include "homsamp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "homsamp/besov.hpp"
#include "homsamp/error.hpp"
#include "homsamp/numeric.hpp"
#include "homsamp/parallel.hpp"

namespace homsamp {

namespace {

void check_level(const DyadicSystem& system, int l) {
  if (!system.has_level(l)) {
    throw InvalidArgument("level " + std::to_string(l) + " outside the built range [" +
                          std::to_string(system.j_min()) + ", " + std::to_string(system.j_max()) +
                          "]");
  }
}

void check_function(const DyadicSystem& system, std::span<const double> f) {
  if (f.size() != system.point_count()) {
    throw InvalidArgument("function length does not match the point count");
  }
}

void check_exponent(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("p must be >= 1");
}

double inverse_p(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

}  // namespace

double sampling_alpha(double p, double d, double theta) {
  return std::max(1.0, d * inverse_p(p) / theta);
}

double sampling_beta(double p, double d, double theta) { return std::max(p / d, 1.0 / theta); }

int required_level(double epsilon, double K, double p, const SpaceParams& params, double kappa,
                   int base) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (!(K >= 1.0)) throw InvalidArgument("K must be >= 1");
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be > 0");
  if (base < 2) throw InvalidArgument("scale base must be >= 2");
  check_exponent(p);
  const double alpha = sampling_alpha(p, params.d, params.theta);
  const double beta = sampling_beta(p, params.d, params.theta);
  const double log_arg = std::log(kappa) + std::log(K) - alpha * std::log(epsilon);
  if (log_arg == 0.0) return 0;
  if (std::isinf(beta)) {
    return log_arg > 0.0 ? kUnboundedLevel : std::numeric_limits<int>::min();
  }
  const double raw = std::ceil(beta * log_arg / std::log(double(base)));
  if (raw >= double(kUnboundedLevel)) return kUnboundedLevel;
  if (raw <= double(std::numeric_limits<int>::min())) return std::numeric_limits<int>::min();
  return int(raw);
}

std::string status_name(SamplingStatus status) {
  switch (status) {
    case SamplingStatus::pass: return "pass";
    case SamplingStatus::fail: return "fail";
    case SamplingStatus::unresolvable: return "unresolvable";
  }
  return "unknown";
}

std::vector<double> sample_operator(const DyadicSystem& system, std::span<const double> f, int l) {
  check_level(system, l);
  check_function(system, f);
  const auto& labels = system.labels(l);
  const auto& cubes = system.level(l);
  std::vector<double> out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) out[x] = f[cubes[labels[x]].center];
  return out;
}

double sampling_error(const PointCloudSpace& space, const DyadicSystem& system,
                      std::span<const double> f, int l, double p) {
  const std::vector<double> s = sample_operator(system, f, l);
  std::vector<double> diff(f.size());
  for (std::size_t x = 0; x < f.size(); ++x) diff[x] = f[x] - s[x];
  return lp_norm(space, diff, p);
}

std::vector<double> cube_measures(const PointCloudSpace& space, const DyadicSystem& system, int l) {
  check_level(system, l);
  const auto& cubes = system.level(l);
  std::vector<double> out(cubes.size());
  for (std::size_t n = 0; n < cubes.size(); ++n) {
    CompensatedSum s;
    for (std::size_t x : cubes[n].members) s.add(space.weight(x));
    out[n] = s.value();
  }
  return out;
}

double discrete_norm(const PointCloudSpace& space, const DyadicSystem& system,
                     std::span<const double> f, int l, double p) {
  check_level(system, l);
  check_function(system, f);
  check_exponent(p);
  const auto& cubes = system.level(l);
  double scale = 0.0;
  for (const Cube& q : cubes) scale = std::max(scale, std::abs(f[q.center]));
  if (std::isinf(p) || scale == 0.0) return scale;
  const std::vector<double> mu = cube_measures(space, system, l);
  CompensatedSum s;
  for (std::size_t n = 0; n < cubes.size(); ++n) {
    s.add(std::pow(std::abs(f[cubes[n].center]) / scale, p) * mu[n]);
  }
  return scale * std::pow(s.value(), 1.0 / p);
}

SamplingProfile profile_function(const PointCloudSpace& space, const DyadicSystem& system,
                                 const WaveletFrame& frame, std::span<const double> f, double p,
                                 std::string name) {
  check_function(system, f);
  check_exponent(p);
  SamplingProfile out;
  out.name = std::move(name);
  out.p = p;
  out.lp_f = lp_norm(space, f, p);
  if (!(out.lp_f > 0.0)) throw InvalidArgument("sampling: the zero function has no relative error");
  const double d = space.params().d;
  const CoefficientTable coeffs = analyze(frame, space, f);
  out.besov_f = besov_norm(coeffs, {d * inverse_p(p), p, 1.0}, d);
  out.K_f = out.besov_f / out.lp_f;
  for (int l = system.j_min(); l <= system.j_max(); ++l) {
    out.error_per_level.push_back(sampling_error(space, system, f, l, p));
    out.discrete_per_level.push_back(discrete_norm(space, system, f, l, p));
  }
  return out;
}

SamplingReport evaluate_sampling(const SamplingProfile& profile, const SpaceParams& params,
                                 int j_min, int j_max, int base, double epsilon, double kappa,
                                 std::optional<double> fixed_K) {
  if (profile.error_per_level.size() != std::size_t(j_max - j_min + 1)) {
    throw InvalidArgument("sampling profile does not cover the level range");
  }
  SamplingReport r;
  r.lp_f = profile.lp_f;
  r.besov_f = profile.besov_f;
  r.K_f = profile.K_f;
  SamplingPlan& plan = r.plan;
  plan.epsilon = epsilon;
  plan.p = profile.p;
  plan.kappa = kappa;
  plan.K = fixed_K ? *fixed_K : std::max(1.0, profile.K_f);
  plan.alpha = sampling_alpha(profile.p, params.d, params.theta);
  plan.beta = sampling_beta(profile.p, params.d, params.theta);
  plan.formula_level = required_level(epsilon, plan.K, profile.p, params, kappa, base);
  if (fixed_K && profile.K_f > *fixed_K) {
    r.note = "K_f exceeds the class bound K";
  }
  if (plan.formula_level > j_max) {
    plan.level = plan.formula_level;
    r.status = SamplingStatus::unresolvable;
    r.note = "unresolvable: need finer discretization";
    return r;
  }
  plan.clamped = plan.formula_level < j_min;
  plan.level = std::max(plan.formula_level, j_min);
  const auto idx = std::size_t(plan.level - j_min);
  r.error = profile.error_per_level[idx];
  r.discrete_norm = profile.discrete_per_level[idx];
  r.pass_error = r.error <= epsilon * r.lp_f;
  r.pass_sandwich =
      (1.0 - epsilon) * r.lp_f <= r.discrete_norm && r.discrete_norm <= (1.0 + epsilon) * r.lp_f;
  r.status = r.pass_error && r.pass_sandwich ? SamplingStatus::pass : SamplingStatus::fail;
  return r;
}

SamplingReport verify_sampling_theorem(const PointCloudSpace& space, const DyadicSystem& system,
                                       const WaveletFrame& frame, std::span<const double> f,
                                       double epsilon, double kappa, double p,
                                       std::optional<double> fixed_K) {
  const SamplingProfile prof = profile_function(space, system, frame, f, p);
  return evaluate_sampling(prof, space.params(), system.j_min(), system.j_max(), system.base(),
                           epsilon, kappa, fixed_K);
}

KappaCalibration calibrate_kappa(const std::vector<SamplingProfile>& family,
                                 const SpaceParams& params, int j_min, int j_max, int base,
                                 const std::vector<double>& epsilons,
                                 std::optional<double> fixed_K) {
  if (family.empty()) throw InvalidArgument("calibrate_kappa: empty function family");
  if (epsilons.empty()) throw InvalidArgument("calibrate_kappa: empty epsilon list");
  KappaCalibration out;
  std::string last_fn;
  double last_eps = 0.0;
  for (int k = kKappaGridMin; k <= kKappaGridMax; ++k) {
    const double kappa = std::pow(1.25, k);
    bool all = true;
    for (const auto& prof : family) {
      for (double eps : epsilons) {
        const SamplingReport r =
            evaluate_sampling(prof, params, j_min, j_max, base, eps, kappa, fixed_K);
        if (r.status != SamplingStatus::pass) {
          all = false;
          last_fn = prof.name;
          last_eps = eps;
          break;
        }
      }
      if (!all) break;
    }
    if (all) {
      out.found = true;
      out.grid_index = k;
      out.kappa = kappa;
      out.binding_function = k == kKappaGridMin ? family.front().name : last_fn;
      out.binding_epsilon = k == kKappaGridMin ? epsilons.front() : last_eps;
      return out;
    }
  }
  out.worst_function = last_fn;
  out.worst_epsilon = last_eps;
  return out;
}

KappaCalibration calibrate_kappa(const PointCloudSpace& space, const DyadicSystem& system,
                                 const WaveletFrame& frame,
                                 const std::vector<std::vector<double>>& family,
                                 const std::vector<std::string>& names, double p,
                                 const std::vector<double>& epsilons) {
  if (names.size() != family.size()) throw InvalidArgument("calibrate_kappa: names/family mismatch");
  std::vector<SamplingProfile> profiles;
  for (std::size_t i = 0; i < family.size(); ++i) {
    profiles.push_back(profile_function(space, system, frame, family[i], p, names[i]));
  }
  return calibrate_kappa(profiles, space.params(), system.j_min(), system.j_max(), system.base(),
                         epsilons);
}

namespace {

/// index_sets[j - j_min][n] = sorted I_j^n; also fills R per level.
std::vector<std::vector<std::vector<std::size_t>>> index_sets(const PointCloudSpace& space,
                                                              const DyadicSystem& system,
                                                              double C_phi, int l,
                                                              std::vector<std::size_t>& R) {
  const auto& target = system.level(l);
  const std::size_t levels = system.level_count();
  std::vector<std::vector<std::vector<std::size_t>>> out(levels);
  R.assign(levels, 0);
  parallel_for(levels, [&](std::size_t li) {
    const int j = system.j_min() + int(li);
    const double radius = C_phi * system.scale(j);
    const auto& cubes = system.level(j);
    std::vector<std::vector<std::size_t>> per_point(space.size());
    std::vector<std::size_t> near;
    for (const Cube& q : cubes) {
      space.ball(q.center, radius, near, BallKind::closed);
      for (std::size_t x : near) per_point[x].push_back(q.index);
    }
    std::size_t r = 0;
    for (const auto& s : per_point) r = std::max(r, s.size());
    R[li] = r;
    std::vector<std::size_t> stamp(cubes.size(), 0);
    auto& sets = out[li];
    sets.resize(target.size());
    for (std::size_t n = 0; n < target.size(); ++n) {
      for (std::size_t x : target[n].members) {
        for (std::size_t k : per_point[x]) {
          if (stamp[k] != n + 1) {
            stamp[k] = n + 1;
            sets[n].push_back(k);
          }
        }
      }
      std::sort(sets[n].begin(), sets[n].end());
    }
  });
  return out;
}

CardinalityRecord count_sets(const PointCloudSpace& space, const DyadicSystem& system,
                             double C_phi, int l,
                             const std::vector<std::vector<std::vector<std::size_t>>>& sets,
                             std::vector<std::size_t> R) {
  CardinalityRecord c;
  c.l = l;
  c.C_phi = C_phi;
  c.R_per_level = std::move(R);
  c.R_measured = *std::max_element(c.R_per_level.begin(), c.R_per_level.end());
  const double d = space.params().d;
  for (std::size_t li = 0; li < sets.size(); ++li) {
    const int j = system.j_min() + int(li);
    std::vector<std::size_t> counts(system.level(j).size(), 0);
    for (const auto& s : sets[li]) {
      for (std::size_t k : s) ++counts[k];
    }
    const std::size_t top = *std::max_element(counts.begin(), counts.end());
    if (j <= l) {
      const double ratio = double(top) / level_scale(double(system.base()), double(l - j) * d);
      c.lambda_ratio.push_back(ratio);
      c.lambda_coarse_constant = std::max(c.lambda_coarse_constant, ratio);
    } else {
      c.lambda_ratio.push_back(0.0);
      c.lambda_fine_constant = std::max(c.lambda_fine_constant, top);
    }
    c.lambda_counts.push_back(std::move(counts));
  }
  return c;
}

}  // namespace

CardinalityRecord cardinality_diagnostics(const PointCloudSpace& space, const DyadicSystem& system,
                                          double C_phi, int l) {
  check_level(system, l);
  if (!(C_phi > 0.0)) throw InvalidArgument("cardinality_diagnostics: C_phi must be > 0");
  if (system.point_count() != space.size()) {
    throw InvalidArgument("cardinality_diagnostics: system and space differ in point count");
  }
  std::vector<std::size_t> R;
  const auto sets = index_sets(space, system, C_phi, l, R);
  return count_sets(space, system, C_phi, l, sets, std::move(R));
}

DiagnosticsRecord proof_diagnostics(const PointCloudSpace& space, const DyadicSystem& system,
                                    const WaveletFrame& frame, std::span<const double> f, int l,
                                    double p, double epsilon) {
  check_level(system, l);
  check_function(system, f);
  check_exponent(p);
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (frame.j_min() != system.j_min() || frame.j_max() != system.j_max()) {
    throw InvalidArgument("proof_diagnostics: frame and system level ranges differ");
  }
  DiagnosticsRecord out;
  out.p = p;
  out.epsilon = epsilon;
  std::vector<std::size_t> R;
  const auto sets = index_sets(space, system, frame.C_phi, l, R);
  out.counts = count_sets(space, system, frame.C_phi, l, sets, std::move(R));

  const CoefficientTable c = analyze(frame, space, f);
  for (std::size_t li = 0; li < sets.size(); ++li) {
    const int j = system.j_min() + int(li);
    const auto level = c.level(j);
    std::vector<double> e(sets[li].size());
    for (std::size_t n = 0; n < e.size(); ++n) {
      std::vector<double> vals;
      vals.reserve(sets[li][n].size());
      for (std::size_t k : sets[li][n]) vals.push_back(level[k]);
      e[n] = sequence_lp_norm(vals, p);
    }
    out.E.push_back(std::move(e));
  }

  const double d = space.params().d;
  const double theta = space.params().theta;
  const double b = double(system.base());
  const double ip = inverse_p(p);
  std::vector<double> term(sets.size());
  CompensatedSum bracket;
  for (std::size_t li = 0; li < sets.size(); ++li) {
    const int j = system.j_min() + int(li);
    const auto level = c.level(j);
    const double norm = sequence_lp_norm({level.begin(), level.end()}, p);
    const double exponent = j <= l ? double(j) * (d / 2.0 + theta - d * ip) - double(l) * theta
                                   : double(j) * d / 2.0 - double(l) * d * ip;
    term[li] = norm == 0.0 ? 0.0 : level_scale(b, exponent) * norm;
    bracket.add(term[li]);
  }
  out.error = sampling_error(space, system, f, l, p);
  out.bracket = bracket.value();
  out.Cp_estimate = out.bracket > 0.0 ? out.error / out.bracket : 0.0;
  out.j0 = out.Cp_estimate > 0.0
               ? double(l) - std::log(2.0 * out.Cp_estimate / epsilon) / (theta * std::log(b))
               : double(l);
  CompensatedSum ia;
  CompensatedSum ib;
  CompensatedSum ii;
  for (std::size_t li = 0; li < sets.size(); ++li) {
    const double j = double(system.j_min() + int(li));
    if (j > double(l)) {
      ii.add(term[li]);
    } else if (j <= out.j0) {
      ia.add(term[li]);
    } else {
      ib.add(term[li]);
    }
  }
  out.term_I_a = out.Cp_estimate * ia.value();
  out.term_I_b = out.Cp_estimate * ib.value();
  out.term_II = out.Cp_estimate * ii.value();
  return out;
}

}  // namespace homsamp
