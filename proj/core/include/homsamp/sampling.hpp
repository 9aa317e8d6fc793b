#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homsamp/dyadic.hpp"
#include "homsamp/frame.hpp"
#include "homsamp/space.hpp"

namespace homsamp {

/// Level returned by required_level when the formula has no finite answer
/// (p = inf makes beta infinite).
inline constexpr int kUnboundedLevel = std::numeric_limits<int>::max();

double sampling_alpha(double p, double d, double theta);
double sampling_beta(double p, double d, double theta);

/// l = ceil(beta * ln(kappa K / eps^alpha) / ln b). Not clamped.
int required_level(double epsilon, double K, double p, const SpaceParams& params, double kappa,
                   int base = 2);

struct SamplingPlan {
  double epsilon = 0.0;
  double K = 1.0;
  double p = 2.0;
  double alpha = 1.0;
  double beta = 1.0;
  double kappa = 1.0;
  int formula_level = 0;  // before clamping
  int level = 0;          // level actually used
  bool clamped = false;   // formula_level < j_min
};

enum class SamplingStatus { pass, fail, unresolvable };
std::string status_name(SamplingStatus status);

struct SamplingReport {
  SamplingPlan plan;
  double lp_f = 0.0;
  double besov_f = 0.0;
  double K_f = 0.0;  // besov_f / lp_f
  double error = 0.0;
  double discrete_norm = 0.0;
  bool pass_error = false;
  bool pass_sandwich = false;
  SamplingStatus status = SamplingStatus::unresolvable;
  std::string note;
};

/// (S_l f)(x) = f(a^l_n) where Q^l_n holds x.
std::vector<double> sample_operator(const DyadicSystem& system, std::span<const double> f, int l);

double sampling_error(const PointCloudSpace& space, const DyadicSystem& system,
                      std::span<const double> f, int l, double p);

/// (sum_n |f(a^l_n)|^p mu(Q^l_n))^{1/p}; max_n |f(a^l_n)| at p = inf.
double discrete_norm(const PointCloudSpace& space, const DyadicSystem& system,
                     std::span<const double> f, int l, double p);

/// mu(Q^l_n) for every cube of level l.
std::vector<double> cube_measures(const PointCloudSpace& space, const DyadicSystem& system, int l);

/// Everything about one function that does not depend on (eps, kappa):
/// norms and the error / discrete norm at every level of the system.
struct SamplingProfile {
  std::string name;
  double p = 2.0;
  double lp_f = 0.0;
  double besov_f = 0.0;
  double K_f = 0.0;
  std::vector<double> error_per_level;     // indexed by l - j_min
  std::vector<double> discrete_per_level;
};

SamplingProfile profile_function(const PointCloudSpace& space, const DyadicSystem& system,
                                 const WaveletFrame& frame, std::span<const double> f, double p,
                                 std::string name = {});

/// Applies the theorem check. K defaults to max(1, K_f); a fixed class bound
/// may be supplied instead.
SamplingReport evaluate_sampling(const SamplingProfile& profile, const SpaceParams& params,
                                 int j_min, int j_max, int base, double epsilon, double kappa,
                                 std::optional<double> fixed_K = std::nullopt);

SamplingReport verify_sampling_theorem(const PointCloudSpace& space, const DyadicSystem& system,
                                       const WaveletFrame& frame, std::span<const double> f,
                                       double epsilon, double kappa, double p = 2.0,
                                       std::optional<double> fixed_K = std::nullopt);

struct KappaCalibration {
  bool found = false;
  int grid_index = 0;  // kappa = 1.25^grid_index
  double kappa = 0.0;
  std::string binding_function;  // the last pair to start passing
  double binding_epsilon = 0.0;
  std::string worst_function;    // on failure: the pair failing at the largest kappa
  double worst_epsilon = 0.0;
};

inline constexpr int kKappaGridMin = -62;
inline constexpr int kKappaGridMax = 62;  // 1.25^62 ~ 2^20

/// Smallest kappa = 1.25^k, k in [kKappaGridMin, kKappaGridMax], for which
/// every (function, epsilon) pair passes.
KappaCalibration calibrate_kappa(const std::vector<SamplingProfile>& family,
                                 const SpaceParams& params, int j_min, int j_max, int base,
                                 const std::vector<double>& epsilons,
                                 std::optional<double> fixed_K = std::nullopt);

KappaCalibration calibrate_kappa(const PointCloudSpace& space, const DyadicSystem& system,
                                 const WaveletFrame& frame,
                                 const std::vector<std::vector<double>>& family,
                                 const std::vector<std::string>& names, double p,
                                 const std::vector<double>& epsilons);

/// Geometry-only counts of the proof.
struct CardinalityRecord {
  int l = 0;
  double C_phi = 0.0;
  /// max_x #I_j^x per level (index j - j_min) and overall
  std::vector<std::size_t> R_per_level;
  std::size_t R_measured = 0;
  /// #Lambda^k_{j,l} per level and cube
  std::vector<std::vector<std::size_t>> lambda_counts;
  /// max_k #Lambda^k_{j,l} / b^{(l-j)d} per level j <= l (0 for j > l)
  std::vector<double> lambda_ratio;
  double lambda_coarse_constant = 0.0;  // max over j <= l of lambda_ratio
  std::size_t lambda_fine_constant = 0;  // max over j > l of max_k #Lambda
};

/// I_j^x = {k : rho(x, y^j_k) <= C_phi b^{-j}}, Lambda^k_{j,l} = {n : k in I_j^n}
/// with I_j^n the union of I_j^x over x in Q^l_n.
CardinalityRecord cardinality_diagnostics(const PointCloudSpace& space, const DyadicSystem& system,
                                          double C_phi, int l);

struct DiagnosticsRecord {
  CardinalityRecord counts;
  double p = 2.0;
  double epsilon = 0.0;
  /// E_j^n per level j (index j - j_min) and level-l cube n
  std::vector<std::vector<double>> E;
  double error = 0.0;
  double bracket = 0.0;
  double Cp_estimate = 0.0;  // error / bracket
  double j0 = 0.0;
  /// Cp times the bracket restricted to j <= j0, j0 < j <= l and j > l
  double term_I_a = 0.0;
  double term_I_b = 0.0;
  double term_II = 0.0;
};

DiagnosticsRecord proof_diagnostics(const PointCloudSpace& space, const DyadicSystem& system,
                                    const WaveletFrame& frame, std::span<const double> f, int l,
                                    double p, double epsilon = 0.25);

}  // namespace homsamp
