#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "homsamp/coefficients.hpp"
#include "homsamp/dyadic.hpp"
#include "homsamp/space.hpp"
#include "homsamp/verification.hpp"

namespace homsamp {

/// Radial cutoff h on [0, 1]; both vanish for t >= 1 and h(0) = 1.
enum class Profile { tent, smoothstep };

Profile parse_profile(const std::string& name);
std::string profile_name(Profile profile);
double profile_value(Profile profile, double t);
/// sup |h'| on [0, 1]
double profile_lipschitz(Profile profile);

/// `complete` requires the frame to span the whole discrete L^2 space and
/// fails otherwise; `span` builds the canonical dual of the closed span
/// (pseudo-inverse of the frame operator) and needs a dense solve.
enum class FrameMode { complete, span };

struct FrameOptions {
  double cphi_target = 1.5;
  Profile profile = Profile::tent;
  FrameMode mode = FrameMode::complete;
  double tolerance = 1e-10;        // relative residual of every solve
  double max_condition = 1e12;
  std::size_t dense_limit = 5000;  // dense fallback only below this many points
  bool force_dense = false;
  std::size_t lanczos_steps = 160;
};

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Synthesis family phi_{j,k}(x) = b^{jd/2} h(rho(x, y^j_k) / (C b^{-j}))
/// over a dyadic system, with its canonical dual. Immutable after build.
class WaveletFrame {
 public:
  struct Impl;

  int j_min() const;
  int j_max() const;
  int base() const;
  double dimension() const;
  std::size_t point_count() const;
  std::size_t element_count() const;
  std::size_t level_size(int j) const;
  std::size_t element_index(int j, std::size_t k) const;
  std::pair<int, std::size_t> element(std::size_t e) const;
  std::size_t center(std::size_t e) const;

  /// Non-zero values of phi_e as (point, value) pairs sorted by point.
  std::span<const std::size_t> support(std::size_t e) const;
  std::span<const double> values(std::size_t e) const;
  std::vector<double> phi(std::size_t e) const;

  /// psi_e = S^{-1} phi_e (S^+ phi_e in span mode).
  std::vector<double> dual(std::size_t e) const;
  /// All duals as rows (element-major). Dense solve; intended for small frames.
  std::vector<std::vector<double>> dual_rows() const;

  /// Solves S g = f (least squares on the span in span mode).
  std::vector<double> apply_inverse_frame_operator(std::span<const double> f) const;
  /// S f = sum_e <f, phi_e> phi_e
  std::vector<double> apply_frame_operator(std::span<const double> f) const;

  CoefficientTable zero_coefficients() const;

  double cphi_target() const;
  Profile profile() const;
  FrameMode mode() const;
  double C_phi = 0.0;
  double size_constant = 0.0;
  double smoothness_constant = 0.0;
  std::size_t N_measured = 0;
  std::vector<std::size_t> multiplicity_per_level;
  FrameBounds frame_bounds;
  std::size_t rank = 0;
  bool used_dense_solver = false;

 private:
  friend WaveletFrame build_frame(const DyadicSystem&, const PointCloudSpace&, const FrameOptions&);
  std::shared_ptr<const Impl> impl_;
};

WaveletFrame build_frame(const DyadicSystem& system, const PointCloudSpace& space,
                         const FrameOptions& options = {});

/// entries[(j,k)] = sum_x f(x) psi_{j,k}(x) w(x)
CoefficientTable analyze(const WaveletFrame& frame, const PointCloudSpace& space,
                         std::span<const double> f);

/// Same coefficients computed from explicitly formed duals; independent of
/// the single-solve route used by analyze. Quadratic memory.
CoefficientTable analyze_with_duals(const WaveletFrame& frame, const PointCloudSpace& space,
                                    std::span<const double> f);

/// sum_{j,k} coeffs(j,k) phi_{j,k}(x), compensated per point.
std::vector<double> synthesize(const WaveletFrame& frame, const CoefficientTable& coeffs);

struct FrameVerification {
  std::vector<VerificationReport> reports;
  double size_constant = 0.0;
  double smoothness_constant = 0.0;
  std::size_t support_violations = 0;
  std::size_t N_measured = 0;
  std::vector<std::size_t> multiplicity_per_level;
  bool multiplicity_uniform = false;
};

/// Support and size conditions checked exactly, the smallest smoothness
/// constant over all pairs involving a support, and the per-level support
/// multiplicity. Uniformity compares levels holding more than one cube.
FrameVerification verify_frame(const WaveletFrame& frame, const PointCloudSpace& space);

}  // namespace homsamp
