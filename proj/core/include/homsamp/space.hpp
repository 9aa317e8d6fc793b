#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace homsamp {

using Point = std::array<double, 2>;

enum class GeneratorKind { torus_1d, cantor_dset, anisotropic_square };

/// Layout of the anisotropic-square grid. `square` is an n1 x n1 grid;
/// `adapted` takes n1 the largest power of two with n1^3 <= resolution and
/// n2 = resolution / n1, so both spacings are powers of two and, at powers
/// of 8, the spacing is uniform in the quasi-metric.
enum class GridLayout { square, adapted };

/// Model-space descriptor. Textual forms: "torus-1d", "cantor-dset(8)",
/// "anisotropic-square", "anisotropic-square(adapted)".
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::torus_1d;
  int depth = 0;  // cantor-dset only
  GridLayout layout = GridLayout::square;

  static GeneratorSpec parse(const std::string& text);
  std::string name() const;
  bool operator==(const GeneratorSpec&) const = default;
};

/// Structural constants of a space of homogeneous type.
struct SpaceParams {
  double A = 1.0;       // quasi-triangle constant
  double C_reg = 1.0;   // ball-measure / regularity constant
  double d = 1.0;       // homogeneous dimension
  double theta = 1.0;   // regularity exponent in (0, 1]
  double diam = 1.0;

  /// Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

enum class BallKind { open, closed };

/// Finite weighted point cloud with the quasi-metric of its generator.
/// Immutable after construction; all queries are const and thread-safe.
class PointCloudSpace {
 public:
  PointCloudSpace(GeneratorSpec generator, std::size_t resolution,
                  std::vector<Point> points, std::vector<double> weights,
                  SpaceParams params, std::array<std::size_t, 2> grid = {0, 0});

  const GeneratorSpec& generator() const { return generator_; }
  std::size_t resolution() const { return resolution_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<Point>& points() const { return points_; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double total_mass() const { return total_mass_; }
  const SpaceParams& params() const { return params_; }
  /// Grid shape {n1, n2} for the anisotropic square, {0, 0} otherwise.
  std::array<std::size_t, 2> grid() const { return grid_; }

  double distance(std::size_t i, std::size_t j) const;
  double distance_to(std::size_t i, const Point& p) const;

  /// Indices z with rho(z, x_center) < r (open) or <= r (closed), in
  /// increasing index order. The centre itself is included.
  void ball(std::size_t center, double r, std::vector<std::size_t>& out,
            BallKind kind = BallKind::open) const;
  std::vector<std::size_t> ball(std::size_t center, double r,
                                BallKind kind = BallKind::open) const;
  double ball_mass(std::size_t center, double r) const;

  /// Smallest nearest-neighbour distance over the cloud.
  double min_separation() const { return min_separation_; }

  /// Scale base of the natural dyadic structure: 3 for the Cantor set,
  /// 2 otherwise.
  int natural_scale_base() const;

  /// Replaces the declared parameters (used after estimation).
  PointCloudSpace with_params(SpaceParams params) const;

 private:
  void build_index();
  void candidates(const Point& p, double r, std::vector<std::size_t>& out) const;

  GeneratorSpec generator_;
  std::size_t resolution_;
  std::vector<Point> points_;
  std::vector<double> weights_;
  SpaceParams params_;
  std::array<std::size_t, 2> grid_;
  double total_mass_ = 0.0;
  double min_separation_ = std::numeric_limits<double>::infinity();

  // 1-d kinds: indices sorted by coordinate.
  std::vector<std::size_t> order_;
  std::vector<double> sorted_x_;
  // anisotropic square: bucket grid in CSR form.
  std::array<std::size_t, 2> cells_ = {1, 1};
  std::vector<std::size_t> cell_start_;
  std::vector<std::size_t> cell_items_;
};

/// Builds a model space. For the Cantor set the resolution argument is
/// ignored (2^depth points); for the anisotropic square n1 is chosen so the
/// point count is as close as possible to `resolution`.
PointCloudSpace discretize(const GeneratorSpec& generator, std::size_t resolution);
PointCloudSpace discretize(const std::string& generator, std::size_t resolution);

/// (sum_i |f_i|^p w_i)^{1/p}, or max_i |f_i| for p = infinity.
double lp_norm(const PointCloudSpace& space, std::span<const double> f, double p);

struct BallPowerIntegral {
  double value = 0.0;
  double omitted_self_weight = 0.0;
};

/// sum over z != x with rho(z,x) < r of rho(z,x)^alpha * w(z).
BallPowerIntegral ball_power_integral(const PointCloudSpace& space, std::size_t x,
                                      double r, double alpha);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace homsamp
