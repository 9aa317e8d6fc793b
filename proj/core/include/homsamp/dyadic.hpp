#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "homsamp/space.hpp"
#include "homsamp/verification.hpp"

namespace homsamp {

/// One cube Q^j_k: a set of sample points around a centre y^j_k.
struct Cube {
  int level = 0;
  std::size_t index = 0;
  std::size_t center = 0;              // point index of the centre
  std::vector<std::size_t> members;    // sorted point indices
  std::optional<std::size_t> parent;   // index at level - 1
  std::vector<std::size_t> children;   // indices at level + 1
};

struct DyadicOptions {
  double separation = 1.0;  // net separation factor c in (0, 1]
  int base = 0;             // scale base b; 0 selects the space's natural base
};

/// Nested hierarchy of cubes on a point cloud. Cube scale at level j is
/// base^{-j}.
class DyadicSystem {
 public:
  DyadicSystem(int j_min, int j_max, int base, double separation,
               std::vector<std::vector<Cube>> cubes, std::size_t point_count);

  int j_min() const { return j_min_; }
  int j_max() const { return j_max_; }
  int base() const { return base_; }
  double separation_factor() const { return separation_; }
  std::size_t point_count() const { return point_count_; }
  std::size_t level_count() const { return cubes_.size(); }
  bool has_level(int j) const { return j >= j_min_ && j <= j_max_; }

  /// base^{-j}
  double scale(int j) const;

  const std::vector<Cube>& level(int j) const;
  const Cube& cube(int j, std::size_t k) const { return level(j).at(k); }

  /// Index of the level-j cube containing point x.
  std::size_t locate(std::size_t x, int j) const;
  /// Point -> cube-index table for level j.
  const std::vector<std::size_t>& labels(int j) const;

  double r0_measured = 0.0;
  double r1_measured = 0.0;

 private:
  int j_min_;
  int j_max_;
  int base_;
  double separation_;
  std::size_t point_count_;
  std::vector<std::vector<Cube>> cubes_;
  std::vector<std::vector<std::size_t>> labels_;
};

/// Greedy nested separated nets with nearest-centre assignment:
///  1. N_{j_min} is a maximal c b^{-j_min}-separated net, and each N_j is
///     seeded with N_{j-1} before greedily adding points (lowest index
///     first) at distance >= c b^{-j} from every chosen centre;
///  2. every net point of level j+1 becomes a child of its nearest level-j
///     centre (ties to the lowest cube index);
///  3. every point joins the cube of its nearest finest-level centre and
///     coarser memberships are unions over descendants.
/// r0_measured / r1_measured are filled in from verify_dyadic.
DyadicSystem build_dyadic_system(const PointCloudSpace& space, int j_min, int j_max,
                                 const DyadicOptions& options = {});

struct DyadicVerification {
  std::vector<VerificationReport> reports;
  // per-level sandwich constants, indexed by j - j_min
  std::vector<double> r0_per_level;
  std::vector<double> r1_per_level;
  double r0 = 0.0;
  double r1 = 0.0;
  double cube_measure_min = 0.0;  // min over cubes of mu(Q) b^{jd}
  double cube_measure_max = 0.0;
  bool all_exact_pass() const;
};

/// Exact checks of the partition, nesting, unique-parent and separation
/// properties plus the measured sandwich radii and cube-measure bounds.
DyadicVerification verify_dyadic(const DyadicSystem& system, const PointCloudSpace& space);

/// build_dyadic_system followed by verify_dyadic, storing r0/r1.
DyadicSystem build_verified_dyadic_system(const PointCloudSpace& space, int j_min, int j_max,
                                          const DyadicOptions& options = {});

}  // namespace homsamp
