#include "homsamp/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "homsamp/error.hpp"
#include "homsamp/numeric.hpp"
#include "homsamp/parallel.hpp"

namespace homsamp {
namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Nearest centre to point p among `net` (cube order), ties to the lowest cube
// index. `cube_of` maps point index -> cube index for centres (kNone
// otherwise). Uses a ball query of radius `reach` when the net is large.
std::size_t nearest_centre(const PointCloudSpace& space, std::size_t p,
                           const std::vector<std::size_t>& net,
                           const std::vector<std::size_t>& cube_of, double reach, bool scan,
                           std::vector<std::size_t>& buf) {
  std::size_t best = kNone;
  double best_d = kInfinity;
  auto consider = [&](std::size_t k, double d) {
    if (d < best_d || (d == best_d && k < best)) {
      best = k;
      best_d = d;
    }
  };
  if (scan) {
    for (std::size_t k = 0; k < net.size(); ++k) consider(k, space.distance(p, net[k]));
    return best;
  }
  space.ball(p, reach, buf, BallKind::closed);
  for (std::size_t z : buf) {
    if (cube_of[z] != kNone) consider(cube_of[z], space.distance(p, z));
  }
  if (best == kNone) {
    for (std::size_t k = 0; k < net.size(); ++k) consider(k, space.distance(p, net[k]));
  }
  return best;
}

}  // namespace

DyadicSystem::DyadicSystem(int j_min, int j_max, int base, double separation,
                           std::vector<std::vector<Cube>> cubes, std::size_t point_count)
    : j_min_(j_min),
      j_max_(j_max),
      base_(base),
      separation_(separation),
      point_count_(point_count),
      cubes_(std::move(cubes)) {
  if (j_min_ > j_max_) throw InvalidArgument("dyadic system: j_min > j_max");
  if (base_ < 2) throw InvalidArgument("dyadic system: base must be >= 2");
  if (cubes_.size() != std::size_t(j_max_ - j_min_ + 1)) {
    throw InvalidArgument("dyadic system: level count does not match the level range");
  }
  labels_.assign(cubes_.size(), std::vector<std::size_t>(point_count_, kNone));
  for (std::size_t l = 0; l < cubes_.size(); ++l) {
    for (const Cube& q : cubes_[l]) {
      for (std::size_t x : q.members) {
        if (x >= point_count_) throw InvalidArgument("dyadic system: member index out of range");
        labels_[l][x] = q.index;
      }
    }
  }
}

double DyadicSystem::scale(int j) const { return std::pow(double(base_), -double(j)); }

const std::vector<Cube>& DyadicSystem::level(int j) const {
  if (!has_level(j)) {
    throw InvalidArgument("level " + std::to_string(j) + " outside [" + std::to_string(j_min_) +
                          ", " + std::to_string(j_max_) + "]");
  }
  return cubes_[std::size_t(j - j_min_)];
}

const std::vector<std::size_t>& DyadicSystem::labels(int j) const {
  level(j);
  return labels_[std::size_t(j - j_min_)];
}

std::size_t DyadicSystem::locate(std::size_t x, int j) const {
  const auto& lab = labels(j);
  if (x >= lab.size()) throw InvalidArgument("locate: point index out of range");
  if (lab[x] == kNone) throw InvalidArgument("locate: point belongs to no cube");
  return lab[x];
}

DyadicSystem build_dyadic_system(const PointCloudSpace& space, int j_min, int j_max,
                                 const DyadicOptions& options) {
  if (j_min > j_max) throw InvalidArgument("build_dyadic_system: j_min > j_max");
  const double c = options.separation;
  if (!(c > 0.0 && c <= 1.0)) {
    throw InvalidArgument("build_dyadic_system: separation factor must lie in (0, 1]");
  }
  const int base = options.base == 0 ? space.natural_scale_base() : options.base;
  if (base < 2) throw InvalidArgument("build_dyadic_system: base must be >= 2");
  const std::size_t n = space.size();
  const double finest_sep = c * std::pow(double(base), -double(j_max));
  // One level past the resolution is allowed (it repeats the singleton
  // partition); anything finer only duplicates cubes.
  if (n > 1 && finest_sep * base < space.min_separation() * (1.0 - 1e-9)) {
    throw InvalidArgument("build_dyadic_system: level " + std::to_string(j_max) +
                          " is more than one level finer than the point cloud resolves (separation " +
                          std::to_string(finest_sep) + " < nearest-neighbour distance " +
                          std::to_string(space.min_separation()) + ")");
  }

  const std::size_t levels = std::size_t(j_max - j_min + 1);
  std::vector<std::vector<std::size_t>> nets(levels);
  std::vector<std::vector<std::size_t>> cube_of(levels);
  std::vector<std::size_t> buf;

  for (std::size_t l = 0; l < levels; ++l) {
    const int j = j_min + int(l);
    const double sep = c * std::pow(double(base), -double(j));
    std::vector<std::size_t> net = l == 0 ? std::vector<std::size_t>{} : nets[l - 1];
    std::vector<std::size_t> owner(n, kNone);
    for (std::size_t k = 0; k < net.size(); ++k) owner[net[k]] = k;
    space.ball(0, sep, buf);
    const std::size_t ball_estimate = buf.size();
    for (std::size_t p = 0; p < n; ++p) {
      if (owner[p] != kNone) continue;
      bool free = true;
      if (net.size() <= ball_estimate) {
        for (std::size_t q : net) {
          if (space.distance(p, q) < sep) {
            free = false;
            break;
          }
        }
      } else {
        space.ball(p, sep, buf);
        for (std::size_t z : buf) {
          if (owner[z] != kNone) {
            free = false;
            break;
          }
        }
      }
      if (free) {
        owner[p] = net.size();
        net.push_back(p);
      }
    }
    nets[l] = std::move(net);
    cube_of[l] = std::move(owner);
  }

  std::vector<std::vector<Cube>> cubes(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    cubes[l].resize(nets[l].size());
    for (std::size_t k = 0; k < nets[l].size(); ++k) {
      cubes[l][k].level = j_min + int(l);
      cubes[l][k].index = k;
      cubes[l][k].center = nets[l][k];
    }
  }

  // parent links
  for (std::size_t l = 1; l < levels; ++l) {
    const double reach = c * std::pow(double(base), -double(j_min + int(l) - 1));
    space.ball(0, reach, buf);
    const bool scan = nets[l - 1].size() <= buf.size();
    for (std::size_t k = 0; k < nets[l].size(); ++k) {
      const std::size_t parent =
          nearest_centre(space, nets[l][k], nets[l - 1], cube_of[l - 1], reach, scan, buf);
      cubes[l][k].parent = parent;
      cubes[l - 1][parent].children.push_back(k);
    }
  }

  // finest-level membership, then unions up the tree
  {
    const std::size_t l = levels - 1;
    space.ball(0, finest_sep, buf);
    const bool scan = nets[l].size() <= buf.size();
    std::vector<std::size_t> finest(n);
    for (std::size_t p = 0; p < n; ++p) {
      finest[p] = nearest_centre(space, p, nets[l], cube_of[l], finest_sep, scan, buf);
    }
    for (std::size_t p = 0; p < n; ++p) {
      std::size_t k = finest[p];
      for (std::size_t m = l + 1; m-- > 0;) {
        cubes[m][k].members.push_back(p);
        if (m > 0) k = *cubes[m][k].parent;
      }
    }
  }
  return DyadicSystem(j_min, j_max, base, c, std::move(cubes), n);
}

bool DyadicVerification::all_exact_pass() const {
  for (const auto& r : reports) {
    if (r.axiom == "partition" || r.axiom == "nesting" || r.axiom == "unique-parent" ||
        r.axiom == "center-membership" || r.axiom == "separation") {
      if (!r.pass) return false;
    }
  }
  return true;
}

DyadicVerification verify_dyadic(const DyadicSystem& system, const PointCloudSpace& space) {
  const std::size_t n = space.size();
  if (system.point_count() != n) {
    throw InvalidArgument("verify_dyadic: system built for " + std::to_string(system.point_count()) +
                          " points, space has " + std::to_string(n));
  }
  const double d = space.params().d;
  DyadicVerification out;
  auto add = [&](std::string axiom, double violations, std::vector<std::size_t> witness) {
    VerificationReport r;
    r.axiom = std::move(axiom);
    r.estimated_constant = violations;
    r.worst_witness = std::move(witness);
    r.pass = violations == 0.0;
    out.reports.push_back(std::move(r));
  };

  // (i) partition at every level
  {
    std::size_t bad = 0;
    std::vector<std::size_t> witness;
    for (int j = system.j_min(); j <= system.j_max(); ++j) {
      std::vector<unsigned> hits(n, 0);
      for (const Cube& q : system.level(j)) {
        for (std::size_t x : q.members) ++hits[x];
      }
      for (std::size_t x = 0; x < n; ++x) {
        if (hits[x] != 1) {
          if (witness.empty()) witness = {std::size_t(j - system.j_min()), x};
          ++bad;
        }
      }
    }
    add("partition", double(bad), witness);
  }

  // (iii) nesting for every pair of levels i > j
  {
    std::size_t bad = 0;
    std::vector<std::size_t> witness;
    for (int i = system.j_min(); i <= system.j_max(); ++i) {
      for (int j = system.j_min(); j < i; ++j) {
        const auto& coarse = system.labels(j);
        for (const Cube& q : system.level(i)) {
          if (q.members.empty()) continue;
          const std::size_t label = coarse[q.members.front()];
          for (std::size_t x : q.members) {
            if (coarse[x] != label) {
              if (witness.empty()) witness = {std::size_t(i - system.j_min()), q.index, x};
              ++bad;
              break;
            }
          }
        }
      }
    }
    add("nesting", double(bad), witness);
  }

  // (iv) unique parent, consistent with membership
  {
    std::size_t bad = 0;
    std::vector<std::size_t> witness;
    for (int j = system.j_min() + 1; j <= system.j_max(); ++j) {
      const auto& coarse = system.labels(j - 1);
      for (const Cube& q : system.level(j)) {
        bool ok = q.parent.has_value() && *q.parent < system.level(j - 1).size();
        for (std::size_t x : q.members) {
          if (!ok) break;
          ok = coarse[x] == *q.parent;
        }
        if (!ok) {
          if (witness.empty()) witness = {std::size_t(j - system.j_min()), q.index};
          ++bad;
        }
      }
    }
    for (const Cube& q : system.level(system.j_min())) {
      if (q.parent.has_value()) ++bad;
    }
    add("unique-parent", double(bad), witness);
  }

  // centres belong to their cubes
  {
    std::size_t bad = 0;
    std::vector<std::size_t> witness;
    for (int j = system.j_min(); j <= system.j_max(); ++j) {
      for (const Cube& q : system.level(j)) {
        if (!std::binary_search(q.members.begin(), q.members.end(), q.center)) {
          if (witness.empty()) witness = {std::size_t(j - system.j_min()), q.index};
          ++bad;
        }
      }
    }
    add("center-membership", double(bad), witness);
  }

  // centres at level j are pairwise >= c b^{-j} apart
  {
    std::size_t bad = 0;
    std::vector<std::size_t> witness;
    std::vector<std::size_t> buf;
    for (int j = system.j_min(); j <= system.j_max(); ++j) {
      const double sep = system.separation_factor() * system.scale(j);
      const auto& cubes = system.level(j);
      std::vector<char> is_centre(n, 0);
      for (const Cube& q : cubes) is_centre[q.center] = 1;
      for (const Cube& q : cubes) {
        space.ball(q.center, sep, buf);
        for (std::size_t z : buf) {
          if (z != q.center && is_centre[z]) {
            if (witness.empty()) witness = {q.center, z};
            ++bad;
          }
        }
      }
    }
    add("separation", double(bad), witness);
  }

  // sandwich radii and cube measure
  const std::size_t levels = system.level_count();
  out.r0_per_level.assign(levels, kInfinity);
  out.r1_per_level.assign(levels, 0.0);
  out.cube_measure_min = kInfinity;
  out.cube_measure_max = 0.0;
  std::vector<std::size_t> r0_witness;
  std::vector<std::size_t> r1_witness;
  std::vector<std::size_t> mu_witness;
  double r0_best = kInfinity;
  for (int j = system.j_min(); j <= system.j_max(); ++j) {
    const std::size_t l = std::size_t(j - system.j_min());
    const double bj = 1.0 / system.scale(j);
    const auto& cubes = system.level(j);
    const auto& lab = system.labels(j);
    std::vector<double> inner(cubes.size());
    std::vector<double> outer(cubes.size());
    parallel_for(cubes.size(), [&](std::size_t k) {
      const Cube& q = cubes[k];
      double rmax = 0.0;
      for (std::size_t x : q.members) rmax = std::max(rmax, space.distance(q.center, x));
      outer[k] = rmax;
      if (q.members.size() == n) {
        inner[k] = space.params().diam;
        return;
      }
      std::vector<std::size_t> local;
      double reach = std::max(rmax, space.min_separation());
      while (true) {
        space.ball(q.center, reach, local, BallKind::closed);
        double best = kInfinity;
        for (std::size_t z : local) {
          if (lab[z] != k) best = std::min(best, space.distance(q.center, z));
        }
        if (best < kInfinity) {
          inner[k] = best;
          return;
        }
        reach *= 2.0;
      }
    });
    for (std::size_t k = 0; k < cubes.size(); ++k) {
      out.r0_per_level[l] = std::min(out.r0_per_level[l], inner[k] * bj);
      if (inner[k] * bj < r0_best) {
        r0_best = inner[k] * bj;
        r0_witness = {l, k};
      }
      if (outer[k] * bj > out.r1_per_level[l]) out.r1_per_level[l] = outer[k] * bj;
      CompensatedSum mass;
      for (std::size_t x : cubes[k].members) mass.add(space.weight(x));
      const double scaled = mass.value() * std::pow(bj, d);
      if (scaled < out.cube_measure_min) {
        out.cube_measure_min = scaled;
        mu_witness = {l, k};
      }
      out.cube_measure_max = std::max(out.cube_measure_max, scaled);
    }
  }
  out.r0 = *std::min_element(out.r0_per_level.begin(), out.r0_per_level.end());
  out.r1 = *std::max_element(out.r1_per_level.begin(), out.r1_per_level.end());
  {
    VerificationReport r;
    r.axiom = "sandwich";
    r.estimated_constant = out.r0 > 0.0 ? out.r1 / out.r0 : kInfinity;
    r.worst_witness = r0_witness;
    r.extras["r0_measured"] = out.r0;
    r.extras["r1_measured"] = out.r1;
    r.pass = out.r0 > 0.0 && std::isfinite(out.r1);
    out.reports.push_back(std::move(r));
  }
  {
    VerificationReport r;
    r.axiom = "cube-measure";
    r.estimated_constant = out.cube_measure_max / out.cube_measure_min;
    r.worst_witness = mu_witness;
    r.extras["min_scaled_measure"] = out.cube_measure_min;
    r.extras["max_scaled_measure"] = out.cube_measure_max;
    r.pass = std::isfinite(r.estimated_constant);
    out.reports.push_back(std::move(r));
  }
  return out;
}

DyadicSystem build_verified_dyadic_system(const PointCloudSpace& space, int j_min, int j_max,
                                          const DyadicOptions& options) {
  DyadicSystem system = build_dyadic_system(space, j_min, j_max, options);
  const DyadicVerification v = verify_dyadic(system, space);
  system.r0_measured = v.r0;
  system.r1_measured = v.r1;
  return system;
}

}  // namespace homsamp
