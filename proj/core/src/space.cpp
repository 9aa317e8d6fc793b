#include "homsamp/space.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <regex>

#include "homsamp/error.hpp"
#include "homsamp/numeric.hpp"
#include "homsamp/verification.hpp"

namespace homsamp {
namespace {

double wrap(double delta) {
  const double a = std::abs(delta);
  return std::min(a, 1.0 - a);
}

}  // namespace

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  static const std::regex pattern(R"(^\s*([a-z0-9-]+)\s*(?:\(\s*([A-Za-z0-9]+)\s*\))?\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) {
    throw InvalidArgument("unknown generator: '" + text + "'");
  }
  const std::string name = m[1];
  const std::string arg = m[2];
  GeneratorSpec spec;
  if (name == "torus-1d" && arg.empty()) {
    spec.kind = GeneratorKind::torus_1d;
  } else if (name == "cantor-dset") {
    spec.kind = GeneratorKind::cantor_dset;
    if (arg.empty()) throw InvalidArgument("cantor-dset needs a depth, e.g. cantor-dset(8)");
    try {
      spec.depth = std::stoi(arg);
    } catch (const std::exception&) {
      throw InvalidArgument("cantor-dset depth must be an integer: '" + arg + "'");
    }
    if (spec.depth < 1 || spec.depth > 24) {
      throw InvalidArgument("cantor-dset depth must lie in [1, 24]");
    }
  } else if (name == "anisotropic-square") {
    spec.kind = GeneratorKind::anisotropic_square;
    if (arg.empty() || arg == "square") {
      spec.layout = GridLayout::square;
    } else if (arg == "adapted") {
      spec.layout = GridLayout::adapted;
    } else {
      throw InvalidArgument("unknown anisotropic-square layout: '" + arg + "'");
    }
  } else {
    throw InvalidArgument("unknown generator: '" + text + "'");
  }
  return spec;
}

std::string GeneratorSpec::name() const {
  switch (kind) {
    case GeneratorKind::torus_1d:
      return "torus-1d";
    case GeneratorKind::cantor_dset:
      return "cantor-dset(" + std::to_string(depth) + ")";
    case GeneratorKind::anisotropic_square:
      return layout == GridLayout::adapted ? "anisotropic-square(adapted)"
                                           : "anisotropic-square";
  }
  return "?";
}

void SpaceParams::validate() const {
  if (!(A >= 1.0)) throw InvalidArgument("SpaceParams: A must be >= 1");
  if (!(C_reg >= 1.0)) throw InvalidArgument("SpaceParams: C_reg must be >= 1");
  if (!(d > 0.0)) throw InvalidArgument("SpaceParams: d must be > 0");
  if (!(theta > 0.0 && theta <= 1.0)) {
    throw InvalidArgument("SpaceParams: theta must lie in (0, 1]");
  }
  if (!(diam > 0.0)) throw InvalidArgument("SpaceParams: diam must be > 0");
}

PointCloudSpace::PointCloudSpace(GeneratorSpec generator, std::size_t resolution,
                                 std::vector<Point> points, std::vector<double> weights,
                                 SpaceParams params, std::array<std::size_t, 2> grid)
    : generator_(generator),
      resolution_(resolution),
      points_(std::move(points)),
      weights_(std::move(weights)),
      params_(params),
      grid_(grid) {
  if (points_.empty()) throw InvalidArgument("space has no points");
  if (points_.size() != weights_.size()) {
    throw InvalidArgument("space: points and weights differ in length");
  }
  for (double w : weights_) {
    if (!(w > 0.0)) throw InvalidArgument("space: weights must be positive");
  }
  params_.validate();
  total_mass_ = compensated_sum(weights_);
  build_index();

  // Smallest nearest-neighbour distance, found by growing ball queries.
  if (points_.size() > 1) {
    std::vector<std::size_t> buf;
    double guess = params_.diam / static_cast<double>(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
      double r = guess;
      while (true) {
        ball(i, r, buf, BallKind::closed);
        double best = kInfinity;
        for (std::size_t j : buf) {
          if (j != i) best = std::min(best, distance(i, j));
        }
        if (best < kInfinity) {
          min_separation_ = std::min(min_separation_, best);
          break;
        }
        r *= 2.0;
      }
    }
  }
}

void PointCloudSpace::build_index() {
  const std::size_t n = points_.size();
  if (generator_.kind != GeneratorKind::anisotropic_square) {
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return points_[a][0] < points_[b][0];
    });
    sorted_x_.resize(n);
    for (std::size_t k = 0; k < n; ++k) sorted_x_[k] = points_[order_[k]][0];
    return;
  }
  cells_ = grid_;
  if (cells_[0] == 0 || cells_[1] == 0) {
    const auto side = static_cast<std::size_t>(std::max(1.0, std::round(std::sqrt(double(n)))));
    cells_ = {side, side};
  }
  auto cell_of = [&](const Point& p) {
    auto c0 = static_cast<std::size_t>(std::floor(p[0] * double(cells_[0]) + 1e-9));
    auto c1 = static_cast<std::size_t>(std::floor(p[1] * double(cells_[1]) + 1e-9));
    c0 = std::min(c0, cells_[0] - 1);
    c1 = std::min(c1, cells_[1] - 1);
    return c1 * cells_[0] + c0;
  };
  const std::size_t ncell = cells_[0] * cells_[1];
  cell_start_.assign(ncell + 1, 0);
  for (const auto& p : points_) ++cell_start_[cell_of(p) + 1];
  std::partial_sum(cell_start_.begin(), cell_start_.end(), cell_start_.begin());
  cell_items_.resize(n);
  std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < n; ++i) cell_items_[fill[cell_of(points_[i])]++] = i;
}

double PointCloudSpace::distance(std::size_t i, std::size_t j) const {
  return distance_to(i, points_[j]);
}

double PointCloudSpace::distance_to(std::size_t i, const Point& q) const {
  const Point& p = points_[i];
  switch (generator_.kind) {
    case GeneratorKind::torus_1d:
      return wrap(p[0] - q[0]);
    case GeneratorKind::cantor_dset:
      return std::abs(p[0] - q[0]);
    case GeneratorKind::anisotropic_square:
      return std::max(wrap(p[0] - q[0]), std::sqrt(wrap(p[1] - q[1])));
  }
  return 0.0;
}

void PointCloudSpace::candidates(const Point& p, double r, std::vector<std::size_t>& out) const {
  out.clear();
  const std::size_t n = points_.size();
  if (generator_.kind == GeneratorKind::cantor_dset ||
      generator_.kind == GeneratorKind::torus_1d) {
    auto push_range = [&](double lo, double hi) {
      auto a = std::lower_bound(sorted_x_.begin(), sorted_x_.end(), lo);
      auto b = std::upper_bound(sorted_x_.begin(), sorted_x_.end(), hi);
      for (auto it = a; it < b; ++it) out.push_back(order_[std::size_t(it - sorted_x_.begin())]);
    };
    if (generator_.kind == GeneratorKind::torus_1d && r >= 0.5) {
      out = order_;
      return;
    }
    push_range(p[0] - r, p[0] + r);
    if (generator_.kind == GeneratorKind::torus_1d) {
      if (p[0] - r < 0.0) push_range(p[0] - r + 1.0, 1.0);
      if (p[0] + r >= 1.0) push_range(0.0, p[0] + r - 1.0);
    }
    return;
  }
  // anisotropic square: rho < r  <=>  |dx1| < r and |dx2| < r^2 (wrapped)
  auto cell_range = [&](double centre, double half, std::size_t count) {
    std::vector<std::size_t> ids;
    if (2.0 * half >= 1.0) {
      ids.resize(count);
      std::iota(ids.begin(), ids.end(), std::size_t{0});
      return ids;
    }
    const auto lo = static_cast<long long>(std::floor((centre - half) * double(count))) - 1;
    const auto hi = static_cast<long long>(std::floor((centre + half) * double(count))) + 1;
    if (hi - lo + 1 >= static_cast<long long>(count)) {
      ids.resize(count);
      std::iota(ids.begin(), ids.end(), std::size_t{0});
      return ids;
    }
    const auto c = static_cast<long long>(count);
    for (long long k = lo; k <= hi; ++k) ids.push_back(static_cast<std::size_t>(((k % c) + c) % c));
    return ids;
  };
  const auto cols = cell_range(p[0], r, cells_[0]);
  const auto rows = cell_range(p[1], r * r, cells_[1]);
  for (std::size_t row : rows) {
    for (std::size_t col : cols) {
      const std::size_t cell = row * cells_[0] + col;
      for (std::size_t k = cell_start_[cell]; k < cell_start_[cell + 1]; ++k) {
        out.push_back(cell_items_[k]);
      }
    }
  }
  (void)n;
}

void PointCloudSpace::ball(std::size_t center, double r, std::vector<std::size_t>& out,
                           BallKind kind) const {
  candidates(points_[center], r, out);
  std::erase_if(out, [&](std::size_t z) {
    const double d = distance(center, z);
    return kind == BallKind::open ? !(d < r) : !(d <= r);
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
}

std::vector<std::size_t> PointCloudSpace::ball(std::size_t center, double r,
                                               BallKind kind) const {
  std::vector<std::size_t> out;
  ball(center, r, out, kind);
  return out;
}

double PointCloudSpace::ball_mass(std::size_t center, double r) const {
  std::vector<std::size_t> buf;
  ball(center, r, buf);
  CompensatedSum s;
  for (std::size_t z : buf) s.add(weights_[z]);
  return s.value();
}

int PointCloudSpace::natural_scale_base() const {
  return generator_.kind == GeneratorKind::cantor_dset ? 3 : 2;
}

PointCloudSpace PointCloudSpace::with_params(SpaceParams params) const {
  return PointCloudSpace(generator_, resolution_, points_, weights_, params, grid_);
}

PointCloudSpace discretize(const GeneratorSpec& generator, std::size_t resolution) {
  switch (generator.kind) {
    case GeneratorKind::torus_1d: {
      if (resolution < 2) throw InvalidArgument("resolution must be >= 2");
      std::vector<Point> pts(resolution);
      for (std::size_t i = 0; i < resolution; ++i) pts[i] = {double(i) / double(resolution), 0.0};
      std::vector<double> w(resolution, 1.0 / double(resolution));
      SpaceParams params;
      params.A = 1.0;
      params.C_reg = 2.0;  // mu(B(x,r)) = 2r for 0 < r < 1/2
      params.d = 1.0;
      params.theta = 1.0;
      params.diam = double(resolution / 2) / double(resolution);
      return PointCloudSpace(generator, resolution, std::move(pts), std::move(w), params);
    }
    case GeneratorKind::cantor_dset: {
      const int m = generator.depth;
      if (m < 1) throw InvalidArgument("cantor-dset depth must be >= 1");
      std::vector<double> left = {0.0};
      double len = 1.0;
      for (int k = 0; k < m; ++k) {
        len /= 3.0;
        const std::size_t half = left.size();
        left.resize(2 * half);
        for (std::size_t i = 0; i < half; ++i) left[half + i] = left[i] + 2.0 * len;
      }
      std::sort(left.begin(), left.end());
      const std::size_t n = left.size();
      std::vector<Point> pts(n);
      for (std::size_t i = 0; i < n; ++i) pts[i] = {left[i] + 0.5 * len, 0.0};
      std::vector<double> w(n, 1.0 / double(n));
      SpaceParams params;
      params.A = 1.0;
      // sup/inf of mu(B(x,r))/r^d measured on a depth-12 cloud are 1.29 and
      // 0.646; 1.6 covers both with margin.
      params.C_reg = 1.6;
      params.d = std::log(2.0) / std::log(3.0);
      params.theta = 1.0;
      params.diam = pts.back()[0] - pts.front()[0];
      return PointCloudSpace(generator, n, std::move(pts), std::move(w), params);
    }
    case GeneratorKind::anisotropic_square: {
      if (resolution < 2) throw InvalidArgument("resolution must be >= 2");
      std::size_t n1 = 0;
      std::size_t n2 = 0;
      if (generator.layout == GridLayout::square) {
        n1 = static_cast<std::size_t>(std::max(1.0, std::round(std::sqrt(double(resolution)))));
        n2 = n1;
      } else {
        // power-of-two spacings so grid lines fall on the dyadic scales
        n1 = 1;
        while (8 * n1 * n1 * n1 <= resolution) n1 *= 2;
        n2 = std::max<std::size_t>(1, resolution / n1);
      }
      const std::size_t n = n1 * n2;
      if (n < 2) throw InvalidArgument("resolution too small for anisotropic-square");
      std::vector<Point> pts(n);
      for (std::size_t i2 = 0; i2 < n2; ++i2) {
        for (std::size_t i1 = 0; i1 < n1; ++i1) {
          pts[i2 * n1 + i1] = {double(i1) / double(n1), double(i2) / double(n2)};
        }
      }
      std::vector<double> w(n, 1.0 / double(n));
      SpaceParams params;
      params.d = 3.0;
      params.C_reg = 4.0;  // mu(B(x,r)) = 4 r^3 for r <= 1/2
      params.A = 1.0;
      params.theta = 1.0;
      params.diam = std::max(double(n1 / 2) / double(n1), std::sqrt(double(n2 / 2) / double(n2)));
      if (params.diam <= 0.0) params.diam = 1.0;
      PointCloudSpace provisional(generator, resolution, std::move(pts), std::move(w), params,
                                  {n1, n2});
      // A and theta are measured, not derived.
      constexpr std::size_t kBudget = 20000;
      params.A = std::max(1.0, estimate_quasi_triangle(provisional, kBudget, 0).estimated_constant);
      params.theta = estimate_theta(provisional, kBudget, 0);
      return provisional.with_params(params);
    }
  }
  throw InvalidArgument("unknown generator");
}

PointCloudSpace discretize(const std::string& generator, std::size_t resolution) {
  return discretize(GeneratorSpec::parse(generator), resolution);
}

double lp_norm(const PointCloudSpace& space, std::span<const double> f, double p) {
  if (!(p >= 1.0)) throw InvalidArgument("lp_norm: p must be >= 1");
  if (f.size() != space.size()) {
    throw InvalidArgument("lp_norm: function length does not match the space");
  }
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : f) m = std::max(m, std::abs(v));
    return m;
  }
  double scale = 0.0;
  for (double v : f) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  CompensatedSum s;
  for (std::size_t i = 0; i < f.size(); ++i) {
    s.add(std::pow(std::abs(f[i]) / scale, p) * space.weight(i));
  }
  return scale * std::pow(s.value(), 1.0 / p);
}

BallPowerIntegral ball_power_integral(const PointCloudSpace& space, std::size_t x, double r,
                                      double alpha) {
  const double d = space.params().d;
  if (!(r > 0.0)) throw InvalidArgument("ball_power_integral: r must be > 0");
  if (!(alpha > -d)) throw InvalidArgument("ball_power_integral: alpha must exceed -d");
  if (!(alpha > -d + 0.05)) {
    throw InvalidArgument("ball_power_integral: alpha too close to -d (need alpha > -d + 0.05)");
  }
  if (x >= space.size()) throw InvalidArgument("ball_power_integral: point index out of range");
  std::vector<std::size_t> members;
  space.ball(x, r, members);
  CompensatedSum s;
  for (std::size_t z : members) {
    if (z == x) continue;
    s.add(std::pow(space.distance(x, z), alpha) * space.weight(z));
  }
  return {s.value(), space.weight(x)};
}

}  // namespace homsamp
