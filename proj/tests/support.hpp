#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "homsamp/battery.hpp"
#include "homsamp/coefficients.hpp"
#include "homsamp/dyadic.hpp"
#include "homsamp/frame.hpp"
#include "homsamp/space.hpp"

namespace testing {

/// Small seeded generator for property tests.
struct Gen {
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
  std::vector<double> values(std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }
  homsamp::CoefficientTable table(int j_min, std::size_t levels, int base = 2) {
    std::vector<std::vector<double>> lv;
    for (std::size_t l = 0; l < levels; ++l) lv.push_back(values(1 + index(9), -3.0, 3.0));
    return {j_min, base, lv};
  }
  std::mt19937_64 rng;
};

struct Fixture {
  homsamp::PointCloudSpace space;
  homsamp::DyadicSystem system;
  homsamp::WaveletFrame frame;
};

/// Cached space + cubes + frame, keyed by (generator, resolution, j_max, C_phi).
inline const Fixture& fixture(const std::string& generator, std::size_t resolution, int j_max,
                              double cphi = 1.5) {
  static std::map<std::string, std::unique_ptr<Fixture>> cache;
  const std::string key = generator + "|" + std::to_string(resolution) + "|" +
                          std::to_string(j_max) + "|" + std::to_string(cphi);
  auto it = cache.find(key);
  if (it == cache.end()) {
    auto space = homsamp::discretize(generator, resolution);
    auto system = homsamp::build_verified_dyadic_system(space, 0, j_max);
    homsamp::FrameOptions o;
    o.cphi_target = cphi;
    auto frame = homsamp::build_frame(system, space, o);
    it = cache.emplace(key, std::make_unique<Fixture>(
                                Fixture{std::move(space), std::move(system), std::move(frame)}))
             .first;
  }
  return *it->second;
}

inline double rel_l2(const homsamp::PointCloudSpace& s, const std::vector<double>& a,
                     const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return homsamp::lp_norm(s, d, 2.0) / homsamp::lp_norm(s, b, 2.0);
}

}  // namespace testing
