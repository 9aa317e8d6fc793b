#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace homsamp {

/// Values <f, psi_{j,k}> indexed by level j and cube index k. Levels are
/// contiguous starting at j_min.
class CoefficientTable {
 public:
  CoefficientTable() = default;
  CoefficientTable(int j_min, int base, std::vector<std::vector<double>> levels);

  /// All-zero table with the given per-level sizes.
  static CoefficientTable zeros(int j_min, int base, const std::vector<std::size_t>& sizes);

  int j_min() const { return j_min_; }
  int j_max() const { return j_min_ + int(levels_.size()) - 1; }
  int base() const { return base_; }
  std::size_t level_count() const { return levels_.size(); }
  bool empty() const { return levels_.empty(); }
  std::size_t size() const;  // total entry count

  std::span<const double> level(int j) const;
  std::span<double> level(int j);
  double at(int j, std::size_t k) const { return level(j)[k]; }
  double& at(int j, std::size_t k) { return level(j)[k]; }

  bool same_shape(const CoefficientTable& other) const;

  CoefficientTable& operator+=(const CoefficientTable& other);
  CoefficientTable& operator*=(double c);
  friend CoefficientTable operator+(CoefficientTable a, const CoefficientTable& b) { return a += b; }
  friend CoefficientTable operator*(double c, CoefficientTable a) { return a *= c; }

 private:
  int j_min_ = 0;
  int base_ = 2;
  std::vector<std::vector<double>> levels_;
};

}  // namespace homsamp
