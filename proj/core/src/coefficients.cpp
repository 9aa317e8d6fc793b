#include "homsamp/coefficients.hpp"

#include <string>

#include "homsamp/error.hpp"

namespace homsamp {

CoefficientTable::CoefficientTable(int j_min, int base, std::vector<std::vector<double>> levels)
    : j_min_(j_min), base_(base), levels_(std::move(levels)) {
  if (base_ < 2) throw InvalidArgument("coefficient table: base must be >= 2");
}

CoefficientTable CoefficientTable::zeros(int j_min, int base, const std::vector<std::size_t>& sizes) {
  std::vector<std::vector<double>> levels;
  levels.reserve(sizes.size());
  for (std::size_t s : sizes) levels.emplace_back(s, 0.0);
  return CoefficientTable(j_min, base, std::move(levels));
}

std::size_t CoefficientTable::size() const {
  std::size_t total = 0;
  for (const auto& l : levels_) total += l.size();
  return total;
}

std::span<const double> CoefficientTable::level(int j) const {
  if (j < j_min_ || j > j_max()) {
    throw InvalidArgument("coefficient table has no level " + std::to_string(j));
  }
  return levels_[std::size_t(j - j_min_)];
}

std::span<double> CoefficientTable::level(int j) {
  if (j < j_min_ || j > j_max()) {
    throw InvalidArgument("coefficient table has no level " + std::to_string(j));
  }
  return levels_[std::size_t(j - j_min_)];
}

bool CoefficientTable::same_shape(const CoefficientTable& other) const {
  if (j_min_ != other.j_min_ || base_ != other.base_ || levels_.size() != other.levels_.size()) {
    return false;
  }
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    if (levels_[l].size() != other.levels_[l].size()) return false;
  }
  return true;
}

CoefficientTable& CoefficientTable::operator+=(const CoefficientTable& other) {
  if (!same_shape(other)) throw InvalidArgument("coefficient tables differ in shape");
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    for (std::size_t k = 0; k < levels_[l].size(); ++k) levels_[l][k] += other.levels_[l][k];
  }
  return *this;
}

CoefficientTable& CoefficientTable::operator*=(double c) {
  for (auto& l : levels_) {
    for (double& v : l) v *= c;
  }
  return *this;
}

}  // namespace homsamp
