#pragma once

#include <string>
#include <vector>

#include "homsamp/space.hpp"

namespace homsamp {

/// Named test functions evaluated on a point cloud. Coordinates are the
/// generator's own (x1 in [0,1), x2 in [0,1) for the square).
///
///   const[:c]     constant c (default 1)
///   saw           x1
///   sin:m, cos:m  sin(2 pi m x1), cos(2 pi m x1)
///   sin2:m        sin(2 pi m x2)
///   bump          (1 - (rho(x, centre)/0.3)^2)_+^2, centre (0.5, 0.5)
///   stair:m       floor(m x1) / m
///   indicator     1 on x1 < 0.5
///   noise:seed    uniform on [-1, 1], mt19937_64(seed)
std::vector<double> evaluate_function(const std::string& name, const PointCloudSpace& space);

/// Throws InvalidArgument for unknown names or bad parameters.
void validate_function_name(const std::string& name);

/// Fourteen functions covering smooth, rough and random inputs.
std::vector<std::string> default_battery(const PointCloudSpace& space);

/// {sin:1..8} and the staircases stair:2, stair:4, stair:8.
std::vector<std::string> torus_calibration_battery();

/// The smooth subset used for rate fits.
std::vector<std::string> smooth_battery();

}  // namespace homsamp
