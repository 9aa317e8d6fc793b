#include "homsamp/battery.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "homsamp/error.hpp"

namespace homsamp {

namespace {

struct Parsed {
  std::string head;
  std::string arg;
};

Parsed split(const std::string& name) {
  const auto colon = name.find(':');
  if (colon == std::string::npos) return {name, {}};
  return {name.substr(0, colon), name.substr(colon + 1)};
}

double number(const std::string& name, const std::string& arg) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(arg, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != arg.size() || !std::isfinite(v)) {
    throw InvalidArgument("test function '" + name + "': bad parameter '" + arg + "'");
  }
  return v;
}

long whole(const std::string& name, const std::string& arg, long lo) {
  const double v = number(name, arg);
  if (v != std::floor(v) || v < double(lo)) {
    throw InvalidArgument("test function '" + name + "': parameter must be an integer >= " +
                          std::to_string(lo));
  }
  return long(v);
}

}  // namespace

void validate_function_name(const std::string& name) {
  const auto [head, arg] = split(name);
  if (head == "const") {
    if (!arg.empty()) number(name, arg);
  } else if (head == "saw" || head == "bump" || head == "indicator") {
    if (!arg.empty()) throw InvalidArgument("test function '" + name + "' takes no parameter");
  } else if (head == "sin" || head == "cos" || head == "sin2" || head == "stair") {
    whole(name, arg, 1);
  } else if (head == "noise") {
    whole(name, arg.empty() ? "0" : arg, 0);
  } else {
    throw InvalidArgument("unknown test function '" + name + "'");
  }
}

std::vector<double> evaluate_function(const std::string& name, const PointCloudSpace& space) {
  validate_function_name(name);
  const auto [head, arg] = split(name);
  const auto& pts = space.points();
  std::vector<double> f(space.size());
  const double two_pi = 2.0 * std::numbers::pi;
  if (head == "const") {
    const double c = arg.empty() ? 1.0 : number(name, arg);
    std::fill(f.begin(), f.end(), c);
  } else if (head == "saw") {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = pts[i][0];
  } else if (head == "sin" || head == "cos" || head == "sin2") {
    const double m = double(whole(name, arg, 1));
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double t = two_pi * m * (head == "sin2" ? pts[i][1] : pts[i][0]);
      f[i] = head == "cos" ? std::cos(t) : std::sin(t);
    }
  } else if (head == "bump") {
    const Point centre = {0.5, 0.5};
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double t = space.distance_to(i, centre) / 0.3;
      f[i] = t < 1.0 ? (1.0 - t * t) * (1.0 - t * t) : 0.0;
    }
  } else if (head == "stair") {
    const double m = double(whole(name, arg, 1));
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::floor(m * pts[i][0]) / m;
  } else if (head == "indicator") {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = pts[i][0] < 0.5 ? 1.0 : 0.0;
  } else {
    std::mt19937_64 rng(std::uint64_t(whole(name, arg.empty() ? "0" : arg, 0)));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : f) v = u(rng);
  }
  return f;
}

std::vector<std::string> default_battery(const PointCloudSpace& space) {
  std::vector<std::string> out = {"const", "saw",     "sin:1",   "sin:2",     "sin:4",
                                  "cos:1", "cos:3",   "bump",    "stair:4",   "stair:8",
                                  "indicator", "noise:0"};
  if (space.generator().kind == GeneratorKind::anisotropic_square) {
    out.insert(out.end(), {"sin2:1", "sin2:2"});
  } else {
    out.insert(out.end(), {"sin:8", "cos:2"});
  }
  return out;
}

std::vector<std::string> torus_calibration_battery() {
  return {"sin:1", "sin:2", "sin:3", "sin:4", "sin:5", "sin:6", "sin:7", "sin:8",
          "stair:2", "stair:4", "stair:8"};
}

std::vector<std::string> smooth_battery() { return {"sin:1", "sin:2", "cos:1", "cos:3", "bump"}; }

}  // namespace homsamp
