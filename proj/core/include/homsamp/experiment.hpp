#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace homsamp {

/// JSON experiment description. Example:
///   {"space": {"generator": "torus-1d", "resolution": 1024},
///    "cubes": {"j_min": 0, "j_max": 10, "separation": 1.0},
///    "frame": {"C_phi_target": 1.5, "profile": "tent"},
///    "battery": ["const", "sin:1", "noise"],
///    "sampling": {"epsilons": [0.5, 0.25, 0.1], "p": [2],
///                 "kappa": {"mode": "calibrate"}},
///    "diagnostics": {"function": "sin:1", "level": 5},
///    "seed": 0,
///    "output": {"directory": "out", "formats": ["csv", "json"]}}
/// A bare "noise" in the battery is seeded from "seed".
struct ExperimentConfig {
  std::string generator = "torus-1d";
  std::size_t resolution = 1024;
  int j_min = 0;
  int j_max = 10;
  double separation = 1.0;
  int base = 0;  // 0: natural base of the space
  double cphi_target = 1.5;
  std::string profile = "tent";
  std::vector<std::string> battery;
  std::vector<double> epsilons = {0.5, 0.25, 0.1};
  std::vector<double> p_values = {2.0};
  bool calibrate = true;
  double kappa = 1.0;  // used when calibrate is false
  std::optional<double> class_K;
  std::optional<std::string> diagnostics_function;
  std::optional<int> diagnostics_level;
  std::uint64_t seed = 0;
  std::string output_directory = "out";
  bool write_csv = true;
  bool write_json = true;

  /// Throws InvalidArgument for unknown names and out-of-range values.
  void validate() const;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);

struct ExperimentResult {
  bool complete = false;
  std::string failed_stage;  // empty when complete
  std::string error;
  bool all_pass = false;
  std::vector<std::string> files;  // relative to the output directory
  /// 0: complete and every sampling check passed; 1: complete with failures
  /// or unresolvable checks; 2: a stage raised an error.
  int exit_code() const;
};

/// discretize -> build_dyadic_system -> verify_dyadic -> build_frame ->
/// verify_frame -> analyze/besov_norm -> calibrate_kappa -> sampling sweep
/// -> proof_diagnostics, writing every artifact and a MANIFEST.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace homsamp
