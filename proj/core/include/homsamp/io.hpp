#pragma once

#include <string>
#include <vector>

#include "homsamp/coefficients.hpp"
#include "homsamp/dyadic.hpp"
#include "homsamp/frame.hpp"
#include "homsamp/sampling.hpp"
#include "homsamp/space.hpp"
#include "homsamp/verification.hpp"

namespace homsamp {

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite.
std::string format_double(double v);

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& content);

/// Generator, resolution, parameters and every point with its weight.
std::string space_to_json(const PointCloudSpace& space);
PointCloudSpace space_from_json(const std::string& text);

/// Cube membership is stored as [start, length] runs of point indices.
std::string cubes_to_json(const DyadicSystem& system);
DyadicSystem cubes_from_json(const std::string& text);

/// Build options and measured constants of a frame.
std::string frame_header_json(const WaveletFrame& frame);
FrameOptions frame_options_from_json(const std::string& text);
/// Rebuilds the frame from its header; the build is deterministic.
WaveletFrame frame_from_json(const std::string& text, const DyadicSystem& system,
                             const PointCloudSpace& space);
/// Rows: element, j, k, point, value.
std::string frame_phi_csv(const WaveletFrame& frame);
/// Same layout for the dual family. Dense; intended for small frames.
std::string frame_psi_csv(const WaveletFrame& frame);

/// Rows: j, k, value.
std::string coefficients_csv(const CoefficientTable& coeffs);
CoefficientTable coefficients_from_csv(const std::string& text, int base = 2);

std::string reports_json(const std::vector<VerificationReport>& reports);
std::string sampling_report_json(const SamplingReport& report, const std::string& function);
std::string calibration_json(const KappaCalibration& calibration);

/// One row per (j, n): j, n, E.
std::string diagnostics_E_csv(const DiagnosticsRecord& record, int j_min);
/// One row per (j, k): j, k, lambda_count, with R per level.
std::string diagnostics_counts_csv(const CardinalityRecord& record, int j_min);
std::string diagnostics_summary_json(const DiagnosticsRecord& record, int j_min);

}  // namespace homsamp
