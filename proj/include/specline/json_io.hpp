#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "specline/atomic_norm.hpp"
#include "specline/block_toeplitz.hpp"
#include "specline/signal.hpp"
#include "specline/vandermonde.hpp"

namespace specline {

using Json = nlohmann::json;

// Complex numbers are two-element arrays [re, im]; matrices are row-major
// arrays of rows.

Json to_json(const CovarianceSequence& sigma);
CovarianceSequence covariance_from_json(const Json& j);

Json to_json(const LineSpectrum& spec);
LineSpectrum spectrum_from_json(const Json& j);

/// {"n": int, "channels": 2, "samples": [[re, im], ...]} ordered
/// y1(0), y2(0), y1(1), ...
Json to_json(const MeasurementVector& y);
MeasurementVector measurement_from_json(const Json& j);

/// {"n", "frequencies", "amplitudes": [[[re,im],[re,im]], ...]}
Json to_json(const SinusoidModel& model);
SinusoidModel model_from_json(const Json& j);

/// {"rho", "tol_primal", "tol_dual", "max_iter", "epsilon_rank",
/// "delta_theta"} plus the optional solver extensions. Missing keys keep the
/// values of `base`.
Json to_json(const SolverConfig& cfg);
SolverConfig solver_config_from_json(const Json& j, SolverConfig base = {});

Json read_json_file(const std::filesystem::path& path);
/// Writes j.dump(2) followed by a newline.
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace specline
