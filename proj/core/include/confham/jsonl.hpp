#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "confham/dynamics.hpp"
#include "confham/model.hpp"
#include "confham/transforms.hpp"

namespace confham {
namespace io {

/// Formats a double with 17 significant digits (lossless round trip); the
/// fixed wire format for every numeric field this library emits.
std::string fmt_double(double v);

std::string json_array(const std::vector<double>& v);

/// {"n":…,"k":…,"s":…,"gamma":…,"central_sign":…,"omegas":[…],"alphas":[…]}
std::string model_to_json(const ModelParams& params);

/// {"x":[…],"p":[…]}
std::string state_to_json(const PhaseState& state);

std::string polar_to_json(const transforms::PolarState& state);
std::string uv_to_json(const transforms::UVState& state);

/// Header record (params, method, step) followed by one record per sample:
/// {"t":…,"x":[…],"p":[…],"H":…}.
void write_trajectory_jsonl(std::ostream& os, const dynamics::Trajectory& traj);

}  // namespace io
}  // namespace confham
