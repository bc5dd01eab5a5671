#include "confham/jsonl.hpp"

#include <cmath>
#include <cstdio>

namespace confham {
namespace io {

std::string fmt_double(double v) {
    if (std::isnan(v)) return "null";
    if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string json_array(const std::vector<double>& v) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt_double(v[i]);
    }
    out += "]";
    return out;
}

std::string model_to_json(const ModelParams& params) {
    std::string out = "{";
    out += "\"n\":" + std::to_string(params.n);
    out += ",\"k\":" + fmt_double(params.k);
    out += ",\"s\":" + fmt_double(params.s);
    out += ",\"gamma\":" + fmt_double(params.gamma);
    out += ",\"central_sign\":" + std::to_string(params.central_sign);
    out += ",\"omegas\":" + json_array(params.omegas);
    out += ",\"alphas\":" + json_array(params.alphas);
    out += "}";
    return out;
}

std::string state_to_json(const PhaseState& state) {
    return "{\"x\":" + json_array(state.x) + ",\"p\":" + json_array(state.p) + "}";
}

std::string polar_to_json(const transforms::PolarState& s) {
    return "{\"r\":" + fmt_double(s.r) + ",\"phi\":" + fmt_double(s.phi) +
           ",\"p_r\":" + fmt_double(s.p_r) + ",\"p_phi\":" + fmt_double(s.p_phi) + "}";
}

std::string uv_to_json(const transforms::UVState& s) {
    return "{\"u\":" + fmt_double(s.u) + ",\"v\":" + fmt_double(s.v) +
           ",\"p_u\":" + fmt_double(s.p_u) + ",\"p_v\":" + fmt_double(s.p_v) + "}";
}

void write_trajectory_jsonl(std::ostream& os, const dynamics::Trajectory& traj) {
    os << "{\"params\":" << model_to_json(traj.params) << ",\"method\":\"" << traj.method
       << "\",\"step\":" << fmt_double(traj.step) << "}\n";
    for (const auto& s : traj.samples) {
        os << "{\"t\":" << fmt_double(s.t) << ",\"x\":" << json_array(s.state.x)
           << ",\"p\":" << json_array(s.state.p) << ",\"H\":" << fmt_double(s.energy) << "}\n";
    }
}

}  // namespace io
}  // namespace confham
