#include "confham/model.hpp"

#include <cmath>

namespace confham {

bool ModelParams::equal_omegas() const {
    for (std::size_t i = 1; i < omegas.size(); ++i) {
        if (omegas[i] != omegas[0]) return false;
    }
    return true;
}

void ModelParams::validate() const {
    // n = 1 exists for the quantum module's one-dimensional grids; the
    // classical catalog and probes use n >= 2 throughout.
    if (n < 1) throw std::invalid_argument("ModelParams: n must be >= 1");
    if (k == 0.0 || !std::isfinite(k)) throw std::invalid_argument("ModelParams: k must be a nonzero real");
    if (!std::isfinite(s)) throw std::invalid_argument("ModelParams: s must be finite");
    if (gamma < 0.0 || !std::isfinite(gamma)) throw std::invalid_argument("ModelParams: gamma must be >= 0");
    if (central_sign != 1 && central_sign != -1)
        throw std::invalid_argument("ModelParams: central_sign must be +1 or -1");
    if (static_cast<int>(omegas.size()) != n)
        throw std::invalid_argument("ModelParams: omegas must have length n");
    if (static_cast<int>(alphas.size()) != n)
        throw std::invalid_argument("ModelParams: alphas must have length n");
    for (int i = 0; i < n; ++i) {
        if (omegas[i] < 0.0 || !std::isfinite(omegas[i]))
            throw std::invalid_argument("ModelParams: omegas[" + std::to_string(i) + "] must be >= 0");
        if (!std::isfinite(alphas[i]))
            throw std::invalid_argument("ModelParams: alphas[" + std::to_string(i) + "] must be finite");
    }
    if (central_sign == -1 && !equal_omegas())
        throw std::invalid_argument("ModelParams: central_sign = -1 requires equal omegas");
}

double PhaseState::norm() const {
    double s2 = 0.0;
    for (double xi : x) s2 += xi * xi;
    for (double pi : p) s2 += pi * pi;
    return std::sqrt(s2);
}

void check_state(const ModelParams& params, const PhaseState& state) {
    if (state.dim() != params.n || static_cast<int>(state.p.size()) != params.n)
        throw std::domain_error("PhaseState: dimension mismatch with ModelParams (n = " +
                                std::to_string(params.n) + ")");
    double s2 = 0.0;
    for (int i = 0; i < params.n; ++i) {
        s2 += state.x[i] * state.x[i];
        if (params.alphas[i] != 0.0 && state.x[i] == 0.0)
            throw std::domain_error("PhaseState: x[" + std::to_string(i) +
                                    "] = 0 with nonzero Rosochatius coupling");
    }
    if (params.gamma == 0.0 && params.k != 1.0 && s2 == 0.0)
        throw std::domain_error("PhaseState: x = 0 with gamma = 0 and k != 1 (conformal factor undefined)");
}

bool state_admissible(const ModelParams& params, const PhaseState& state) {
    try {
        check_state(params, state);
    } catch (const std::domain_error&) {
        return false;
    }
    return true;
}

}  // namespace confham
