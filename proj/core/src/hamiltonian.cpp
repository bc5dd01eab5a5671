#include "confham/hamiltonian.hpp"

namespace confham {

double eval_hamiltonian(const ModelParams& params, const PhaseState& state) {
    check_state(params, state);
    return ham_value<double>(params, state.x, state.p);
}

EnergyBreakdown eval_breakdown(const ModelParams& params, const PhaseState& state) {
    check_state(params, state);
    EnergyBreakdown out;
    out.conformal_factor = conformal_factor<double>(params, state.x);

    double kin = 0.0;
    for (double pi : state.p) kin += pi * pi;
    out.kinetic = 0.5 * kin;

    double q_form = 0.0;
    for (int i = 0; i < params.n; ++i)
        q_form += params.omegas[i] * params.omegas[i] * state.x[i] * state.x[i];
    out.central = (params.central_sign / (2.0 * params.k * params.k)) *
                  pow_nonneg(q_form, params.central_exponent());

    out.rosochatius = 0.0;
    for (int i = 0; i < params.n; ++i) {
        if (params.alphas[i] == 0.0) continue;
        out.rosochatius += params.alphas[i] / (state.x[i] * state.x[i]);
    }
    out.total = out.conformal_factor * (out.kinetic + out.central + out.rosochatius);
    return out;
}

std::pair<std::vector<double>, std::vector<double>> grad_hamiltonian(const ModelParams& params,
                                                                     const PhaseState& state) {
    check_state(params, state);
    std::vector<double> dx(params.n), dp(params.n);
    ham_gradient<double>(params, state.x, state.p, dx, dp);
    return {std::move(dx), std::move(dp)};
}

std::pair<std::vector<double>, std::vector<double>> grad_hamiltonian_dual(const ModelParams& params,
                                                                          const PhaseState& state) {
    check_state(params, state);
    const int n = params.n;
    std::vector<Dual1> x(n), p(n);
    for (int i = 0; i < n; ++i) {
        x[i] = Dual1(state.x[i]);
        p[i] = Dual1(state.p[i]);
    }
    std::vector<double> dx(n), dp(n);
    for (int i = 0; i < n; ++i) {
        x[i].d = 1.0;
        dx[i] = ham_value<Dual1>(params, x, p).d;
        x[i].d = 0.0;
        p[i].d = 1.0;
        dp[i] = ham_value<Dual1>(params, x, p).d;
        p[i].d = 0.0;
    }
    return {std::move(dx), std::move(dp)};
}

}  // namespace confham
