#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "confham/dual.hpp"
#include "confham/model.hpp"

namespace confham {

/// Real-branch power on nonnegative bases. Convention fixed by the family:
/// 0^q = 0 for q > 0, domain error for q <= 0 (no consistent real value).
template <typename T>
T pow_nonneg(const T& base, double q) {
    double b = value(base);
    if (b < 0.0)
        throw std::domain_error("pow_nonneg: negative base " + std::to_string(b));
    if (b == 0.0) {
        if (q > 0.0) return T(0.0);
        throw std::domain_error("pow_nonneg: 0 raised to exponent " + std::to_string(q) + " <= 0");
    }
    return pow(base, q);
}

namespace detail {

template <typename T>
T sum_sq(std::span<const T> v) {
    T acc(0.0);
    for (const T& vi : v) acc += vi * vi;
    return acc;
}

}  // namespace detail

/// Conformal factor F = (sum x_i^2 + gamma)^((k-1)/k).
/// For k = 1 the exponent is exactly zero and F == 1 at every point.
template <typename T>
T conformal_factor(const ModelParams& params, std::span<const T> x) {
    double e = params.conformal_exponent();
    if (e == 0.0) return T(1.0);
    T base = detail::sum_sq(x) + params.gamma;
    T f = pow_nonneg(base, e);
    if (value(f) == 0.0)
        throw std::domain_error("conformal factor vanishes: x = 0 with gamma = 0 and k != 1");
    return f;
}

/// Central + Rosochatius part W(x) (everything inside the braces except T).
template <typename T>
T potential_terms(const ModelParams& params, std::span<const T> x) {
    T q_form(0.0);
    for (int i = 0; i < params.n; ++i)
        q_form += (params.omegas[i] * params.omegas[i]) * (x[i] * x[i]);
    double qexp = params.central_exponent();
    T central = (params.central_sign / (2.0 * params.k * params.k)) * pow_nonneg(q_form, qexp);

    T ros(0.0);
    for (int i = 0; i < params.n; ++i) {
        if (params.alphas[i] == 0.0) continue;
        if (value(x[i]) == 0.0)
            throw std::domain_error("Rosochatius term undefined: x[" + std::to_string(i) + "] = 0");
        ros += params.alphas[i] / (x[i] * x[i]);
    }
    return central + ros;
}

/// Scalar-generic evaluation of the family Hamiltonian F * (T + W).
template <typename T>
T ham_value(const ModelParams& params, std::span<const T> x, std::span<const T> p) {
    T kinetic = 0.5 * detail::sum_sq(p);
    return conformal_factor(params, x) * (kinetic + potential_terms(params, x));
}

/// Closed-form phase-space gradient:
///   dH/dp_i = F p_i
///   dH/dx_i = dF/dx_i (T + W) + F dW/dx_i
/// with dF/dx_i = ((k-1)/k) 2 x_i (sum x^2 + gamma)^(-1/k) and
/// dW/dx_i = sigma/(2k^2) q (sum omega^2 x^2)^(q-1) 2 omega_i^2 x_i - 2 alpha_i / x_i^3.
template <typename T>
void ham_gradient(const ModelParams& params, std::span<const T> x, std::span<const T> p,
                  std::span<T> dh_dx, std::span<T> dh_dp) {
    const int n = params.n;
    T s2g = detail::sum_sq(x) + params.gamma;
    double fexp = params.conformal_exponent();
    T f = fexp == 0.0 ? T(1.0) : pow_nonneg(s2g, fexp);
    if (value(f) == 0.0)
        throw std::domain_error("conformal factor vanishes: x = 0 with gamma = 0 and k != 1");

    T q_form(0.0);
    for (int i = 0; i < n; ++i)
        q_form += (params.omegas[i] * params.omegas[i]) * (x[i] * x[i]);
    double qexp = params.central_exponent();
    double cpref = params.central_sign / (2.0 * params.k * params.k);

    // Scalar factor multiplying 2 omega_i^2 x_i in dW/dx_i.
    T central_slope(0.0);
    T central = cpref * pow_nonneg(q_form, qexp);
    if (qexp != 0.0) {
        if (value(q_form) == 0.0) {
            if (qexp == 1.0)
                central_slope = T(cpref);
            else if (qexp > 1.0)
                central_slope = T(0.0);
            else
                throw std::domain_error(
                    "central-term gradient undefined: sum omega^2 x^2 = 0 with exponent " +
                    std::to_string(qexp) + " < 1");
        } else {
            central_slope = cpref * qexp * pow(q_form, qexp - 1.0);
        }
    }

    T kin = 0.5 * detail::sum_sq(p);
    T ros(0.0);
    for (int i = 0; i < n; ++i) {
        if (params.alphas[i] == 0.0) continue;
        if (value(x[i]) == 0.0)
            throw std::domain_error("Rosochatius term undefined: x[" + std::to_string(i) + "] = 0");
        ros += params.alphas[i] / (x[i] * x[i]);
    }
    T inner = kin + central + ros;

    // dF/dx_i = fexp * 2 x_i * s2g^(-1/k); zero identically when k = 1.
    T df_scale(0.0);
    if (fexp != 0.0) df_scale = fexp * pow_nonneg(s2g, -1.0 / params.k);

    for (int i = 0; i < n; ++i) {
        T dw = central_slope * (2.0 * params.omegas[i] * params.omegas[i]) * x[i];
        if (params.alphas[i] != 0.0)
            dw -= (2.0 * params.alphas[i]) / (x[i] * x[i] * x[i]);
        dh_dx[i] = df_scale * 2.0 * x[i] * inner + f * dw;
        dh_dp[i] = f * p[i];
    }
}

/// Energy of one phase state; equals EnergyBreakdown.total.
double eval_hamiltonian(const ModelParams& params, const PhaseState& state);

/// Per-term decomposition of eval_hamiltonian.
EnergyBreakdown eval_breakdown(const ModelParams& params, const PhaseState& state);

/// Closed-form gradient pair (dH/dx, dH/dp).
std::pair<std::vector<double>, std::vector<double>> grad_hamiltonian(const ModelParams& params,
                                                                     const PhaseState& state);

/// Gradient via forward-mode duals; cross-check route for grad_hamiltonian.
std::pair<std::vector<double>, std::vector<double>> grad_hamiltonian_dual(const ModelParams& params,
                                                                          const PhaseState& state);

}  // namespace confham
