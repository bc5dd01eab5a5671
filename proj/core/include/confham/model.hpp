#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace confham {

/// Parameter record of the n-dimensional conformal Hamiltonian family
///
///   H = (sum x_i^2 + gamma)^((k-1)/k) * { 1/2 sum p_i^2
///       + sigma/(2 k^2) (sum omega_i^2 x_i^2)^((s-k+1)/k)
///       + sum alpha_i / x_i^2 }.
///
/// central_sign (sigma) keeps the attractive Kepler-type members real
/// instead of carrying imaginary frequencies.
struct ModelParams {
    int n = 2;
    double k = 1.0;
    double s = 1.0;
    double gamma = 0.0;
    int central_sign = +1;
    std::vector<double> omegas;  // size n, each >= 0
    std::vector<double> alphas;  // size n

    /// Exponent (k-1)/k of the conformal factor.
    double conformal_exponent() const { return (k - 1.0) / k; }
    /// Exponent (s-k+1)/k of the central term.
    double central_exponent() const { return (s - k + 1.0) / k; }

    bool equal_omegas() const;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Positions and conjugate momenta; the argument of every classical evaluation.
struct PhaseState {
    std::vector<double> x;
    std::vector<double> p;

    PhaseState() = default;
    PhaseState(std::vector<double> x_, std::vector<double> p_)
        : x(std::move(x_)), p(std::move(p_)) {}

    int dim() const { return static_cast<int>(x.size()); }

    /// Euclidean norm of the full (x, p) vector.
    double norm() const;
};

/// Diagnostic decomposition of one Hamiltonian evaluation.
struct EnergyBreakdown {
    double conformal_factor = 1.0;  // F = (sum x^2 + gamma)^((k-1)/k)
    double kinetic = 0.0;           // T = 1/2 sum p^2
    double central = 0.0;           // sigma/(2k^2) (sum omega^2 x^2)^((s-k+1)/k)
    double rosochatius = 0.0;       // sum alpha_i / x_i^2
    double total = 0.0;             // F * (T + central + rosochatius)
};

/// Checks the PhaseState invariants for the given parameters.
/// Throws std::domain_error naming the failing coordinate.
void check_state(const ModelParams& params, const PhaseState& state);

/// Non-throwing variant of check_state.
bool state_admissible(const ModelParams& params, const PhaseState& state);

}  // namespace confham
