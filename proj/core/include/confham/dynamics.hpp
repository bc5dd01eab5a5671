#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "confham/hamiltonian.hpp"
#include "confham/model.hpp"

namespace confham {
namespace dynamics {

/// One time sample of an orbit; energy is eval_hamiltonian at the state.
struct Sample {
    double t = 0.0;
    PhaseState state;
    double energy = 0.0;
};

/// Time-stamped orbit with the recipe that produced it.
struct Trajectory {
    ModelParams params;
    std::string method;
    double step = 0.0;
    std::vector<Sample> samples;
};

/// Raised when an integration cannot continue; carries the last good point.
class IntegrationAbort : public std::runtime_error {
public:
    IntegrationAbort(std::string why, double t, PhaseState state)
        : std::runtime_error("integration aborted at t = " + std::to_string(t) + ": " + why),
          t_last(t),
          state_last(std::move(state)) {}

    double t_last;
    PhaseState state_last;
};

/// Raised by the midpoint solver when the fixed-point iteration stalls.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(double residual, int iterations)
        : std::runtime_error("implicit midpoint did not converge: residual " +
                             std::to_string(residual) + " after " + std::to_string(iterations) +
                             " iterations"),
          residual(residual),
          iterations(iterations) {}

    double residual;
    int iterations;
};

/// Hamilton's equations of the family: (dx/dt, dp/dt) = (dH/dp, -dH/dx).
std::pair<std::vector<double>, std::vector<double>> flow_field(const ModelParams& params,
                                                               const PhaseState& state);

/// One symmetric, symplectic implicit-midpoint step: solves
/// z' = z + h f((z + z')/2) to residual max-norm <= tol.
PhaseState step_implicit_midpoint(const ModelParams& params, const PhaseState& state, double h,
                                  double tol = 1e-13, int max_iter = 100);

struct IntegrateOptions {
    double solver_tol = 1e-13;  // midpoint fixed-point residual
    int solver_max_iter = 100;
    double rk_tol = 1e-10;      // rk_adaptive mixed abs/rel tolerance
    double h_min = 1e-12;       // floor for rejection halving
    double max_step = 0.0;      // rk_adaptive step cap; 0 disables
    int sample_stride = 1;      // record every sample_stride-th accepted step
};

/// Integrates up to t_max. method is "midpoint" (fixed step h, inadmissible
/// steps retried at h/2 down to h_min) or "rk_adaptive" (h is the initial
/// step). Throws IntegrationAbort when no admissible step survives.
Trajectory integrate(const ModelParams& params, const PhaseState& initial, double t_max, double h,
                     const std::string& method, const IntegrateOptions& opts = {});

/// Separable companion at a fixed energy level E:
///   K = 1/2 sum p^2 + W(x) - E (sum x^2 + gamma)^((1-k)/k).
/// On the level set H = E, orbits of K at level 0 trace the same point sets
/// as the family flow, with d(tau)/dt = F(x).
struct ReparamSystem {
    ModelParams params;
    double energy_level = 0.0;

    double effective_potential(const std::vector<double>& x) const;
    std::vector<double> effective_gradient(const std::vector<double>& x) const;
    /// K at a phase state (kinetic + effective potential).
    double eval_k(const PhaseState& state) const;
};

ReparamSystem reparametrize(const ModelParams& params, double energy);

/// Leapfrog (position Verlet) on the companion system in tau, with physical
/// time reconstructed by the trapezoid rule on dt/dtau = 1/F(x). The initial
/// state must satisfy K = 0 within 1e-9; |K| <= 1e-6 is projected by
/// rescaling momenta, anything larger is rejected.
Trajectory integrate_reparam(const ReparamSystem& system, const PhaseState& initial,
                             double tau_max, double h);

}  // namespace dynamics
}  // namespace confham
