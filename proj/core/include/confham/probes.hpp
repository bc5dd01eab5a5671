#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "confham/dynamics.hpp"
#include "confham/model.hpp"
#include "confham/observables.hpp"
#include "confham/rng.hpp"

namespace confham {
namespace probes {

/// Radial minima of r(t) = |x(t)| located by parabolic interpolation through
/// sample triples. diagnostic is "circular" when r is flat along the whole
/// run, "no_minima" when the run shows no interior minimum.
struct RadialEvents {
    std::vector<std::pair<double, PhaseState>> events;
    std::string diagnostic;
};

RadialEvents radial_events(const dynamics::Trajectory& traj);

/// Mean unwrapped angular advance per radial period in the (axis_i, axis_j)
/// plane, divided by 2 pi. Signed: counterclockwise winding is positive.
double rotation_number(const dynamics::Trajectory& traj, int axis_i, int axis_j);

/// Smallest-denominator continued-fraction convergent p/q with q <= q_max and
/// |x - p/q| <= tol; absent when no convergent qualifies.
std::optional<std::pair<long, long>> rational_detect(double x, long q_max, double tol);

struct ClosureOptions {
    double t_max = -1.0;         // < 0: automatic (about 40 radial periods)
    double step = 0.01;          // midpoint step; adaptive initial and max step
    std::string method = "rk_adaptive";
    double rk_tol = 1e-10;       // adaptive-method tolerance
    double epsilon = 1e-4;       // closure threshold (normalized recurrence)
    double escape_factor = 50.0; // r_escape = factor * |x(0)|
    int period_multiples = 12;   // candidate periods to scan
    bool halving_check = true;   // verdict must survive a step-halved rerun
    long rational_q_max = 8;
    double rational_tol = 1e-3;
};

struct ClosureReport {
    ModelParams params;
    PhaseState initial;
    bool bounded = true;
    std::optional<double> rotation_number;          // planar runs only
    std::optional<std::pair<long, long>> rational;
    double recurrence_distance = 0.0;               // normalized by |z(0)|
    double radial_period = 0.0;
    int n_events = 0;
    std::string verdict;                            // closed | open | undetermined
    std::string diagnostic;
};

/// Integrates the orbit, measures boundedness, rotation number and the
/// minimum normalized recurrence distance near integer multiples of the
/// radial period, and issues a closure verdict at threshold opts.epsilon.
ClosureReport closure_test(const ModelParams& params, const PhaseState& initial,
                           const ClosureOptions& opts = {});

/// Relative spread (max - min) / max(|mean|, 1e-30) of an observable along a
/// trajectory.
double conservation_drift(const dynamics::Trajectory& traj,
                          const observables::Observable& obs);

struct ScanCell {
    double k = 0.0;
    double s = 0.0;
    double closure_fraction = 0.0;  // NaN flags an all-undetermined cell
    int n_samples = 0;
    double mean_recurrence = 0.0;
    int n_undetermined = 0;
};

struct ScanTable {
    std::vector<double> k_grid;
    std::vector<double> s_grid;
    std::vector<ScanCell> cells;  // k outer, s inner
    std::uint64_t seed = 0;
};

/// Seeded initial condition in the open positive orthant: positions uniform
/// in [0.6, 1.6]^n, momenta uniform in [-0.8, 0.8]^n.
PhaseState sample_initial_condition(const ModelParams& params, Rng& rng);

/// Runs closure_test over a (k, s) grid with n_ic seeded initial conditions
/// per cell. Attractive members (central_sign = -1) are sampled with the
/// bound-orbit filter E < 0; escaping draws are resampled. Deterministic for
/// a fixed seed, independent of evaluation order.
ScanTable parameter_scan(const ModelParams& tmpl, const std::vector<double>& k_grid,
                         const std::vector<double>& s_grid, int n_ic, std::uint64_t seed,
                         const ClosureOptions& opts = {});

/// CSV with header "k,s,closure_fraction,n_samples,mean_recurrence".
std::string scan_to_csv(const ScanTable& table);

std::string closure_report_to_json(const ClosureReport& report);

}  // namespace probes
}  // namespace confham
