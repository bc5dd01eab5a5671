#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "confham/model.hpp"

namespace testsupport {

/// Central-difference phase-space gradient of an arbitrary energy functional;
/// the independent oracle for closed-form gradients.
inline std::pair<std::vector<double>, std::vector<double>> fd_gradient(
    const std::function<double(const confham::PhaseState&)>& f, const confham::PhaseState& state,
    double h) {
    const int n = state.dim();
    std::vector<double> dx(n), dp(n);
    confham::PhaseState probe = state;
    for (int i = 0; i < n; ++i) {
        probe.x[i] = state.x[i] + h;
        double plus = f(probe);
        probe.x[i] = state.x[i] - h;
        double minus = f(probe);
        probe.x[i] = state.x[i];
        dx[i] = (plus - minus) / (2.0 * h);

        probe.p[i] = state.p[i] + h;
        plus = f(probe);
        probe.p[i] = state.p[i] - h;
        minus = f(probe);
        probe.p[i] = state.p[i];
        dp[i] = (plus - minus) / (2.0 * h);
    }
    return {dx, dp};
}

/// Closed-form Kepler data for H = p^2/2 - lambda/r.
struct KeplerOracle {
    double lambda = 1.0;

    double energy(const confham::PhaseState& s) const {
        double r = 0.0, t = 0.0;
        for (double xi : s.x) r += xi * xi;
        for (double pi : s.p) t += pi * pi;
        return 0.5 * t - lambda / std::sqrt(r);
    }
    double semi_major(double energy) const { return -lambda / (2.0 * energy); }
    double radial_period(double energy) const {
        double a = semi_major(energy);
        return 2.0 * M_PI * std::sqrt(a * a * a / lambda);
    }
    /// Perihelion start for eccentricity e on a = 1 orbits (lambda = 1):
    /// r = 1 - e, tangential speed sqrt((1+e)/(1-e)).
    confham::PhaseState perihelion_state(double e) const {
        double r = 1.0 - e;
        double v = std::sqrt(lambda * (1.0 + e) / (1.0 - e));
        return confham::PhaseState({r, 0.0}, {0.0, v});
    }
};

}  // namespace testsupport
