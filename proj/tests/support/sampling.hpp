#pragma once

#include <vector>

#include "confham/model.hpp"
#include "confham/rng.hpp"

namespace testsupport {

/// Random phase point in the open positive orthant, away from every singular
/// set of the family: positions in [0.5, 2], momenta in [-1, 1].
inline confham::PhaseState random_orthant_state(int n, confham::Rng& rng, double x_lo = 0.5,
                                                double x_hi = 2.0, double p_lo = -1.0,
                                                double p_hi = 1.0) {
    std::vector<double> x(n), p(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(x_lo, x_hi);
    for (int i = 0; i < n; ++i) p[i] = rng.uniform(p_lo, p_hi);
    return confham::PhaseState(std::move(x), std::move(p));
}

}  // namespace testsupport
