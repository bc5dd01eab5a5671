#pragma once

#include <functional>
#include <vector>

#include "confham/model.hpp"

namespace confham {
namespace transforms {

/// Planar state in polar coordinates with conjugate momenta.
/// The deformed-oscillator forms live on the open sector phi in (0, pi/(2k)),
/// where cos(k phi) > 0 and sin(k phi) > 0.
struct PolarState {
    double r = 1.0;
    double phi = 0.0;
    double p_r = 0.0;
    double p_phi = 0.0;
};

/// Planar state in the (u, v) frame reached through z -> z^k.
struct UVState {
    double u = 1.0;
    double v = 1.0;
    double p_u = 0.0;
    double p_v = 0.0;
};

/// Deformed-oscillator Hamiltonian in polar coordinates:
///   1/2 (p_r^2 + p_phi^2/r^2) + 1/2 w^2 r^2
///   + a k^2/(2 r^2 cos^2 k phi) + b k^2/(2 r^2 sin^2 k phi).
double eval_ttw_polar(double omega, double alpha, double beta, double k, const PolarState& state);

/// Polar -> Cartesian with the standard cotangent lift (canonical).
PhaseState polar_to_cartesian(const PolarState& state);

/// Cartesian -> polar inverse lift; requires r > 0.
PolarState cartesian_to_polar(const PhaseState& state);

/// Cartesian -> (u, v) through u + i v = (x + i y)^k, momenta solved from
/// p_z = (k/2) z^(k-1) (p_u - i p_v). Principal branch; for non-integer k the
/// input must sit in the open sector phi in (0, pi/(2k)).
UVState cartesian_to_uv(double k, const PhaseState& state);

/// Inverse of cartesian_to_uv on the principal branch.
PhaseState uv_to_cartesian(double k, const UVState& state);

/// The s-parametrized conformal form in the (u, v) frame:
///   k^2 (u^2+v^2)^((k-1)/k) { 1/2 (p_u^2+p_v^2)
///     + (w^2/(2k^2)) (u^2+v^2)^((s-k+1)/k) + a/(2u^2) + b/(2v^2) }.
double eval_uv_form(double omega, double alpha, double beta, double k, double s,
                    const UVState& state);

/// A phase-space map on flat vectors ordered (q_1..q_m, p_1..p_m).
using PhaseMap = std::function<std::vector<double>(const std::vector<double>&)>;

/// Max-norm of J^T Omega J - Omega, with J the central finite-difference
/// Jacobian of the map at the point; near zero for canonical maps.
double symplectic_defect(const PhaseMap& map, const std::vector<double>& point, double step);

/// Flat-vector adapters with the (q, p) ordering used by symplectic_defect.
std::vector<double> to_flat(const PolarState& s);
PolarState polar_from_flat(const std::vector<double>& v);
std::vector<double> to_flat(const UVState& s);
UVState uv_from_flat(const std::vector<double>& v);
std::vector<double> to_flat(const PhaseState& s);
PhaseState phase_from_flat(const std::vector<double>& v);

}  // namespace transforms
}  // namespace confham
