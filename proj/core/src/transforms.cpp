#include "confham/transforms.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace confham {
namespace transforms {

namespace {

bool is_integer(double k) { return std::nearbyint(k) == k; }

void check_sector(double k, double phi) {
    if (!(phi > 0.0 && phi < M_PI / (2.0 * k)))
        throw std::domain_error("sector violation: phi = " + std::to_string(phi) +
                                " outside (0, pi/(2k)) for k = " + std::to_string(k));
}

// Principal-branch complex power for possibly non-integer exponents.
std::complex<double> cpow_principal(const std::complex<double>& z, double e) {
    double r = std::abs(z);
    double th = std::arg(z);
    double re = std::pow(r, e);
    return {re * std::cos(e * th), re * std::sin(e * th)};
}

}  // namespace

double eval_ttw_polar(double omega, double alpha, double beta, double k, const PolarState& state) {
    if (!(state.r > 0.0)) throw std::domain_error("eval_ttw_polar: r must be positive");
    check_sector(k, state.phi);
    double c = std::cos(k * state.phi);
    double s = std::sin(k * state.phi);
    double r2 = state.r * state.r;
    return 0.5 * (state.p_r * state.p_r + state.p_phi * state.p_phi / r2) +
           0.5 * omega * omega * r2 + alpha * k * k / (2.0 * r2 * c * c) +
           beta * k * k / (2.0 * r2 * s * s);
}

PhaseState polar_to_cartesian(const PolarState& state) {
    if (!(state.r > 0.0)) throw std::domain_error("polar_to_cartesian: r must be positive");
    double c = std::cos(state.phi);
    double s = std::sin(state.phi);
    double px = state.p_r * c - state.p_phi / state.r * s;
    double py = state.p_r * s + state.p_phi / state.r * c;
    return PhaseState({state.r * c, state.r * s}, {px, py});
}

PolarState cartesian_to_polar(const PhaseState& state) {
    if (state.dim() != 2) throw std::domain_error("cartesian_to_polar: state must be planar");
    double x = state.x[0], y = state.x[1];
    double r = std::hypot(x, y);
    if (!(r > 0.0)) throw std::domain_error("cartesian_to_polar: zero radius");
    PolarState out;
    out.r = r;
    out.phi = std::atan2(y, x);
    out.p_r = (x * state.p[0] + y * state.p[1]) / r;
    out.p_phi = x * state.p[1] - y * state.p[0];
    return out;
}

UVState cartesian_to_uv(double k, const PhaseState& state) {
    if (state.dim() != 2) throw std::domain_error("cartesian_to_uv: state must be planar");
    std::complex<double> z(state.x[0], state.x[1]);
    double r = std::abs(z);
    if (!(r > 0.0)) throw std::domain_error("cartesian_to_uv: zero radius");
    if (!is_integer(k)) check_sector(k, std::atan2(state.x[1], state.x[0]));

    std::complex<double> w = cpow_principal(z, k);
    // p_z = (p_x - i p_y)/2 = (k/2) z^(k-1) (p_u - i p_v), solved for (p_u, p_v).
    std::complex<double> pz(0.5 * state.p[0], -0.5 * state.p[1]);
    std::complex<double> c = 0.5 * k * cpow_principal(z, k - 1.0);
    std::complex<double> puv = pz / c;
    UVState out;
    out.u = w.real();
    out.v = w.imag();
    out.p_u = puv.real();
    out.p_v = -puv.imag();
    return out;
}

PhaseState uv_to_cartesian(double k, const UVState& state) {
    std::complex<double> w(state.u, state.v);
    if (!(std::abs(w) > 0.0)) throw std::domain_error("uv_to_cartesian: zero radius");
    std::complex<double> z = cpow_principal(w, 1.0 / k);
    std::complex<double> c = 0.5 * k * cpow_principal(z, k - 1.0);
    std::complex<double> pz = c * std::complex<double>(state.p_u, -state.p_v);
    return PhaseState({z.real(), z.imag()}, {2.0 * pz.real(), -2.0 * pz.imag()});
}

double eval_uv_form(double omega, double alpha, double beta, double k, double s,
                    const UVState& state) {
    if (state.u == 0.0 || state.v == 0.0)
        throw std::domain_error("eval_uv_form: coordinate-plane singularity (u or v = 0)");
    double rho = state.u * state.u + state.v * state.v;
    double inner = 0.5 * (state.p_u * state.p_u + state.p_v * state.p_v) +
                   omega * omega / (2.0 * k * k) * std::pow(rho, (s - k + 1.0) / k) +
                   alpha / (2.0 * state.u * state.u) + beta / (2.0 * state.v * state.v);
    return k * k * std::pow(rho, (k - 1.0) / k) * inner;
}

double symplectic_defect(const PhaseMap& map, const std::vector<double>& point, double step) {
    const std::size_t dim = point.size();
    if (dim % 2 != 0) throw std::invalid_argument("symplectic_defect: odd phase-space dimension");
    if (!(step > 0.0)) throw std::invalid_argument("symplectic_defect: step must be positive");
    const std::size_t m = dim / 2;

    // Central-difference Jacobian, one column per input coordinate.
    std::vector<std::vector<double>> jac(dim, std::vector<double>(dim));
    std::vector<double> probe = point;
    for (std::size_t j = 0; j < dim; ++j) {
        double hi = point[j] + step;
        double lo = point[j] - step;
        probe[j] = hi;
        std::vector<double> plus = map(probe);
        probe[j] = lo;
        std::vector<double> minus = map(probe);
        probe[j] = point[j];
        if (plus.size() != dim || minus.size() != dim)
            throw std::invalid_argument("symplectic_defect: map changes dimension");
        // Divide by the representable probe spread, not the nominal 2*step.
        for (std::size_t i = 0; i < dim; ++i) jac[i][j] = (plus[i] - minus[i]) / (hi - lo);
    }

    // Omega acts as (q, p) -> (p, -q): (Omega J)_ij = J_(i+m)j for i < m, -J_(i-m)j else.
    auto omega_row = [&](std::size_t i, std::size_t j) {
        return i < m ? jac[i + m][j] : -jac[i - m][j];
    };
    double defect = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            double jtoj = 0.0;
            for (std::size_t l = 0; l < dim; ++l) jtoj += jac[l][i] * omega_row(l, j);
            double omega_ij = 0.0;
            if (i < m && j == i + m) omega_ij = 1.0;
            if (i >= m && j == i - m) omega_ij = -1.0;
            defect = std::max(defect, std::abs(jtoj - omega_ij));
        }
    }
    return defect;
}

std::vector<double> to_flat(const PolarState& s) { return {s.r, s.phi, s.p_r, s.p_phi}; }
PolarState polar_from_flat(const std::vector<double>& v) { return {v[0], v[1], v[2], v[3]}; }
std::vector<double> to_flat(const UVState& s) { return {s.u, s.v, s.p_u, s.p_v}; }
UVState uv_from_flat(const std::vector<double>& v) { return {v[0], v[1], v[2], v[3]}; }
std::vector<double> to_flat(const PhaseState& s) {
    std::vector<double> out(s.x);
    out.insert(out.end(), s.p.begin(), s.p.end());
    return out;
}
PhaseState phase_from_flat(const std::vector<double>& v) {
    std::size_t m = v.size() / 2;
    return PhaseState(std::vector<double>(v.begin(), v.begin() + m),
                      std::vector<double>(v.begin() + m, v.end()));
}

}  // namespace transforms
}  // namespace confham
