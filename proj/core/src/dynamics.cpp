#include "confham/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace confham {
namespace dynamics {

namespace {

using Vec = std::vector<double>;

// Flat phase vector (x..., p...).
Vec flatten(const PhaseState& s) {
    Vec z(s.x);
    z.insert(z.end(), s.p.begin(), s.p.end());
    return z;
}

PhaseState unflatten(const Vec& z) {
    std::size_t n = z.size() / 2;
    return PhaseState(Vec(z.begin(), z.begin() + n), Vec(z.begin() + n, z.end()));
}

// f(z) for Hamilton's equations on the flat vector.
Vec flow_flat(const ModelParams& params, const Vec& z) {
    const int n = params.n;
    std::span<const double> x(z.data(), n), p(z.data() + n, n);
    Vec dx(n), dp(n);
    ham_gradient<double>(params, x, p, dx, dp);
    Vec out(2 * n);
    for (int i = 0; i < n; ++i) {
        out[i] = dp[i];       // dx/dt = dH/dp
        out[n + i] = -dx[i];  // dp/dt = -dH/dx
    }
    return out;
}

double max_abs_diff(const Vec& a, const Vec& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Vec midpoint_solve(const ModelParams& params, const Vec& z, double h, double tol, int max_iter) {
    Vec w = z;
    {
        Vec f0 = flow_flat(params, z);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = z[i] + h * f0[i];
    }
    Vec mid(z.size()), w_next(z.size());
    double res = 0.0;
    for (int iter = 0; iter < max_iter; ++iter) {
        for (std::size_t i = 0; i < z.size(); ++i) mid[i] = 0.5 * (z[i] + w[i]);
        Vec fm = flow_flat(params, mid);
        for (std::size_t i = 0; i < z.size(); ++i) w_next[i] = z[i] + h * fm[i];
        res = max_abs_diff(w_next, w);
        w.swap(w_next);
        if (res <= tol) return w;
    }
    throw NonConvergenceError(res, max_iter);
}

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200,
                 E6 = 22.0 / 525, E7 = -1.0 / 40;

struct RkResult {
    Vec y;
    double err;  // scaled error norm; accept when <= 1
};

RkResult dopri_step(const ModelParams& params, const Vec& y, double h, double tol) {
    auto stage = [&](const Vec& base) { return flow_flat(params, base); };
    const std::size_t d = y.size();
    Vec k1 = stage(y), tmp(d);

    auto blend = [&](std::initializer_list<std::pair<const Vec*, double>> terms) {
        for (std::size_t i = 0; i < d; ++i) {
            double acc = y[i];
            for (const auto& [v, c] : terms) acc += h * c * (*v)[i];
            tmp[i] = acc;
        }
        return stage(tmp);
    };

    Vec k2 = blend({{&k1, A21}});
    Vec k3 = blend({{&k1, A31}, {&k2, A32}});
    Vec k4 = blend({{&k1, A41}, {&k2, A42}, {&k3, A43}});
    Vec k5 = blend({{&k1, A51}, {&k2, A52}, {&k3, A53}, {&k4, A54}});
    Vec k6 = blend({{&k1, A61}, {&k2, A62}, {&k3, A63}, {&k4, A64}, {&k5, A65}});

    Vec y5(d);
    for (std::size_t i = 0; i < d; ++i)
        y5[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
    Vec k7 = stage(y5);

    double err2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] +
                        E7 * k7[i]);
        double sc = tol * (1.0 + std::max(std::abs(y[i]), std::abs(y5[i])));
        err2 += (e / sc) * (e / sc);
    }
    return {std::move(y5), std::sqrt(err2 / static_cast<double>(d))};
}

}  // namespace

std::pair<std::vector<double>, std::vector<double>> flow_field(const ModelParams& params,
                                                               const PhaseState& state) {
    auto [dx, dp] = grad_hamiltonian(params, state);
    for (double& v : dx) v = -v;
    return {dp, std::move(dx)};  // (dH/dp, -dH/dx)
}

PhaseState step_implicit_midpoint(const ModelParams& params, const PhaseState& state, double h,
                                  double tol, int max_iter) {
    check_state(params, state);
    return unflatten(midpoint_solve(params, flatten(state), h, tol, max_iter));
}

Trajectory integrate(const ModelParams& params, const PhaseState& initial, double t_max, double h,
                     const std::string& method, const IntegrateOptions& opts) {
    if (!(t_max > 0.0) || !(h > 0.0))
        throw std::invalid_argument("integrate: t_max and h must be positive");
    if (method != "midpoint" && method != "rk_adaptive")
        throw std::invalid_argument("integrate: unknown method \"" + method + "\"");
    check_state(params, initial);

    Trajectory traj;
    traj.params = params;
    traj.method = method;
    traj.step = h;
    traj.samples.push_back({0.0, initial, eval_hamiltonian(params, initial)});

    Vec z = flatten(initial);
    double t = 0.0;
    double h_next = h;
    long accepted = 0;
    const double t_end = t_max * (1.0 - 1e-15);

    while (t < t_end) {
        double h_try = std::min(method == "midpoint" ? h : h_next, t_max - t);
        if (method != "midpoint" && opts.max_step > 0.0) h_try = std::min(h_try, opts.max_step);
        Vec z_new;
        bool stepped = false;
        while (!stepped) {
            try {
                if (method == "midpoint") {
                    z_new = midpoint_solve(params, z, h_try, opts.solver_tol, opts.solver_max_iter);
                    stepped = true;
                } else {
                    RkResult r = dopri_step(params, z, h_try, opts.rk_tol);
                    if (r.err <= 1.0) {
                        z_new = std::move(r.y);
                        stepped = true;
                        double grow = 0.9 * std::pow(std::max(r.err, 1e-10), -0.2);
                        h_next = h_try * std::clamp(grow, 0.2, 5.0);
                    } else {
                        double shrink = std::max(0.9 * std::pow(r.err, -0.2), 0.2);
                        h_try *= shrink;
                        if (h_try < opts.h_min)
                            throw IntegrationAbort("step size underflow", t, unflatten(z));
                    }
                }
            } catch (const std::domain_error& err) {
                h_try *= 0.5;
                if (h_try < opts.h_min)
                    throw IntegrationAbort(std::string("singular approach (") + err.what() + ")", t,
                                           unflatten(z));
            } catch (const NonConvergenceError& err) {
                h_try *= 0.5;
                if (h_try < opts.h_min)
                    throw IntegrationAbort(std::string("solver stall (") + err.what() + ")", t,
                                           unflatten(z));
            }
        }
        z = std::move(z_new);
        t += h_try;
        ++accepted;
        if (accepted % opts.sample_stride == 0 || t >= t_end) {
            PhaseState st = unflatten(z);
            traj.samples.push_back({t, st, eval_hamiltonian(params, st)});
        }
    }
    return traj;
}

double ReparamSystem::effective_potential(const std::vector<double>& x) const {
    std::span<const double> xs(x);
    double w = potential_terms<double>(params, xs);
    double e = (1.0 - params.k) / params.k;
    double s2g = params.gamma;
    for (double xi : x) s2g += xi * xi;
    double shift = e == 0.0 ? energy_level : energy_level * pow_nonneg(s2g, e);
    return w - shift;
}

std::vector<double> ReparamSystem::effective_gradient(const std::vector<double>& x) const {
    const int n = params.n;
    double s2g = params.gamma;
    for (double xi : x) s2g += xi * xi;

    double q_form = 0.0;
    for (int i = 0; i < n; ++i) q_form += params.omegas[i] * params.omegas[i] * x[i] * x[i];
    double qexp = params.central_exponent();
    double cpref = params.central_sign / (2.0 * params.k * params.k);
    double central_slope = 0.0;
    if (qexp != 0.0) {
        if (q_form == 0.0) {
            if (qexp == 1.0)
                central_slope = cpref;
            else if (qexp > 1.0)
                central_slope = 0.0;
            else
                throw std::domain_error("reparam gradient: central term singular at sum w^2 x^2 = 0");
        } else {
            central_slope = cpref * qexp * std::pow(q_form, qexp - 1.0);
        }
    }

    double e = (1.0 - params.k) / params.k;
    double shift_slope = e == 0.0 ? 0.0 : energy_level * e * pow_nonneg(s2g, e - 1.0);

    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) {
        g[i] = central_slope * 2.0 * params.omegas[i] * params.omegas[i] * x[i] -
               shift_slope * 2.0 * x[i];
        if (params.alphas[i] != 0.0) {
            if (x[i] == 0.0)
                throw std::domain_error("reparam gradient: x[" + std::to_string(i) + "] = 0");
            g[i] -= 2.0 * params.alphas[i] / (x[i] * x[i] * x[i]);
        }
    }
    return g;
}

double ReparamSystem::eval_k(const PhaseState& state) const {
    double kin = 0.0;
    for (double p : state.p) kin += 0.5 * p * p;
    return kin + effective_potential(state.x);
}

ReparamSystem reparametrize(const ModelParams& params, double energy) {
    params.validate();
    return ReparamSystem{params, energy};
}

Trajectory integrate_reparam(const ReparamSystem& system, const PhaseState& initial,
                             double tau_max, double h) {
    if (!(tau_max > 0.0) || !(h > 0.0))
        throw std::invalid_argument("integrate_reparam: tau_max and h must be positive");
    const ModelParams& params = system.params;
    check_state(params, initial);

    PhaseState start = initial;
    double k0 = system.eval_k(start);
    if (std::abs(k0) > 1e-6)
        throw std::domain_error("integrate_reparam: initial K = " + std::to_string(k0) +
                                " violates the level set");
    if (std::abs(k0) > 1e-9) {
        // Project back onto K = 0 by rescaling momenta.
        double kin = 0.0;
        for (double p : start.p) kin += 0.5 * p * p;
        double needed = kin - k0;
        if (needed < 0.0 || kin == 0.0)
            throw std::domain_error("integrate_reparam: cannot project onto the level set");
        double scale = std::sqrt(needed / kin);
        for (double& p : start.p) p *= scale;
    }

    Trajectory traj;
    traj.params = params;
    traj.method = "leapfrog_reparam";
    traj.step = h;

    auto inv_f = [&](const std::vector<double>& x) {
        std::span<const double> xs(x);
        return 1.0 / conformal_factor<double>(params, xs);
    };

    std::vector<double> x = start.x, p = start.p;
    double t = 0.0;
    double g_prev = inv_f(x);
    traj.samples.push_back({0.0, start, eval_hamiltonian(params, start)});

    const long steps = static_cast<long>(std::ceil(tau_max / h - 1e-12));
    std::vector<double> x_half(params.n);
    for (long m = 0; m < steps; ++m) {
        try {
            for (int i = 0; i < params.n; ++i) x_half[i] = x[i] + 0.5 * h * p[i];
            std::vector<double> g = system.effective_gradient(x_half);
            for (int i = 0; i < params.n; ++i) {
                p[i] -= h * g[i];
                x[i] = x_half[i] + 0.5 * h * p[i];
            }
        } catch (const std::domain_error& err) {
            throw IntegrationAbort(std::string("singular approach (") + err.what() + ")", t,
                                   traj.samples.back().state);
        }
        double g_now = inv_f(x);
        t += 0.5 * h * (g_prev + g_now);
        g_prev = g_now;
        PhaseState st{x, p};
        traj.samples.push_back({t, st, eval_hamiltonian(params, st)});
    }
    return traj;
}

}  // namespace dynamics
}  // namespace confham
