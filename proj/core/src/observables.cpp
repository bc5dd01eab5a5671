#include "confham/observables.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace confham {
namespace observables {

namespace {

// Gradient of obs at a point whose coordinates are scalars of type T.
template <typename T>
void gradient_t(const Observable& obs, std::span<const T> x, std::span<const T> p,
                std::vector<T>& gx, std::vector<T>& gp) {
    const std::size_t n = x.size();
    std::vector<Dual<T>> dx(n), dp(n);
    for (std::size_t i = 0; i < n; ++i) {
        dx[i] = Dual<T>(x[i], T(0.0));
        dp[i] = Dual<T>(p[i], T(0.0));
    }
    gx.resize(n);
    gp.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        dx[i].d = T(1.0);
        gx[i] = obs.eval(std::span<const Dual<T>>(dx), std::span<const Dual<T>>(dp)).d;
        dx[i].d = T(0.0);
        dp[i].d = T(1.0);
        gp[i] = obs.eval(std::span<const Dual<T>>(dx), std::span<const Dual<T>>(dp)).d;
        dp[i].d = T(0.0);
    }
}

// {f, g} at a point with scalar type T; T = Dual2 is beyond the supported
// nesting depth (never needed: Jacobi tests stop at second order).
template <typename T>
T bracket_t(const Observable& f, const Observable& g, std::span<const T> x,
            std::span<const T> p) {
    if constexpr (std::is_same_v<T, Dual2>) {
        throw std::logic_error("poisson bracket: nesting depth exceeded");
    } else {
        std::vector<T> fx, fp, gx, gp;
        gradient_t<T>(f, x, p, fx, fp);
        gradient_t<T>(g, x, p, gx, gp);
        T acc(0.0);
        for (std::size_t i = 0; i < x.size(); ++i) acc += fx[i] * gp[i] - fp[i] * gx[i];
        return acc;
    }
}

}  // namespace

double eval(const Observable& obs, const PhaseState& state) {
    return obs.eval(std::span<const double>(state.x), std::span<const double>(state.p));
}

std::vector<double> phase_gradient(const Observable& obs, const PhaseState& state) {
    std::vector<double> gx, gp;
    gradient_t<double>(obs, state.x, state.p, gx, gp);
    gx.insert(gx.end(), gp.begin(), gp.end());
    return gx;
}

double poisson_bracket(const Observable& f, const Observable& g, const PhaseState& state) {
    return bracket_t<double>(f, g, state.x, state.p);
}

BracketReport make_bracket_report(const Observable& f, const Observable& g,
                                  const std::vector<PhaseState>& points) {
    BracketReport rep;
    rep.pair = {f.id(), g.id()};
    rep.sample_points = static_cast<int>(points.size());
    double scale = 0.0;
    for (const auto& pt : points) {
        rep.max_abs_bracket = std::max(rep.max_abs_bracket, std::abs(poisson_bracket(f, g, pt)));
        auto gf = phase_gradient(f, pt);
        auto gg = phase_gradient(g, pt);
        double nf = 0.0, ng = 0.0;
        for (double v : gf) nf += v * v;
        for (double v : gg) ng += v * v;
        scale = std::max(scale, std::sqrt(nf) * std::sqrt(ng));
    }
    rep.scale = std::max(scale, 1e-30);
    return rep;
}

ObservablePtr hamiltonian_observable(const ModelParams& params) {
    params.validate();
    return make_observable("H", [params](auto x, auto p) { return ham_value(params, x, p); });
}

ObservablePtr coordinate_observable(int i) {
    return make_observable("x_" + std::to_string(i + 1),
                           [i](auto x, auto) { return x[i]; });
}

ObservablePtr momentum_observable(int i) {
    return make_observable("p_" + std::to_string(i + 1),
                           [i](auto, auto p) { return p[i]; });
}

ObservablePtr angular_momentum_observable(int i, int j) {
    if (i >= j) throw std::invalid_argument("angular_momentum_observable: need i < j");
    std::string id = "L_" + std::to_string(i + 1) + std::to_string(j + 1);
    return make_observable(id, [i, j](auto x, auto p) { return x[i] * p[j] - x[j] * p[i]; });
}

ObservablePtr angular_rosochatius_observable(int i, int j, const ModelParams& params) {
    if (i >= j) throw std::invalid_argument("angular_rosochatius_observable: need i < j");
    if (!params.equal_omegas())
        throw std::invalid_argument(
            "angular_rosochatius_observable: defined only for equal frequencies");
    double ai = params.alphas[i];
    double aj = params.alphas[j];
    std::string id = "K_" + std::to_string(i + 1) + std::to_string(j + 1);
    return make_observable(id, [i, j, ai, aj](auto x, auto p) {
        auto l = x[i] * p[j] - x[j] * p[i];
        auto k = l * l;
        if (ai != 0.0) k += 2.0 * ai * (x[j] * x[j]) / (x[i] * x[i]);
        if (aj != 0.0) k += 2.0 * aj * (x[i] * x[i]) / (x[j] * x[j]);
        return k;
    });
}

ObservablePtr ttw_polar_hamiltonian_observable(double omega, double alpha, double beta, double k) {
    return make_observable("H_ttw_polar", [=](auto x, auto p) {
        auto r2 = x[0] * x[0];
        auto ck = cos(k * x[1]);
        auto sk = sin(k * x[1]);
        auto h = 0.5 * (p[0] * p[0] + p[1] * p[1] / r2) + 0.5 * omega * omega * r2;
        if (alpha != 0.0) h += alpha * k * k / (2.0 * r2 * ck * ck);
        if (beta != 0.0) h += beta * k * k / (2.0 * r2 * sk * sk);
        return h;
    });
}

ObservablePtr ttw_second_integral_observable(double k, double alpha, double beta) {
    return make_observable("X_ttw", [=](auto x, auto p) {
        auto ck = cos(k * x[1]);
        auto sk = sin(k * x[1]);
        auto v = p[1] * p[1];
        if (alpha != 0.0) v += alpha * k * k / (ck * ck);
        if (beta != 0.0) v += beta * k * k / (sk * sk);
        return v;
    });
}

ObservablePtr product_observable(const ObservablePtr& f, const ObservablePtr& g) {
    return make_observable(f->id() + "*" + g->id(),
                           [f, g](auto x, auto p) { return f->eval(x, p) * g->eval(x, p); });
}

ObservablePtr scaled_observable(double c, const ObservablePtr& f) {
    return make_observable(std::to_string(c) + "*" + f->id(),
                           [c, f](auto x, auto p) { return c * f->eval(x, p); });
}

ObservablePtr bracket_observable(const ObservablePtr& f, const ObservablePtr& g) {
    std::string id = "{" + f->id() + "," + g->id() + "}";
    return make_observable(id, [f, g](auto x, auto p) {
        using T = typename std::remove_cvref_t<decltype(x)>::value_type;
        return bracket_t<T>(*f, *g, x, p);
    });
}

double angular_rosochatius_integral(int i, int j, const ModelParams& params,
                                    const PhaseState& state) {
    if (!(i >= 0 && i < j && j < params.n))
        throw std::invalid_argument("angular_rosochatius_integral: need 0 <= i < j < n");
    if (!params.equal_omegas())
        throw std::invalid_argument(
            "angular_rosochatius_integral: not an integral for unequal frequencies");
    double l = state.x[i] * state.p[j] - state.x[j] * state.p[i];
    double k = l * l;
    if (params.alphas[i] != 0.0) {
        if (state.x[i] == 0.0)
            throw std::domain_error("angular_rosochatius_integral: x[" + std::to_string(i) + "] = 0");
        k += 2.0 * params.alphas[i] * state.x[j] * state.x[j] / (state.x[i] * state.x[i]);
    }
    if (params.alphas[j] != 0.0) {
        if (state.x[j] == 0.0)
            throw std::domain_error("angular_rosochatius_integral: x[" + std::to_string(j) + "] = 0");
        k += 2.0 * params.alphas[j] * state.x[i] * state.x[i] / (state.x[j] * state.x[j]);
    }
    return k;
}

double ttw_second_integral(double k, double alpha, double beta,
                           const transforms::PolarState& state) {
    if (!(state.phi > 0.0 && state.phi < M_PI / (2.0 * k)))
        throw std::domain_error("ttw_second_integral: phi outside the principal sector");
    double ck = std::cos(k * state.phi);
    double sk = std::sin(k * state.phi);
    return state.p_phi * state.p_phi + alpha * k * k / (ck * ck) + beta * k * k / (sk * sk);
}

int independence_rank(const std::vector<ObservablePtr>& obs, const ModelParams& params,
                      const std::vector<PhaseState>& points) {
    if (obs.empty()) throw std::invalid_argument("independence_rank: need at least one observable");
    if (points.empty()) throw std::invalid_argument("independence_rank: need at least one point");
    int best = 0;
    int evaluated = 0;
    for (const auto& pt : points) {
        Eigen::MatrixXd grads(static_cast<int>(obs.size()), 2 * params.n);
        try {
            for (std::size_t r = 0; r < obs.size(); ++r) {
                auto g = phase_gradient(*obs[r], pt);
                for (int c = 0; c < 2 * params.n; ++c) grads(static_cast<int>(r), c) = g[c];
            }
        } catch (const std::domain_error&) {
            continue;  // skip points outside some observable's domain
        }
        ++evaluated;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(grads);
        const auto& sv = svd.singularValues();
        if (sv.size() == 0) continue;
        double cut = 1e-10 * sv(0);
        int rank = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) > cut) ++rank;
        best = std::max(best, rank);
    }
    if (evaluated == 0)
        throw std::domain_error("independence_rank: evaluation failed at every point");
    return best;
}

}  // namespace observables
}  // namespace confham
