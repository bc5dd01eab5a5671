#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "confham/catalog.hpp"
#include "confham/dynamics.hpp"
#include "confham/observables.hpp"
#include "confham/probes.hpp"
#include "support/geometry.hpp"
#include "support/oracles.hpp"
#include "support/sampling.hpp"

using namespace confham;
using namespace confham::dynamics;

namespace {

ModelParams harmonic_params(double omega = 1.0) {
    ModelParams m;
    m.n = 2;
    m.k = 1.0;
    m.s = 1.0;
    m.gamma = 0.0;
    m.central_sign = +1;
    m.omegas = {omega, omega};
    m.alphas = {0.0, 0.0};
    return m;
}

ModelParams generic_params() {
    ModelParams m;
    m.n = 2;
    m.k = 2.0;
    m.s = 1.0;
    m.gamma = 0.5;
    m.central_sign = +1;
    m.omegas = {1.0, 1.0};
    m.alphas = {0.3, 0.4};
    return m;
}

}  // namespace

TEST_CASE("flow field") {
    SUBCASE("harmonic oscillator at rest") {
        auto [dx, dp] = flow_field(harmonic_params(), {{1, 0}, {0, 0}});
        CHECK(dx[0] == 0.0);
        CHECK(dx[1] == 0.0);
        CHECK(dp[0] == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(dp[1] == doctest::Approx(0.0));
    }
    SUBCASE("conformal factor scales the velocity") {
        ModelParams m;
        m.n = 2;
        m.k = 2.0;
        m.s = 1.0;
        m.gamma = 0.0;
        m.central_sign = +1;
        m.omegas = {1, 1};
        m.alphas = {1, 1};
        auto [dx, dp] = flow_field(m, {{1, 1}, {1, 0}});
        CHECK(dx[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
        CHECK(dx[1] == doctest::Approx(0.0));
    }
    SUBCASE("the flow is divergence-free (Liouville)") {
        auto m = generic_params();
        Rng rng(61);
        for (int rep = 0; rep < 20; ++rep) {
            auto st = testsupport::random_orthant_state(2, rng);
            std::vector<Dual1> x(2), p(2);
            for (int i = 0; i < 2; ++i) {
                x[i] = Dual1(st.x[i]);
                p[i] = Dual1(st.p[i]);
            }
            double div = 0.0;
            std::vector<Dual1> dx(2), dp(2);
            for (int i = 0; i < 2; ++i) {
                x[i].d = 1.0;
                ham_gradient<Dual1>(m, x, p, dx, dp);
                div += dp[i].d;  // d/dx_i of dx_i/dt = dH/dp_i
                x[i].d = 0.0;
                p[i].d = 1.0;
                ham_gradient<Dual1>(m, x, p, dx, dp);
                div -= dx[i].d;  // d/dp_i of dp_i/dt = -dH/dx_i
                p[i].d = 0.0;
            }
            CHECK(std::abs(div) <= 1e-10);
        }
    }
}

TEST_CASE("implicit midpoint step") {
    SUBCASE("free particle advances positions exactly") {
        ModelParams m = harmonic_params();
        m.omegas = {0.0, 0.0};
        PhaseState st{{1.0, 2.0}, {0.5, -0.25}};
        auto next = step_implicit_midpoint(m, st, 0.125);
        CHECK(next.x[0] == doctest::Approx(1.0 + 0.125 * 0.5).epsilon(1e-15));
        CHECK(next.x[1] == doctest::Approx(2.0 - 0.125 * 0.25).epsilon(1e-15));
        CHECK(next.p[0] == 0.5);
        CHECK(next.p[1] == -0.25);
    }
    SUBCASE("harmonic oscillator returns after one period") {
        auto m = harmonic_params();
        PhaseState st{{1.0, 0.0}, {0.0, 0.4}};
        auto traj = integrate(m, st, 2.0 * M_PI, 1e-3, "midpoint");
        const auto& last = traj.samples.back().state;
        for (int i = 0; i < 2; ++i) {
            CHECK(std::abs(last.x[i] - st.x[i]) < 1e-5);
            CHECK(std::abs(last.p[i] - st.p[i]) < 1e-5);
        }
    }
    SUBCASE("symmetry: step(h) then step(-h) is the identity") {
        auto m = generic_params();
        Rng rng(19);
        for (int rep = 0; rep < 20; ++rep) {
            auto st = testsupport::random_orthant_state(2, rng);
            auto there = step_implicit_midpoint(m, st, 1e-2, 1e-15);
            auto back = step_implicit_midpoint(m, there, -1e-2, 1e-15);
            for (int i = 0; i < 2; ++i) {
                CHECK(std::abs(back.x[i] - st.x[i]) <= 1e-12);
                CHECK(std::abs(back.p[i] - st.p[i]) <= 1e-12);
            }
        }
    }
}

TEST_CASE("integrate") {
    SUBCASE("circular Kepler orbit keeps its radius") {
        auto entry = catalog::instantiate_reduction("kepler", {{"n", 2}, {"lambda", 1}});
        PhaseState st{{1.0, 0.0}, {0.0, 1.0}};
        auto traj = integrate(entry.params, st, 20.0, 1e-4, "midpoint");
        double worst = 0.0;
        for (const auto& s : traj.samples) {
            double r = std::hypot(s.state.x[0], s.state.x[1]);
            worst = std::max(worst, std::abs(r - 1.0));
        }
        CHECK(worst <= 1e-8);
    }
    SUBCASE("harmonic energy drift stays at solver tolerance") {
        auto m = harmonic_params();
        PhaseState st{{1.0, 0.0}, {0.0, 0.7}};
        auto traj = integrate(m, st, 100.0, 1e-3, "midpoint");
        CHECK(traj.samples.size() == 100001);
        auto h = observables::hamiltonian_observable(m);
        CHECK(probes::conservation_drift(traj, *h) <= 1e-10);
    }
    SUBCASE("angular momentum is a conserved quadratic invariant") {
        auto m = generic_params();
        m.alphas = {0.0, 0.0};
        PhaseState st{{1.0, 0.3}, {-0.2, 0.5}};
        auto traj = integrate(m, st, 10.0, 1e-3, "midpoint");
        auto l12 = observables::angular_momentum_observable(0, 1);
        double l0 = observables::eval(*l12, st);
        double worst = 0.0;
        for (const auto& s : traj.samples)
            worst = std::max(worst, std::abs(observables::eval(*l12, s.state) - l0));
        CHECK(worst <= 1e-10);
    }
    SUBCASE("repulsive barriers are never crossed") {
        ModelParams m = harmonic_params();
        m.omegas = {0.0, 0.0};
        m.alphas = {1.0, 1.0};
        PhaseState st{{0.8, 1.2}, {0.0, 0.0}};
        auto traj = integrate(m, st, 20.0, 1e-3, "midpoint");
        for (const auto& s : traj.samples) {
            CHECK(s.state.x[0] > 0.05);
            CHECK(s.state.x[1] > 0.05);
        }
    }
    SUBCASE("adaptive integrator tracks the Kepler ellipse") {
        auto entry = catalog::instantiate_reduction("kepler", {{"n", 2}, {"lambda", 1}});
        testsupport::KeplerOracle oracle;
        PhaseState st = oracle.perihelion_state(0.5);
        double t_period = oracle.radial_period(oracle.energy(st));
        IntegrateOptions opts;
        opts.rk_tol = 1e-11;
        auto traj = integrate(entry.params, st, t_period, 0.01, "rk_adaptive", opts);
        const auto& last = traj.samples.back().state;
        for (int i = 0; i < 2; ++i) {
            CHECK(std::abs(last.x[i] - st.x[i]) < 1e-6);
            CHECK(std::abs(last.p[i] - st.p[i]) < 1e-6);
        }
    }
    SUBCASE("trajectory time stamps strictly increase") {
        auto m = generic_params();
        auto traj = integrate(m, {{1.0, 1.1}, {0.2, -0.1}}, 1.0, 1e-3, "midpoint");
        for (std::size_t i = 1; i < traj.samples.size(); ++i)
            CHECK(traj.samples[i].t > traj.samples[i - 1].t);
        CHECK(traj.method == "midpoint");
    }
}

TEST_CASE("fixed-energy reparametrization") {
    SUBCASE("k = 1 is a constant shift") {
        auto m = harmonic_params();
        auto sys = reparametrize(m, 0.75);
        std::vector<double> x = {0.6, 1.1};
        std::span<const double> xs(x);
        double w = potential_terms<double>(m, xs);
        CHECK(sys.effective_potential(x) == doctest::Approx(w - 0.75).epsilon(1e-15));
    }
    SUBCASE("K vanishes on the level set") {
        auto m = generic_params();
        Rng rng(23);
        for (int rep = 0; rep < 20; ++rep) {
            auto st = testsupport::random_orthant_state(2, rng);
            double e = eval_hamiltonian(m, st);
            auto sys = reparametrize(m, e);
            CHECK(std::abs(sys.eval_k(st)) <= 1e-13 * std::max(1.0, std::abs(e)));
        }
    }
    SUBCASE("k = 1 reconstructed time equals tau") {
        auto m = harmonic_params();
        PhaseState st{{1.0, 0.0}, {0.0, 0.9}};
        auto sys = reparametrize(m, eval_hamiltonian(m, st));
        auto traj = integrate_reparam(sys, st, 2.0, 1e-3);
        for (std::size_t i = 0; i < traj.samples.size(); ++i)
            CHECK(traj.samples[i].t == doctest::Approx(i * 1e-3).epsilon(1e-12));
    }
    SUBCASE("level-set violation is rejected") {
        auto m = harmonic_params();
        PhaseState st{{1.0, 0.0}, {0.0, 0.9}};
        auto sys = reparametrize(m, eval_hamiltonian(m, st) + 0.1);
        CHECK_THROWS_AS(integrate_reparam(sys, st, 1.0, 1e-3), std::domain_error);
    }
    SUBCASE("Kepler radial period agrees between the two routes") {
        auto entry = catalog::instantiate_reduction("kepler", {{"n", 2}, {"lambda", 1}});
        PhaseState st{{1.0, 0.0}, {0.0, 1.1}};
        double e = eval_hamiltonian(entry.params, st);
        REQUIRE(e < 0.0);

        auto direct = integrate(entry.params, st, 30.0, 2e-4, "midpoint");
        auto ev_direct = probes::radial_events(direct);
        REQUIRE(ev_direct.events.size() >= 3);
        double t_direct = (ev_direct.events.back().first - ev_direct.events.front().first) /
                          (ev_direct.events.size() - 1);

        auto sys = reparametrize(entry.params, e);
        auto reparam = integrate_reparam(sys, st, 30.0, 2e-4);
        auto ev_reparam = probes::radial_events(reparam);
        REQUIRE(ev_reparam.events.size() >= 3);
        double t_reparam = (ev_reparam.events.back().first - ev_reparam.events.front().first) /
                           (ev_reparam.events.size() - 1);

        CHECK(t_reparam == doctest::Approx(t_direct).epsilon(1e-6));
        testsupport::KeplerOracle oracle;
        CHECK(t_direct == doctest::Approx(oracle.radial_period(e)).epsilon(1e-5));
    }
    SUBCASE("K drift along a wide leapfrog orbit") {
        auto entry = catalog::instantiate_reduction("kepler", {{"n", 2}, {"lambda", 1}});
        PhaseState st{{5.0, 0.0}, {0.0, 0.44}};
        double e = eval_hamiltonian(entry.params, st);
        auto sys = reparametrize(entry.params, e);
        auto traj = integrate_reparam(sys, st, 100.0, 1e-3);
        CHECK(traj.samples.size() == 100001);
        double lo = 1e300, hi = -1e300;
        for (const auto& s : traj.samples) {
            double k = sys.eval_k(s.state);
            lo = std::min(lo, k);
            hi = std::max(hi, k);
        }
        CHECK((hi - lo) / std::abs(e) <= 1e-8);
    }
    SUBCASE("route equivalence: direct and reparametrized orbits overlap") {
        auto entry = catalog::instantiate_reduction(
            "ttw", {{"k", 2}, {"omega", 1}, {"alpha", 0.25}, {"beta", 0.25}});
        PhaseState st{{1.1, 0.9}, {0.1, -0.2}};
        double e = eval_hamiltonian(entry.params, st);

        auto direct = integrate(entry.params, st, 40.0, 1e-3, "midpoint");
        auto sys = reparametrize(entry.params, e);
        auto reparam = integrate_reparam(sys, st, 60.0, 1e-3);

        // One closure period: the k = 2 member closes after one radial period.
        auto ev = probes::radial_events(direct);
        REQUIRE(ev.events.size() >= 2);
        double period = ev.events[1].first - ev.events[0].first;

        std::vector<testsupport::PlanePoint> a, b;
        for (const auto& s : direct.samples) {
            if (s.t > 1.05 * period) break;
            a.emplace_back(s.state.x[0], s.state.x[1]);
        }
        for (const auto& s : reparam.samples) {
            if (s.t > 1.05 * period) break;
            b.emplace_back(s.state.x[0], s.state.x[1]);
        }
        REQUIRE(a.size() > 100);
        REQUIRE(b.size() > 100);
        CHECK(testsupport::hausdorff_polyline(a, b) <= 1e-4);
    }
}
