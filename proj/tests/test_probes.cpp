#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "confham/catalog.hpp"
#include "confham/observables.hpp"
#include "confham/probes.hpp"
#include "support/oracles.hpp"

using namespace confham;
using namespace confham::probes;

namespace {

ModelParams oscillator_params(double omega = 1.0) {
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

// Synthetic planar trajectory at fixed angle with a prescribed radius law.
dynamics::Trajectory synthetic_radial(double t_max, double h,
                                      const std::function<double(double)>& r_of_t) {
    dynamics::Trajectory traj;
    traj.params = oscillator_params();
    traj.method = "synthetic";
    traj.step = h;
    for (double t = 0.0; t <= t_max; t += h) {
        double r = r_of_t(t);
        PhaseState st{{r * std::cos(0.3), r * std::sin(0.3)}, {0.0, 0.0}};
        traj.samples.push_back({t, st, 0.0});
    }
    return traj;
}

dynamics::Trajectory precise_orbit(const ModelParams& m, const PhaseState& init, double t_max) {
    dynamics::IntegrateOptions opts;
    opts.rk_tol = 1e-11;
    opts.max_step = 0.01;
    return dynamics::integrate(m, init, t_max, 0.005, "rk_adaptive", opts);
}

}  // namespace

TEST_CASE("radial events") {
    SUBCASE("needs at least three samples") {
        dynamics::Trajectory tiny = synthetic_radial(0.01, 0.01, [](double) { return 1.0; });
        CHECK_THROWS_AS(radial_events(tiny), std::invalid_argument);
    }
    SUBCASE("circular orbit yields the circular diagnostic") {
        auto traj = synthetic_radial(10.0, 0.01, [](double) { return 1.0; });
        auto ev = radial_events(traj);
        CHECK(ev.events.empty());
        CHECK(ev.diagnostic == "circular");
    }
    SUBCASE("synthetic oscillation: minima at pi and 3 pi") {
        auto traj =
            synthetic_radial(12.0, 0.01, [](double t) { return 1.0 + 0.1 * std::cos(t); });
        auto ev = radial_events(traj);
        REQUIRE(ev.events.size() == 2);
        CHECK(std::abs(ev.events[0].first - M_PI) < 1e-3);
        CHECK(std::abs(ev.events[1].first - 3.0 * M_PI) < 1e-3);
    }
    SUBCASE("Kepler radial period matches the closed form") {
        auto entry = catalog::instantiate_reduction("kepler", {{"n", 2}, {"lambda", 1}});
        testsupport::KeplerOracle oracle;
        PhaseState st = oracle.perihelion_state(0.5);
        double t_ref = oracle.radial_period(oracle.energy(st));
        auto traj = precise_orbit(entry.params, st, 3.2 * t_ref);
        auto ev = radial_events(traj);
        REQUIRE(ev.events.size() >= 3);
        double measured =
            (ev.events.back().first - ev.events.front().first) / (ev.events.size() - 1);
        CHECK(measured == doctest::Approx(t_ref).epsilon(1e-5));
    }
}

TEST_CASE("rotation numbers of the closure ladder") {
    SUBCASE("eccentric isotropic oscillator winds half a turn per period") {
        auto m = oscillator_params();
        PhaseState st{{1.0, 0.0}, {0.2, 0.6}};
        auto traj = precise_orbit(m, st, 40.0);
        CHECK(rotation_number(traj, 0, 1) == doctest::Approx(0.5).epsilon(1e-6));
    }
    SUBCASE("eccentric Kepler orbit winds a full turn") {
        auto entry = catalog::instantiate_reduction("kepler", {{"n", 2}, {"lambda", 1}});
        testsupport::KeplerOracle oracle;
        PhaseState st = oracle.perihelion_state(0.5);
        auto traj = precise_orbit(entry.params, st, 8.0 * oracle.radial_period(oracle.energy(st)));
        CHECK(rotation_number(traj, 0, 1) == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("deformed oscillator k = 2 winds rationally") {
        auto entry = catalog::instantiate_reduction("ttw", {{"k", 2}, {"omega", 1}});
        PhaseState st{{1.2, 0.4}, {-0.1, 0.5}};
        auto traj = precise_orbit(entry.params, st, 60.0);
        double rot = rotation_number(traj, 0, 1);
        auto rat = rational_detect(rot, 8, 1e-4);
        REQUIRE(rat.has_value());
        CHECK(rat->second <= 8);
    }
}

TEST_CASE("rational detection") {
    auto half = rational_detect(0.5, 10, 1e-9);
    REQUIRE(half.has_value());
    CHECK(half->first == 1);
    CHECK(half->second == 2);

    CHECK_FALSE(rational_detect(M_PI, 50, 1e-9).has_value());

    auto third = rational_detect(0.3333333333, 10, 1e-6);
    REQUIRE(third.has_value());
    CHECK(third->first == 1);
    CHECK(third->second == 3);

    auto neg = rational_detect(-0.75, 8, 1e-9);
    REQUIRE(neg.has_value());
    CHECK(neg->first == -3);
    CHECK(neg->second == 4);

    auto zero = rational_detect(1e-12, 8, 1e-9);
    REQUIRE(zero.has_value());
    CHECK(zero->first == 0);
    CHECK(zero->second == 1);

    CHECK_THROWS_AS(rational_detect(0.5, 0, 1e-9), std::invalid_argument);
}

TEST_CASE("closure verdicts for the classical pair") {
    SUBCASE("Kepler ellipse closes with rotation 1/1") {
        auto entry = catalog::instantiate_reduction("kepler", {{"n", 2}, {"lambda", 1}});
        PhaseState st{{1.0, 0.0}, {0.0, 1.1}};
        ClosureReport rep = closure_test(entry.params, st);
        CHECK(rep.verdict == "closed");
        CHECK(rep.bounded);
        REQUIRE(rep.rational.has_value());
        CHECK(rep.rational->first == 1);
        CHECK(rep.rational->second == 1);
        CHECK(rep.recurrence_distance <= 1e-4);
    }
    SUBCASE("isotropic oscillator closes with rotation 1/2") {
        auto m = oscillator_params();
        PhaseState st{{1.0, 0.1}, {0.15, 0.8}};
        ClosureReport rep = closure_test(m, st);
        CHECK(rep.verdict == "closed");
        REQUIRE(rep.rational.has_value());
        CHECK(rep.rational->first == 1);
        CHECK(rep.rational->second == 2);
    }
    SUBCASE("escaping orbit is reported open and unbounded") {
        auto entry = catalog::instantiate_reduction("kepler", {{"n", 2}, {"lambda", 1}});
        PhaseState st{{1.0, 0.0}, {0.0, 2.0}};  // E > 0: hyperbolic
        ClosureReport rep = closure_test(entry.params, st);
        CHECK_FALSE(rep.bounded);
        CHECK(rep.verdict == "open");
    }
}

TEST_CASE("conservation drift") {
    auto m = oscillator_params();
    PhaseState st{{1.0, 0.0}, {0.0, 0.7}};
    auto traj = dynamics::integrate(m, st, 50.0, 1e-3, "midpoint");
    SUBCASE("energy on a midpoint trajectory") {
        auto h = observables::hamiltonian_observable(m);
        CHECK(conservation_drift(traj, *h) <= 1e-10);
    }
    SUBCASE("constants do not drift") {
        auto c = observables::make_observable("const", [](auto, auto) { return 2.5; });
        CHECK(conservation_drift(traj, *c) == 0.0);
    }
    SUBCASE("coordinates drift at order one") {
        auto x1 = observables::coordinate_observable(0);
        CHECK(conservation_drift(traj, *x1) > 0.1);
    }
}

TEST_CASE("parameter scan") {
    ModelParams tmpl = oscillator_params();
    tmpl.alphas = {0.2, 0.3};
    ClosureOptions opts;
    opts.step = 4e-3;
    SUBCASE("deterministic bytes for a fixed seed") {
        auto t1 = parameter_scan(tmpl, {1.0}, {1.0}, 3, 99, opts);
        auto t2 = parameter_scan(tmpl, {1.0}, {1.0}, 3, 99, opts);
        CHECK(scan_to_csv(t1) == scan_to_csv(t2));
        CHECK(scan_to_csv(t1).rfind("k,s,closure_fraction,n_samples,mean_recurrence\n", 0) == 0);
    }
    SUBCASE("the oscillator-with-barriers cell closes") {
        auto table = parameter_scan(tmpl, {1.0}, {1.0}, 5, 7, opts);
        REQUIRE(table.cells.size() == 1);
        CHECK(table.cells[0].closure_fraction >= 0.99);
        CHECK(table.cells[0].n_undetermined == 0);
    }
    SUBCASE("the Kepler cell closes under the bound-orbit filter") {
        ModelParams kepler = tmpl;
        kepler.s = -0.5;
        kepler.central_sign = -1;
        kepler.omegas = {0.5, 0.5};
        kepler.alphas = {0.0, 0.0};
        auto table = parameter_scan(kepler, {1.0}, {-0.5}, 4, 21, opts);
        REQUIRE(table.cells.size() == 1);
        CHECK(table.cells[0].closure_fraction >= 0.99);
    }
}
