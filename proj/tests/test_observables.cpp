#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "confham/dynamics.hpp"
#include "confham/observables.hpp"
#include "confham/probes.hpp"
#include "support/sampling.hpp"

using namespace confham;
using namespace confham::observables;

namespace {

ModelParams generic_equal_omega(int n = 2) {
    ModelParams m;
    m.n = n;
    m.k = 2.0;
    m.s = 1.0;
    m.gamma = 0.5;
    m.central_sign = +1;
    m.omegas.assign(n, 1.0);
    m.alphas = n == 2 ? std::vector<double>{0.3, 0.4} : std::vector<double>{0.3, 0.4, 0.5};
    m.validate();
    return m;
}

double bracket_scale(const Observable& f, const Observable& g, const PhaseState& pt) {
    auto gf = phase_gradient(f, pt);
    auto gg = phase_gradient(g, pt);
    double nf = 0.0, ng = 0.0;
    for (double v : gf) nf += v * v;
    for (double v : gg) ng += v * v;
    return std::max(std::sqrt(nf * ng), 1e-30);
}

}  // namespace

TEST_CASE("canonical pairs and antisymmetry") {
    auto x1 = coordinate_observable(0);
    auto p1 = momentum_observable(0);
    auto p2 = momentum_observable(1);
    Rng rng(3);
    for (int rep = 0; rep < 10; ++rep) {
        auto pt = testsupport::random_orthant_state(2, rng);
        CHECK(poisson_bracket(*x1, *p1, pt) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(poisson_bracket(*x1, *p2, pt) == doctest::Approx(0.0));
    }
    auto m = generic_equal_omega();
    auto h = hamiltonian_observable(m);
    for (int rep = 0; rep < 10; ++rep) {
        auto pt = testsupport::random_orthant_state(2, rng);
        CHECK(std::abs(poisson_bracket(*h, *h, pt)) <= 1e-13);
    }
}

TEST_CASE("angular momentum is conserved by the isotropic oscillator") {
    ModelParams m;
    m.n = 2;
    m.k = 1.0;
    m.s = 1.0;
    m.gamma = 0.0;
    m.central_sign = +1;
    m.omegas = {1.3, 1.3};
    m.alphas = {0.0, 0.0};
    auto h = hamiltonian_observable(m);
    auto l12 = angular_momentum_observable(0, 1);
    Rng rng(8);
    for (int rep = 0; rep < 20; ++rep) {
        auto pt = testsupport::random_orthant_state(2, rng);
        CHECK(std::abs(poisson_bracket(*l12, *h, pt)) <= 1e-12);
    }
}

TEST_CASE("bracket algebra at sample points") {
    auto m = generic_equal_omega();
    auto h = hamiltonian_observable(m);
    auto k12 = angular_rosochatius_observable(0, 1, m);
    auto x1 = coordinate_observable(0);
    auto p2 = momentum_observable(1);
    std::vector<ObservablePtr> pool = {h, k12, x1, p2};

    Rng rng(21);
    for (int rep = 0; rep < 20; ++rep) {
        auto pt = testsupport::random_orthant_state(2, rng);
        for (const auto& f : pool) {
            for (const auto& g : pool) {
                double fg = poisson_bracket(*f, *g, pt);
                double gf = poisson_bracket(*g, *f, pt);
                CHECK(std::abs(fg + gf) <= 1e-13 * std::max(1.0, std::abs(fg)));
            }
        }
        // Leibniz: {fg, h} = f {g, h} + g {f, h}
        for (const auto& f : pool) {
            for (const auto& g : pool) {
                auto prod = product_observable(f, g);
                double lhs = poisson_bracket(*prod, *h, pt);
                double rhs = eval(*f, pt) * poisson_bracket(*g, *h, pt) +
                             eval(*g, pt) * poisson_bracket(*f, *h, pt);
                CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
            }
        }
        // Jacobi: {f,{g,h}} + {g,{h,f}} + {h,{f,g}} = 0
        auto jacobi = [&](const ObservablePtr& f, const ObservablePtr& g,
                          const ObservablePtr& hh) {
            double t1 = poisson_bracket(*f, *bracket_observable(g, hh), pt);
            double t2 = poisson_bracket(*g, *bracket_observable(hh, f), pt);
            double t3 = poisson_bracket(*hh, *bracket_observable(f, g), pt);
            double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1.0});
            return std::abs(t1 + t2 + t3) / scale;
        };
        CHECK(jacobi(h, k12, x1) <= 1e-8);
        CHECK(jacobi(h, k12, p2) <= 1e-8);
        CHECK(jacobi(k12, x1, p2) <= 1e-8);
    }
}

TEST_CASE("angular-Rosochatius integral values") {
    auto m = generic_equal_omega();
    SUBCASE("reduces to L^2 without couplings") {
        ModelParams free = m;
        free.alphas = {0.0, 0.0};
        Rng rng(4);
        for (int rep = 0; rep < 10; ++rep) {
            auto pt = testsupport::random_orthant_state(2, rng);
            double l = pt.x[0] * pt.p[1] - pt.x[1] * pt.p[0];
            CHECK(angular_rosochatius_integral(0, 1, free, pt) ==
                  doctest::Approx(l * l).epsilon(1e-14));
        }
    }
    SUBCASE("direct substitution") {
        ModelParams unit = m;
        unit.alphas = {1.0, 1.0};
        CHECK(angular_rosochatius_integral(0, 1, unit, {{1, 1}, {0, 0}}) ==
              doctest::Approx(4.0).epsilon(1e-15));
    }
    SUBCASE("unequal frequencies are a precondition error") {
        ModelParams bad = m;
        bad.omegas = {1.0, 2.0};
        CHECK_THROWS_AS(angular_rosochatius_integral(0, 1, bad, {{1, 1}, {0, 0}}),
                        std::invalid_argument);
    }
}

TEST_CASE("conservation of K_ij across the equal-frequency family") {
    // Random (k, s, gamma) draws; the bracket must vanish for every pair.
    std::vector<std::tuple<double, double, double>> draws = {
        {0.5, -0.5, 0.0}, {0.5, 1.0, 1.0}, {1.0, 0.0, 1.0},
        {2.0, 1.0, 0.0},  {2.0, -0.5, 1.0}, {1.5, 0.5, 0.5},
    };
    Rng rng(77);
    for (auto [k, s, gamma] : draws) {
        ModelParams m;
        m.n = 3;
        m.k = k;
        m.s = s;
        m.gamma = gamma;
        m.central_sign = +1;
        m.omegas = {1.1, 1.1, 1.1};
        m.alphas = {0.3, 0.4, 0.5};
        m.validate();
        auto h = hamiltonian_observable(m);
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                auto kij = angular_rosochatius_observable(i, j, m);
                for (int rep = 0; rep < 10; ++rep) {
                    auto pt = testsupport::random_orthant_state(3, rng);
                    double br = poisson_bracket(*h, *kij, pt);
                    CHECK(std::abs(br) / bracket_scale(*h, *kij, pt) <= 1e-10);
                }
            }
        }
    }
}

TEST_CASE("discrimination: unequal frequencies break the bracket") {
    ModelParams m;
    m.n = 2;
    m.k = 1.0;
    m.s = 1.0;
    m.gamma = 0.0;
    m.central_sign = +1;
    m.omegas = {1.0, 2.0};
    m.alphas = {0.3, 0.4};
    auto h = hamiltonian_observable(m);
    ModelParams equal = m;
    equal.omegas = {1.0, 1.0};
    auto k12 = angular_rosochatius_observable(0, 1, equal);
    Rng rng(13);
    double worst = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        auto pt = testsupport::random_orthant_state(2, rng);
        worst = std::max(worst,
                         std::abs(poisson_bracket(*h, *k12, pt)) / bracket_scale(*h, *k12, pt));
    }
    CHECK(worst > 1e-3);
}

TEST_CASE("polar second integral") {
    using transforms::PolarState;
    CHECK(ttw_second_integral(1.0, 0, 0, PolarState{1, 0.4, 0.2, 0.7}) ==
          doctest::Approx(0.49).epsilon(1e-14));
    CHECK(ttw_second_integral(2.0, 1, 1, PolarState{1, M_PI / 8, 0, 0}) ==
          doctest::Approx(16.0).epsilon(1e-13));

    double k = 1.5, alpha = 0.4, beta = 0.7, omega = 1.2;
    auto h_polar = ttw_polar_hamiltonian_observable(omega, alpha, beta, k);
    auto x_ttw = ttw_second_integral_observable(k, alpha, beta);
    Rng rng(29);
    double width = M_PI / (2.0 * k);
    for (int rep = 0; rep < 20; ++rep) {
        PhaseState pt{{rng.uniform(0.5, 2.0), rng.uniform(0.1 * width, 0.9 * width)},
                      {rng.uniform(-1, 1), rng.uniform(-1, 1)}};
        CHECK(std::abs(poisson_bracket(*x_ttw, *h_polar, pt)) <= 1e-12);
    }
}

TEST_CASE("independence rank") {
    auto m = generic_equal_omega(3);
    m.alphas = {0.3, 0.4, 0.5};
    auto h = hamiltonian_observable(m);
    Rng rng(55);
    std::vector<PhaseState> points;
    for (int i = 0; i < 10; ++i) points.push_back(testsupport::random_orthant_state(3, rng));

    SUBCASE("single observable") {
        CHECK(independence_rank({h}, m, points) == 1);
    }
    SUBCASE("functionally dependent pair") {
        CHECK(independence_rank({h, product_observable(h, h)}, m, points) == 1);
    }
    SUBCASE("quasi-maximal set has rank 2n - 2") {
        std::vector<ObservablePtr> set = {h};
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                set.push_back(angular_rosochatius_observable(i, j, m));
        CHECK(independence_rank(set, m, points) == 4);
    }
    SUBCASE("positive scaling changes nothing") {
        std::vector<ObservablePtr> set = {h};
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                set.push_back(scaled_observable(1e6, angular_rosochatius_observable(i, j, m)));
        CHECK(independence_rank(set, m, points) == 4);
    }
}

TEST_CASE("K_12 is carried along trajectories (conservation transfer)") {
    ModelParams m;
    m.n = 3;
    m.k = 2.0;
    m.s = 1.0;
    m.gamma = 0.5;
    m.central_sign = +1;
    m.omegas = {1.0, 1.0, 1.0};
    m.alphas = {0.3, 0.4, 0.5};
    // Moderate oscillation around the potential well at x ~ (2.9, 3.1, 3.3);
    // the h^2 invariant wobble stays well under the 1e-8 budget there.
    PhaseState init{{2.92, 3.14, 3.32}, {0.05, -0.03, 0.04}};
    auto traj = dynamics::integrate(m, init, 10.0, 1e-3, "midpoint");
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            auto kij = angular_rosochatius_observable(i, j, m);
            CHECK(probes::conservation_drift(traj, *kij) <= 1e-8);
        }
    }
}
