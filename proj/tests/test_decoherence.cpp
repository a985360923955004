#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mtcav/decoherence.hpp"

using namespace mtcav;

namespace {
std::vector<double> time_grid(double t_max, int n) {
    std::vector<double> g;
    for (int i = 1; i <= n; ++i) g.push_back(t_max * i / n);
    return g;
}
} // namespace

TEST_CASE("pointer distance") {
    REQUIRE(pointer_distance(4.0, 3.14159265358979323846 / 2.0) == Catch::Approx(4.0));
    REQUIRE(pointer_distance(7.3, 0.0) == 0.0);

    SECTION("dispersive form agrees with the exact one for small dephasing") {
        // phi = n lambda^2 t / Delta = 0.1 rad
        const double n = 10.0, lambda = 1.0, t = 1.0, delta = 100.0;
        const double phi = n * lambda * lambda * t / delta;
        const double exact = pointer_distance(n, phi);
        DispersiveDistance disp = pointer_distance_dispersive(n, lambda, t, delta);
        REQUIRE(disp.valid);
        REQUIRE(disp.value == Catch::Approx(exact).epsilon(0.002));
    }
}

TEST_CASE("collapse time law") {
    REQUIRE(collapse_time(3.7, 1.0) == Catch::Approx(2.0 * 3.7));
    SECTION("Brune regime: D^2 = 8.33 gives 0.24 T_r") {
        const double t_r = 1.0;
        REQUIRE(collapse_time(t_r, std::sqrt(8.33)) == Catch::Approx(0.24 * t_r).epsilon(0.01));
    }
    SECTION("doubling D quarters the time") {
        REQUIRE(collapse_time(1.0, 2.0 * 0.7) ==
                Catch::Approx(collapse_time(1.0, 0.7) / 4.0).epsilon(1e-14));
    }
    REQUIRE_THROWS_AS(collapse_time(1.0, 0.0), ConfigError);
}

TEST_CASE("microtubule collapse time") {
    SECTION("mean mode reproduces the quoted range endpoints") {
        CollapseParams p{1e-4, 10.0, 100.0, 2.7e10, 5e12, 5e-5};
        REQUIRE(mt_collapse_time(p, CollapseMode::mean) == Catch::Approx(1e-7).epsilon(1e-14));
        p.n = 1.0;
        REQUIRE(mt_collapse_time(p, CollapseMode::mean) == Catch::Approx(1e-6).epsilon(1e-14));
    }

    SECTION("literal mode with sin^2 = 1 gives T_r/(2nN)") {
        // arrange the phase to be pi/2
        const double pi = 3.14159265358979323846;
        CollapseParams p{1e-4, 2.0, 50.0, 1.0, 1.0, 0.0};
        p.t = (pi / 2.0) / (p.n_dimers * p.n);
        REQUIRE(mt_collapse_time(p, CollapseMode::literal) ==
                Catch::Approx(p.t_r / (2.0 * p.n * p.n_dimers)).epsilon(1e-10));
    }

    SECTION("literal mode rejects vanishing sin^2") {
        const double pi = 3.14159265358979323846;
        CollapseParams p{1e-4, 1.0, 1.0, 1.0, 1.0, pi}; // phase = pi, sin = 0 (to rounding)
        REQUIRE_THROWS_AS(mt_collapse_time(p, CollapseMode::literal), ConfigError);
    }

    SECTION("mean mode ignores t and lambda0") {
        CollapseParams a{1e-4, 3.0, 100.0, 2.7e10, 5e12, 1e-5};
        CollapseParams b = a;
        b.t = 123.0;
        b.lambda0 = 1.0;
        REQUIRE(mt_collapse_time(a, CollapseMode::mean) == mt_collapse_time(b, CollapseMode::mean));
    }

    SECTION("strictly decreasing in n and N") {
        CollapseParams p{1e-4, 2.0, 50.0, 1.0, 1.0, 1.0};
        const double base = mt_collapse_time(p, CollapseMode::mean);
        p.n = 3.0;
        const double more_photons = mt_collapse_time(p, CollapseMode::mean);
        p.n = 2.0;
        p.n_dimers = 80.0;
        const double more_dimers = mt_collapse_time(p, CollapseMode::mean);
        REQUIRE(more_photons < base);
        REQUIRE(more_dimers < base);
    }
}

TEST_CASE("cat decoherence experiment") {
    SECTION("phi = 0 shows no decay") {
        CatSpec cat(4.0, 0.0);
        auto res = simulate_cat_decoherence(cat, 0.1, time_grid(1.0, 8));
        REQUIRE(std::abs(res.rate_fit) < 1e-3 * 0.1);
    }

    SECTION("n = 6, phi = pi/4: fitted rate within [0.8, 1.25] of D^2 kappa") {
        CatSpec cat(6.0, 3.14159265358979323846 / 4.0);
        auto res = simulate_cat_decoherence(cat, 0.05, time_grid(2.0, 10));
        REQUIRE(res.rate_pred == Catch::Approx(12.0 * 0.05).epsilon(1e-12));
        REQUIRE(res.ratio > 0.8);
        REQUIRE(res.ratio < 1.25);
    }

    SECTION("rates for D and 2D differ by a factor 4 ± 15%") {
        const double kappa = 0.1;
        const double phi1 = std::asin(0.2);
        const double phi2 = std::asin(0.4);
        CatSpec c1(4.0, phi1), c2(4.0, phi2);
        auto g = time_grid(1.0, 10);
        auto r1 = simulate_cat_decoherence(c1, kappa, g);
        auto r2 = simulate_cat_decoherence(c2, kappa, g);
        REQUIRE(r2.distance == Catch::Approx(2.0 * r1.distance).epsilon(1e-12));
        REQUIRE(r2.rate_fit / r1.rate_fit == Catch::Approx(4.0).epsilon(0.15));
    }

    SECTION("truncation must cover the coherent tail") {
        REQUIRE_THROWS_AS(CatSpec(9.0, 0.3, 10), ConfigError);
    }
}
