#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "mtcav/fit.hpp"
#include "mtcav/soliton.hpp"

using namespace mtcav;

namespace {
KinkProblem double_well() {
    KinkProblem p;
    p.force = Polynomial{{0.0, -1.0, 0.0, 1.0}}; // u^3 - u
    p.u_minus = -1.0;
    p.u_plus = 1.0;
    return p;
}
} // namespace

TEST_CASE("undamped double well reproduces tanh(xi/sqrt(2))") {
    KinkSolution sol = traveling_kink(double_well());
    REQUIRE(std::abs(sol.rho_selected) < 1e-10);
    double max_err = 0.0;
    for (const auto& s : sol.samples)
        max_err = std::max(max_err, std::abs(s[1] - std::tanh(s[0] / std::sqrt(2.0))));
    REQUIRE(max_err < 1e-6);
    REQUIRE(sol.residual_max < 1e-8);
    REQUIRE(sol.landing_miss < 1e-8);
}

TEST_CASE("cubic speed selection: |rho| = |u1 + u3 - 2 u2| / sqrt(2)") {
    SECTION("roots (-1, 0.2, 1)") {
        KinkProblem p;
        p.force = Polynomial::from_roots_monic(-1.0, 0.2, 1.0);
        p.u_minus = -1.0;
        p.u_plus = 1.0;
        KinkSolution sol = traveling_kink(p);
        REQUIRE(std::abs(sol.rho_selected) == Catch::Approx(0.2 * std::sqrt(2.0)).margin(1e-6));
        REQUIRE(sol.residual_max < 1e-8);
    }

    SECTION("20 random root triples") {
        std::mt19937 gen(20250810u);
        std::uniform_real_distribution<double> left(-2.0, -0.5), right(0.5, 2.0), unit(0.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            const double r1 = left(gen);
            const double r3 = right(gen);
            const double r2 = r1 + 0.3 + (r3 - r1 - 0.6) * unit(gen);
            KinkProblem p;
            p.force = Polynomial::from_roots_monic(r1, r2, r3);
            p.u_minus = r1;
            p.u_plus = r3;
            KinkSolution sol = traveling_kink(p);
            const double expected = std::abs(r1 + r3 - 2.0 * r2) / std::sqrt(2.0);
            INFO("roots " << r1 << " " << r2 << " " << r3);
            REQUIRE(std::abs(sol.rho_selected) == Catch::Approx(expected).margin(1e-4));
        }
    }

    SECTION("symmetric roots select rho = 0") {
        KinkProblem p;
        p.force = Polynomial::from_roots_monic(-1.0, 0.0, 1.0);
        p.u_minus = -1.0;
        p.u_plus = 1.0;
        KinkSolution sol = traveling_kink(p);
        REQUIRE(std::abs(sol.rho_selected) < 1e-10);
        double max_err = 0.0;
        for (const auto& s : sol.samples)
            max_err = std::max(max_err, std::abs(s[1] - std::tanh(s[0] / std::sqrt(2.0))));
        REQUIRE(max_err < 1e-6);
    }
}

TEST_CASE("boundary approach rates match the saddle eigenvalues") {
    KinkProblem p;
    p.force = Polynomial::from_roots_monic(-1.0, 0.15, 0.9);
    p.u_minus = -1.0;
    p.u_plus = 0.9;
    KinkSolution sol = traveling_kink(p);
    const double rho = sol.rho_selected;
    const double jump = p.u_plus - p.u_minus;

    const double mu_dep = kink_detail::unstable_rate(p.force.derivative(p.u_minus), rho);
    const double mu_land = kink_detail::stable_rate(p.force.derivative(p.u_plus), rho);

    std::vector<double> xs, ys;
    for (const auto& s : sol.samples) {
        const double dev = s[1] - p.u_minus;
        if (dev > 2e-6 * jump && dev < 1e-3 * jump) {
            xs.push_back(s[0]);
            ys.push_back(std::log(dev));
        }
    }
    REQUIRE(xs.size() >= 3);
    REQUIRE(linear_fit(xs, ys).slope == Catch::Approx(mu_dep).epsilon(0.02));

    xs.clear();
    ys.clear();
    for (const auto& s : sol.samples) {
        const double dev = p.u_plus - s[1];
        if (dev > 1e-7 * jump && dev < 1e-3 * jump) {
            xs.push_back(s[0]);
            ys.push_back(std::log(dev));
        }
    }
    REQUIRE(xs.size() >= 3);
    REQUIRE(linear_fit(xs, ys).slope == Catch::Approx(mu_land).epsilon(0.02));
}

TEST_CASE("translation invariance of the selected friction and width") {
    KinkProblem a;
    a.force = Polynomial::from_roots_monic(-1.2, -0.1, 0.8);
    a.u_minus = -1.2;
    a.u_plus = 0.8;
    KinkProblem b = a;
    b.departure = 1e-7; // different entry point shifts the profile only
    KinkSolution sa = traveling_kink(a);
    KinkSolution sb = traveling_kink(b);
    REQUIRE(sa.rho_selected == Catch::Approx(sb.rho_selected).margin(1e-9));
    REQUIRE(sa.width == Catch::Approx(sb.width).margin(1e-6));
}

TEST_CASE("descending kinks are handled by reflection") {
    KinkProblem p;
    p.force = Polynomial::from_roots_monic(-1.0, 0.2, 1.0);
    p.u_minus = 1.0; // descending
    p.u_plus = -1.0;
    KinkSolution sol = traveling_kink(p);
    REQUIRE(sol.samples.front()[1] > sol.samples.back()[1]);
    REQUIRE(std::abs(std::abs(sol.rho_selected) - 0.2 * std::sqrt(2.0)) < 1e-6);
}

TEST_CASE("problem validation") {
    SECTION("boundary must be a root") {
        KinkProblem p = double_well();
        p.u_plus = 0.9;
        REQUIRE_THROWS_AS(traveling_kink(p), ConfigError);
    }
    SECTION("P' must be positive at the boundaries") {
        KinkProblem p = double_well();
        p.u_plus = 0.0; // middle root, P' < 0
        REQUIRE_THROWS_AS(traveling_kink(p), ConfigError);
    }
    SECTION("no connection in the bracket") {
        KinkProblem p;
        p.force = Polynomial::from_roots_monic(-1.0, 0.999, 1.0);
        // selected rho would be ~2/sqrt(2); shrink the bracket so it cannot be found
        p.u_minus = -1.0;
        p.u_plus = 1.0;
        p.bracket_lo = -0.1;
        p.bracket_hi = 0.1;
        REQUIRE_THROWS_AS(traveling_kink(p), SolverError);
    }
}

TEST_CASE("transport time") {
    REQUIRE(transport_time(1e-6, 2.0) == 5e-7);
    REQUIRE(transport_time(2e-6, 2.0) == 2.0 * transport_time(1e-6, 2.0));
    REQUIRE(transport_time(1e-6, 1e3) == Catch::Approx(1e-9).epsilon(1e-15));
    REQUIRE_THROWS_AS(transport_time(0.0, 1.0), ConfigError);
    REQUIRE_THROWS_AS(transport_time(1.0, 0.0), ConfigError);
}
