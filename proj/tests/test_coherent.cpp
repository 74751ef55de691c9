#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oracles.hpp"
#include "tmsim/bessel.hpp"
#include "tmsim/coherent.hpp"

using namespace tmsim;

TEST_CASE("Bessel J0, J1, J2 against the quadrature oracle") {
    // both regimes: power series (|x| <= 12) and asymptotic expansion beyond
    for (double x = -80.0; x <= 80.0; x += 0.37) {
        const double tol = std::abs(x) <= 12 ? 1e-12 : 5e-11;
        CHECK(bessel_j0(x) == doctest::Approx(oracle::bessel_jn(0, x)).epsilon(tol));
        CHECK(bessel_j1(x) == doctest::Approx(oracle::bessel_jn(1, x)).epsilon(tol));
        CHECK(bessel_j2(x) == doctest::Approx(oracle::bessel_jn(2, x)).epsilon(tol));
    }
}

TEST_CASE("Bessel special values and symmetry") {
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK(bessel_j1(0.0) == 0.0);
    CHECK(bessel_j2(0.0) == 0.0);
    // J0' = -J1: check the first J1 zero against the known value
    CHECK(std::abs(bessel_j1(3.8317059702075125)) < 1e-9);
    for (double x = 0.1; x < 40; x += 1.7) {
        CHECK(bessel_j0(-x) == doctest::Approx(bessel_j0(x)).epsilon(1e-15));
        CHECK(bessel_j1(-x) == doctest::Approx(-bessel_j1(x)).epsilon(1e-15));
        CHECK(bessel_j2(-x) == doctest::Approx(bessel_j2(x)).epsilon(1e-15));
    }
}

TEST_CASE("j1_over_x is even and continuous through zero") {
    CHECK(j1_over_x(0.0) == 0.5);
    CHECK(j1_over_x(1e-12) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(j1_over_x(-1e-12) == doctest::Approx(0.5).epsilon(1e-12));
    for (double x = 0.05; x < 30; x += 0.61) {
        CHECK(j1_over_x(x) == doctest::Approx(bessel_j1(x) / x).epsilon(1e-13));
        CHECK(j1_over_x(-x) == doctest::Approx(j1_over_x(x)).epsilon(1e-15));
    }
}

TEST_CASE("first zero of J2") {
    const double x21 = j2_first_zero();
    CHECK(x21 == doctest::Approx(5.135622301840683).epsilon(1e-12));
    CHECK(std::abs(bessel_j2(x21)) < 1e-11);
}

TEST_CASE("nutation trace: limits, extremum and domain") {
    NutationParams np;
    np.omega = 16.336;
    np.D = 0.32;
    for (int i = 0; i <= 4000; ++i) np.t_grid.push_back(i * 0.25e-3);

    const Trace tr = nutation_trace(np);
    REQUIRE(tr.size() == np.t_grid.size());
    CHECK(tr.x_label == "t_us");
    CHECK(tr.y_label == "intensity_rel");

    // t = 0: plain Beer-Lambert transmission
    CHECK(tr.y.front() == doctest::Approx(std::pow(10.0, -0.32)).epsilon(1e-15));

    // first maximum at x21/omega
    const double tmax = first_max_time(np.omega);
    CHECK(tmax == doctest::Approx(5.135622301840683 / 16.336).epsilon(1e-12));
    std::size_t best = 0;
    for (std::size_t i = 0; i < tr.size(); ++i)
        if (tr.y[i] > tr.y[best]) best = i;
    CHECK(tr.x[best] == doctest::Approx(tmax).epsilon(2e-3));

    // large t: settles to 1 (full transmission once the line is driven)
    CHECK(tr.y.back() == doctest::Approx(1.0).epsilon(5e-3));

    NutationParams bad = np;
    bad.D = 0.5;
    CHECK_THROWS_AS(nutation_trace(bad), std::invalid_argument);
    bad.D = -0.1;
    CHECK_THROWS_AS(nutation_trace(bad), std::invalid_argument);
    bad = np;
    bad.omega = 0;
    CHECK_THROWS_AS(nutation_trace(bad), std::invalid_argument);
    bad = np;
    bad.t_grid[5] = -1.0;
    CHECK_THROWS_AS(nutation_trace(bad), std::invalid_argument);
}

TEST_CASE("density from contrast inverts the t=0 transmission") {
    const double D = 0.234;
    const double I0 = std::pow(10.0, -D);
    CHECK(density_from_contrast(1.0, I0) == doctest::Approx(D).epsilon(1e-12));
    CHECK(density_from_contrast(2.0, 2.0) == 0.0);
    CHECK_THROWS_AS(density_from_contrast(0.5, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(density_from_contrast(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(density_from_contrast(-1.0, -0.5), std::invalid_argument);
}

TEST_CASE("composite densities split D_sw by branching ratio") {
    const auto d = composite_densities(0.36, 0.696, 0.12);
    CHECK(d.sw == doctest::Approx(2.0 / 3.0 * 0.36 * 0.696).epsilon(1e-15));
    CHECK(d.w == doctest::Approx(d.sw * 0.12 / 1.12).epsilon(1e-15));
    CHECK(d.s == doctest::Approx(d.sw / 1.12).epsilon(1e-15));
    CHECK(d.w + d.s == doctest::Approx(d.sw).epsilon(1e-15));

    std::mt19937_64 eng(31);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 200; ++k) {
        const auto c = composite_densities(0.1 + u(eng), u(eng), u(eng));
        REQUIRE(c.w + c.s == doctest::Approx(c.sw).epsilon(1e-14));
        REQUIRE(c.w <= c.s);  // R <= 1 always puts less density on the weak leg
    }
}

TEST_CASE("echo intensities obey the weak-leg scaling identity") {
    // identity must hold for any bounded pulse-area response, not just the
    // default sin^2 sin^4 shape
    std::mt19937_64 eng(37);
    std::uniform_real_distribution<double> u(0, 1);
    for (int k = 0; k < 50; ++k) {
        const double a = 0.3 + 2 * u(eng), b = 0.1 + u(eng), R = u(eng);
        EchoModel m;
        m.mu_sq = 1 / (1 + R);
        m.g = [a, b](double x) { return std::sin(a * x) * std::exp(-b * x) + x / (1 + x * x); };
        for (double I = 0.01; I < 3.0; I += 0.23) {
            // both legs written out from g, independent of the implementation
            const double want_strong = m.mu_sq * m.g(m.mu_sq * I);
            const double want_weak = R * m.mu_sq * m.g(m.mu_sq * R * I);
            const double got_strong = echo_intensity(m, I, Branch::strong, R);
            const double got_weak = echo_intensity(m, I, Branch::weak, R);
            REQUIRE(got_strong == doctest::Approx(want_strong).epsilon(1e-14));
            REQUIRE(got_weak == doctest::Approx(want_weak).epsilon(1e-14));
            // weak(I) = R * strong(R I)
            REQUIRE(got_weak ==
                    doctest::Approx(R * echo_intensity(m, R * I, Branch::strong, R))
                        .epsilon(1e-14));
        }
    }

    EchoModel m = default_echo_model(1.4, 0.2);
    CHECK_THROWS_AS(echo_intensity(m, -0.1, Branch::strong, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(echo_intensity(m, 1.0, Branch::weak, 1.5), std::invalid_argument);
    m.g = nullptr;
    CHECK_THROWS_AS(echo_intensity(m, 1.0, Branch::strong, 0.2), std::invalid_argument);
}

TEST_CASE("default echo model") {
    const double a = 1.4, R = 0.13;
    const EchoModel m = default_echo_model(a, R);
    CHECK(m.mu_sq == doctest::Approx(1 / (1 + R)).epsilon(1e-15));
    CHECK(m.g(0.0) == 0.0);
    const double x = 0.7;
    const double s = std::sin(a * std::sqrt(x));
    const double h = std::sin(a * std::sqrt(x) / 2);
    CHECK(m.g(x) == doctest::Approx(s * s * h * h * h * h).epsilon(1e-14));

    // strong echo at drive I: mu^2 g(mu^2 I)
    const double I = 0.9;
    CHECK(echo_intensity(m, I, Branch::strong, R) ==
          doctest::Approx(m.mu_sq * m.g(m.mu_sq * I)).epsilon(1e-15));
}

TEST_CASE("pi pulse lengthens as 1/sqrt(R) on the weak transition") {
    CHECK(pi_pulse_duration(1.2, 0.125) == doctest::Approx(3.3941125496954276).epsilon(1e-14));
    CHECK(pi_pulse_duration(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(pi_pulse_duration(1.2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(pi_pulse_duration(1.2, -0.1), std::invalid_argument);
}
