#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "tmsim/zeeman.hpp"

using namespace tmsim;

namespace {

LevelPair default_pair() {
    LevelPair lp;
    lp.ground = {18.2605, 403.0, 0.0};
    lp.excited = {14.5411, 100.4, 12.0};
    return lp;
}

Vec3 random_unit(std::mt19937_64& eng) {
    std::normal_distribution<double> n;
    Vec3 v(n(eng), n(eng), n(eng));
    while (v.norm() < 1e-3) v = Vec3(n(eng), n(eng), n(eng));
    return v.normalized();
}

}  // namespace

TEST_CASE("splitting is the tensor-weighted field norm") {
    const GyroTensor t{1, 2, 3};
    const Vec3 B(0.1, 0.2, 0.3);
    CHECK(splitting(t, B) ==
          doctest::Approx(std::sqrt(0.01 + 0.16 + 0.81)).epsilon(1e-15));
    CHECK(splitting(t, Vec3(0, 0, 0)) == 0.0);
}

TEST_CASE("effective axis is unit and undefined at zero splitting") {
    const GyroTensor t{18.0, 403.0, 0.0};
    const Vec3 a = effective_axis(t, Vec3(0.1, 0.05, 0.7));
    CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-14));
    // gamma_z = 0 makes a pure-z field invisible to this level
    CHECK_THROWS_AS(effective_axis(t, Vec3(0, 0, 1)), std::invalid_argument);
}

TEST_CASE("branching ratio limits: aligned, perpendicular, flipped axes") {
    const Vec3 ez(0, 0, 1), ex(1, 0, 0);
    CHECK(branching_ratio(ez, ez).R == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(branching_ratio(ez, ez).mu_s == doctest::Approx(1.0).epsilon(1e-14));
    // 90 degrees: tan^2(45) = 1, both transitions equal
    CHECK(branching_ratio(ez, ex).R == doctest::Approx(1.0).epsilon(1e-12));
    // a flipped axis is the same physical quantization direction
    CHECK(branching_ratio(ez, -ez).R == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("branching ratio at a known inter-axis angle") {
    const double th = 40.0 * M_PI / 180;
    const Vec3 a(0, 0, 1), b(std::sin(th), 0, std::cos(th));
    const Branching br = branching_ratio(a, b);
    CHECK(br.R == doctest::Approx(0.1324743314317942).epsilon(1e-10));  // tan^2(20 deg)
    CHECK(br.mu_s == doctest::Approx(std::cos(th / 2)).epsilon(1e-12));
    CHECK(br.mu_w == doctest::Approx(std::sin(th / 2)).epsilon(1e-12));
}

TEST_CASE("branching ratio is bounded and normalized for random axes") {
    std::mt19937_64 eng(7);
    for (int k = 0; k < 500; ++k) {
        const Branching br = branching_ratio(random_unit(eng), random_unit(eng));
        REQUIRE(br.R >= 0.0);
        REQUIRE(br.R <= 1.0);
        REQUIRE(br.mu_s * br.mu_s + br.mu_w * br.mu_w ==
                doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(br.R * br.mu_s * br.mu_s ==
                doctest::Approx(br.mu_w * br.mu_w).epsilon(1e-12));
    }
}

TEST_CASE("lambda_for ties splittings, axes and branching together") {
    const LevelPair lp = default_pair();
    const Vec3 B(0.05, 0.12, 0.08);
    const LambdaParams l = lambda_for(lp, B);
    CHECK(l.delta_g == doctest::Approx(splitting(lp.ground, B)).epsilon(1e-15));
    CHECK(l.delta_e == doctest::Approx(splitting(lp.excited, B)).epsilon(1e-15));
    const Branching br =
        branching_ratio(effective_axis(lp.ground, B), effective_axis(lp.excited, B));
    CHECK(l.R == doctest::Approx(br.R).epsilon(1e-15));
}

TEST_CASE("R is invariant under field-magnitude scaling") {
    const LevelPair lp = default_pair();
    std::mt19937_64 eng(11);
    for (int k = 0; k < 100; ++k) {
        const Vec3 B = random_unit(eng) * 0.19;
        const double r1 = lambda_for(lp, B).R;
        const double r2 = lambda_for(lp, 3.7 * B).R;
        REQUIRE(r1 == doctest::Approx(r2).epsilon(1e-12));
    }
}

TEST_CASE("working-point values of the default tensor set") {
    const LevelPair lp = default_pair();
    const FrameSet fs = default_frames();
    const Vec3 B = bisector_field(-49.4, 0.19);
    const LambdaParams l35 = lambda_for(lp, local_field(fs[3], B));
    CHECK(l35.R == doctest::Approx(0.12173).epsilon(2e-4));
    CHECK(l35.delta_g == doctest::Approx(6.820).epsilon(1e-3));
    CHECK(l35.delta_e == doctest::Approx(3.040).epsilon(1e-3));
    // site 1 stays an almost closed two-level system there
    const LambdaParams l1 = lambda_for(lp, local_field(fs[1], B));
    CHECK(l1.R < 0.01);
}

TEST_CASE("measured tensor set reproduces the published splittings per tesla") {
    const LevelPair lp =
        load_tensors(std::string(TMSIM_CONFIG_DIR) + "/tensors_measured.cfg");
    const FrameSet fs = default_frames();
    const Vec3 B = bisector_field(-49.4, 1.0);
    const LambdaParams l = lambda_for(lp, local_field(fs[3], B));
    CHECK(l.delta_g == doctest::Approx(38.2).epsilon(1e-4));
    CHECK(l.delta_e == doctest::Approx(15.5).epsilon(1e-4));
}

TEST_CASE("tensor config round trip and validation") {
    const LevelPair lp = load_tensors(std::string(TMSIM_CONFIG_DIR) + "/tensors.cfg");
    CHECK(lp.ground.x == doctest::Approx(18.2605));
    CHECK(lp.ground.y == doctest::Approx(403.0));
    CHECK(lp.ground.z == 0.0);
    CHECK(lp.excited.x == doctest::Approx(14.5411));
    CHECK(lp.excited.y == doctest::Approx(100.4));
    CHECK(lp.excited.z == doctest::Approx(12.0));
    CHECK_THROWS(load_tensors("/nonexistent/tensors.cfg"));
}

TEST_CASE("sweep covers the grid, gaps where the splitting vanishes") {
    const LevelPair lp = default_pair();
    const FrameSet fs = default_frames();
    std::vector<double> grid;
    for (int i = 0; i <= 180; ++i) grid.push_back(-90.0 + 0.5 * i);

    const auto pts = sweep_R(lp, fs[3], grid, 0.19);
    REQUIRE(pts.size() == grid.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        REQUIRE(pts[i].theta_deg == grid[i]);
        REQUIRE(pts[i].value.has_value());
        REQUIRE(pts[i].value->R >= 0.0);
        REQUIRE(pts[i].value->R <= 1.0);
    }

    // zero field: no Lambda system anywhere
    const auto gaps = sweep_R(lp, fs[3], grid, 0.0);
    for (const auto& p : gaps) REQUIRE(!p.value.has_value());

    std::vector<double> unordered{0.0, -10.0};
    CHECK_THROWS_AS(sweep_R(lp, fs[3], unordered, 0.19), std::invalid_argument);
}

TEST_CASE("default-tensor sweep has an interior branching-ratio maximum") {
    const LevelPair lp = default_pair();
    const FrameSet fs = default_frames();
    std::vector<double> grid;
    for (int i = 0; i <= 900; ++i) grid.push_back(-90.0 + 0.1 * i);
    const auto pts = sweep_R(lp, fs[3], grid, 0.19);

    std::size_t imax = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (pts[i].value->R > pts[imax].value->R) imax = i;
    REQUIRE(imax > 0);
    REQUIRE(imax + 1 < pts.size());
    CHECK(pts[imax].value->R == doctest::Approx(0.1462).epsilon(2e-3));
    CHECK(pts[imax].theta_deg == doctest::Approx(-58.5).epsilon(2e-2));
}
