#include <catch2/catch.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "nvmaser/calibration.hpp"
#include "nvmaser/spin_model.hpp"

using namespace nvmaser;

TEST_CASE("the probe-offset calibration fixed point and a spot value") {
    CHECK(calibrate_field(24.468) == Approx(26.83).margin(1e-12));
    CHECK(calibrate_field(4000.0) == Approx(4077.34).margin(5e-3));
    CHECK(invert_calibration(26.83) == Approx(24.468).margin(1e-12));
    CHECK(invert_calibration(4077.34054) == Approx(4000.0).margin(1e-3));
}

TEST_CASE("calibrate and invert are exact mutual inverses") {
    std::mt19937_64 rng(0x5eed0401);
    std::uniform_real_distribution<double> dist(0.0, 6000.0);
    for (int i = 0; i < 100; ++i) {
        const double x = dist(rng);
        REQUIRE(invert_calibration(calibrate_field(x)) == Approx(x).margin(1e-9));
        REQUIRE(calibrate_field(invert_calibration(x)) == Approx(x).margin(1e-9));
    }
}

TEST_CASE("calibration preserves field ordering") {
    std::mt19937_64 rng(0x5eed0402);
    std::uniform_real_distribution<double> dist(0.0, 6000.0);
    for (int i = 0; i < 100; ++i) {
        const double a = dist(rng), b = dist(rng);
        if (a < b) {
            REQUIRE(calibrate_field(a) < calibrate_field(b));
        } else if (a > b) {
            REQUIRE(calibrate_field(a) > calibrate_field(b));
        }
    }
    CalibrationModel bad;
    bad.scale = 0.0;
    CHECK_THROWS_AS(calibrate_field(100.0, bad), invalid_input_error);
}

TEST_CASE("mT helpers wrap the Gauss-native law") {
    CHECK(calibrate_field_mt(2.4468) == Approx(2.683).margin(1e-12));
    CHECK(invert_calibration_mt(calibrate_field_mt(419.43)) == Approx(419.43).margin(1e-9));
    CHECK(mt_to_gauss(1.0) == 10.0);
    CHECK(gauss_to_mt(10.0) == 1.0);
}

TEST_CASE("field uncertainty takes the worst group, rounded up to 0.01 mT") {
    CHECK(field_uncertainty({{419.43, 419.43, 419.43}}) == 0.0);
    CHECK(field_uncertainty({{1.00, 1.02, 1.04}}) == Approx(0.02).margin(1e-12));
    // a noisier second group dominates
    CHECK(field_uncertainty({{1.00, 1.02, 1.04}, {2.00, 2.05, 2.11}}) ==
          Approx(0.06).margin(1e-12));
    // 0.013 std rounds up to 0.02
    CHECK(field_uncertainty({{1.000, 1.013, 1.026}}) == Approx(0.02).margin(1e-12));
    CHECK_THROWS_AS(field_uncertainty({}), invalid_input_error);
    CHECK_THROWS_AS(field_uncertainty({{1.0}, {}}), invalid_input_error);
}

TEST_CASE("field uncertainty is permutation invariant and grows with an outlier") {
    std::mt19937_64 rng(0x5eed0403);
    std::vector<double> group{419.41, 419.44, 419.46, 419.42, 419.45, 419.43, 419.44};
    const double base = field_uncertainty({group});
    for (int i = 0; i < 20; ++i) {
        auto shuffled = group;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        REQUIRE(field_uncertainty({shuffled}) == base);
    }
    auto with_outlier = group;
    with_outlier.push_back(419.90);
    CHECK(field_uncertainty({with_outlier}) >= base);
}

TEST_CASE("the scan window is 1 mT wide around the estimate") {
    auto [lo, hi] = scan_window(406.07);
    CHECK(lo == Approx(405.57));
    CHECK(hi == Approx(406.57));
    CHECK(hi - lo == Approx(1.0));

    // contains all three hyperfine positions around 419.49
    const auto trio = hyperfine_fields(419.49, SpinParams::defaults());
    auto [wlo, whi] = scan_window(419.49);
    for (double f : trio) {
        CHECK(f > wlo);
        CHECK(f < whi);
    }
    CHECK_THROWS_AS(scan_window(0.0), invalid_input_error);
}
