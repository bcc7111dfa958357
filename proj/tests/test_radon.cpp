#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "rgbc/errors.hpp"
#include "rgbc/radon.hpp"
#include "testutil.hpp"

using namespace rgbc;

namespace {

double image_sum(const Matrix& m) {
    double s = 0.0;
    for (double v : m.values()) s += v;
    return s;
}

double column_sum(const Sinogram& sg, std::size_t j) {
    double s = 0.0;
    for (std::size_t i = 0; i < sg.n_bins(); ++i) s += sg.values(i, j);
    return s;
}

} // namespace

TEST_CASE("projection bin count") {
    CHECK(projection_bin_count(32, 32) == 49);
    CHECK(projection_bin_count(64, 64) == 95);
    CHECK(projection_bin_count(1, 1) == 3);
    CHECK(projection_bin_count(128, 128) == 185);
    CHECK_THROWS_AS(projection_bin_count(0, 4), ConfigError);
}

TEST_CASE("point mass lands in the analytic bin") {
    // 33x33 puts the center pixel exactly at (16,16); a unit mass four
    // columns right of it sits at x=4, y=0.
    Matrix img(33, 33);
    img(16, 20) = 1.0;
    std::size_t n = projection_bin_count(33, 33);
    std::size_t mid = (n - 1) / 2;

    auto at_angle = [&](double deg) { return radon_projection(img, deg); };
    // theta=0 projects along columns: rho = x = 4
    auto p0 = at_angle(0.0);
    CHECK(p0[mid + 4] == doctest::Approx(1.0));
    // theta=90: rho = y = 0
    auto p90 = at_angle(90.0);
    CHECK(p90[mid] == doctest::Approx(1.0));
    // theta=60: rho = 4*cos(60) = 2 exactly
    auto p60 = at_angle(60.0);
    CHECK(p60[mid + 2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("center pixel projects to the center bin at every angle") {
    Matrix img(33, 33);
    img(16, 16) = 3.25;
    for (double deg : {0.0, 17.0, 45.0, 88.5, 90.0, 135.0, 179.0}) {
        auto p = radon_projection(img, deg);
        CHECK(p[(p.size() - 1) / 2] == doctest::Approx(3.25));
    }
}

TEST_CASE("mass conservation on non-square images") {
    std::mt19937 rng(11);
    Matrix img = testutil::random_image(rng, 17, 23);
    double total = image_sum(img);
    Sinogram sg = radon_transform(img, {0.0, 30.0, 45.0, 90.0, 137.5});
    for (std::size_t j = 0; j < sg.angles_deg.size(); ++j)
        CHECK(column_sum(sg, j) == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("guard bins stay empty") {
    std::mt19937 rng(12);
    Matrix img = testutil::random_image(rng, 16, 16);
    Sinogram sg = radon_transform(img, {0.0, 33.0, 66.0, 99.0, 132.0, 165.0});
    for (std::size_t j = 0; j < sg.angles_deg.size(); ++j) {
        CHECK(sg.values(0, j) == 0.0);
        CHECK(sg.values(sg.n_bins() - 1, j) == 0.0);
    }
}

TEST_CASE("transform is linear") {
    std::mt19937 rng(13);
    Matrix a = testutil::random_image(rng, 12, 14);
    Matrix b = testutil::random_image(rng, 12, 14);
    Matrix combo(12, 14);
    for (std::size_t r = 0; r < 12; ++r)
        for (std::size_t c = 0; c < 14; ++c) combo(r, c) = 2.0 * a(r, c) - 0.5 * b(r, c);
    auto pa = radon_projection(a, 71.0);
    auto pb = radon_projection(b, 71.0);
    auto pc = radon_projection(combo, 71.0);
    for (std::size_t i = 0; i < pc.size(); ++i)
        CHECK(pc[i] == doctest::Approx(2.0 * pa[i] - 0.5 * pb[i]).epsilon(1e-12));
}

TEST_CASE("quarter-turn rotation permutes projection angles") {
    // For an odd square, rotating the image 90 deg ccw maps the
    // projection at theta to the one at theta-90 (same rho direction)
    // or theta+90 with the rho axis reversed.
    std::mt19937 rng(14);
    Matrix img = testutil::random_image(rng, 33, 33);
    Matrix rot = testutil::rot90ccw(img);
    for (double deg : {0.0, 27.5, 45.0, 89.0, 90.0, 120.0, 179.5}) {
        auto p = radon_projection(img, deg);
        if (deg >= 90.0) {
            auto q = radon_projection(rot, deg - 90.0);
            for (std::size_t i = 0; i < p.size(); ++i)
                CHECK(q[i] == doctest::Approx(p[i]).epsilon(1e-9));
        } else {
            auto q = radon_projection(rot, deg + 90.0);
            for (std::size_t i = 0; i < p.size(); ++i)
                CHECK(q[p.size() - 1 - i] == doctest::Approx(p[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("radon input validation") {
    CHECK_THROWS_AS(radon_transform(Matrix(), {0.0}), ConfigError);
    Matrix img(4, 4);
    CHECK_THROWS_AS(radon_transform(img, {}), ConfigError);
}

TEST_CASE("sinogram layout matches angle list") {
    std::mt19937 rng(15);
    Matrix img = testutil::random_image(rng, 10, 10);
    Sinogram sg = radon_transform(img, {10.0, 50.0, 140.0});
    REQUIRE(sg.values.cols() == 3);
    REQUIRE(sg.values.rows() == projection_bin_count(10, 10));
    for (std::size_t j = 0; j < 3; ++j) {
        auto p = radon_projection(img, sg.angles_deg[j]);
        for (std::size_t i = 0; i < p.size(); ++i) CHECK(sg.values(i, j) == p[i]);
    }
}
