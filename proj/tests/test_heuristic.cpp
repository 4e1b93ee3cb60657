#include <doctest.h>

#include <cmath>
#include <random>

#include "walkoff/errors.hpp"
#include "walkoff/heuristic.hpp"
#include "walkoff/numeric.hpp"

using namespace walkoff;

namespace {

HeuristicParams reference_params() {
    HeuristicParams h;
    h.w_phi = 2.0;
    h.beta = 1.0;
    h.t = 4.0;
    h.l = 3.0;
    h.k = 1.0;
    h.w_p = 50.0;
    return h;
}

}  // namespace

TEST_CASE("free-space width from independent spreads") {
    CHECK(width_from_spreads(2.5, 7.0, 0.0, 1.0) == 2.5);
    CHECK(width_from_spreads(3.0, 4.0, 2.0, 2.0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK_THROWS_AS(width_from_spreads(-1.0, 1.0, 0.0, 1.0), OutOfValidity);
    CHECK_THROWS_AS(width_from_spreads(1.0, 1.0, 0.0, 0.0), OutOfValidity);
}

TEST_CASE("momentum spread of a section") {
    HeuristicParams h;
    h.w_phi = 1.0;
    h.beta = 1.0;
    h.t = 0.0;
    h.l = 0.0;
    h.k = 1.0;
    h.w_p = 1.0;
    CHECK(momentum_width_estimate(h, 0.0) == doctest::Approx(2.0 * std::sqrt(kPi)).epsilon(1e-15));

    HeuristicParams p = reference_params();
    CHECK(momentum_width_estimate(p, 0.0) == doctest::Approx(2.0 * std::sqrt(kPi + 3.0)).epsilon(1e-15));
    // the spread closes exactly at the phase-matching edge
    CHECK(momentum_width_estimate(p, (kPi + p.l) / p.t) == doctest::Approx(0.0));
    CHECK_THROWS_AS(momentum_width_estimate(p, (kPi + p.l) / p.t + 0.1), OutOfValidity);
}

TEST_CASE("effective divergence distance") {
    HeuristicParams h;
    h.w_phi = 3.5;
    h.beta = 0.7;
    h.t = 0.0;
    h.l = 0.0;
    h.k = 2.0;
    h.w_p = 1.0;
    CHECK(h.z_eff() == doctest::Approx(2.928310092869264417924).epsilon(1e-15));
}

TEST_CASE("anti-correlation width closed form") {
    HeuristicParams h = reference_params();
    // at the waist the width is the bare section width, for any parameters
    CHECK(anti_correlation_width(h, 37.0, 0.0) == h.w_phi);
    // at x_+ = w_p the walk-off term drops out
    double z = 3.0;
    double ze = h.z_eff();
    double expect = h.w_phi * std::sqrt(1.0 + z * z / (ze * ze) * (kPi + h.l));
    CHECK(anti_correlation_width(h, h.w_p, z) == doctest::Approx(expect).epsilon(1e-14));

    CHECK_THROWS_AS(anti_correlation_width(h, 10.0, -1.0), OutOfValidity);
    // far beyond the waist at short distance the bracket turns the square root complex
    CHECK_THROWS_AS(anti_correlation_width(h, h.w_p + 1000.0, 0.01), OutOfValidity);
    try {
        anti_correlation_width(h, h.w_p + 1000.0, 0.01);
    } catch (const OutOfValidity& e) {
        std::string msg = e.what();
        CHECK(msg.find("x_+") != std::string::npos);
        CHECK(msg.find("z") != std::string::npos);
    }
}

TEST_CASE("closed form equals the spread composition on valid inputs") {
    std::mt19937 rng(20240817);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        HeuristicParams h;
        h.w_phi = 0.5 + 4.5 * u01(rng);
        h.beta = 0.1 + 2.9 * u01(rng);
        h.t = 5.0 * u01(rng);
        h.l = 4.0 * u01(rng);
        h.k = 0.5 + 2.5 * u01(rng);
        h.w_p = 1.0 + 59.0 * u01(rng);
        double z = 0.1 + 9.9 * u01(rng);
        double x_plus = h.w_p * u01(rng);  // below the waist the bracket stays positive

        double direct = anti_correlation_width(h, x_plus, z);
        double p_plus = h.k * (x_plus - h.w_p) / z;
        double composed = width_from_spreads(h.w_phi, momentum_width_estimate(h, p_plus), z, h.k);
        CHECK(std::abs(direct - composed) <= 1e-12 * std::max(1.0, direct));
        ++checked;
    }
    CHECK(checked == 1000);
}

TEST_CASE("width ordering across the waist") {
    HeuristicParams h = reference_params();
    double z = 2.0;
    // monotone decreasing in x_+ when walk-off is positive
    double prev = anti_correlation_width(h, 0.0, z);
    for (double x = 5.0; x <= 50.0; x += 5.0) {
        double cur = anti_correlation_width(h, x, z);
        CHECK(cur < prev);
        prev = cur;
    }
    // strictly increasing in l
    HeuristicParams h2 = h;
    h2.l = h.l + 1.0;
    CHECK(anti_correlation_width(h2, 10.0, z) > anti_correlation_width(h, 10.0, z));
}

TEST_CASE("asymmetry map structure") {
    HeuristicParams h = reference_params();
    Axis x_plus = Axis::symmetric(45.0, 32);  // stays below the waist
    Axis z_axis(0.0, 20.0, 48);

    RealGrid2D map = asymmetry_map(h, x_plus, z_axis);
    REQUIRE(map.axis_a.approx_equal(x_plus));
    REQUIRE(map.axis_b.approx_equal(z_axis));
    for (double v : map.values) {
        CHECK(v > -1.0);
        CHECK(v < 1.0);
    }

    // at every x_+ below the waist the asymmetry peaks before the scan
    // midpoint and has decayed below half its peak at the far end
    for (int i = 0; i < x_plus.n; i += 7) {
        double peak = 0.0;
        int arg = 0;
        for (int j = 0; j < z_axis.n; ++j)
            if (std::abs(map.at(i, j)) > peak) {
                peak = std::abs(map.at(i, j));
                arg = j;
            }
        CHECK(arg < z_axis.n / 2);
        CHECK(std::abs(map.at(i, z_axis.n - 1)) < 0.5 * peak);
    }

    // no walk-off, no asymmetry
    HeuristicParams flat = h;
    flat.t = 0.0;
    RealGrid2D zero = asymmetry_map(flat, x_plus, z_axis);
    for (double v : zero.values) CHECK(v == 0.0);
}

TEST_CASE("heuristic validation") {
    HeuristicParams h = reference_params();
    h.w_phi = 0.0;
    CHECK_THROWS_AS(h.validate(), InvalidParameter);
    h = reference_params();
    h.beta = -1.0;
    CHECK_THROWS_AS(h.validate(), InvalidParameter);
    h = reference_params();
    h.k = 0.0;
    CHECK_THROWS_AS(h.validate(), InvalidParameter);
}
