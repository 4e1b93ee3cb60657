#include <doctest.h>

#include <cmath>
#include <complex>

#include "walkoff/errors.hpp"
#include "walkoff/numeric.hpp"
#include "walkoff/spectrum.hpp"

using namespace walkoff;
using cd = std::complex<double>;

namespace {

ComplexGrid2D gaussian_field(const Axis& ax, double w, double p0 = 0.0) {
    ComplexGrid2D g(ax, ax);
    for (int i = 0; i < ax.n; ++i)
        for (int j = 0; j < ax.n; ++j) {
            double x = ax.point(i), y = ax.point(j);
            g.at(i, j) = std::exp(-(x * x + y * y) / (w * w)) * std::exp(cd(0.0, p0 * x));
        }
    return g;
}

double sum_norm(const ComplexGrid2D& g) {
    double s = 0.0;
    for (const auto& v : g.values) s += std::norm(v);
    return s;
}

}  // namespace

TEST_CASE("a transverse momentum kick drifts the field toward +x") {
    Axis ax = Axis::symmetric(30.0, 256);
    double p0 = 2.0, z = 1.5, k = 1.0;
    ComplexGrid2D psi0 = gaussian_field(ax, 3.0, p0);
    PropagationSetting s{z, k};
    ComplexGrid2D psi = propagate_angular_spectrum(psi0, s);

    double tot = 0.0, mx = 0.0;
    for (int i = 0; i < ax.n; ++i)
        for (int j = 0; j < ax.n; ++j) {
            double v = std::norm(psi.at(i, j));
            tot += v;
            mx += v * ax.point(i);
        }
    CHECK(mx / tot == doctest::Approx(z * p0 / k).epsilon(1e-6));
}

TEST_CASE("propagation conserves energy") {
    Axis ax = Axis::symmetric(24.0, 128);
    ComplexGrid2D psi0 = gaussian_field(ax, 2.5);
    PropagationSetting s{4.0, 1.3};
    ComplexGrid2D psi = propagate_angular_spectrum(psi0, s);
    CHECK(sum_norm(psi) == doctest::Approx(sum_norm(psi0)).epsilon(1e-10));
}

TEST_CASE("gaussian beam expansion follows the diffraction law") {
    double w = 2.0, z = 3.0, k = 1.5;
    Axis ax = Axis::symmetric(40.0, 512);
    ComplexGrid2D psi0 = gaussian_field(ax, w);
    ComplexGrid2D psi = propagate_angular_spectrum(psi0, PropagationSetting{z, k});

    double wz = w * std::sqrt(1.0 + std::pow(2.0 * z / (k * w * w), 2));
    double amp = (w / wz) * (w / wz);  // |psi|^2 peak factor, one per dimension
    for (int i = 0; i < ax.n; i += 13)
        for (int j = 0; j < ax.n; j += 13) {
            double x = ax.point(i), y = ax.point(j);
            double expect = amp * std::exp(-2.0 * (x * x + y * y) / (wz * wz));
            CHECK(std::norm(psi.at(i, j)) == doctest::Approx(expect).epsilon(1e-4).scale(1e-4 * amp));
        }
}

TEST_CASE("zero distance returns the field unchanged") {
    Axis ax = Axis::symmetric(20.0, 64);
    ComplexGrid2D psi0 = gaussian_field(ax, 2.0);
    ComplexGrid2D psi = propagate_angular_spectrum(psi0, PropagationSetting{0.0, 1.0});
    CHECK(psi.values == psi0.values);
}

TEST_CASE("boundary leakage is rejected with advice") {
    Axis ax = Axis::symmetric(3.0, 64);  // too tight for w = 2
    ComplexGrid2D psi0 = gaussian_field(ax, 2.0);
    try {
        propagate_angular_spectrum(psi0, PropagationSetting{0.0, 1.0});
        FAIL("expected a boundary rejection");
    } catch (const InvalidParameter& e) {
        CHECK(std::string(e.what()).find("position axes") != std::string::npos);
    }
}

TEST_CASE("propagation setting validation") {
    CHECK_THROWS_AS((PropagationSetting{1.0, 0.0}.validate()), InvalidParameter);
    CHECK_THROWS_AS((PropagationSetting{std::nan(""), 1.0}.validate()), InvalidParameter);
    CHECK_NOTHROW((PropagationSetting{0.0, 2.0}.validate()));
}

TEST_CASE("joint intensity is the unit-sum squared field") {
    Axis ax = Axis::symmetric(10.0, 32);
    ComplexGrid2D psi = gaussian_field(ax, 1.5);
    RealGrid2D j = joint_intensity(psi);
    double tot = 0.0;
    for (double v : j.values) tot += v;
    CHECK(tot == doctest::Approx(1.0).epsilon(1e-12));
    double direct = std::norm(psi.at(7, 9));
    CHECK(j.at(7, 9) / j.at(16, 16) == doctest::Approx(direct / std::norm(psi.at(16, 16))).epsilon(1e-12));
}
