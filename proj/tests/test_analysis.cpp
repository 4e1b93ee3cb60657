#include <doctest.h>

#include <cmath>

#include "walkoff/analysis.hpp"
#include "walkoff/errors.hpp"
#include "walkoff/numeric.hpp"

using namespace walkoff;

namespace {

// Separable gaussian in the rotated frame: exp(-ap x_+^2 - am x_-^2).
JointIntensity rotated_gaussian(int n = 512, double half = 16.0, double ap = 0.25, double am = 1.0) {
    JointIntensity j;
    j.counts = RealGrid2D(Axis::symmetric(half, n), Axis::symmetric(half, n));
    const Axis& ax = j.counts.axis_a;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double xp = (ax.point(i) + ax.point(k)) / kSqrt2;
            double xm = (ax.point(i) - ax.point(k)) / kSqrt2;
            j.counts.at(i, k) = std::exp(-ap * xp * xp - am * xm * xm);
        }
    j.z = 0.25;
    return j;
}

SectionProfile synth_profile(double a, double b, double amp, double half = 12.0, double step = 0.05,
                             double shift = 0.0) {
    SectionProfile p;
    p.offset_c = 0.0;
    int side = static_cast<int>(half / step);
    for (int i = -side; i <= side; ++i) {
        double u = i * step;
        p.coordinate.push_back(u + shift);
        double s = sinc(a * u * u - b);
        p.values.push_back(amp * s * s);
    }
    return p;
}

}  // namespace

TEST_CASE("fixed-sum sections run along the difference coordinate") {
    JointIntensity j = rotated_gaussian();
    SectionProfile p = extract_section(j, 2.0 * kSqrt2, CutKind::FixedSum);
    CHECK(p.cut_kind == CutKind::FixedSum);
    CHECK(p.offset_c == 2.0 * kSqrt2);
    REQUIRE(p.coordinate.size() > 100);
    // c = 2 sqrt2 fixes x_+ = 2; the cut profile in arc length u is exp(-u^2)
    double pre = std::exp(-4.0 / 4.0);
    for (std::size_t i = 0; i < p.coordinate.size(); ++i) {
        double u = p.coordinate[i];
        CHECK(p.values[i] ==
              doctest::Approx(pre * std::exp(-u * u)).epsilon(0.02).scale(3e-4 * pre));
    }
    // native pitch: spacing equals the grid pitch
    CHECK(p.coordinate[1] - p.coordinate[0] == doctest::Approx(j.counts.axis_a.spacing()));
}

TEST_CASE("fixed-difference sections run along the sum coordinate") {
    JointIntensity j = rotated_gaussian();
    SectionProfile p = extract_section(j, -1.5 * kSqrt2, CutKind::FixedDifference, 0.125);
    CHECK(p.cut_kind == CutKind::FixedDifference);
    // x_i - x_s = c fixes x_- = -c/sqrt2 = 1.5
    double pre = std::exp(-2.25);
    for (std::size_t i = 0; i < p.coordinate.size(); ++i) {
        double u = p.coordinate[i];
        CHECK(p.values[i] ==
              doctest::Approx(pre * std::exp(-u * u / 4.0)).epsilon(0.02).scale(3e-4 * pre));
    }
    CHECK(p.coordinate[1] - p.coordinate[0] == doctest::Approx(0.125));
}

TEST_CASE("section coordinates are centered and strictly increasing") {
    JointIntensity j = rotated_gaussian(128, 8.0);
    SectionProfile p = extract_section(j, 5.0, CutKind::FixedSum);
    REQUIRE(p.coordinate.size() > 10);
    CHECK(std::abs(p.coordinate.front() + p.coordinate.back()) < 1e-9);
    for (std::size_t i = 1; i < p.coordinate.size(); ++i)
        CHECK(p.coordinate[i] > p.coordinate[i - 1]);
}

TEST_CASE("sections outside the domain are rejected") {
    JointIntensity j = rotated_gaussian(64, 4.0);
    CHECK_THROWS_AS(extract_section(j, 100.0, CutKind::FixedSum), DomainMismatch);
    CHECK_THROWS_AS(extract_section(j, -100.0, CutKind::FixedDifference), DomainMismatch);
}

TEST_CASE("noiseless sinc^2 parameters are recovered to a tenth of a percent") {
    SectionProfile p = synth_profile(0.5, -1.0, 7.0);
    SectionFit f = fit_sinc2(p);
    CHECK(f.a == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(f.b == doctest::Approx(-1.0).epsilon(1e-3));
    CHECK(f.amplitude == doctest::Approx(7.0).epsilon(1e-3));
    CHECK(f.width == doctest::Approx(std::sqrt((kPi - 1.0) / 0.5)).epsilon(1e-3));
    CHECK(f.flags == kFitNone);
    CHECK(f.residual_rms < 1e-6);
}

TEST_CASE("double-lobed profiles recover with maxima at the fitted ridge") {
    SectionProfile p = synth_profile(0.8, 2.0, 3.0);
    SectionFit f = fit_sinc2(p);
    CHECK(f.a == doctest::Approx(0.8).epsilon(1e-3));
    CHECK(f.b == doctest::Approx(2.0).epsilon(1e-3));
    // profile maxima sit where the sinc argument vanishes
    double ridge = std::sqrt(f.b / f.a);
    double peak_u = 0.0, peak_v = 0.0;
    for (std::size_t i = 0; i < p.coordinate.size(); ++i)
        if (p.coordinate[i] > 0.0 && p.values[i] > peak_v) {
            peak_v = p.values[i];
            peak_u = p.coordinate[i];
        }
    CHECK(peak_u == doctest::Approx(ridge).epsilon(0.05));
}

TEST_CASE("a gaussian profile fits with a negative offset and small residual") {
    SectionProfile p;
    for (int i = -200; i <= 200; ++i) {
        double u = i * 0.05;
        p.coordinate.push_back(u);
        p.values.push_back(5.0 * std::exp(-u * u / 2.0));
    }
    SectionFit f = fit_sinc2(p);
    CHECK(f.b < 0.0);
    CHECK(f.residual_rms < 0.05 * 5.0);
}

TEST_CASE("fit is equivariant under coordinate scaling") {
    SectionProfile p = synth_profile(0.5, 1.2, 2.0);
    SectionFit f0 = fit_sinc2(p);
    double s = 3.0;
    SectionProfile q = p;
    for (double& u : q.coordinate) u *= s;
    SectionFit f1 = fit_sinc2(q);
    CHECK(f1.a == doctest::Approx(f0.a / (s * s)).epsilon(1e-6));
    CHECK(f1.b == doctest::Approx(f0.b).epsilon(1e-6));
    CHECK(f1.width == doctest::Approx(f0.width * s).epsilon(1e-6));
}

TEST_CASE("centroid centering makes the fit shift invariant") {
    SectionProfile p = synth_profile(0.5, -0.5, 4.0);
    SectionFit f0 = fit_sinc2(p);
    SectionProfile q = synth_profile(0.5, -0.5, 4.0, 12.0, 0.05, 17.5);
    SectionFit f1 = fit_sinc2(q);
    CHECK(f1.a == doctest::Approx(f0.a).epsilon(1e-6));
    CHECK(f1.b == doctest::Approx(f0.b).epsilon(1e-6));
}

TEST_CASE("poisson weighting still recovers noiseless parameters") {
    SectionProfile p = synth_profile(0.4, 1.0, 900.0);
    FitOptions opts;
    opts.poisson_weights = true;
    SectionFit f = fit_sinc2(p, opts);
    CHECK(f.a == doctest::Approx(0.4).epsilon(1e-3));
    CHECK(f.b == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("fit input validation") {
    SectionProfile tiny;
    for (int i = 0; i < 7; ++i) {
        tiny.coordinate.push_back(i);
        tiny.values.push_back(1.0);
    }
    CHECK_THROWS_AS(fit_sinc2(tiny), InvalidParameter);

    SectionProfile flat;
    for (int i = 0; i < 32; ++i) {
        flat.coordinate.push_back(i * 0.1);
        flat.values.push_back(2.0);
    }
    CHECK_THROWS_AS(fit_sinc2(flat), FitFailed);

    SectionProfile neg = synth_profile(0.5, -1.0, 1.0);
    neg.values[3] = -0.25;
    CHECK_THROWS_AS(fit_sinc2(neg), InvalidParameter);
}

TEST_CASE("width map keeps failed cells with a flag") {
    // frame 0: clean sinc^2 ridge along x_-, frame 1: featureless plane
    JointIntensity good;
    int n = 192;
    good.counts = RealGrid2D(Axis::symmetric(12.0, n), Axis::symmetric(12.0, n));
    const Axis& ax = good.counts.axis_a;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            double xp = (ax.point(i) + ax.point(k)) / kSqrt2;
            double xm = (ax.point(i) - ax.point(k)) / kSqrt2;
            double s = sinc(0.5 * xm * xm - 1.0);
            good.counts.at(i, k) = 100.0 * s * s * std::exp(-xp * xp / 16.0);
        }
    good.z = 0.5;

    JointIntensity flat;
    flat.counts = RealGrid2D(Axis::symmetric(12.0, 64), Axis::symmetric(12.0, 64),
                             std::vector<double>(64 * 64, 1.0));
    flat.z = 1.0;

    std::vector<WidthMapRow> rows = width_map({good, flat}, {-2.0, 0.0, 2.0});
    REQUIRE(rows.size() == 6);
    for (const auto& r : rows) {
        if (r.z == 0.5) {
            CHECK(r.fit.flags == kFitNone);
            CHECK(r.fit.a == doctest::Approx(0.5).epsilon(0.02));
            CHECK(r.fit.b == doctest::Approx(1.0).epsilon(0.05));
        } else {
            CHECK((r.fit.flags & kFitFailed) != 0);
            CHECK(r.fit.width == 0.0);
        }
    }
}

TEST_CASE("post-selected profiles of separable rotated states are offset independent") {
    JointIntensity j = rotated_gaussian(512, 16.0, 0.125, 0.25);
    SectionProfile a = postselect_profile(j, 0.0);
    SectionProfile b = postselect_profile(j, 1.5);
    CHECK(a.cut_kind == CutKind::FixedDifference);

    double sum_a = 0.0, sum_b = 0.0;
    for (double v : a.values) sum_a += v;
    for (double v : b.values) sum_b += v;
    CHECK(sum_a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sum_b == doctest::Approx(1.0).epsilon(1e-12));

    // same x_+ distribution after normalization; compare on matching abscissas
    double worst = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < a.coordinate.size(); ++i) {
        peak = std::max(peak, a.values[i]);
        for (std::size_t k = 0; k < b.coordinate.size(); ++k)
            if (std::abs(b.coordinate[k] - a.coordinate[i]) < 1e-9)
                worst = std::max(worst, std::abs(a.values[i] - b.values[k]));
    }
    CHECK(peak > 0.0);
    CHECK(worst < 5e-3 * peak);
}

TEST_CASE("joint intensity validation") {
    JointIntensity j = rotated_gaussian(32, 4.0);
    CHECK_NOTHROW(j.validate());
    j.counts.at(3, 3) = -1.0;
    CHECK_THROWS_AS(j.validate(), InvalidParameter);

    JointIntensity zero;
    zero.counts = RealGrid2D(Axis::symmetric(1.0, 8), Axis::symmetric(1.0, 8));
    CHECK_THROWS_AS(zero.validate(), InvalidParameter);

    JointIntensity badmag = rotated_gaussian(32, 4.0);
    badmag.magnification = 0.0;
    CHECK_THROWS_AS(badmag.validate(), InvalidParameter);
}
