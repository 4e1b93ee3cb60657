#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "walkoff/grid.hpp"

namespace walkoff {

// Joint coincidence histogram over (x_s, x_i) with acquisition metadata.
struct JointIntensity {
    RealGrid2D counts;          // axis_a = x_s (rows), axis_b = x_i (columns)
    double z = 0.0;             // propagation distance (or shear parameter) of the frame
    double magnification = 1.0;
    std::map<std::string, std::string> meta;  // free-form annotations (source path etc.)

    void validate() const;  // counts finite, nonnegative, not all zero
};

enum class CutKind { FixedSum, FixedDifference };

// 1D cut through the joint distribution. coordinate is arc length along the
// cut line, centered at the midpoint of the in-domain segment, strictly
// increasing; values are nonnegative.
struct SectionProfile {
    double offset_c = 0.0;  // FixedSum: x_s + x_i = c; FixedDifference: x_i - x_s = c
    std::vector<double> coordinate;
    std::vector<double> values;
    CutKind cut_kind = CutKind::FixedSum;
};

enum SectionFitFlags : std::uint32_t {
    kFitNone = 0,
    kFitFallbackWidth = 1u << 0,  // B <= -pi: no real first zero, width from half-max crossing
    kFitFailed = 1u << 1,         // width_map cell whose extraction or fit threw
};

// Least-squares parameters of amplitude * sinc^2(A u^2 - B) in the centered
// cut coordinate u; width = sqrt((pi + B)/A) when B > -pi (distance from the
// profile center to the fitted first zero).
struct SectionFit {
    double a = 0.0;
    double b = 0.0;
    double amplitude = 0.0;
    double width = 0.0;
    double residual_rms = 0.0;
    std::uint32_t flags = kFitNone;
};

// Samples the joint distribution by bilinear interpolation at uniform steps
// along the cut line (FixedSum: x_s + x_i = c, running along x_-;
// FixedDifference: x_i - x_s = c, running along x_+). step <= 0 selects the
// native grid pitch. Points outside the domain are dropped from the ends;
// an empty intersection is an error.
SectionProfile extract_section(const JointIntensity& g, double c, CutKind kind, double step = 0.0);

struct FitOptions {
    bool poisson_weights = false;  // weight squared residuals by 1/max(count, 1)
    int max_iterations = 200;
    double relative_step_tolerance = 1e-9;
};

// Fits amplitude * sinc^2(A u^2 - B) by damped Gauss-Newton on (A, B) with the
// amplitude solved linearly each step, after recentering the profile on its
// centroid. Initial B solves sinc^2(B0) = center/peak on (0, pi); initial A
// comes from the half-maximum abscissa, with a 5-point multi-start ladder
// A0 x {1/4, 1/2, 1, 2, 4}. Throws FitFailed when no start converges.
SectionFit fit_sinc2(const SectionProfile& profile, const FitOptions& opts = {});

// One fitted section per (z, c) cell.
struct WidthMapRow {
    double z = 0.0;
    double c = 0.0;
    SectionFit fit;
};

// extract_section + fit_sinc2 over the (frame, c) lattice; cells whose fit
// throws produce a row with kFitFailed set rather than being dropped.
std::vector<WidthMapRow> width_map(const std::vector<JointIntensity>& frames,
                                   const std::vector<double>& c_list, CutKind kind = CutKind::FixedSum,
                                   double step = 0.0, const FitOptions& opts = {});

// Conditional profile along the x_+ direction under the post-selection
// x_i = x_s + c, normalized to unit sum.
SectionProfile postselect_profile(const JointIntensity& g, double c);

}  // namespace walkoff
