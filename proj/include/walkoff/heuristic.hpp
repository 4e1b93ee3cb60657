#pragma once

#include <vector>

#include "walkoff/axis.hpp"
#include "walkoff/grid.hpp"

namespace walkoff {

// Inputs of the closed-form width model.
struct HeuristicParams {
    double w_phi = 1.0;  // relative-coordinate sinc width at the source
    double beta = 1.0;   // phase-matching curvature
    double t = 0.0;      // transverse walk-off displacement scale
    double l = 0.0;      // phase-matching offset (collinear mismatch)
    double k = 1.0;      // carrier wavenumber
    double w_p = 1.0;    // pump waist
    void validate() const;

    // Effective Rayleigh range of the relative coordinate: k * sqrt(beta) * w_phi / 2.
    double z_eff() const;
};

// Quadrature growth of a width: sqrt(dx0^2 + (z/k)^2 dp0^2).
double width_from_spreads(double dx0, double dp0, double z, double k);

// Local relative-momentum spread conditioned on outer momentum:
// 2 * sqrt((pi + l - t p_plus) / beta). Requires the radicand nonnegative
// and beta > 0, else OutOfValidity.
double momentum_width_estimate(const HeuristicParams& h, double p_plus);

// Closed-form anti-correlation width at propagation distance z, conditioned on
// outer position x_plus:
//   w_phi * sqrt(1 + (z/z_eff)^2 * (pi + l - t k (x_plus - w_p) / z))
// algebraically equal to width_from_spreads(w_phi, momentum_width_estimate, z, k)
// at p_plus = k (x_plus - w_p) / z; z = 0 returns w_phi by continuity.
double anti_correlation_width(const HeuristicParams& h, double x_plus, double z);

// Normalized front/back width asymmetry on an (x_plus, z) lattice:
// (width(t) - width(t=0)) / (width(t) + width(t=0)). Identically zero at t = 0.
RealGrid2D asymmetry_map(const HeuristicParams& h, const Axis& x_plus_axis, const Axis& z_axis);

}  // namespace walkoff
