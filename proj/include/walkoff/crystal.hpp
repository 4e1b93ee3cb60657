#pragma once

#include "walkoff/errors.hpp"

namespace walkoff {

// Physical uniaxial-crystal inputs. Lengths in meters, angles in radians,
// wavenumbers in rad/m. Indices are direct inputs (no dispersion model).
struct CrystalSpec {
    double L;      // crystal length
    double theta;  // optic-axis angle, [0, pi/2]
    double n_o;    // ordinary index
    double n_e;    // extraordinary index
    double k_p;    // pump wavenumber
};

// Derived walk-off and phase-matching coefficients.
struct WalkoffParams {
    double t;        // transverse walk-off length
    double l;        // longitudinal phase-matching offset (dimensionless)
    double eta_p;    // pump effective index n_o*n_e/n(theta)
    double beta;     // L / (4 * eta_p * k_p)
    double n_theta;  // n(theta)
    double n_bar;    // (n_o + n_e)/2
};

// n^2(theta) = n_o^2 sin^2 + n_e^2 cos^2; t = L(n_o^2-n_e^2) sin cos / (2 n^2);
// l = L k_p (eta_p - n_bar)/2; beta = L/(4 eta_p k_p).
WalkoffParams derive_walkoff_params(const CrystalSpec& spec);

}  // namespace walkoff
