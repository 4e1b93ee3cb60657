#pragma once

#include <complex>

#include "walkoff/grid.hpp"

namespace walkoff {

// Parameters of the momentum-space two-photon amplitude (one transverse
// dimension, grid units).
struct MomentumStateParams {
    double w_p;   // pump waist
    double beta;  // internal diffraction area
    double t;     // transverse walk-off
    double l;     // longitudinal offset
    void validate() const;
};

// Parameters of the position-space two-photon ansatz.
struct AnsatzParams {
    double w_phi;          // near-field anti-correlation width
    double xi;             // sinc argument offset
    double rho = 1.0;      // curvature scale (cubed in the phase)
    double x0 = 0.0;       // curvature pivot along x_+
    double w_p;            // pump waist
    bool curvature = true; // disabled -> phase term identically zero
    void validate() const;
};

struct BiphotonMomentumState {
    ComplexGrid2D grid;  // sampled over (p_s, p_i)
    MomentumStateParams params;
};

struct AnsatzPositionState {
    ComplexGrid2D grid;  // sampled over (x_s, x_i)
    AnsatzParams params;
};

// Pointwise amplitude in signal/idler momentum coordinates:
//   p_pm = (p_s pm p_i)/sqrt(2),  g = beta p_-^2 + t p_+ - l,
//   amp = exp(-w_p^2 p_+^2 / 4) * exp(-i g) * sinc(g).
std::complex<double> momentum_amplitude(const MomentumStateParams& p, double p_s, double p_i);

// Pointwise ansatz amplitude in signal/idler position coordinates:
//   x_pm = (x_s pm x_i)/sqrt(2),
//   amp = exp(i x_-^2 (x_+ - x0)/rho^3) * sinc(x_-^2/w_phi^2 - xi) * exp(-x_+^2/w_p^2).
std::complex<double> ansatz_amplitude(const AnsatzParams& p, double x_s, double x_i);

// Sample the amplitude on a square symmetric (p_s, p_i) axis.
BiphotonMomentumState build_momentum_wavefunction(const MomentumStateParams& params, const Axis& axis);

// Sample the ansatz on a square symmetric (x_s, x_i) axis.
AnsatzPositionState build_ansatz_wavefunction(const AnsatzParams& params, const Axis& axis);

// Sample the momentum amplitude directly on independent (p_+, p_-) axes.
// In these coordinates a t = 0 state is an exact outer product, so rank tests
// are free of resampling artifacts.
ComplexGrid2D momentum_matrix_sum_difference(const MomentumStateParams& params, const Axis& plus_axis,
                                             const Axis& minus_axis);

// Curvature-scale estimate rho = (k w_phi^4 L / (2 t))^(1/3).
// t = 0 has no finite curvature scale and is reported as out-of-validity.
double estimate_rho(double k, double w_phi, double L, double t);

}  // namespace walkoff
