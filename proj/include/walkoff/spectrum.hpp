#pragma once

#include "walkoff/biphoton.hpp"
#include "walkoff/grid.hpp"

namespace walkoff {

// Fresnel paraxial step: psi(z) = IFFT[ FFT[psi(0)] * exp(-i z (p_s^2 + p_i^2) / (2k)) ].
// With the e^{+i p x} synthesis convention a field factor e^{+i p0 x} drifts
// toward +x with increasing z.
struct PropagationSetting {
    double z = 0.0;  // propagation distance
    double k = 1.0;  // carrier wavenumber
    void validate() const;
};

// Propagates a position-space amplitude grid. Throws InvalidParameter if the
// boundary amplitude exceeds 1e-4 of the grid peak (the periodic transform
// would wrap the leaked tails); the message advises enlarging the axes.
ComplexGrid2D propagate_angular_spectrum(const ComplexGrid2D& psi, const PropagationSetting& s);

// |psi|^2 normalized to unit sum.
RealGrid2D joint_intensity(const ComplexGrid2D& psi);

}  // namespace walkoff
