#pragma once

#include "walkoff/grid.hpp"

namespace walkoff {

enum class FourierDirection { Forward, Inverse };

// Centered discrete Fourier transform pair between physical axes.
//
// Forward:  F(w) = (da*db / (2*pi)) * sum_x f(x) exp(-i w.x)
// Inverse:  f(x) = (dwa*dwb / (2*pi)) * sum_w F(w) exp(+i w.x)
//
// i.e. the unitary continuum transform (1/sqrt(2*pi) per dimension) applied in
// the grid measure, so a forward/inverse round trip is the identity and
// sum |F|^2 dwa dwb == sum |f|^2 da db exactly. Output axes are the
// Fourier-conjugate axes (ascending, centered); symmetric input axes produce
// integer-centered output axes and vice versa. Arbitrary axis offsets are
// honored via pre/post twiddle factors around an FFT.
ComplexGrid2D fourier_pair(const ComplexGrid2D& grid, FourierDirection direction);

// 1D equivalent used by analysis utilities and tests.
std::vector<std::complex<double>> fourier_pair_1d(const std::vector<std::complex<double>>& f,
                                                  const Axis& axis, FourierDirection direction,
                                                  Axis* out_axis);

}  // namespace walkoff
