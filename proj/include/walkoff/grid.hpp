#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "walkoff/axis.hpp"
#include "walkoff/errors.hpp"

namespace walkoff {

// Dense 2D field sampled on an (axis_a, axis_b) midpoint lattice.
// Storage is row-major with axis_a slowest: v[ia * axis_b.n + ib].
template <typename T>
struct Grid2D {
    Axis axis_a;
    Axis axis_b;
    std::vector<T> values;

    Grid2D() = default;
    Grid2D(const Axis& a, const Axis& b)
        : axis_a(a), axis_b(b), values(static_cast<std::size_t>(a.n) * static_cast<std::size_t>(b.n)) {}
    Grid2D(const Axis& a, const Axis& b, std::vector<T> v) : axis_a(a), axis_b(b), values(std::move(v)) {
        if (values.size() != size()) throw DomainMismatch("Grid2D: value count does not match axes");
    }

    std::size_t size() const {
        return static_cast<std::size_t>(axis_a.n) * static_cast<std::size_t>(axis_b.n);
    }
    T& at(int ia, int ib) { return values[static_cast<std::size_t>(ia) * axis_b.n + ib]; }
    const T& at(int ia, int ib) const { return values[static_cast<std::size_t>(ia) * axis_b.n + ib]; }

    bool square_axes() const { return axis_a.approx_equal(axis_b); }

    // Bilinear interpolation at physical coordinates; zero outside the sampled
    // cell-midpoint hull.
    T sample_bilinear(double xa, double xb) const {
        double fa = axis_a.fractional_index(xa);
        double fb = axis_b.fractional_index(xb);
        if (fa < 0.0 || fb < 0.0 || fa > axis_a.n - 1.0 || fb > axis_b.n - 1.0) return T{};
        int ia = static_cast<int>(fa);
        int ib = static_cast<int>(fb);
        if (ia == axis_a.n - 1) --ia;  // top edge falls into the last cell
        if (ib == axis_b.n - 1) --ib;
        double ta = fa - ia;
        double tb = fb - ib;
        const T v00 = at(ia, ib), v01 = at(ia, ib + 1), v10 = at(ia + 1, ib), v11 = at(ia + 1, ib + 1);
        return v00 * ((1.0 - ta) * (1.0 - tb)) + v01 * ((1.0 - ta) * tb) + v10 * (ta * (1.0 - tb)) +
               v11 * (ta * tb);
    }
};

using ComplexGrid2D = Grid2D<std::complex<double>>;
using RealGrid2D = Grid2D<double>;

enum class CoordinateFrame { SignalIdler, SumDifference };

// 45-degree rotation between signal/idler and sum/difference coordinates,
// u_pm = (u_s pm u_i)/sqrt(2). The map is its own inverse, so the resampling
// is identical in both directions. Bilinear, zero fill outside the domain.
ComplexGrid2D rotate_frame(const ComplexGrid2D& grid, CoordinateFrame from, CoordinateFrame to);

}  // namespace walkoff
