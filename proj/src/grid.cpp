#include "walkoff/grid.hpp"

#include "walkoff/numeric.hpp"

namespace walkoff {

ComplexGrid2D rotate_frame(const ComplexGrid2D& grid, CoordinateFrame from, CoordinateFrame to) {
    if (from == to) throw InvalidParameter("rotate_frame: source and target frames are equal");
    if (!grid.square_axes()) throw DomainMismatch("rotate_frame: axes must match");
    // (a, b) -> ((a+b)/sqrt2, (a-b)/sqrt2) is orthogonal and self-inverse, so
    // one resampling rule serves both directions.
    ComplexGrid2D out(grid.axis_a, grid.axis_b);
    for (int ia = 0; ia < out.axis_a.n; ++ia) {
        double u = out.axis_a.point(ia);
        for (int ib = 0; ib < out.axis_b.n; ++ib) {
            double v = out.axis_b.point(ib);
            out.at(ia, ib) = grid.sample_bilinear((u + v) / kSqrt2, (u - v) / kSqrt2);
        }
    }
    return out;
}

}  // namespace walkoff
