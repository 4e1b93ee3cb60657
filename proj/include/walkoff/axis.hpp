#pragma once

#include <cmath>
#include <cstdlib>
#include <vector>

#include "walkoff/errors.hpp"

namespace walkoff {

// Uniform 1D sampling axis over [min, max) with n cells; sample points are the
// cell midpoints min + (j + 0.5) * spacing.
//
// Two flavors appear in practice:
//  - symmetric: min = -max, no sample sits exactly at 0;
//  - integer-centered: points are (j - n/2) * spacing, sample j = n/2 is 0
//    (stored as min = -(n+1)*spacing/2, still a midpoint grid).
// conjugate() maps one flavor to the other with spacing 2*pi/(n*spacing) and is
// an involution.
struct Axis {
    double min = 0.0;
    double max = 1.0;
    int n = 2;

    Axis() = default;
    Axis(double min_, double max_, int n_) : min(min_), max(max_), n(n_) { validate(); }

    void validate() const {
        if (!(max > min)) throw InvalidParameter("Axis: max must exceed min");
        if (n < 2) throw InvalidParameter("Axis: n must be at least 2");
        if (!std::isfinite(min) || !std::isfinite(max)) throw InvalidParameter("Axis: bounds must be finite");
    }

    double spacing() const { return (max - min) / n; }
    double point(int j) const { return min + (j + 0.5) * spacing(); }
    double center() const { return 0.5 * (min + max); }
    double half_width() const { return 0.5 * (max - min); }

    std::vector<double> points() const {
        std::vector<double> p(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) p[static_cast<std::size_t>(j)] = point(j);
        return p;
    }

    bool symmetric_about_zero() const {
        return std::abs(min + max) <= 1e-9 * (std::abs(min) + std::abs(max));
    }

    // True when a sample point sits exactly at 0 (center = -spacing/2).
    bool integer_centered() const {
        double d = spacing();
        return std::abs(center() + 0.5 * d) <= 1e-9 * d;
    }

    static Axis symmetric(double half_width, int n) { return Axis(-half_width, half_width, n); }

    static Axis centered_integer(double spacing, int n) {
        return Axis(-(n + 1) * spacing / 2.0, (n - 1) * spacing / 2.0, n);
    }

    // Fourier-conjugate axis: spacing 2*pi/(n*spacing); symmetric grids map to
    // integer-centered ones and vice versa, so conjugate(conjugate(a)) == a.
    Axis conjugate() const {
        double dw = kConjugateFactor / (n * spacing());
        if (integer_centered()) return symmetric(n * dw / 2.0, n);
        return centered_integer(dw, n);
    }

    bool approx_equal(const Axis& o, double tol = 1e-9) const {
        double scale = std::abs(max - min);
        return n == o.n && std::abs(min - o.min) <= tol * scale && std::abs(max - o.max) <= tol * scale;
    }

    // Fractional index of coordinate x in sample-point units; 0 at point(0).
    double fractional_index(double x) const { return (x - min) / spacing() - 0.5; }

private:
    static constexpr double kConjugateFactor = 6.283185307179586476925286766559005768;
};

}  // namespace walkoff
