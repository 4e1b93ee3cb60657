#include "walkoff/heuristic.hpp"

#include <cmath>

#include "walkoff/errors.hpp"
#include "walkoff/numeric.hpp"

namespace walkoff {

void HeuristicParams::validate() const {
    if (!(w_phi > 0.0)) throw InvalidParameter("w_phi must be positive");
    if (!(beta > 0.0)) throw InvalidParameter("beta must be positive");
    if (!(k > 0.0)) throw InvalidParameter("k must be positive");
    if (!(w_p > 0.0)) throw InvalidParameter("w_p must be positive");
    if (!std::isfinite(t) || !std::isfinite(l)) throw InvalidParameter("t and l must be finite");
}

double HeuristicParams::z_eff() const { return k * std::sqrt(beta) * w_phi / 2.0; }

double width_from_spreads(double dx0, double dp0, double z, double k) {
    if (!(dx0 >= 0.0) || !(dp0 >= 0.0)) throw OutOfValidity("spreads must be nonnegative");
    if (!(k > 0.0)) throw OutOfValidity("k must be positive");
    double drift = z / k * dp0;
    return std::sqrt(dx0 * dx0 + drift * drift);
}

double momentum_width_estimate(const HeuristicParams& h, double p_plus) {
    h.validate();
    double radicand = (kPi + h.l - h.t * p_plus) / h.beta;
    if (radicand < 0.0)
        throw OutOfValidity("no real relative-momentum spread at p_+ past the phase-matching edge");
    return 2.0 * std::sqrt(radicand);
}

double anti_correlation_width(const HeuristicParams& h, double x_plus, double z) {
    h.validate();
    if (z < 0.0) throw OutOfValidity("z must be nonnegative");
    if (z == 0.0) return h.w_phi;  // the z^2 * (1/z) bracket product vanishes linearly
    double ze = h.z_eff();
    double bracket = kPi + h.l - h.t * h.k * (x_plus - h.w_p) / z;
    double radicand = 1.0 + (z / ze) * (z / ze) * bracket;
    if (radicand < 0.0)
        throw OutOfValidity("width is complex at x_+ = " + std::to_string(x_plus) +
                            ", z = " + std::to_string(z));
    return h.w_phi * std::sqrt(radicand);
}

RealGrid2D asymmetry_map(const HeuristicParams& h, const Axis& x_plus_axis, const Axis& z_axis) {
    h.validate();
    HeuristicParams straight = h;
    straight.t = 0.0;
    RealGrid2D out(x_plus_axis, z_axis);
    for (int a = 0; a < x_plus_axis.n; ++a) {
        double x_plus = x_plus_axis.point(a);
        for (int b = 0; b < z_axis.n; ++b) {
            double z = z_axis.point(b);
            double with_t = anti_correlation_width(h, x_plus, z);
            double without = anti_correlation_width(straight, x_plus, z);
            out.at(a, b) = (with_t - without) / (with_t + without);
        }
    }
    return out;
}

}  // namespace walkoff
